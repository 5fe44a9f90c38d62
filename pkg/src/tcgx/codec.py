"""Bit-exact little-endian codec for `.tcgx` drawings.

The byte layout is frozen in docs/format.md and pinned by golden hex
fixtures.  Decoding is strict: unknown tags, truncated buffers, illegal
attribute/font bytes, out-of-range quantized codes and any nonzero padding
raise DecodeError with the offending byte offset, so that
encode(decode(b)) == b holds byte-for-byte for every accepted input.

Geometry is stored as IEEE-754 32-bit floats; encoding rounds doubles to
f32, so value-level roundtrips are exact for f32-representable inputs.
Non-finite floats are rejected on both sides.
"""

from __future__ import annotations

import math
import struct

from .errors import DecodeError, DomainError
from .geometry import ArcCarrier, Carrier, Point, SegmentCarrier
from .model import (
    ARC_SIZE,
    ArcElement,
    Drawing,
    Element,
    MAGISTRAL_SIZE,
    MagistralElement,
    PolylineElement,
    SEGMENT_SIZE,
    SegmentElement,
    SheetFormat,
    TAG_ARC,
    TAG_MAGISTRAL,
    TAG_POLYLINE,
    TAG_SEGMENT,
    TAG_TEXT,
    TextElement,
    element_size,
)
from .magistral.individual import decode_individual
from .magistral.registry import INDIVIDUAL_BLOCK_SIZE, MAGISTRAL_TYPE_COUNT
from .standards import Attr, Q_COMPRESSION, Q_GENERAL, decode_font, encode_font

MAGIC = b"TCGX"
FORMAT_VERSION = 1
FILE_HEADER_SIZE = 16

_FORMAT_KIND_STANDARD = 0
_FORMAT_KIND_CUSTOM = 1


class _Reader:
    """Byte reader that reports truncation and bad values with offsets."""

    def __init__(self, buf: bytes, pos: int = 0):
        self.buf = buf
        self.pos = pos

    def take(self, n: int, what: str) -> bytes:
        if self.pos + n > len(self.buf):
            raise DecodeError(
                f"truncated: need {n} bytes for {what}, have {len(self.buf) - self.pos}",
                self.pos)
        chunk = self.buf[self.pos:self.pos + n]
        self.pos += n
        return chunk

    def u8(self, what: str) -> int:
        return self.take(1, what)[0]

    def u16(self, what: str) -> int:
        return struct.unpack("<H", self.take(2, what))[0]

    def u32(self, what: str) -> int:
        return struct.unpack("<I", self.take(4, what))[0]

    def f32(self, what: str) -> float:
        at = self.pos
        value = struct.unpack("<f", self.take(4, what))[0]
        if not math.isfinite(value):
            raise DecodeError(f"non-finite float in {what}", at)
        return value


def _pack_f32(value: float, field: str) -> bytes:
    if not math.isfinite(value):
        raise DomainError(f"{field} = {value!r} is not finite")
    try:
        return struct.pack("<f", value)
    except OverflowError:
        raise DomainError(f"{field} = {value!r} too large for 32-bit float") from None


def _check_layer(layer: int) -> int:
    if not 0 <= layer <= 255:
        raise DomainError(f"layer {layer} not in 0..255")
    return layer


def _encode_header(element: Element) -> bytes:
    return bytes([element.TAG, _check_layer(element.layer), element.attr.pack()])


def _encode_carrier(carrier: Carrier) -> bytes:
    if isinstance(carrier, SegmentCarrier):
        return (bytes([SegmentCarrier.KIND])
                + _pack_f32(carrier.p1.x, "carrier.x1")
                + _pack_f32(carrier.p1.y, "carrier.y1")
                + _pack_f32(carrier.p2.x, "carrier.x2")
                + _pack_f32(carrier.p2.y, "carrier.y2")
                + b"\x00\x00\x00\x00")
    if isinstance(carrier, ArcCarrier):
        return (bytes([ArcCarrier.KIND])
                + _pack_f32(carrier.center.x, "carrier.cx")
                + _pack_f32(carrier.center.y, "carrier.cy")
                + _pack_f32(carrier.radius, "carrier.radius")
                + _pack_f32(carrier.start_angle, "carrier.start_angle")
                + _pack_f32(carrier.sweep, "carrier.sweep"))
    raise DomainError(f"unknown carrier type {type(carrier).__name__}")


def _decode_carrier(r: _Reader) -> Carrier:
    at = r.pos
    kind = r.u8("carrier kind")
    if kind == SegmentCarrier.KIND:
        p1 = Point(r.f32("carrier.x1"), r.f32("carrier.y1"))
        p2 = Point(r.f32("carrier.x2"), r.f32("carrier.y2"))
        pad_at = r.pos
        if r.take(4, "carrier padding") != b"\x00\x00\x00\x00":
            raise DecodeError("segment carrier padding float must be zero", pad_at)
        return SegmentCarrier(p1, p2)
    if kind == ArcCarrier.KIND:
        center = Point(r.f32("carrier.cx"), r.f32("carrier.cy"))
        return ArcCarrier(center, r.f32("carrier.radius"),
                          r.f32("carrier.start_angle"), r.f32("carrier.sweep"))
    raise DecodeError(f"carrier kind {kind} not in 0..1", at)


def encode_element(element: Element) -> bytes:
    """Encode one element; output length always equals element_size()."""
    out = bytearray(_encode_header(element))
    if isinstance(element, SegmentElement):
        out += _pack_f32(element.p1.x, "x1") + _pack_f32(element.p1.y, "y1")
        out += _pack_f32(element.p2.x, "x2") + _pack_f32(element.p2.y, "y2")
    elif isinstance(element, ArcElement):
        out += _pack_f32(element.center.x, "cx") + _pack_f32(element.center.y, "cy")
        out += _pack_f32(element.radius, "radius")
        out += _pack_f32(element.start_angle, "start_angle")
        out += _pack_f32(element.sweep, "sweep")
    elif isinstance(element, PolylineElement):
        n = len(element.points)
        if not 2 <= n <= 65535:
            raise DomainError(f"polyline has {n} vertices, allowed 2..65535")
        out += struct.pack("<H", n)
        for i, p in enumerate(element.points):
            out += _pack_f32(p.x, f"points[{i}].x") + _pack_f32(p.y, f"points[{i}].y")
    elif isinstance(element, TextElement):
        raw = element.encoded_text()
        if len(raw) > 255:
            raise DomainError(f"text is {len(raw)} bytes, allowed 0..255")
        if not Q_COMPRESSION.check_code(element.compression):
            raise DomainError(
                f"compression code {element.compression} not in "
                f"{Q_COMPRESSION.min_code}..{Q_COMPRESSION.max_code}")
        out.append(encode_font(element.font))
        out.append(element.compression)
        out += _pack_f32(element.anchor.x, "anchor.x")
        out += _pack_f32(element.anchor.y, "anchor.y")
        out += _pack_f32(element.rotation, "rotation")
        out.append(len(raw))
        out += raw
    elif isinstance(element, MagistralElement):
        if not 1 <= element.mtype <= MAGISTRAL_TYPE_COUNT:
            raise DomainError(f"magistral type {element.mtype} not in 1..{MAGISTRAL_TYPE_COUNT}")
        if len(element.individual) != INDIVIDUAL_BLOCK_SIZE:
            raise DomainError(
                f"individual block is {len(element.individual)} bytes, "
                f"need {INDIVIDUAL_BLOCK_SIZE}")
        out += _encode_carrier(element.carrier)
        out.append(element.mtype)
        for name in ("first_step", "step", "picture"):
            code = getattr(element, name)
            if not 0 <= code <= Q_GENERAL.max_code:
                raise DomainError(f"{name} code {code} not in 0..{Q_GENERAL.max_code}")
            out += struct.pack("<H", code)
        out += element.individual
    else:
        raise DomainError(f"unknown element type {type(element).__name__}")
    assert len(out) == element_size(element)
    return bytes(out)


def decode_element(buf: bytes, offset: int = 0) -> tuple[Element, int]:
    """Decode one element record at `offset`; returns (element, bytes consumed)."""
    r = _Reader(buf, offset)
    tag_at = r.pos
    tag = r.u8("element tag")
    layer = r.u8("layer")
    attr_at = r.pos
    attr = Attr.unpack(r.u8("attribute byte"), attr_at)

    if tag == TAG_SEGMENT:
        element: Element = SegmentElement(
            Point(r.f32("x1"), r.f32("y1")), Point(r.f32("x2"), r.f32("y2")),
            layer=layer, attr=attr)
    elif tag == TAG_ARC:
        element = ArcElement(
            Point(r.f32("cx"), r.f32("cy")), r.f32("radius"),
            r.f32("start_angle"), r.f32("sweep"), layer=layer, attr=attr)
    elif tag == TAG_POLYLINE:
        count_at = r.pos
        n = r.u16("vertex count")
        if n < 2:
            raise DecodeError(f"polyline vertex count {n} < 2", count_at)
        pts = tuple(Point(r.f32(f"points[{i}].x"), r.f32(f"points[{i}].y"))
                    for i in range(n))
        element = PolylineElement(pts, layer=layer, attr=attr)
    elif tag == TAG_TEXT:
        font_at = r.pos
        font = decode_font(r.u8("font byte"), font_at)
        comp_at = r.pos
        compression = r.u8("compression")
        if not Q_COMPRESSION.check_code(compression):
            raise DecodeError(
                f"compression code {compression} not in "
                f"{Q_COMPRESSION.min_code}..{Q_COMPRESSION.max_code}", comp_at)
        anchor = Point(r.f32("anchor.x"), r.f32("anchor.y"))
        rotation = r.f32("rotation")
        n = r.u8("text length")
        text_at = r.pos
        raw = r.take(n, "text bytes")
        try:
            text = raw.decode("cp1251")
        except UnicodeDecodeError as exc:
            raise DecodeError(f"text is not cp1251: byte {raw[exc.start]:#04x}",
                              text_at + exc.start) from None
        element = TextElement(text, anchor, rotation=rotation, font=font,
                              compression=compression, layer=layer, attr=attr)
    elif tag == TAG_MAGISTRAL:
        carrier = _decode_carrier(r)
        mtype_at = r.pos
        mtype = r.u8("magistral type")
        if not 1 <= mtype <= MAGISTRAL_TYPE_COUNT:
            raise DecodeError(
                f"magistral type {mtype} not in 1..{MAGISTRAL_TYPE_COUNT}", mtype_at)
        codes = {}
        for name in ("first_step", "step", "picture"):
            at = r.pos
            code = r.u16(name)
            if code > Q_GENERAL.max_code:
                raise DecodeError(
                    f"{name} code {code} exceeds {Q_GENERAL.max_code}", at)
            codes[name] = code
        indiv_at = r.pos
        individual = r.take(INDIVIDUAL_BLOCK_SIZE, "individual settings")
        decode_individual(mtype, individual, indiv_at)  # strict range/padding check
        element = MagistralElement(mtype, carrier, layer=layer, attr=attr,
                                   individual=individual, **codes)
    else:
        raise DecodeError(f"unknown element tag {tag:#04x}", tag_at)
    return element, r.pos - offset


def _encode_sheet(sheet: SheetFormat) -> bytes:
    if sheet.is_custom:
        for name in ("width_mm", "height_mm"):
            v = getattr(sheet, name)
            if not (isinstance(v, int) and 1 <= v <= 65535):
                raise DomainError(f"custom format {name} {v!r} not a whole mm in 1..65535")
        return struct.pack("<BHH", _FORMAT_KIND_CUSTOM, sheet.width_mm, sheet.height_mm)
    if not 0 <= sheet.standard_id <= 65535:
        raise DomainError(f"format id {sheet.standard_id} not in 0..65535")
    return struct.pack("<BHH", _FORMAT_KIND_STANDARD, sheet.standard_id, 0)


def encode_drawing(drawing: Drawing) -> bytes:
    if not 0 <= drawing.scale_id <= 255:
        raise DomainError(f"scale id {drawing.scale_id} not in 0..255")
    if len(drawing.elements) >= 2 ** 32:
        raise DomainError("too many elements")
    out = bytearray(MAGIC)
    out += struct.pack("<H", FORMAT_VERSION)
    out.append(drawing.scale_id)
    out += _encode_sheet(drawing.sheet)
    out += struct.pack("<I", len(drawing.elements))
    for index, element in enumerate(drawing.elements):
        try:
            out += encode_element(element)
        except DomainError as exc:
            raise DomainError(f"element {index}: {exc}") from None
    return bytes(out)


def decode_drawing(buf: bytes) -> Drawing:
    r = _Reader(buf)
    if r.take(4, "magic") != MAGIC:
        raise DecodeError(f"bad magic, expected {MAGIC!r}", 0)
    version_at = r.pos
    version = r.u16("version")
    if version != FORMAT_VERSION:
        raise DecodeError(f"unsupported format version {version}", version_at)
    scale_id = r.u8("scale id")
    kind_at = r.pos
    kind = r.u8("format kind")
    a_at = r.pos
    a = r.u16("format field")
    b_at = r.pos
    b = r.u16("format field")
    if kind == _FORMAT_KIND_STANDARD:
        if b != 0:
            raise DecodeError("standard format padding must be zero", b_at)
        sheet = SheetFormat.standard(a)
    elif kind == _FORMAT_KIND_CUSTOM:
        if a == 0:
            raise DecodeError("custom format width must be >= 1 mm", a_at)
        if b == 0:
            raise DecodeError("custom format height must be >= 1 mm", b_at)
        sheet = SheetFormat.custom(a, b)
    else:
        raise DecodeError(f"format kind {kind} not in 0..1", kind_at)
    count = r.u32("element count")
    elements = []
    for index in range(count):
        try:
            element, consumed = decode_element(buf, r.pos)
        except DecodeError as exc:
            raise DecodeError(exc.message, exc.offset, element=index) from None
        r.pos += consumed
        elements.append(element)
    if r.pos != len(buf):
        raise DecodeError(f"{len(buf) - r.pos} bytes of trailing garbage", r.pos)
    return Drawing(scale_id, sheet, elements)
