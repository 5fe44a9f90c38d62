"""In-memory drawing model: element variants, headers, sizes, validation.

Elements store values the way the format stores them where the distinction
matters: quantized settings are integer codes (0 meaning "unset" for the
magistral general settings), the magistral individual block is raw bytes.
Geometry is plain doubles; the codec rounds to 32-bit floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .errors import DomainError, Violation
from .geometry import ArcCarrier, Carrier, Point, SegmentCarrier
from .standards import (
    Attr,
    CoordSpace,
    FONT_SIZES_MM,
    FONT_SLANTS_DEG,
    FontSpec,
    MAX_COLOR,
    Q_COMPRESSION,
    Q_GENERAL,
    StandardsConfig,
    default_config,
)

TEXT_CODE_PAGE = "cp1251"

TAG_SEGMENT = 0x01
TAG_ARC = 0x02
TAG_POLYLINE = 0x03
TAG_TEXT = 0x04
TAG_MAGISTRAL = 0x05

HEADER_SIZE = 3          # tag + layer + attribute byte
SEGMENT_SIZE = 19
ARC_SIZE = 23
MAGISTRAL_SIZE = 43
CARRIER_SIZE = 21        # kind byte + five 32-bit floats
TEXT_FIXED_SIZE = 18     # everything before the text bytes
POLYLINE_FIXED_SIZE = 5  # header + vertex count

MAX_LAYER = 255


def _check_header(layer: int, attr: Attr) -> list[Violation]:
    out = []
    if not 0 <= layer <= MAX_LAYER:
        out.append(Violation("layer", layer, f"0..{MAX_LAYER}"))
    if not 0 <= int(attr.line_type) <= 6:
        out.append(Violation("attr.line_type", int(attr.line_type), "0..6"))
    if not 0 <= attr.color <= MAX_COLOR:
        out.append(Violation("attr.color", attr.color, f"0..{MAX_COLOR}"))
    return out


@dataclass(frozen=True)
class SegmentElement:
    p1: Point
    p2: Point
    layer: int = 0
    attr: Attr = Attr()

    TAG = TAG_SEGMENT


@dataclass(frozen=True)
class ArcElement:
    center: Point
    radius: float
    start_angle: float
    sweep: float
    layer: int = 0
    attr: Attr = Attr()

    TAG = TAG_ARC

    def carrier(self) -> ArcCarrier:
        return ArcCarrier(self.center, self.radius, self.start_angle, self.sweep)


@dataclass(frozen=True)
class PolylineElement:
    points: tuple[Point, ...]
    layer: int = 0
    attr: Attr = Attr()

    TAG = TAG_POLYLINE


@dataclass(frozen=True)
class TextElement:
    text: str
    anchor: Point
    rotation: float = 0.0           # radians
    font: FontSpec = FontSpec(3.5, 90)
    compression: int = 100          # 0.01-step code, 10..255
    layer: int = 0
    attr: Attr = Attr()

    TAG = TAG_TEXT

    def compression_factor(self) -> float:
        return Q_COMPRESSION.dequantize(self.compression, "compression")

    def encoded_text(self) -> bytes:
        try:
            return self.text.encode(TEXT_CODE_PAGE)
        except UnicodeEncodeError as exc:
            raise DomainError(f"text not encodable in {TEXT_CODE_PAGE}: {exc}") from None


@dataclass(frozen=True)
class MagistralElement:
    mtype: int
    carrier: Carrier
    first_step: int = 0             # general-setting codes, 0.01 mm units,
    step: int = 0                   # 0 = setting not stored
    picture: int = 0
    individual: bytes = b"\x00" * 12
    layer: int = 0
    attr: Attr = Attr()

    TAG = TAG_MAGISTRAL

    def general_mm(self) -> dict[str, float | None]:
        def dec(code):
            return None if code == 0 else Q_GENERAL.dequantize(code)
        return {"first_step": dec(self.first_step), "step": dec(self.step),
                "picture": dec(self.picture)}

    def settings(self) -> dict:
        from .magistral.individual import decode_individual

        return decode_individual(self.mtype, self.individual)

    @classmethod
    def build(cls, mtype: int, carrier: Carrier, *,
              first_step: float | None = None, step: float | None = None,
              picture: float | None = None, settings: dict | None = None,
              layer: int = 0, attr: Attr | None = None) -> "MagistralElement":
        """Assemble a magistral from mm-valued settings and registry defaults.

        Explicit values are always honored (even inapplicable ones, so the
        validator can report them); unspecified applicable settings fall back
        to the type's defaults, inapplicable ones to code 0.
        """
        from .magistral.individual import encode_individual
        from .magistral.registry import descriptor

        mt = descriptor(mtype)

        def code(value, applicable, default_mm, name):
            if value is not None:
                return Q_GENERAL.quantize(value, name)
            if applicable:
                return Q_GENERAL.quantize(default_mm, name)
            return 0

        values = dict(mt.defaults_individual)
        values.update(settings or {})
        return cls(
            mtype=mtype,
            carrier=carrier,
            first_step=code(first_step, mt.uses_first_step,
                            mt.defaults_general.get("first_step"), "first_step"),
            step=code(step, mt.uses_step, mt.defaults_general.get("step"), "step"),
            picture=code(picture, mt.uses_picture,
                         mt.defaults_general.get("picture"), "picture"),
            individual=encode_individual(mtype, values),
            layer=layer,
            attr=attr if attr is not None else Attr(line_type=mt.line_type),
        )


Element = SegmentElement | ArcElement | PolylineElement | TextElement | MagistralElement

ELEMENT_KIND_NAMES = {
    TAG_SEGMENT: "segment",
    TAG_ARC: "arc",
    TAG_POLYLINE: "polyline",
    TAG_TEXT: "text",
    TAG_MAGISTRAL: "magistral",
}


@dataclass(frozen=True)
class SheetFormat:
    """GOST 2.301 sheet: either an id into the format table or custom mm."""

    standard_id: int | None = None
    width_mm: int | None = None
    height_mm: int | None = None

    @classmethod
    def standard(cls, format_id: int) -> "SheetFormat":
        return cls(standard_id=format_id)

    @classmethod
    def custom(cls, width_mm: int, height_mm: int) -> "SheetFormat":
        return cls(width_mm=int(width_mm), height_mm=int(height_mm))

    @property
    def is_custom(self) -> bool:
        return self.standard_id is None

    def size_mm(self, config: StandardsConfig | None = None) -> tuple[int, int]:
        if self.is_custom:
            return int(self.width_mm), int(self.height_mm)
        cfg = config or default_config()
        fmt = cfg.formats[self.standard_id]
        return fmt.width_mm, fmt.height_mm

    def label(self, config: StandardsConfig | None = None) -> str:
        if self.is_custom:
            return f"custom {self.width_mm}x{self.height_mm} mm"
        cfg = config or default_config()
        return cfg.formats[self.standard_id].name

    def violations(self, config: StandardsConfig | None = None) -> list[Violation]:
        cfg = config or default_config()
        if self.is_custom:
            out = []
            for name in ("width_mm", "height_mm"):
                v = getattr(self, name)
                if not (isinstance(v, int) and 1 <= v <= 65535):
                    out.append(Violation(f"format.{name}", v, "whole mm in 1..65535"))
            return out
        if not 0 <= self.standard_id < len(cfg.formats):
            return [Violation("format.standard_id", self.standard_id,
                              f"0..{len(cfg.formats) - 1}")]
        return []


@dataclass
class Drawing:
    scale_id: int
    sheet: SheetFormat
    elements: list = field(default_factory=list)

    @classmethod
    def new(cls, scale_label: str = "1:1", format_name: str = "A4",
            config: StandardsConfig | None = None) -> "Drawing":
        cfg = config or default_config()
        for entry in cfg.scales:
            if entry.label() == scale_label:
                return cls(entry.id, SheetFormat.standard(cfg.format_id_for(format_name)))
        raise DomainError(f"scale {scale_label!r} not in configured table")

    def scale_entry(self, config: StandardsConfig | None = None):
        cfg = config or default_config()
        if not 0 <= self.scale_id < len(cfg.scales):
            raise DomainError(f"scale id {self.scale_id} not in configured table")
        return cfg.scales[self.scale_id]


def paper_factor(drawing: Drawing, element: Element,
                 config: StandardsConfig | None = None) -> float:
    """Multiplier resolving the element's coordinates to paper mm."""
    if element.attr.space == CoordSpace.BUMAGA:
        return 1.0
    return drawing.scale_entry(config).factor


def to_paper_mm(drawing: Drawing, element: Element, p: Point,
                config: StandardsConfig | None = None) -> Point:
    f = paper_factor(drawing, element, config)
    return Point(p.x * f, p.y * f)


def element_size(element: Element) -> int:
    """Exact encoded byte count, computed without encoding."""
    if isinstance(element, SegmentElement):
        return SEGMENT_SIZE
    if isinstance(element, ArcElement):
        return ARC_SIZE
    if isinstance(element, PolylineElement):
        return POLYLINE_FIXED_SIZE + 8 * len(element.points)
    if isinstance(element, TextElement):
        return TEXT_FIXED_SIZE + len(element.encoded_text())
    if isinstance(element, MagistralElement):
        return MAGISTRAL_SIZE
    raise DomainError(f"unknown element type {type(element).__name__}")


def _finite(*values: float) -> bool:
    return all(math.isfinite(v) for v in values)


def validate_element(element: Element,
                     config: StandardsConfig | None = None) -> list[Violation]:
    """All standards-conformance findings for one element (empty = clean)."""
    out = _check_header(element.layer, element.attr)

    if isinstance(element, SegmentElement):
        out.extend(SegmentCarrier(element.p1, element.p2).violations())
    elif isinstance(element, ArcElement):
        out.extend(element.carrier().violations())
    elif isinstance(element, PolylineElement):
        if not 2 <= len(element.points) <= 65535:
            out.append(Violation("points", len(element.points), "2..65535 vertices"))
        if not all(_finite(p.x, p.y) for p in element.points):
            out.append(Violation("points", "non-finite", "finite coordinates"))
    elif isinstance(element, TextElement):
        if element.font.size_mm not in FONT_SIZES_MM:
            out.append(Violation("font.size_mm", element.font.size_mm,
                                 f"one of {FONT_SIZES_MM}"))
        if element.font.slant_deg not in FONT_SLANTS_DEG:
            out.append(Violation("font.slant_deg", element.font.slant_deg,
                                 f"one of {FONT_SLANTS_DEG}"))
        if not Q_COMPRESSION.check_code(element.compression):
            out.append(Violation("compression", element.compression,
                                 f"codes {Q_COMPRESSION.min_code}..{Q_COMPRESSION.max_code}"))
        if not (_finite(element.anchor.x, element.anchor.y, element.rotation)):
            out.append(Violation("anchor", "non-finite", "finite coordinates"))
        try:
            if len(element.encoded_text()) > 255:
                out.append(Violation("text", len(element.text), "at most 255 bytes"))
        except DomainError:
            out.append(Violation("text", element.text, f"{TEXT_CODE_PAGE}-encodable"))
    elif isinstance(element, MagistralElement):
        from .magistral.individual import validate_magistral

        out.extend(validate_magistral(element))
    else:
        out.append(Violation("element", type(element).__name__, "a known element kind"))
    return out


def validate_drawing(drawing: Drawing,
                     config: StandardsConfig | None = None) -> list[tuple[int | None, Violation]]:
    """Per-element findings as (element index, violation); drawing-level use index None."""
    cfg = config or default_config()
    out: list[tuple[int | None, Violation]] = []
    if not 0 <= drawing.scale_id < len(cfg.scales):
        out.append((None, Violation("scale_id", drawing.scale_id,
                                    f"0..{len(cfg.scales) - 1}")))
    for violation in drawing.sheet.violations(cfg):
        out.append((None, violation))
    for index, element in enumerate(drawing.elements):
        for violation in validate_element(element, cfg):
            out.append((index, violation))
    return out


def expand_magistrals(drawing: Drawing) -> Drawing:
    """Replace every magistral by its tessellation; other elements unchanged."""
    from .magistral.tessellate import tessellate

    elements: list = []
    for element in drawing.elements:
        if isinstance(element, MagistralElement):
            elements.extend(tessellate(element))
        else:
            elements.append(element)
    return replace(drawing, elements=elements)
