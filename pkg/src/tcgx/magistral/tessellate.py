"""Expansion of magistrals into explicit drawing primitives.

A magistral is a carrier line periodically interrupted by short gaps, each
gap holding one glyph (arrow, stroke, cross, check, dot, text, ...).  Along
arclength the carrier is on over [0, f], then gap/carrier pairs of lengths
(p, s) repeat; a gap is only emitted if it fits entirely before the carrier
end, and the final carrier piece always extends to the full length, so the
magistral's endpoints stay exact under snapping and trimming.

Two types are continuous instead of tiled: the wavy line (one sampled
polyline) and the railroad (two parallel offset curves).  The water pipe is
tiled but draws each carrier-on piece as two parallel offset pieces.

Where the per-period lengths come from varies by type (see _pattern_params):
most use the general step/picture settings; the cable-like types lacking the
step setting take their gap, and usually their dash, from individual fields.

Glyph geometry itself (exact arrowhead proportions, stroke tilts, dot radii)
is fixed here and documented with reference images in docs/glyphs.md.
"""

from __future__ import annotations

import math

from ..errors import DomainError
from ..geometry import ArcCarrier, Carrier, Frame, SegmentCarrier, TAU
from ..model import (
    ArcElement,
    Element,
    MagistralElement,
    PolylineElement,
    SegmentElement,
    TextElement,
    element_size,
)
from ..standards import Attr, Q_COMPRESSION
from .individual import decode_individual, validate_magistral
from .registry import MagistralType, descriptor

# Types with special pattern-parameter sources or continuous output.
WAVY = 3
RAILROAD = 16
SPECIAL_DASHED = 19
LOW_VOLTAGE = 20
EMERGENCY_LIGHT = 21
GROUNDING_CONDUCTOR = 22
HIGH_VOLTAGE_CABLE = 23
WATER_PIPE = 24
LOW_CURRENT_CABLE = 26

WAVE_SAMPLES_PER_HALFWAVE = 16
DOUBLE_DOT_RADIUS_MM = 0.35


def tile(length: float, first: float, on: float, gap: float):
    """Carrier-on and gap intervals tiling [0, length].

    Returns (pieces, gaps); both are lists of (start, end) arclengths.  The
    union of all intervals is exactly [0, length] with no overlap; a gap is
    kept only when it fits entirely, and the last piece runs to the end.
    Zero-length pieces (possible when ``on`` is 0) are kept in the interval
    bookkeeping but produce no geometry.
    """
    if length <= 0 or first < 0 or on < 0 or gap <= 0:
        raise DomainError(
            f"bad tiling parameters: L={length:g} f={first:g} s={on:g} p={gap:g}")
    pieces: list[tuple[float, float]] = []
    gaps: list[tuple[float, float]] = []
    pos = 0.0
    on_len = first
    while True:
        gap_end = pos + on_len + gap
        if gap_end <= length:
            pieces.append((pos, pos + on_len))
            gaps.append((pos + on_len, gap_end))
            pos = gap_end
            on_len = on
        else:
            pieces.append((pos, length))
            return pieces, gaps


def _pattern_params(mt: MagistralType, element: MagistralElement,
                    values: dict) -> tuple[float, float, float]:
    """Resolve (first, carrier-on, gap) lengths in mm for a tiled type."""
    general = element.general_mm()
    if mt.id == SPECIAL_DASHED:
        # the picture spans the whole period: bars back to back, no carrier
        return general["first_step"], 0.0, general["picture"]
    if mt.id == LOW_VOLTAGE:
        # no picture setting: the dot itself sizes the gap
        return general["first_step"], general["step"], values["dot_diameter"]
    if mt.id in (EMERGENCY_LIGHT, LOW_CURRENT_CABLE):
        return general["first_step"], values["dash_len"], values["gap_len"]
    if mt.id == GROUNDING_CONDUCTOR:
        # no general settings at all; period-aligned start
        return values["dash_len"], values["dash_len"], values["stroke_spacing"]
    if mt.id in (HIGH_VOLTAGE_CABLE, WATER_PIPE):
        return general["first_step"], general["picture"], values["gap_len"]
    return general["first_step"], general["step"], general["picture"]


def _piece_element(carrier: Carrier, layer: int, attr: Attr) -> Element:
    if isinstance(carrier, SegmentCarrier):
        return SegmentElement(carrier.p1, carrier.p2, layer=layer, attr=attr)
    return ArcElement(carrier.center, carrier.radius, carrier.start_angle,
                      carrier.sweep, layer=layer, attr=attr)


def _polyline(frame: Frame, local_pts, layer: int, attr: Attr) -> PolylineElement:
    return PolylineElement(tuple(frame.place(u, v) for u, v in local_pts),
                           layer=layer, attr=attr)


def _dot(frame: Frame, u: float, radius: float, layer: int, attr: Attr) -> ArcElement:
    center = frame.place(u, 0.0)
    return ArcElement(center, radius, 0.0, TAU, layer=layer, attr=attr)


def _arrow(frame: Frame, u0: float, along: float, across: float,
           layer: int, attr: Attr) -> PolylineElement:
    return _polyline(frame, [(u0 - along / 2, across), (u0 + along / 2, 0.0),
                             (u0 - along / 2, -across)], layer, attr)


def _stroke(frame: Frame, u0: float, height: float, tilt: float,
            layer: int, attr: Attr) -> SegmentElement:
    return SegmentElement(frame.place(u0 - tilt / 2, -height / 2),
                          frame.place(u0 + tilt / 2, height / 2),
                          layer=layer, attr=attr)


def _cross(frame: Frame, u0: float, height: float, layer: int,
           attr: Attr) -> list[SegmentElement]:
    h = height / 2
    return [SegmentElement(frame.place(u0 - h, -h), frame.place(u0 + h, h),
                           layer=layer, attr=attr),
            SegmentElement(frame.place(u0 - h, h), frame.place(u0 + h, -h),
                           layer=layer, attr=attr)]


def _text_rotation(frame: Frame) -> float:
    tx, ty = frame.tangent
    # flip when the tangent points into the left half-plane: text stays
    # readable left to right
    if tx < 0:
        return math.atan2(-ty, -tx)
    return math.atan2(ty, tx)


def _glyph(mt: MagistralType, values: dict, frame: Frame, gap: float,
           layer: int, attr: Attr) -> list[Element]:
    tid = mt.id
    if tid == 1:
        return [_arrow(frame, 0.0, values["arrow_along"], values["arrow_across"],
                       layer, attr)]
    if tid == 2:
        d = values["arrow_spacing"] / 2
        return [_arrow(frame, -d, values["arrow_along"], values["arrow_across"],
                       layer, attr),
                _arrow(frame, d, values["arrow_along"], values["arrow_across"],
                       layer, attr)]
    if tid in (4, 17, 18):
        h = values["zigzag_height"] / 2
        return [_polyline(frame, [(-gap / 2, 0.0), (-gap / 8, h), (gap / 8, -h),
                                  (gap / 2, 0.0)], layer, attr)]
    if tid == 5:
        return [_stroke(frame, 0.0, values["stroke_height"],
                        values["stroke_tilt"], layer, attr)]
    if tid in (6, 7):
        d = values["stroke_spacing"]
        offsets = (-d / 2, d / 2) if tid == 6 else (-d, 0.0, d)
        return [_stroke(frame, u, values["stroke_height"], values["stroke_tilt"],
                        layer, attr) for u in offsets]
    if tid == 8:
        d = values["dot_spacing"] / 2
        return [_dot(frame, -d, DOUBLE_DOT_RADIUS_MM, layer, attr),
                _dot(frame, d, DOUBLE_DOT_RADIUS_MM, layer, attr)]
    if tid in (9, 10, 14, 15):
        return [TextElement(values["text"], frame.origin,
                            rotation=_text_rotation(frame), font=values["font"],
                            compression=Q_COMPRESSION.quantize(values["compression"]),
                            layer=layer, attr=attr)]
    if tid == 11:
        return _cross(frame, 0.0, values["cross_height"], layer, attr)
    if tid == 12:
        d = values["cross_spacing"] / 2
        return (_cross(frame, -d, values["cross_height"], layer, attr)
                + _cross(frame, d, values["cross_height"], layer, attr))
    if tid == 13:
        h, w = values["check_height"], values["check_width"] / 2
        return [_polyline(frame, [(-w, h), (0.0, 0.0), (w, h)], layer, attr)]
    if tid == SPECIAL_DASHED:
        u, v = gap / 4, values["stroke_width"] / 2
        return [_polyline(frame, [(-u, -v), (u, -v), (u, v), (-u, v), (-u, -v)],
                          layer, attr)]
    if tid in (LOW_VOLTAGE, EMERGENCY_LIGHT, 25, LOW_CURRENT_CABLE):
        return [_dot(frame, 0.0, values["dot_diameter"] / 2, layer, attr)]
    if tid == GROUNDING_CONDUCTOR:
        return _cross(frame, 0.0, values["cross_height"], layer, attr)
    if tid == HIGH_VOLTAGE_CABLE:
        return [_arrow(frame, 0.0, values["arrow_along"], values["arrow_across"],
                       layer, attr)]
    if tid == WATER_PIPE:
        return []
    raise DomainError(f"no glyph program for magistral type {tid}")


def _wavy_polyline(carrier: Carrier, values: dict, layer: int,
                   attr: Attr) -> PolylineElement:
    length = carrier.length()
    halfwaves = max(1, int(math.floor(length / values["halfwave_len"] + 0.5)))
    height = values["halfwave_height"]
    samples = WAVE_SAMPLES_PER_HALFWAVE
    total = halfwaves * samples
    points = []
    for k in range(total + 1):
        offset = 0.0 if k % samples == 0 else height * math.sin(math.pi * k / samples)
        frame = carrier.frame_at(length * k / total)
        points.append(frame.place(0.0, offset))
    return PolylineElement(tuple(points), layer=layer, attr=attr)


def tessellate(element: MagistralElement) -> list[Element]:
    """Expand one magistral into explicit primitives.

    The element must validate cleanly.  Output primitives keep the
    magistral's layer, color and coordinate space; their line kind is the
    registry kind of the magistral type.  The expansion is a pure function
    of the element value.
    """
    problems = validate_magistral(element)
    if problems:
        raise DomainError(f"magistral does not validate: {problems[0]}")
    mt = descriptor(element.mtype)
    values = decode_individual(element.mtype, element.individual)
    layer = element.layer
    attr = Attr(line_type=mt.line_type, color=element.attr.color,
                space=element.attr.space)
    carrier = element.carrier

    if mt.id == WAVY:
        return [_wavy_polyline(carrier, values, layer, attr)]
    if mt.id == RAILROAD:
        d = values["rail_offset"]
        return [_piece_element(carrier.offset(d), layer, attr),
                _piece_element(carrier.offset(-d), layer, attr)]

    first, on, gap = _pattern_params(mt, element, values)
    pieces, gaps = tile(carrier.length(), first, on, gap)
    out: list[Element] = []
    for a, b in pieces:
        if b - a <= 0.0:
            continue
        piece = carrier.subcurve(a, b)
        if mt.id == WATER_PIPE:
            d = values["line_spacing"] / 2
            out.append(_piece_element(piece.offset(d), layer, attr))
            out.append(_piece_element(piece.offset(-d), layer, attr))
        else:
            out.append(_piece_element(piece, layer, attr))
    for a, b in gaps:
        frame = carrier.frame_at((a + b) / 2)
        out.extend(_glyph(mt, values, frame, gap, layer, attr))
    return out


def expanded_size(element: MagistralElement) -> int:
    """Byte count of the tessellation output (the cost of storing it expanded)."""
    return sum(element_size(e) for e in tessellate(element))
