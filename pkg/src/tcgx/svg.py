"""SVG export: 1 SVG user unit = 1 paper millimeter.

Magistrals are rendered through their tessellation, natura coordinates are
resolved to paper mm, line kinds map to stroke widths and dash arrays and
colors to the palette, both from the standards config.  Dashing itself is
delegated to SVG ``stroke-dasharray``.  Output is a pure function of the
drawing bytes, so files can be golden-tested.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

from .geometry import TAU
from .model import (
    ArcElement,
    Drawing,
    MagistralElement,
    PolylineElement,
    SegmentElement,
    TextElement,
    paper_factor,
)
from .standards import StandardsConfig, default_config

_FULL_CIRCLE_EPS = 1e-9
FRAME_STROKE_MM = 0.3


def _fmt(value: float) -> str:
    if abs(value) < 5e-5:
        value = 0.0
    return f"{value:.4f}"


def _style(attr, config: StandardsConfig) -> str:
    kind = config.line_kinds[int(attr.line_type)]
    color = config.palette[attr.color]
    style = f'stroke="{color}" stroke-width="{_fmt(kind.width_mm)}"'
    if kind.dash_mm:
        style += f' stroke-dasharray="{",".join(_fmt(d) for d in kind.dash_mm)}"'
    return style


def _arc_path(e: ArcElement, f: float) -> str:
    cx, cy, r = e.center.x * f, e.center.y * f, e.radius * f
    a0, a1 = e.start_angle, e.start_angle + e.sweep
    x0, y0 = cx + r * math.cos(a0), cy + r * math.sin(a0)
    x1, y1 = cx + r * math.cos(a1), cy + r * math.sin(a1)
    large = 1 if abs(e.sweep) > math.pi else 0
    sweep_flag = 1 if e.sweep > 0 else 0
    return (f'M {_fmt(x0)} {_fmt(y0)} '
            f'A {_fmt(r)} {_fmt(r)} 0 {large} {sweep_flag} {_fmt(x1)} {_fmt(y1)}')


def render_svg(drawing: Drawing, config: StandardsConfig | None = None) -> str:
    cfg = config or default_config()
    width, height = drawing.sheet.size_mm(cfg)

    shapes: list[str] = []
    texts: list[str] = []

    def emit(element, indent="    "):
        f = paper_factor(drawing, element, cfg)
        style = _style(element.attr, cfg)
        if isinstance(element, MagistralElement):
            from .magistral.tessellate import tessellate

            for piece in tessellate(element):
                emit(piece, indent)
        elif isinstance(element, SegmentElement):
            shapes.append(
                f'{indent}<line x1="{_fmt(element.p1.x * f)}" y1="{_fmt(element.p1.y * f)}" '
                f'x2="{_fmt(element.p2.x * f)}" y2="{_fmt(element.p2.y * f)}" {style}/>')
        elif isinstance(element, ArcElement):
            if abs(abs(element.sweep) - TAU) < _FULL_CIRCLE_EPS:
                shapes.append(
                    f'{indent}<circle cx="{_fmt(element.center.x * f)}" '
                    f'cy="{_fmt(element.center.y * f)}" r="{_fmt(element.radius * f)}" '
                    f'{style}/>')
            else:
                shapes.append(f'{indent}<path d="{_arc_path(element, f)}" {style}/>')
        elif isinstance(element, PolylineElement):
            pts = " ".join(f"{_fmt(p.x * f)},{_fmt(p.y * f)}" for p in element.points)
            shapes.append(f'{indent}<polyline points="{pts}" {style}/>')
        elif isinstance(element, TextElement):
            # text lives outside the y-flipped group so glyphs stay upright
            x, y = element.anchor.x * f, element.anchor.y * f
            deg = -math.degrees(element.rotation)
            color = cfg.palette[element.attr.color]
            slant = ' font-style="italic"' if element.font.slant_deg == 75 else ""
            transform = (f'translate({_fmt(x)} {_fmt(height - y)}) '
                         f'rotate({_fmt(deg)}) '
                         f'scale({_fmt(element.compression_factor())} 1)')
            texts.append(
                f'  <text transform="{transform}" '
                f'font-size="{_fmt(element.font.size_mm)}" font-family="sans-serif"'
                f'{slant} fill="{color}" text-anchor="middle" '
                f'dominant-baseline="central">{escape(element.text)}</text>')

    for element in drawing.elements:
        emit(element)

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}mm" height="{height}mm" '
        f'viewBox="0 0 {width} {height}">',
        f'  <rect x="0" y="0" width="{width}" height="{height}" fill="none" '
        f'stroke="#000000" stroke-width="{_fmt(FRAME_STROKE_MM)}"/>',
        f'  <g transform="translate(0 {height}) scale(1 -1)" fill="none" '
        'stroke-linecap="round" stroke-linejoin="round">',
    ]
    lines.extend(shapes)
    lines.append("  </g>")
    lines.extend(texts)
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
