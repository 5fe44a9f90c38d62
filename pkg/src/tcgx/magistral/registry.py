"""The 26-type registry of parametric utility lines.

Most of the information defining a magistral lives here, in code; the
drawing element itself stores only the carrier line, the type id, three
general lengths and a 12-byte individual block whose schema this registry
defines.  Per type the registry fixes:

  * which of the three general settings (first-step, step, picture) apply,
  * the individual-setting schema (field names, quantizers, byte widths),
  * the line kind carrier pieces are drawn with,
  * hatch-boundary eligibility,
  * canonical defaults used by the CLI and by tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import DomainError
from ..standards import (
    FontSpec,
    LineType,
    Q8_ARROW,
    Q8_ARROW_FROM_ZERO,
    Q8_DEFAULT,
    Q16_300,
    Q16_600,
    Q16_ARROW_ACROSS,
    Q16_DOT,
    Q16_HALFWAVE_HEIGHT,
    Q_COMPRESSION,
    Quantizer,
)

INDIVIDUAL_BLOCK_SIZE = 12
MAX_INDIVIDUAL_TEXT = 4


@dataclass(frozen=True)
class FieldSpec:
    """One individual-setting field: a quantized length, a font or a text."""

    name: str
    kind: str  # "q" | "font" | "text"
    width: int
    quantizer: Quantizer | None = None


def _q(name: str, quantizer: Quantizer) -> FieldSpec:
    return FieldSpec(name, "q", quantizer.width, quantizer)


_TEXT_FIELDS = (
    FieldSpec("font", "font", 1),
    FieldSpec("text", "text", MAX_INDIVIDUAL_TEXT),
    _q("compression", Q_COMPRESSION),
)

# Empty text with unit compression keeps the canonical settings valid for
# every text-bearing type.
_TEXT_DEFAULTS = {"font": FontSpec(2.5, 90), "text": "", "compression": 1.0}


@dataclass(frozen=True)
class MagistralType:
    id: int
    name: str
    title: str
    uses_step: bool
    uses_picture: bool
    uses_first_step: bool
    line_type: LineType
    fields: tuple[FieldSpec, ...]
    hatch_eligible: bool = False
    continuous: bool = False
    defaults_general: dict = field(default_factory=dict)
    defaults_individual: dict = field(default_factory=dict)

    def field_spec(self, name: str) -> FieldSpec:
        for fs in self.fields:
            if fs.name == name:
                return fs
        raise DomainError(
            f"magistral type {self.id} ({self.name}) has no setting {name!r}; "
            f"valid: {[fs.name for fs in self.fields]}")


_GEN_DEFAULT = {"first_step": 10.0, "step": 40.0, "picture": 10.0}


def _t(tid, name, title, *, step=True, picture=True, first_step=True,
       line=LineType.SOLID_MAIN, fields=(), hatch=False, continuous=False,
       general=None, individual=None) -> MagistralType:
    if general is None:
        general = {k: v for k, v in _GEN_DEFAULT.items()
                   if {"first_step": first_step, "step": step, "picture": picture}[k]}
    return MagistralType(
        id=tid, name=name, title=title,
        uses_step=step, uses_picture=picture, uses_first_step=first_step,
        line_type=line, fields=tuple(fields), hatch_eligible=hatch,
        continuous=continuous, defaults_general=general,
        defaults_individual=dict(individual or {}))


_TYPES = (
    _t(1, "solid_single_arrows", "solid with single arrows",
       fields=[_q("arrow_along", Q8_ARROW), _q("arrow_across", Q8_DEFAULT)],
       individual={"arrow_along": 3.0, "arrow_across": 1.0}),
    _t(2, "solid_double_arrows", "solid with double arrows",
       fields=[_q("arrow_along", Q8_ARROW), _q("arrow_across", Q8_DEFAULT),
               _q("arrow_spacing", Q8_DEFAULT)],
       individual={"arrow_along": 3.0, "arrow_across": 1.0, "arrow_spacing": 5.0}),
    _t(3, "solid_wavy", "solid wavy (break / flexible-pipe line)",
       step=False, first_step=False, line=LineType.SOLID_THIN,
       hatch=True, continuous=True,
       fields=[_q("halfwave_len", Q16_300), _q("halfwave_height", Q16_HALFWAVE_HEIGHT)],
       individual={"halfwave_len": 10.0, "halfwave_height": 2.0}),
    _t(4, "solid_thin_zigzag", "solid thin with zigzag (long break line)",
       line=LineType.SOLID_THIN, hatch=True,
       fields=[_q("zigzag_height", Q8_DEFAULT)],
       individual={"zigzag_height": 2.5}),
    _t(5, "solid_single_stroke", "solid with single stroke",
       fields=[_q("stroke_height", Q8_DEFAULT), _q("stroke_tilt", Q8_DEFAULT)],
       individual={"stroke_height": 3.0, "stroke_tilt": 1.0}),
    _t(6, "solid_double_stroke", "solid with double stroke",
       fields=[_q("stroke_height", Q8_DEFAULT), _q("stroke_spacing", Q8_DEFAULT),
               _q("stroke_tilt", Q8_DEFAULT)],
       individual={"stroke_height": 3.0, "stroke_spacing": 2.0, "stroke_tilt": 1.0}),
    _t(7, "solid_triple_stroke", "solid with triple stroke",
       fields=[_q("stroke_height", Q8_DEFAULT), _q("stroke_spacing", Q8_DEFAULT),
               _q("stroke_tilt", Q8_DEFAULT)],
       individual={"stroke_height": 3.0, "stroke_spacing": 2.0, "stroke_tilt": 1.0}),
    _t(8, "solid_double_dot", "solid with double dot",
       fields=[_q("dot_spacing", Q8_DEFAULT)],
       individual={"dot_spacing": 2.0}),
    _t(9, "solid_main_text", "solid main with text (designed pipelines)",
       fields=_TEXT_FIELDS, individual=_TEXT_DEFAULTS),
    _t(10, "dashed_thin_text", "dashed thin with text (hidden pipelines)",
       line=LineType.DASHED, fields=_TEXT_FIELDS, individual=_TEXT_DEFAULTS),
    _t(11, "solid_single_cross", "solid with single cross",
       fields=[_q("cross_height", Q8_DEFAULT)],
       individual={"cross_height": 2.5}),
    _t(12, "solid_double_cross", "solid with double cross",
       fields=[_q("cross_height", Q8_DEFAULT), _q("cross_spacing", Q8_DEFAULT)],
       individual={"cross_height": 2.5, "cross_spacing": 2.0}),
    _t(13, "solid_single_check", "solid with single check mark",
       fields=[_q("check_height", Q8_DEFAULT), _q("check_width", Q8_DEFAULT)],
       individual={"check_height": 2.0, "check_width": 3.0}),
    _t(14, "solid_thin_text", "solid thin with text (existing pipelines)",
       line=LineType.SOLID_THIN, fields=_TEXT_FIELDS, individual=_TEXT_DEFAULTS),
    _t(15, "dashed_thick_text", "dashed thickened with text",
       line=LineType.DASHED_THICK, fields=_TEXT_FIELDS, individual=_TEXT_DEFAULTS),
    _t(16, "railroad", "railroad track",
       step=False, first_step=False, continuous=True,
       fields=[_q("rail_offset", Q16_600)],
       individual={"rail_offset": 2.5}),
    _t(17, "open_conductor_main", "open conductor run (main line)",
       fields=[_q("zigzag_height", Q8_DEFAULT)],
       individual={"zigzag_height": 2.5}),
    _t(18, "open_conductor_thin", "open conductor run (thin line)",
       line=LineType.SOLID_THIN,
       fields=[_q("zigzag_height", Q8_DEFAULT)],
       individual={"zigzag_height": 2.5}),
    _t(19, "special_dashed", "special dashed (zebra stripes)",
       step=False, line=LineType.SOLID_THIN,
       fields=[_q("stroke_width", Q16_600)],
       individual={"stroke_width": 5.0}),
    _t(20, "low_voltage_36v", "voltage line 36 V and below",
       picture=False,
       fields=[_q("dot_diameter", Q16_DOT)],
       individual={"dot_diameter": 1.0},
       general={"first_step": 10.0, "step": 40.0}),
    _t(21, "emergency_light_36v", "emergency-lighting line 36 V and below",
       step=False, picture=False,
       fields=[_q("gap_len", Q16_600), _q("dash_len", Q16_600),
               _q("dot_diameter", Q16_DOT)],
       individual={"gap_len": 3.0, "dash_len": 8.0, "dot_diameter": 1.0},
       general={"first_step": 10.0}),
    _t(22, "grounding_conductor", "grounding conductor",
       step=False, picture=False, first_step=False,
       fields=[_q("stroke_spacing", Q16_600), _q("dash_len", Q16_600),
               _q("cross_height", Q16_DOT)],
       individual={"stroke_spacing": 4.0, "dash_len": 8.0, "cross_height": 2.5},
       general={}),
    _t(23, "high_voltage_cable", "high-voltage cable",
       step=False,
       fields=[_q("gap_len", Q16_600), _q("arrow_along", Q8_ARROW_FROM_ZERO),
               _q("arrow_across", Q16_ARROW_ACROSS)],
       individual={"gap_len": 6.0, "arrow_along": 3.0, "arrow_across": 1.0},
       general={"first_step": 10.0, "picture": 10.0}),
    _t(24, "water_pipe", "water pipe (twin line)",
       step=False,
       fields=[_q("gap_len", Q16_600), _q("line_spacing", Q8_DEFAULT)],
       individual={"gap_len": 3.0, "line_spacing": 2.0},
       general={"first_step": 10.0, "picture": 10.0}),
    _t(25, "grounding_line", "grounding line",
       fields=[_q("dot_diameter", Q16_DOT)],
       individual={"dot_diameter": 1.0}),
    _t(26, "low_current_cable", "low-current cable",
       step=False,
       fields=[_q("gap_len", Q16_600), _q("dash_len", Q16_600),
               _q("dot_diameter", Q16_DOT)],
       individual={"gap_len": 3.0, "dash_len": 8.0, "dot_diameter": 1.0},
       general={"first_step": 10.0, "picture": 10.0}),
)

_BY_ID = {t.id: t for t in _TYPES}

MAGISTRAL_TYPE_COUNT = len(_TYPES)
TEXT_TYPE_IDS = tuple(t.id for t in _TYPES
                      if any(fs.kind == "text" for fs in t.fields))


def descriptor(type_id: int) -> MagistralType:
    """Frozen registry entry for a magistral type id (1..26)."""
    entry = _BY_ID.get(type_id)
    if entry is None:
        raise DomainError(f"magistral type {type_id} not in 1..{MAGISTRAL_TYPE_COUNT}")
    return entry


def all_types() -> tuple[MagistralType, ...]:
    return _TYPES


def hatch_eligible(type_id: int) -> bool:
    """True only for the wavy and thin-with-zigzag lines."""
    return descriptor(type_id).hatch_eligible
