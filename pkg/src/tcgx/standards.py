"""GOST-derived value domains and the fixed-step quantizers behind all storage.

Every stored quantity in the drawing format is either an enumerated choice
(line kind, color, font, scale, sheet format, projection) or a fixed-step
quantized length.  This module owns those domains.  Enumerated tables that
merely transcribe a standard (scale list, sheet sizes, projection axes,
dimension ranges, line-kind stroking, SVG palette) live in a versioned JSON
config bundled with the package; see docs/config.md.  Everything loaded from
config is immutable, so all functions here are pure and thread-safe.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from enum import IntEnum
from functools import lru_cache
from importlib import resources

from .errors import DecodeError, DomainError, Violation

CONFIG_ENV_VAR = "TCGX_CONFIG_DIR"
CONFIG_FILE_NAME = "standards.json"
CONFIG_VERSION = 1


class LineType(IntEnum):
    """The six GOST 2.303 line kinds plus the GOST 21.106 thickened dashed."""

    SOLID_MAIN = 0
    SOLID_THIN = 1
    DASHED = 2
    DASH_DOT_THIN = 3
    DASH_DOT_THICK = 4
    DASH_DOT_DOT = 5
    DASHED_THICK = 6


class CoordSpace(IntEnum):
    """Model-space (natura) vs paper-space (bumaga) coordinates."""

    NATURA = 0
    BUMAGA = 1


MAX_COLOR = 15


@dataclass(frozen=True)
class Attr:
    """Per-element attribute byte: line type (3 bits), color (4), space (1)."""

    line_type: LineType = LineType.SOLID_MAIN
    color: int = 0
    space: CoordSpace = CoordSpace.NATURA

    def pack(self) -> int:
        return pack_attr(self.line_type, self.color, self.space)

    @classmethod
    def unpack(cls, byte: int, offset: int | None = None) -> "Attr":
        lt, color, space = unpack_attr(byte, offset)
        return cls(lt, color, space)


def pack_attr(line_type: int, color: int, space: CoordSpace) -> int:
    """Pack line type, color index and coordinate-space flag into one byte."""
    if not 0 <= int(line_type) <= 6:
        raise DomainError(f"line type code {int(line_type)} not in 0..6")
    if not 0 <= color <= MAX_COLOR:
        raise DomainError(f"color index {color} not in 0..{MAX_COLOR}")
    return int(line_type) | (color << 3) | (int(space) << 7)


def unpack_attr(byte: int, offset: int | None = None) -> tuple[LineType, int, CoordSpace]:
    """Inverse of pack_attr.  Line-type field 7 is unassigned and rejected."""
    if not 0 <= byte <= 0xFF:
        raise DomainError(f"attribute byte {byte} not in 0..255")
    code = byte & 0x07
    if code == 7:
        raise DecodeError("attribute line-type field 7 is not a valid line type", offset)
    return LineType(code), (byte >> 3) & 0x0F, CoordSpace((byte >> 7) & 0x01)


FONT_SIZES_MM = (2.5, 3.5, 5.0, 7.0, 10.0, 14.0, 20.0, 28.0, 40.0)
FONT_SLANTS_DEG = (90, 75)
_FONT_SIZE_CODES = {int(s / 0.5): s for s in FONT_SIZES_MM}


@dataclass(frozen=True)
class FontSpec:
    """GOST 2.304 drawing font: one of 9 sizes, upright (90) or slanted (75)."""

    size_mm: float
    slant_deg: int = 90


def encode_font(font: FontSpec) -> int:
    """One byte: low 7 bits = size in 0.5 mm units, high bit set for 75 deg."""
    if font.size_mm not in FONT_SIZES_MM:
        raise DomainError(f"font size {font.size_mm} mm not in {FONT_SIZES_MM}")
    if font.slant_deg not in FONT_SLANTS_DEG:
        raise DomainError(f"font slant {font.slant_deg} not in {FONT_SLANTS_DEG}")
    return int(font.size_mm / 0.5) | (0x80 if font.slant_deg == 75 else 0x00)


def decode_font(byte: int, offset: int | None = None) -> FontSpec:
    size = _FONT_SIZE_CODES.get(byte & 0x7F)
    if size is None:
        raise DecodeError(f"font size code {byte & 0x7F} is not a legal size", offset)
    return FontSpec(size, 75 if byte & 0x80 else 90)


@dataclass(frozen=True)
class Quantizer:
    """Fixed-step length codec: code = round-half-up(value / step).

    Codes are range-checked against [min_code, max_code]; width is the
    storage size in bytes.  Round-half-up is done in decimal arithmetic so
    that values like 12.345 at step 0.01 land on 1235, not on the binary
    artifact 1234.
    """

    step_mm: float
    min_code: int
    max_code: int
    width: int = 1

    @property
    def min_mm(self) -> float:
        return self.min_code * self.step_mm

    @property
    def max_mm(self) -> float:
        return self.max_code * self.step_mm

    def range_text(self) -> str:
        return f"{self.min_mm:g}..{self.max_mm:g} mm (step {self.step_mm:g})"

    def quantize(self, value_mm: float, field: str = "value") -> int:
        if not math.isfinite(value_mm):
            raise DomainError(f"{field}: {value_mm!r} is not finite")
        q = Decimal(repr(value_mm)) / Decimal(str(self.step_mm))
        code = int(q.to_integral_value(rounding=ROUND_HALF_UP))
        if not self.min_code <= code <= self.max_code:
            raise DomainError(
                f"{field} = {value_mm:g} mm outside {self.range_text()}")
        return code

    def dequantize(self, code: int, field: str = "value") -> float:
        if not self.min_code <= code <= self.max_code:
            raise DomainError(
                f"{field}: code {code} outside {self.min_code}..{self.max_code}")
        return code * self.step_mm

    def check_code(self, code: int) -> bool:
        return self.min_code <= code <= self.max_code


# Quantizers shared across the format.  The 1-byte default covers 0.1..25 mm
# at 0.1 mm; 2-byte fields run at 0.01 mm with per-field ranges.
Q_GENERAL = Quantizer(0.01, 1, 60000, width=2)       # 0.01..600 mm
Q8_DEFAULT = Quantizer(0.1, 1, 250, width=1)         # 0.1..25 mm
Q8_ARROW = Quantizer(0.1, 1, 120, width=1)           # 0.1..12 mm
Q8_ARROW_FROM_ZERO = Quantizer(0.1, 0, 120, width=1)  # 0..12 mm
Q16_600 = Quantizer(0.01, 1, 60000, width=2)         # 0.01..600 mm
Q16_300 = Quantizer(0.01, 1, 30000, width=2)         # 0.01..300 mm
Q16_HALFWAVE_HEIGHT = Quantizer(0.01, 10, 15000, width=2)  # 0.1..150 mm
Q16_DOT = Quantizer(0.01, 1, 2550, width=2)          # 0.01..25.5 mm
Q16_ARROW_ACROSS = Quantizer(0.01, 5, 2500, width=2)  # 0.05..25 mm
Q_COMPRESSION = Quantizer(0.01, 10, 255, width=1)    # text width factor 0.1..2.55
Q_DIMENSION = Quantizer(0.2, 0, 255, width=1)        # dimension-style fields

ALL_QUANTIZERS = (
    Q_GENERAL, Q8_DEFAULT, Q8_ARROW, Q8_ARROW_FROM_ZERO, Q16_600, Q16_300,
    Q16_HALFWAVE_HEIGHT, Q16_DOT, Q16_ARROW_ACROSS, Q_COMPRESSION,
)


@dataclass(frozen=True)
class ScaleEntry:
    id: int
    numerator: int
    denominator: int

    @property
    def ratio(self) -> float:
        """Reduction ratio: 500.0 for 1:500, 0.5 for 2:1."""
        return self.denominator / self.numerator

    @property
    def factor(self) -> float:
        """Multiplier taking natura mm to paper mm."""
        return self.numerator / self.denominator

    def label(self) -> str:
        # 2:5 is the integer form of 1:2.5; render the conventional label
        if self.ratio >= 1:
            return f"1:{self.ratio:g}"
        return f"{1 / self.ratio:g}:1"


@dataclass(frozen=True)
class SheetSize:
    id: int
    name: str
    width_mm: int
    height_mm: int


@dataclass(frozen=True)
class Projection:
    id: int
    category: str
    name: str
    axes: tuple[tuple[float, float], tuple[float, float], tuple[float, float]]


@dataclass(frozen=True)
class LineKindStyle:
    code: int
    name: str
    width_mm: float
    dash_mm: tuple[float, ...]


@dataclass(frozen=True)
class DimensionRange:
    quantizer: Quantizer        # storage domain
    standard_min_mm: float      # GOST 2.307 domain (narrower)
    standard_max_mm: float


@dataclass(frozen=True)
class StandardsConfig:
    version: int
    scales: tuple[ScaleEntry, ...]
    profile_ratio_bounds: dict[str, tuple[float, float]]
    formats: tuple[SheetSize, ...]
    projections: tuple[Projection, ...]
    dimension_ranges: dict[str, DimensionRange]
    line_kinds: tuple[LineKindStyle, ...]
    palette: tuple[str, ...]

    def scale_id_for(self, numerator: int, denominator: int) -> int:
        for entry in self.scales:
            if (entry.numerator, entry.denominator) == (numerator, denominator):
                return entry.id
        raise DomainError(f"scale {numerator}:{denominator} not in configured table")

    def format_id_for(self, name: str) -> int:
        for fmt in self.formats:
            if fmt.name.lower() == name.lower():
                return fmt.id
        raise DomainError(f"sheet format {name!r} not in configured table")


def _axes_from_degrees(angles: list[float]) -> tuple[tuple[float, float], ...]:
    out = []
    for a in angles:
        rad = math.radians(a)
        out.append((math.cos(rad), math.sin(rad)))
    return tuple(out)


def _parse_config(raw: dict) -> StandardsConfig:
    if raw.get("version") != CONFIG_VERSION:
        raise DomainError(
            f"unsupported config version {raw.get('version')!r}, need {CONFIG_VERSION}")
    scales = tuple(
        ScaleEntry(i, int(n), int(d)) for i, (n, d) in enumerate(raw["scales"]))
    bounds = {
        key: (float(lo), float(hi))
        for key, (lo, hi) in raw["profile_ratio_bounds"].items()
    }
    formats = tuple(
        SheetSize(i, name, int(w), int(h))
        for i, (name, w, h) in enumerate(raw["formats"]))
    projections = tuple(
        Projection(int(pid), cat, name, _axes_from_degrees(angles))
        for pid, cat, name, angles in raw["projections"])
    dims = {}
    for field, spec in raw["dimension_ranges"].items():
        lo_code, hi_code = spec["storage_code"]
        lo_mm, hi_mm = spec["standard_mm"]
        dims[field] = DimensionRange(
            Quantizer(0.2, int(lo_code), int(hi_code), width=1),
            float(lo_mm), float(hi_mm))
    kinds = tuple(
        LineKindStyle(int(code), name, float(w), tuple(float(x) for x in dash))
        for code, name, w, dash in raw["line_kinds"])
    palette = tuple(str(c) for c in raw["palette"])
    if len(palette) != MAX_COLOR + 1:
        raise DomainError(f"palette must have {MAX_COLOR + 1} entries, got {len(palette)}")
    if len(kinds) != len(LineType):
        raise DomainError(f"line_kinds must have {len(LineType)} entries")
    return StandardsConfig(
        version=raw["version"],
        scales=scales,
        profile_ratio_bounds=bounds,
        formats=formats,
        projections=projections,
        dimension_ranges=dims,
        line_kinds=kinds,
        palette=palette,
    )


@lru_cache(maxsize=8)
def _load_config_file(path: str | None) -> StandardsConfig:
    if path is None:
        text = resources.files("tcgx.data").joinpath(CONFIG_FILE_NAME).read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return _parse_config(json.loads(text))


def default_config() -> StandardsConfig:
    """Bundled config, or the one in $TCGX_CONFIG_DIR when set."""
    override = os.environ.get(CONFIG_ENV_VAR)
    if override:
        return _load_config_file(os.path.join(override, CONFIG_FILE_NAME))
    return _load_config_file(None)


SCALE_CONTEXTS = ("general", "profile_horizontal", "profile_vertical")


def allowed_scales(context: str = "general",
                   config: StandardsConfig | None = None) -> list[ScaleEntry]:
    """Scale-table subset legal in the given drafting context.

    Profile contexts restrict by reduction ratio (sewer/water profile sheets
    allow 1:500..1:5000 horizontally and 1:100..1:500 vertically); "general"
    returns the whole configured table.
    """
    cfg = config or default_config()
    if context == "general":
        return list(cfg.scales)
    if context not in SCALE_CONTEXTS:
        raise DomainError(f"unknown scale context {context!r}; use one of {SCALE_CONTEXTS}")
    lo, hi = cfg.profile_ratio_bounds[context]
    return [s for s in cfg.scales if lo <= s.ratio <= hi]


@dataclass(frozen=True)
class DimensionStyle:
    """Dimension drawing style, stored as 0.2 mm quantized codes.

    Storage deliberately spans 2-3x the GOST 2.307 domain; the validator,
    not the codec, enforces the narrower standard range.
    """

    arrow_len: int
    tick_len: int
    extension_overshoot: int


def validate_dimension_style(style: DimensionStyle,
                             config: StandardsConfig | None = None) -> list[Violation]:
    cfg = config or default_config()
    out: list[Violation] = []
    for field in ("arrow_len", "tick_len", "extension_overshoot"):
        rng = cfg.dimension_ranges[field]
        code = getattr(style, field)
        if not rng.quantizer.check_code(code):
            out.append(Violation(field, code,
                                 f"storage codes {rng.quantizer.min_code}..{rng.quantizer.max_code}"))
            continue
        value = rng.quantizer.dequantize(code, field)
        if not rng.standard_min_mm <= value <= rng.standard_max_mm:
            out.append(Violation(
                field, round(value, 6),
                f"{rng.standard_min_mm:g}..{rng.standard_max_mm:g} mm"))
    return out


def projection(pid: int, config: StandardsConfig | None = None) -> Projection:
    cfg = config or default_config()
    if not 0 <= pid < len(cfg.projections):
        raise DomainError(f"projection id {pid} not in 0..{len(cfg.projections) - 1}")
    return cfg.projections[pid]
