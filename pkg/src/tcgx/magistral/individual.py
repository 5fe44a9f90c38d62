"""Codec and validation for the 12-byte per-type individual settings block.

The block layout is schema-driven from the registry: quantized lengths
(1 or 2 little-endian bytes), one font byte, or a 4-byte zero-padded text in
the drawing code page.  Unused tail bytes must be zero.  `decode_individual`
is strict (raises with a byte offset, for the codec); `check_individual`
reports the same findings as violation data (for the validator).
"""

from __future__ import annotations

import struct

from ..errors import DecodeError, DomainError, Violation
from ..standards import FontSpec, Q_GENERAL, decode_font, encode_font
from .registry import (
    INDIVIDUAL_BLOCK_SIZE,
    MAGISTRAL_TYPE_COUNT,
    MAX_INDIVIDUAL_TEXT,
    MagistralType,
    descriptor,
)

TEXT_CODE_PAGE = "cp1251"


def _scan(mt: MagistralType, raw: bytes):
    """Walk the block; return (values, problems).

    Problems are (relative byte offset, field, value, allowed) tuples; the
    walk continues past bad fields so validation can report all of them.
    """
    values: dict = {}
    problems: list[tuple[int, str, object, str]] = []
    pos = 0
    for fs in mt.fields:
        chunk = raw[pos:pos + fs.width]
        if fs.kind == "q":
            code = chunk[0] if fs.width == 1 else struct.unpack_from("<H", raw, pos)[0]
            if fs.quantizer.check_code(code):
                values[fs.name] = fs.quantizer.dequantize(code, fs.name)
            else:
                problems.append((pos, fs.name, code, fs.quantizer.range_text()))
        elif fs.kind == "font":
            try:
                values[fs.name] = decode_font(chunk[0])
            except DecodeError:
                problems.append((pos, fs.name, chunk[0], "a legal font byte"))
        elif fs.kind == "text":
            term = chunk.find(0)
            text_bytes = chunk if term < 0 else chunk[:term]
            tail = b"" if term < 0 else chunk[term:]
            if tail.strip(b"\x00"):
                # first nonzero byte after the terminator
                bad = term + next(k for k, byte in enumerate(tail) if byte)
                problems.append((pos + bad, fs.name, chunk[bad],
                                 "zero padding after text terminator"))
            else:
                try:
                    values[fs.name] = text_bytes.decode(TEXT_CODE_PAGE)
                except UnicodeDecodeError as exc:
                    problems.append((pos + exc.start, fs.name, chunk[exc.start],
                                     f"{TEXT_CODE_PAGE}-decodable text"))
        pos += fs.width
    for k in range(pos, INDIVIDUAL_BLOCK_SIZE):
        if raw[k]:
            problems.append((k, "individual padding", raw[k], "zero"))
    return values, problems


def decode_individual(type_id: int, raw: bytes, base_offset: int = 0) -> dict:
    """Strict decode of the 12-byte block; raises DecodeError with offsets."""
    mt = descriptor(type_id)
    if len(raw) != INDIVIDUAL_BLOCK_SIZE:
        raise DecodeError(
            f"individual block must be {INDIVIDUAL_BLOCK_SIZE} bytes, got {len(raw)}",
            base_offset)
    values, problems = _scan(mt, raw)
    if problems:
        rel, field, value, allowed = problems[0]
        raise DecodeError(f"{field} = {value!r}, allowed: {allowed}",
                          base_offset + rel)
    return values


def check_individual(type_id: int, raw: bytes) -> list[Violation]:
    mt = descriptor(type_id)
    if len(raw) != INDIVIDUAL_BLOCK_SIZE:
        return [Violation("individual", len(raw),
                          f"exactly {INDIVIDUAL_BLOCK_SIZE} bytes")]
    _, problems = _scan(mt, raw)
    return [Violation(field, value, allowed) for _, field, value, allowed in problems]


def encode_individual(type_id: int, values: dict) -> bytes:
    """Pack a full settings dict into the zero-padded 12-byte block."""
    mt = descriptor(type_id)
    known = {fs.name for fs in mt.fields}
    unknown = set(values) - known
    if unknown:
        raise DomainError(
            f"unknown settings {sorted(unknown)} for type {type_id} ({mt.name}); "
            f"valid: {sorted(known)}")
    out = bytearray()
    for fs in mt.fields:
        if fs.name not in values:
            raise DomainError(f"missing setting {fs.name!r} for type {type_id} ({mt.name})")
        value = values[fs.name]
        if fs.kind == "q":
            code = fs.quantizer.quantize(float(value), fs.name)
            out += code.to_bytes(fs.width, "little")
        elif fs.kind == "font":
            if not isinstance(value, FontSpec):
                raise DomainError(f"{fs.name} must be a FontSpec, got {value!r}")
            out.append(encode_font(value))
        elif fs.kind == "text":
            if "\x00" in value:
                raise DomainError(f"{fs.name} must not contain NUL")
            try:
                raw = str(value).encode(TEXT_CODE_PAGE)
            except UnicodeEncodeError as exc:
                raise DomainError(
                    f"{fs.name} not encodable in {TEXT_CODE_PAGE}: {exc}") from None
            if len(raw) > MAX_INDIVIDUAL_TEXT:
                raise DomainError(
                    f"{fs.name} is {len(raw)} characters, allowed 0..{MAX_INDIVIDUAL_TEXT}")
            out += raw.ljust(fs.width, b"\x00")
    out += b"\x00" * (INDIVIDUAL_BLOCK_SIZE - len(out))
    return bytes(out)


_GENERAL_FIELDS = (("first_step", "uses_first_step"), ("step", "uses_step"),
                   ("picture", "uses_picture"))


def validate_magistral(element) -> list[Violation]:
    """Full conformance check of one magistral element.

    Covers: type id range, carrier geometry, applicability of the three
    general settings (applicable ones stored nonzero and in range,
    inapplicable ones stored as code 0) and the individual block.
    """
    if not 1 <= element.mtype <= MAGISTRAL_TYPE_COUNT:
        return [Violation("mtype", element.mtype, f"1..{MAGISTRAL_TYPE_COUNT}")]
    mt = descriptor(element.mtype)
    out = list(element.carrier.violations())
    for field, flag in _GENERAL_FIELDS:
        code = getattr(element, field)
        applicable = getattr(mt, flag)
        if not applicable:
            if code != 0:
                out.append(Violation(
                    field, code,
                    f"inapplicable for type {mt.id} ({mt.name}), must be 0"))
        elif code == 0:
            out.append(Violation(field, 0, Q_GENERAL.range_text()))
        elif not Q_GENERAL.check_code(code):
            out.append(Violation(field, code, Q_GENERAL.range_text()))
    out.extend(check_individual(element.mtype, element.individual))
    return out
