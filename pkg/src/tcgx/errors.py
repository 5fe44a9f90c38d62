"""Error and diagnostic types shared by all tcgx modules."""

from __future__ import annotations

from dataclasses import dataclass


class DomainError(ValueError):
    """A value violates its legal domain (range, enumeration, geometry)."""


class DecodeError(ValueError):
    """Binary input cannot be decoded; carries the offending byte offset.

    `offset` is relative to the start of the buffer handed to the decoder,
    `element` is the element index when decoding a whole drawing.
    """

    def __init__(self, message: str, offset: int | None = None,
                 element: int | None = None):
        self.offset = offset
        self.element = element
        prefix = ""
        if element is not None:
            prefix += f"element {element}: "
        if offset is not None:
            prefix += f"at byte {offset}: "
        super().__init__(prefix + message)
        self.message = message


@dataclass(frozen=True)
class Violation:
    """One standards-conformance finding: field, offending value, legal range.

    Violations are data, not exceptions: validators return lists of them.
    """

    field: str
    value: object
    allowed: str

    def __str__(self) -> str:
        return f"{self.field} = {self.value!r}, allowed: {self.allowed}"
