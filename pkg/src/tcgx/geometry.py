"""Arclength-parametrized carrier-line math: segments and circular arcs.

All computation is double precision; 32-bit rounding happens only in the
codec.  Angles are radians, counterclockwise sweep is positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, Violation

TAU = 2.0 * math.pi
_EPS = 1e-9


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __iter__(self):
        yield self.x
        yield self.y


@dataclass(frozen=True)
class Frame:
    """Local frame on a curve: origin, unit tangent, unit normal (+90 deg)."""

    origin: Point
    tangent: tuple[float, float]
    normal: tuple[float, float]

    def place(self, u: float, v: float) -> Point:
        """Map local (along, across) coordinates into the drawing plane."""
        return Point(self.origin.x + u * self.tangent[0] + v * self.normal[0],
                     self.origin.y + u * self.tangent[1] + v * self.normal[1])


def _finite(*values: float) -> bool:
    return all(math.isfinite(v) for v in values)


@dataclass(frozen=True)
class SegmentCarrier:
    p1: Point
    p2: Point

    KIND = 0

    def violations(self) -> list[Violation]:
        out = []
        if not (_finite(*self.p1) and _finite(*self.p2)):
            out.append(Violation("carrier", "non-finite", "finite coordinates"))
        elif self.p1 == self.p2:
            out.append(Violation("carrier", (self.p1.x, self.p1.y),
                                 "segment endpoints must differ"))
        return out

    def _require_valid(self):
        bad = self.violations()
        if bad:
            raise DomainError(str(bad[0]))

    def length(self) -> float:
        self._require_valid()
        return math.hypot(self.p2.x - self.p1.x, self.p2.y - self.p1.y)

    def frame_at(self, s: float) -> Frame:
        total = self.length()
        s = _check_arclength(s, total)
        tx = (self.p2.x - self.p1.x) / total
        ty = (self.p2.y - self.p1.y) / total
        return Frame(Point(self.p1.x + s * tx, self.p1.y + s * ty),
                     (tx, ty), (-ty, tx))

    def offset(self, d: float) -> "SegmentCarrier":
        frame = self.frame_at(0.0)
        nx, ny = frame.normal
        return SegmentCarrier(Point(self.p1.x + d * nx, self.p1.y + d * ny),
                              Point(self.p2.x + d * nx, self.p2.y + d * ny))

    def subcurve(self, a: float, b: float) -> "SegmentCarrier":
        return SegmentCarrier(self.frame_at(a).origin, self.frame_at(b).origin)


@dataclass(frozen=True)
class ArcCarrier:
    center: Point
    radius: float
    start_angle: float
    sweep: float

    KIND = 1

    def violations(self) -> list[Violation]:
        out = []
        if not _finite(self.center.x, self.center.y, self.radius,
                       self.start_angle, self.sweep):
            out.append(Violation("carrier", "non-finite", "finite parameters"))
            return out
        if self.radius <= 0:
            out.append(Violation("carrier.radius", self.radius, "> 0"))
        if not 0 < abs(self.sweep) <= TAU:
            out.append(Violation("carrier.sweep", self.sweep,
                                 "0 < |sweep| <= 2*pi"))
        return out

    def _require_valid(self):
        bad = self.violations()
        if bad:
            raise DomainError(str(bad[0]))

    def length(self) -> float:
        self._require_valid()
        return self.radius * abs(self.sweep)

    def frame_at(self, s: float) -> Frame:
        total = self.length()
        s = _check_arclength(s, total)
        sign = 1.0 if self.sweep >= 0 else -1.0
        phi = self.start_angle + sign * s / self.radius
        cos_p, sin_p = math.cos(phi), math.sin(phi)
        origin = Point(self.center.x + self.radius * cos_p,
                       self.center.y + self.radius * sin_p)
        tangent = (-sign * sin_p, sign * cos_p)
        return Frame(origin, tangent, (-tangent[1], tangent[0]))

    def offset(self, d: float) -> "ArcCarrier":
        self._require_valid()
        # +d moves along the normal; for CCW arcs that is toward the center
        sign = 1.0 if self.sweep >= 0 else -1.0
        new_radius = self.radius - sign * d
        if new_radius <= 0:
            raise DomainError(
                f"offset {d:g} collapses arc radius {self.radius:g} to {new_radius:g}")
        return ArcCarrier(self.center, new_radius, self.start_angle, self.sweep)

    def subcurve(self, a: float, b: float) -> "ArcCarrier":
        total = self.length()
        a = _check_arclength(a, total)
        b = _check_arclength(b, total)
        sign = 1.0 if self.sweep >= 0 else -1.0
        return ArcCarrier(self.center, self.radius,
                          self.start_angle + sign * a / self.radius,
                          sign * (b - a) / self.radius)


Carrier = SegmentCarrier | ArcCarrier


def _check_arclength(s: float, total: float) -> float:
    if not -_EPS <= s <= total + _EPS:
        raise DomainError(f"arclength {s:g} outside 0..{total:g}")
    return min(max(s, 0.0), total)
