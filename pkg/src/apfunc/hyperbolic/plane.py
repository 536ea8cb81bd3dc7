"""Upper half-plane points, determinant-one maps, and the hyperbolic metric."""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class HPoint:
    """Point x + iy in the upper half-plane (y > 0)."""

    x: float
    y: float

    def __post_init__(self):
        if not (self.y > 0.0):
            raise ValueError("upper half-plane point needs y > 0")

    @property
    def as_complex(self) -> complex:
        return complex(self.x, self.y)

    @staticmethod
    def from_complex(z: complex) -> "HPoint":
        return HPoint(z.real, z.imag)


def point_pair_invariant(z: HPoint, w: HPoint) -> float:
    """u(z, w) = |z - w|^2 / (4 Im z Im w); cosh d = 1 + 2u."""
    dx = z.x - w.x
    dy = z.y - w.y
    return (dx * dx + dy * dy) / (4.0 * z.y * w.y)


def hyperbolic_distance(z: HPoint, w: HPoint) -> float:
    """Distance in the upper half-plane; symmetric, zero iff equal."""
    u = point_pair_invariant(z, w)
    return math.acosh(1.0 + 2.0 * u)


def _first_nonzero(values, eps: float) -> float:
    for v in values:
        if abs(v) > eps:
            return v
    return 0.0


@dataclass(frozen=True)
class MoebiusMap:
    """Determinant-one fractional-linear map, identified with its negative.

    Entries are exact integers in arithmetic-group mode or floats in
    general mode; the stored representative is sign-normalised so the
    first non-zero entry of (a, b, c, d) is positive.
    """

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        entries = (self.a, self.b, self.c, self.d)
        exact = all(isinstance(v, int) for v in entries)
        det = self.a * self.d - self.b * self.c
        if exact:
            if det != 1:
                raise ValueError(f"determinant {det} != 1")
        elif abs(det - 1.0) > 1e-12:
            raise ValueError(f"determinant {det!r} not within 1e-12 of 1")
        eps = 0.0 if exact else 1e-12
        if _first_nonzero(entries, eps) < 0:
            for name, v in zip(("a", "b", "c", "d"), entries):
                object.__setattr__(self, name, -v)

    @property
    def is_exact(self) -> bool:
        return all(isinstance(v, int) for v in (self.a, self.b, self.c, self.d))

    def as_tuple(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    @staticmethod
    def identity() -> "MoebiusMap":
        return MoebiusMap(1, 0, 0, 1)

    def __mul__(self, other: "MoebiusMap") -> "MoebiusMap":
        return MoebiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.d, -self.b, -self.c, self.a)


def apply_map(g: MoebiusMap, z: HPoint) -> HPoint:
    """(a z + b) / (c z + d); preserves the upper half-plane."""
    zz = z.as_complex
    w = (g.a * zz + g.b) / (g.c * zz + g.d)
    return HPoint(w.real, w.imag)


def frobenius_cosh_displacement(g: MoebiusMap) -> float:
    """cosh d(i, g i) = (a^2 + b^2 + c^2 + d^2) / 2."""
    return (g.a * g.a + g.b * g.b + g.c * g.c + g.d * g.d) / 2.0
