"""Shared low-level numerics: error-free transformations, angle reduction, quadrature."""

from __future__ import annotations

import math

import numpy as np

# Double-double representation of 2*pi.  TWO_PI_LO is the residual
# 2*pi - float(2*pi), so TWO_PI_HI + TWO_PI_LO carries ~32 significant digits.
TWO_PI_HI = 6.283185307179586
TWO_PI_LO = 2.4492935982947064e-16

_SPLIT = 134217729.0  # 2**27 + 1, Dekker splitting constant


def two_product(a: float, b: float) -> tuple[float, float]:
    """Error-free product: returns (p, e) with p = fl(a*b) and a*b = p + e exactly."""
    p = a * b
    a1 = a * _SPLIT
    ah = a1 - (a1 - a)
    al = a - ah
    b1 = b * _SPLIT
    bh = b1 - (b1 - b)
    bl = b - bh
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


def reduce_mod_two_pi(hi: float, lo: float = 0.0) -> float:
    """Reduce hi + lo modulo 2*pi using the double-double constant.

    Keeps the absolute phase error near machine precision for arguments up
    to ~1e12, where a naive fmod already loses ~1e-4 of phase.
    """
    n = round(hi / TWO_PI_HI)
    if n == 0:
        return hi + lo
    q, f = two_product(float(n), TWO_PI_HI)
    return ((hi - q) - f) - float(n) * TWO_PI_LO + lo


def phase_mod_two_pi(lam: float, y: float) -> float:
    """lam*y modulo 2*pi with the product expanded error-free first."""
    p, e = two_product(lam, y)
    return reduce_mod_two_pi(p, e)


def _split_vec(x):
    x1 = x * _SPLIT
    hi = x1 - (x1 - x)
    return hi, x - hi


def phases_mod_two_pi(lam: float, ys: np.ndarray) -> np.ndarray:
    """Vectorised phase_mod_two_pi for a fixed frequency over a grid."""
    ys = np.asarray(ys, dtype=np.float64)
    p = lam * ys
    ah, al = _split_vec(np.float64(lam))
    bh, bl = _split_vec(ys)
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    n = np.round(p / TWO_PI_HI)
    q = n * TWO_PI_HI
    nh, nl = _split_vec(n)
    ch, cl = _split_vec(np.float64(TWO_PI_HI))
    f = ((nh * ch - q) + nh * cl + nl * ch) + nl * cl
    return ((p - q) - f) - n * TWO_PI_LO + e


class NeumaierSum:
    """Compensated (Kahan-Babuska-Neumaier) running sum."""

    __slots__ = ("s", "c")

    def __init__(self) -> None:
        self.s = 0.0
        self.c = 0.0

    def add(self, x: float) -> None:
        t = self.s + x
        if abs(self.s) >= abs(x):
            self.c += (self.s - t) + x
        else:
            self.c += (x - t) + self.s
        self.s = t

    @property
    def value(self) -> float:
        return self.s + self.c


def simpson_uniform(values: np.ndarray, step: float) -> float:
    """Composite Simpson on a uniform grid; len(values) must be odd."""
    values = np.asarray(values, dtype=np.float64)
    n = len(values) - 1
    if n < 2 or n % 2:
        raise ValueError("composite Simpson needs an odd sample count (even interval count)")
    return (step / 3.0) * (
        values[0]
        + values[-1]
        + 4.0 * math.fsum(values[1:-1:2])
        + 2.0 * math.fsum(values[2:-2:2])
    )


def simpson_function(fn, a: float, b: float, max_step: float) -> float:
    """Composite Simpson of a callable on [a, b] with subintervals <= max_step."""
    if b <= a:
        return 0.0
    m = max(2, int(math.ceil((b - a) / max_step)))
    if m % 2:
        m += 1
    xs = np.linspace(a, b, m + 1)
    return simpson_uniform(np.array([fn(x) for x in xs]), (b - a) / m)
