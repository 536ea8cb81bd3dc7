"""Counting main term, normalised remainder, windowed variance, and the
radially integrated remainder.

The complete main term collects the constant-eigenfunction block
pi e^s / vol, the small-eigenvalue blocks with gamma-quotient growth
e^{s(1/2+|t_j|)}, the lambda = 1/4 block 4(s + 2(log2 - 1)) e^{s/2}, and a
user-supplied continuous-spectrum constant times e^{s/2}.  Spectral data
is ingested from a file, never computed: eigenfunction values are outside
desk scale.  Orbit counts are exact step functions of the radius, so both
the windowed variance and the radial integral are evaluated jump-aware:
orbit distances are enumerated once and reused across the subwindows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..numerics import simpson_function
from .orbit import DEFAULT_NORM_BUDGET, OrbitBall, count_orbit
from .plane import HPoint

LOG2M1_BLOCK = 2.0 * (math.log(2.0) - 1.0)


@dataclass(frozen=True)
class SpectralData:
    """Volume and small-eigenvalue data of a quotient surface.

    small_eigs holds (|t_j|, phi_j(z) conj(phi_j(w))) pairs with
    |t_j| in (0, 1/2); quarter_eig_const is the summed eigenfunction
    product at t_j = 0 and eisenstein_const the continuous-spectrum
    constant (both default 0).
    """

    volume: float
    small_eigs: tuple = field(default_factory=tuple)
    quarter_eig_const: float = 0.0
    eisenstein_const: float = 0.0

    def __post_init__(self):
        if not (self.volume > 0.0):
            raise ValueError("volume must be positive")
        eigs = []
        for t_abs, phi in self.small_eigs:
            t_abs = float(t_abs)
            if not (0.0 < t_abs < 0.5):
                raise ValueError(f"|t_j| = {t_abs} outside (0, 1/2)")
            eigs.append((t_abs, complex(phi)))
        object.__setattr__(self, "small_eigs", tuple(eigs))


def pslz_spectral_data() -> SpectralData:
    """Default modular-surface profile: volume pi/3, no small eigenvalues."""
    return SpectralData(volume=math.pi / 3.0)


def load_spectral_data(path) -> SpectralData:
    """Key-value text: volume, repeated small_eig rows, optional constants."""
    volume = None
    eigs = []
    quarter = 0.0
    eis = 0.0
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, _, rest = line.partition("=")
            key = key.strip()
            rest = rest.strip()
            try:
                if key == "volume":
                    volume = float(rest)
                elif key == "small_eig":
                    t_abs, re_p, im_p = (float(p) for p in rest.split(","))
                    eigs.append((t_abs, complex(re_p, im_p)))
                elif key == "quarter_eig_const":
                    quarter = float(rest)
                elif key == "eisenstein_const":
                    eis = float(rest)
                else:
                    raise ValueError(f"unknown key {key!r}")
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from exc
    if volume is None:
        raise ValueError(f"{path}: missing volume")
    return SpectralData(volume=volume, small_eigs=tuple(eigs),
                        quarter_eig_const=quarter, eisenstein_const=eis)


def save_spectral_data(sd: SpectralData, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"volume = {sd.volume:.17g}\n")
        for t_abs, phi in sd.small_eigs:
            fh.write(f"small_eig = {t_abs:.17g},{phi.real:.17g},{phi.imag:.17g}\n")
        fh.write(f"quarter_eig_const = {sd.quarter_eig_const:.17g}\n")
        fh.write(f"eisenstein_const = {sd.eisenstein_const:.17g}\n")


def main_term(sd: SpectralData, s: float) -> float:
    """Complete counting main term at radius s (empty blocks contribute 0)."""
    if s < 0:
        raise ValueError("need s >= 0")
    total = math.pi * math.exp(s) / sd.volume
    for t_abs, phi in sd.small_eigs:
        total += (
            math.sqrt(math.pi)
            * math.gamma(t_abs)
            / math.gamma(1.5 + t_abs)
            * math.exp(s * (0.5 + t_abs))
            * phi.real
        )
    total += 4.0 * (s + LOG2M1_BLOCK) * math.exp(s / 2.0) * sd.quarter_eig_const
    total += math.exp(s / 2.0) * sd.eisenstein_const
    return total


def main_term_radial_integral(sd: SpectralData, s: float) -> float:
    """Closed form of int_0^s M(x) dx, block by block."""
    if s < 0:
        raise ValueError("need s >= 0")
    es2 = math.exp(s / 2.0)
    total = math.pi * (math.exp(s) - 1.0) / sd.volume
    for t_abs, phi in sd.small_eigs:
        a = 0.5 + t_abs
        total += (
            math.sqrt(math.pi)
            * math.gamma(t_abs)
            / math.gamma(1.5 + t_abs)
            * (math.exp(s * a) - 1.0)
            / a
            * phi.real
        )
    # int (x + c0) e^{x/2} dx = (2x - 4 + 2 c0) e^{x/2}
    total += 4.0 * sd.quarter_eig_const * (
        (2.0 * s - 4.0 + 2.0 * LOG2M1_BLOCK) * es2 - (-4.0 + 2.0 * LOG2M1_BLOCK)
    )
    total += sd.eisenstein_const * 2.0 * (es2 - 1.0)
    return total


def remainder_e(group, sd: SpectralData, s: float, z: HPoint, w: HPoint,
                budget: float = DEFAULT_NORM_BUDGET) -> float:
    """e(s, z, w) = (N(s, z, w) - M(s)) / e^{s/2}."""
    ball = count_orbit(group, s, z, w, budget=budget)
    return (ball.count - main_term(sd, s)) / math.exp(s / 2.0)


def _normalized_sq_remainder(sd: SpectralData, n_count: int):
    def fn(x: float) -> float:
        e = (n_count - main_term(sd, x)) / math.exp(x / 2.0)
        return e * e

    return fn


def variance_window(group, sd: SpectralData, T: float, z: HPoint, w: HPoint,
                    quad_step: float = 1e-3,
                    budget: float = DEFAULT_NORM_BUDGET,
                    orbit: Optional[OrbitBall] = None) -> float:
    """H(T) = int_T^{T+1} e(s, z, w)^2 ds with exact jump handling.

    The count is a right-continuous step function jumping at the orbit
    distances, so the integrand is integrated piecewise between
    consecutive jump abscissae with composite Simpson at step <= quad_step.
    A pre-enumerated orbit (radius >= T + 1) can be supplied for reuse.
    """
    if T < 0:
        raise ValueError("need T >= 0")
    if orbit is None:
        orbit = count_orbit(group, T + 1.0, z, w, budget=budget)
    dists = orbit.distances
    cuts = [T] + [float(d) for d in dists if T < d <= T + 1.0] + [T + 1.0]
    total = 0.0
    for a, b in zip(cuts, cuts[1:]):
        if b <= a:
            continue
        n_count = int(np.searchsorted(dists, a, side="right"))
        total += simpson_function(_normalized_sq_remainder(sd, n_count), a, b,
                                  quad_step)
    return total


def variance_window_fixed_step(group, sd: SpectralData, T: float, z: HPoint,
                               w: HPoint, quad_step: float = 1e-3,
                               budget: float = DEFAULT_NORM_BUDGET,
                               orbit: Optional[OrbitBall] = None) -> float:
    """Jump-oblivious midpoint quadrature of e^2 on [T, T+1] (for comparison).

    Differs from the jump-aware value by at most
    2 * (number of jumps) * max|e|^2 * quad_step plus the smooth-part
    O(quad_step^2).
    """
    if orbit is None:
        orbit = count_orbit(group, T + 1.0, z, w, budget=budget)
    dists = orbit.distances
    m = max(2, int(math.ceil(1.0 / quad_step)))
    h = 1.0 / m
    total = 0.0
    for k in range(m):
        x = T + (k + 0.5) * h
        n_count = int(np.searchsorted(dists, x, side="right"))
        e = (n_count - main_term(sd, x)) / math.exp(x / 2.0)
        total += e * e * h
    return total


def integrated_remainder_G3(group, sd: SpectralData, s: float, z: HPoint,
                            method: str = "exact", quad_step: float = 1e-4,
                            budget: float = DEFAULT_NORM_BUDGET) -> float:
    """e^{-s/2} int_0^s (N(x, z, z) - M(x)) dx.

    method "exact": the count integral is the finite sum
    sum_{d_k <= s} (s - d_k) over enumerated orbit distances and the main
    term integrates in closed form; "fixed-step": midpoint quadrature at
    quad_step (the error oracle for the exact path).  Values for
    non-cocompact groups are exploratory: boundedness in s is only
    guaranteed on compact quotients.
    """
    if s < 0:
        raise ValueError("need s >= 0")
    if s == 0.0:
        return 0.0
    ball = count_orbit(group, s, z, z, budget=budget)
    if method == "exact":
        count_integral = math.fsum(s - d for d in ball.distances)
        value = count_integral - main_term_radial_integral(sd, s)
    elif method == "fixed-step":
        m = max(2, int(math.ceil(s / quad_step)))
        h = s / m
        dists = ball.distances
        acc = 0.0
        for k in range(m):
            x = (k + 0.5) * h
            n_count = int(np.searchsorted(dists, x, side="right"))
            acc += (n_count - main_term(sd, x)) * h
        value = acc
    else:
        raise ValueError(f"unknown method {method!r}")
    return value / math.exp(s / 2.0)
