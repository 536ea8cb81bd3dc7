"""Spectral transform of ball indicators and the mollified kernel sandwich.

The radial indicator of a ball of radius R has the spectral transform

    h_R(t) = 2^{3/2} int_{-R}^{R} (cosh R - cosh u)^{1/2} e^{itu} du,

computed here by adaptive quadrature after the substitution u = R - v^2
that removes the square-root endpoint singularity.  Closed forms and
regime approximations (large-R asymptotic, purely imaginary argument,
small radius via J_1) are provided alongside for cross-validation, and
the mollified kernels k^± are evaluated geometrically as normalised areas
of hyperbolic disc intersections.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from ..errors import QuadratureError
from ..specfun import gamma_quotient, j1_over_x

_QUAD_OPTS = dict(epsabs=1e-12, epsrel=1e-12, limit=300)


def _quad_checked(fn, a: float, b: float, points=None) -> float:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        val, err = quad(fn, a, b, points=points, **_QUAD_OPTS)
    if err > 1e-7 * max(1.0, abs(val)):
        raise QuadratureError(f"quadrature error estimate {err:.2e} too large")
    return val


def shc_integral(R: float, t: complex) -> complex:
    """h_R(t) by adaptive quadrature; t may be complex (e.g. i/2).

    The integrand is even in u, so h = 2^{5/2} int_0^R (...)^{1/2} cos(tu) du
    with u = R - v^2 flattening the endpoint singularity.
    """
    if not (R > 0.0):
        raise ValueError("need R > 0")
    t = complex(t)
    cosh_R = math.cosh(R)

    def integrand(v: float, part: int) -> float:
        u = R - v * v
        w = cosh_R - math.cosh(u)
        if w <= 0.0:
            return 0.0
        osc = cmath.cos(t * u)
        val = math.sqrt(w) * 2.0 * v
        return val * (osc.real if part == 0 else osc.imag)

    root = math.sqrt(R)
    re = _quad_checked(lambda v: integrand(v, 0), 0.0, root)
    if t.imag == 0.0:
        return complex(2.0**2.5 * re, 0.0)
    im = _quad_checked(lambda v: integrand(v, 1), 0.0, root)
    return 2.0**2.5 * complex(re, im)


def shc_ball_value(R: float) -> float:
    """Closed form h_R(i/2) = 2 pi (cosh R - 1)."""
    return 2.0 * math.pi * (math.cosh(R) - 1.0)


def shc_zero_asymptotic(R: float) -> float:
    """Leading term of h_R(0): 4 (R + 2 (log 2 - 1)) e^{R/2}."""
    return 4.0 * (R + 2.0 * (math.log(2.0) - 1.0)) * math.exp(R / 2.0)


def shc_asymptotic(R: float, t: float) -> float:
    """Large-R asymptotic 2 sqrt(pi) e^{R/2} Re(e^{itR} Gamma(it)/Gamma(3/2+it))."""
    if not (R >= 1.0):
        raise ValueError("asymptotic regime needs R >= 1")
    if t == 0.0:
        raise ValueError("asymptotic form is singular at t = 0")
    val = cmath.exp(1j * t * R) * gamma_quotient(t)
    return 2.0 * math.sqrt(math.pi) * math.exp(R / 2.0) * val.real


def shc_imag(R: float, t_abs: float) -> float:
    """Purely imaginary argument: sqrt(2 pi sinh R) e^{R|t|} Gamma(|t|)/Gamma(3/2+|t|)."""
    if not (R >= 1.0):
        raise ValueError("imaginary regime needs R >= 1")
    if not (0.0 < t_abs <= 0.5):
        raise ValueError("need |t| in (0, 1/2]")
    return (
        math.sqrt(2.0 * math.pi * math.sinh(R))
        * math.exp(R * t_abs)
        * math.gamma(t_abs)
        / math.gamma(1.5 + t_abs)
    )


def shc_small_r(R: float, t: float) -> float:
    """Small-radius form 2 pi R^2 (J_1(Rt)/(Rt)) sqrt(sinh R / R) for 0 < R <= 1."""
    if not (0.0 < R <= 1.0):
        raise ValueError("small-radius regime needs 0 < R <= 1")
    return 2.0 * math.pi * R * R * j1_over_x(R * t) * math.sqrt(math.sinh(R) / R)


def g_transform(R: float, u: float) -> float:
    """Fourier pair of h_R: 2^{3/2} (cosh R - cosh u)^{1/2} on |u| <= R, else 0."""
    if not (R > 0.0):
        raise ValueError("need R > 0")
    if abs(u) >= R:
        return 0.0
    return 2.0**1.5 * math.sqrt(math.cosh(R) - math.cosh(u))


def fourier_consistency(R: float, t_cut: float = 100.0, num: int = 4001) -> tuple:
    """Truncated Fourier mean int_{-t_cut}^{t_cut} h_R(t) dt against 2 pi g_R(0).

    h_R decays like t^{-3/2} with oscillation, so the omitted tail falls
    like t_cut^{-3/2}; the default cutoff keeps it below 1e-3 relative.
    Returns (integral, 2 pi g_R(0)).
    """
    ts = np.linspace(0.0, t_cut, num)
    vals = np.array([shc_integral(R, t).real for t in ts])
    integral = 2.0 * float(np.trapezoid(vals, ts))
    return integral, 2.0 * math.pi * g_transform(R, 0.0)


# --- mollified kernel sandwich ----------------------------------------------


def ball_area(r: float) -> float:
    """Hyperbolic area of a disc of radius r: 4 pi sinh^2(r/2)."""
    return 4.0 * math.pi * math.sinh(r / 2.0) ** 2


def disc_intersection_area(Z: float, r: float, d: float) -> float:
    """Area of B(z, Z) cap B(w, r) with centres at distance d.

    In polar coordinates around w, the admissible wedge at radius rho has
    angle 2 arccos(q) with q = (cosh d cosh rho - cosh Z)/(sinh d sinh rho),
    clamped to full/empty when the circle of radius rho lies inside/outside.
    """
    if d <= Z - r:
        return ball_area(r)
    if d >= Z + r:
        return 0.0
    if d == 0.0:
        return ball_area(min(Z, r))
    cosh_d = math.cosh(d)
    sinh_d = math.sinh(d)
    cosh_Z = math.cosh(Z)

    def wedge(rho: float) -> float:
        if rho <= 0.0:
            return 0.0
        q = (cosh_d * math.cosh(rho) - cosh_Z) / (sinh_d * math.sinh(rho))
        if q <= -1.0:
            return 2.0 * math.pi * math.sinh(rho)
        if q >= 1.0:
            return 0.0
        return 2.0 * math.acos(q) * math.sinh(rho)

    # kinks where the rho-circle crosses the boundary of B(z, Z)
    points = [p for p in (Z - d, d - Z) if 0.0 < p < r]
    return _quad_checked(wedge, 0.0, r, points=points or None)


@dataclass(frozen=True)
class KernelPair:
    """Mollified minorant/majorant kernels tabulated on a u-grid."""

    s: float
    delta: float
    u_grid: np.ndarray
    k_minus: np.ndarray
    k_plus: np.ndarray

    def __post_init__(self):
        for name in ("u_grid", "k_minus", "k_plus"):
            arr = np.asarray(getattr(self, name), dtype=np.float64)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)


def mollified_kernel_value(s_eff: float, delta: float, u: float) -> float:
    """(indicator of radius s_eff ball * unit-mass delta-ball)(u).

    Equals the fraction of the delta-ball around w lying within distance
    s_eff of z, so it is exactly 1 for d <= s_eff - delta and exactly 0
    for d >= s_eff + delta.
    """
    d = math.acosh(1.0 + 2.0 * max(u, 0.0))
    area = disc_intersection_area(s_eff, delta, d)
    return min(max(area / ball_area(delta), 0.0), 1.0)


def smoothed_kernels(s: float, delta: float, u_grid) -> KernelPair:
    """k^-(u), k^+(u): mollified indicators at effective radii s -+ delta.

    The sandwich k^- <= 1_{[0, (cosh s - 1)/2]} <= k^+ holds pointwise by
    construction (exact short-circuits on the flat regions, clamped
    quadrature in between).
    """
    if not (0.0 < delta < 1.0):
        raise ValueError("need 0 < delta < 1")
    if not (s > delta):
        raise ValueError("need s > delta")
    u_grid = np.asarray(u_grid, dtype=np.float64)
    k_minus = np.array(
        [mollified_kernel_value(s - delta, delta, float(u)) for u in u_grid]
    )
    k_plus = np.array(
        [mollified_kernel_value(s + delta, delta, float(u)) for u in u_grid]
    )
    return KernelPair(s=s, delta=delta, u_grid=u_grid, k_minus=k_minus, k_plus=k_plus)


def h_pm(s: float, delta: float, t: complex, sign: int) -> complex:
    """Transform of k^±: h_{s ± delta}(t) h_delta(t) / (4 pi sinh^2(delta/2))."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if not (0.0 < delta < 1.0 and s > delta):
        raise ValueError("need 0 < delta < 1 and s > delta")
    return (
        shc_integral(s + sign * delta, t)
        * shc_integral(delta, t)
        / ball_area(delta)
    )


def indicator_kernel(s: float, u: float) -> float:
    """Sharp ball indicator 1_{[0, (cosh s - 1)/2]}(u)."""
    return 1.0 if 0.0 <= u <= (math.cosh(s) - 1.0) / 2.0 else 0.0
