"""Empirical and asymptotic moments of almost-periodic sums.

The asymptotic moment of order n of S(y) = 2 Re sum c_n exp(i lambda_n y)
is a sum over sign-resonant frequency tuples: expanding S^n over sign
vectors g in {+1,-1}^n (with -1 acting by complex conjugation), only the
tuples whose signed frequency sum

    theta_g(lambda_J) = sum_s g_s * lambda_{j_s}

vanishes survive time averaging, each contributing the amplitude
prod_s g_s(c_{j_s}).  Enumeration is meet-in-the-middle over signed
half-tuple sums, which brings the cost down from (2m)^n to ~(2m)^(n/2).

Two detection modes: a floating mode with tolerance |theta| <= tol, and an
exact mode that treats every stored double as the dyadic rational it is
and matches half-sums exactly (tolerance 0), with amplitudes accumulated
in exact rational arithmetic so results are order-independent.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .numerics import simpson_uniform
from .spectrum import CutoffSchedule, Spectrum
from .trigsum import SampledFunction, eval_grid

DEFAULT_MAX_TERMS = 2_000_000
TUPLE_CAPTURE_LIMIT = 20_000


@dataclass(frozen=True)
class ResonantTuple:
    """One resonant (multi-index, sign-vector) pair with its residual and amplitude."""

    indices: tuple
    signs: tuple
    theta: float
    amplitude: complex


@dataclass(frozen=True)
class MomentReport:
    order: int
    tolerance: float
    resonance_count: int
    theoretical: Optional[float]
    empirical: tuple = ()
    complete: bool = True
    y_start: float = 0.0
    imag_residual: float = 0.0
    abs_amplitude_sum: float = 0.0
    tuples: Optional[tuple] = field(default=None, compare=False)

    def to_json(self) -> str:
        payload = {
            "order": self.order,
            "tolerance": self.tolerance,
            "resonance_count": self.resonance_count,
            "theoretical": self.theoretical,
            "empirical": [[Y, v] for Y, v in self.empirical],
            "complete": self.complete,
            "y_start": self.y_start,
        }
        return json.dumps(payload, sort_keys=True)


def empirical_moment(f: SampledFunction, n: int, Y: float) -> float:
    """Mean of f(y)**n over the sampled window [y0, Y] by composite Simpson.

    Y must lie on the stored grid with an even number of steps from y0;
    the mean is normalised by the actual window length (equal to 1/Y
    integration from 0 when the grid starts at 0).
    """
    if n < 1:
        raise ValueError("moment order must be >= 1")
    k = int(math.floor((Y - f.y0) / f.step + 1e-9))
    if k < 2:
        raise ValueError("Y too close to the grid start")
    if k > len(f.values) - 1:
        raise ValueError(f"Y exceeds grid (y_end = {f.y_end:.6g})")
    if k % 2:
        raise ValueError(
            "odd sample-count requirement violated (Simpson needs an even step count)"
        )
    integral = simpson_uniform(f.values[: k + 1] ** n, f.step)
    return integral / (k * f.step)


# --- exact (rational) resonance enumeration --------------------------------


def _exact_half_groups(freqs, signed_choices, half_n):
    """Group half-tuples by their exact signed frequency sum.

    Returns dict: Fraction -> list of choice tuples, where a choice is a
    tuple of (sign, index) pairs, positions in ascending order.
    """
    groups: dict = {}
    for combo in itertools.product(signed_choices, repeat=half_n):
        theta = sum((s * freqs[j] for s, j in combo), Fraction(0))
        groups.setdefault(theta, []).append(combo)
    return groups


def _exact_amplitude(choices, re_parts, im_parts):
    """Exact complex product prod_s g_s(c_{j_s}) as a Fraction pair."""
    ar, ai = Fraction(1), Fraction(0)
    for s, j in choices:
        br = re_parts[j]
        bi = im_parts[j] if s > 0 else -im_parts[j]
        ar, ai = ar * br - ai * bi, ar * bi + ai * br
    return ar, ai


def _theoretical_exact(spec, n, max_terms, collect_tuples):
    m = len(spec)
    freqs = [Fraction(float(v)) for v in spec.frequencies]
    re_parts = [Fraction(float(c.real)) for c in spec.coefficients]
    im_parts = [Fraction(float(c.imag)) for c in spec.coefficients]
    signed_choices = [(1, j) for j in range(m)] + [(-1, j) for j in range(m)]
    n1 = n // 2
    n2 = n - n1
    if m and (2 * m) ** n2 > max_terms:
        return None, 0, False, 0.0, 0.0, None
    left = _exact_half_groups(freqs, signed_choices, n1)
    right = _exact_half_groups(freqs, signed_choices, n2)
    total_re, total_im = Fraction(0), Fraction(0)
    abs_sum = 0.0
    count = 0
    tuples = [] if collect_tuples else None
    for theta_l, combos_l in left.items():
        combos_r = right.get(-theta_l)
        if not combos_r:
            continue
        count += len(combos_l) * len(combos_r)
        if count > max_terms:
            return None, count, False, 0.0, 0.0, None
        for cl in combos_l:
            for cr in combos_r:
                full = cl + cr
                ar, ai = _exact_amplitude(full, re_parts, im_parts)
                total_re += ar
                total_im += ai
                abs_sum += abs(complex(ar, ai))
                if tuples is not None and len(tuples) < TUPLE_CAPTURE_LIMIT:
                    tuples.append(
                        ResonantTuple(
                            indices=tuple(j for _, j in full),
                            signs=tuple(s for s, _ in full),
                            theta=0.0,
                            amplitude=complex(float(ar), float(ai)),
                        )
                    )
    # sign-flipped tuples pair off conjugate amplitudes, so the exact
    # imaginary part must vanish identically
    if total_im != 0:
        raise ArithmeticError("resonant sum has non-zero exact imaginary part")
    return (
        float(total_re),
        count,
        True,
        0.0,
        abs_sum,
        tuple(tuples) if tuples is not None else None,
    )


# --- floating-point resonance enumeration ----------------------------------


def _float_half_arrays(pm_lam, pm_amp, half_n):
    sums = np.zeros(1)
    amps = np.ones(1, dtype=np.complex128)
    for _ in range(half_n):
        sums = (sums[:, None] + pm_lam[None, :]).ravel()
        amps = (amps[:, None] * pm_amp[None, :]).ravel()
    return sums, amps


def _theoretical_float(spec, n, tol, max_terms, collect_tuples):
    m = len(spec)
    pm_lam = np.concatenate([spec.frequencies, -spec.frequencies])
    pm_amp = np.concatenate([spec.coefficients, np.conj(spec.coefficients)])
    n1 = n // 2
    n2 = n - n1
    if m and (2 * m) ** n2 > max_terms:
        return None, 0, False, 0.0, 0.0, None
    sums_l, amps_l = _float_half_arrays(pm_lam, pm_amp, n1)
    sums_r, amps_r = _float_half_arrays(pm_lam, pm_amp, n2)
    order = np.argsort(sums_r, kind="stable")
    sums_r = sums_r[order]
    amps_r = amps_r[order]
    prefix = np.concatenate([[0.0 + 0.0j], np.cumsum(amps_r)])
    prefix_abs = np.concatenate([[0.0], np.cumsum(np.abs(amps_r))])
    lo = np.searchsorted(sums_r, -sums_l - tol, side="left")
    hi = np.searchsorted(sums_r, -sums_l + tol, side="right")
    count = int((hi - lo).sum())
    contrib = amps_l * (prefix[hi] - prefix[lo])
    total = complex(contrib.sum())
    abs_sum = float((np.abs(amps_l) * (prefix_abs[hi] - prefix_abs[lo])).sum())
    tuples = None
    if collect_tuples:
        if count > TUPLE_CAPTURE_LIMIT:
            raise ValueError(f"too many resonant tuples to capture ({count})")
        tuples = _capture_float_tuples(spec, m, n1, n2, sums_l, lo, hi, order)
    return total.real, count, True, abs(total.imag), abs_sum, tuples


def _decode_choice(flat_index, m, half_n):
    """Invert the mixed-radix construction of half tuples ((sign, index) pairs)."""
    digits = []
    for _ in range(half_n):
        digits.append(flat_index % (2 * m))
        flat_index //= 2 * m
    out = []
    for d in reversed(digits):
        out.append((1, d) if d < m else (-1, d - m))
    return tuple(out)


def _capture_float_tuples(spec, m, n1, n2, sums_l, lo, hi, order):
    tuples = []
    for il in range(len(sums_l)):
        for pos in range(int(lo[il]), int(hi[il])):
            ir = int(order[pos])
            cl = _decode_choice(il, m, n1)
            cr = _decode_choice(ir, m, n2)
            full = cl + cr
            theta = math.fsum(s * float(spec.frequencies[j]) for s, j in full)
            amp = complex(1.0)
            for s, j in full:
                c = complex(spec.coefficients[j])
                amp *= c if s > 0 else c.conjugate()
            tuples.append(
                ResonantTuple(
                    indices=tuple(j for _, j in full),
                    signs=tuple(s for s, _ in full),
                    theta=theta,
                    amplitude=amp,
                )
            )
    return tuple(tuples)


def default_tolerance(spec: Spectrum) -> float:
    return 1e-9 * (spec.max_frequency if len(spec) else 1.0)


def theoretical_moment(
    spec: Spectrum,
    n: int,
    tolerance: Optional[float] = None,
    max_terms: int = DEFAULT_MAX_TERMS,
    exact: bool = False,
    collect_tuples: bool = False,
) -> MomentReport:
    """Asymptotic moment of order n by resonance enumeration.

    exact=True forces tolerance 0 and exact rational arithmetic (stored
    doubles are dyadic rationals, so matching and amplitude accumulation
    are both exact and order-independent).  When the combinatorial budget
    max_terms would be exceeded the report comes back flagged incomplete
    with no theoretical value, never silently truncated.
    """
    if n < 1:
        raise ValueError("moment order must be >= 1")
    if exact:
        if tolerance not in (None, 0, 0.0):
            raise ValueError("exact mode requires tolerance 0")
        value, count, complete, resid, abs_sum, tuples = _theoretical_exact(
            spec, n, max_terms, collect_tuples
        )
        tol_used = 0.0
    else:
        tol_used = default_tolerance(spec) if tolerance is None else float(tolerance)
        if tol_used < 0:
            raise ValueError("tolerance must be >= 0")
        value, count, complete, resid, abs_sum, tuples = _theoretical_float(
            spec, n, tol_used, max_terms, collect_tuples
        )
    return MomentReport(
        order=n,
        tolerance=tol_used,
        resonance_count=count,
        theoretical=value if complete else None,
        complete=complete,
        imag_residual=resid,
        abs_amplitude_sum=abs_sum,
        tuples=tuples,
    )


def grid_step_for(spec: Spectrum, X: float, length: float, margin: float = 0.45) -> tuple:
    """Step and even interval count satisfying the aliasing guard on [0, length]."""
    k = int(np.searchsorted(spec.frequencies, X, side="right"))
    if k == 0:
        m = 1000
    else:
        lam_max = float(spec.frequencies[k - 1])
        m = int(math.ceil(length * lam_max / margin))
        m = max(m, 16)
    if m % 2:
        m += 1
    return length / m, m


def moment_convergence(
    spec: Spectrum,
    n: int,
    schedule: CutoffSchedule,
    Y_list: Sequence[float],
    tolerance: Optional[float] = None,
    max_terms: int = DEFAULT_MAX_TERMS,
    exact: bool = False,
    y_start: float = 0.0,
) -> MomentReport:
    """Empirical moments along increasing Y with cutoff X = schedule(Y).

    Attaches the enumerated theoretical value when the budget allows.
    """
    Ys = [float(Y) for Y in Y_list]
    if not Ys or any(b <= a for a, b in zip(Ys, Ys[1:])):
        raise ValueError("Y_list must be non-empty and increasing")
    empirical = []
    for Y in Ys:
        X = schedule(Y)
        step, _ = grid_step_for(spec, X, Y - y_start)
        f = eval_grid(spec, y_start, Y, step, schedule, fixed_Y=True)
        empirical.append((Y, empirical_moment(f, n, Y)))
    theo = theoretical_moment(
        spec, n, tolerance=tolerance, max_terms=max_terms, exact=exact
    )
    return MomentReport(
        order=n,
        tolerance=theo.tolerance,
        resonance_count=theo.resonance_count,
        theoretical=theo.theoretical,
        empirical=tuple(empirical),
        complete=theo.complete,
        y_start=y_start,
        imag_residual=theo.imag_residual,
        abs_amplitude_sum=theo.abs_amplitude_sum,
    )
