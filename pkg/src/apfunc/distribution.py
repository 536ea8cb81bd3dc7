"""Occupation-time histograms, tail exponents, and moment/measure comparison.

The limiting distribution of a real function phi on [0, Y] is estimated by
its occupation measure: the mass of a value-bin is the fraction of time
phi spends there.  Each grid cell contributes its time fractionally to the
bins its linearly-interpolated value segment crosses, which matches the
indicator-test-function definition of the limit better than point
sampling and makes interval queries nearly bin-size independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .moments import MomentReport
from .spectrum import Spectrum
from .trigsum import SampledFunction, eval_grid, split_truncation
from .spectrum import CutoffSchedule

#: bins with mass at or below NOISE_FACTOR / sample_count are quantisation noise
NOISE_FACTOR = 10.0


@dataclass(frozen=True)
class DistributionEstimate:
    """Histogram of occupation time with strictly increasing bin edges."""

    bin_edges: np.ndarray
    masses: np.ndarray
    Y: float
    sample_count: int
    support_radius: float
    truncation_T: Optional[float] = None

    def __post_init__(self):
        edges = np.asarray(self.bin_edges, dtype=np.float64)
        masses = np.asarray(self.masses, dtype=np.float64)
        if len(edges) != len(masses) + 1:
            raise ValueError("need len(bin_edges) == len(masses) + 1")
        if not np.all(np.diff(edges) > 0):
            raise ValueError("bin edges must be strictly increasing")
        if np.any(masses < 0):
            raise ValueError("negative bin mass")
        if abs(math.fsum(masses) - 1.0) > 1e-12:
            raise ValueError("masses must sum to 1 within 1e-12")
        edges.flags.writeable = False
        masses.flags.writeable = False
        object.__setattr__(self, "bin_edges", edges)
        object.__setattr__(self, "masses", masses)

    @property
    def midpoints(self) -> np.ndarray:
        return 0.5 * (self.bin_edges[:-1] + self.bin_edges[1:])

    def interval_mass(self, a: float, b: float) -> float:
        """Mass of [a, b], counting straddling bins fractionally."""
        if b < a:
            a, b = b, a
        lo = self.bin_edges[:-1]
        hi = self.bin_edges[1:]
        overlap = np.clip(np.minimum(hi, b) - np.maximum(lo, a), 0.0, None)
        return float(np.sum(self.masses * overlap / (hi - lo)))

    def tail_mass(self, S: float) -> float:
        """Mass of |x| >= S (fractional on straddling bins)."""
        lo = self.bin_edges[:-1]
        hi = self.bin_edges[1:]
        width = hi - lo
        right = np.clip(hi - np.maximum(lo, S), 0.0, None)
        left = np.clip(np.minimum(hi, -S) - lo, 0.0, None)
        frac = np.minimum(right + left, width) / width
        return float(np.sum(self.masses * frac))

    def moment(self, n: int) -> float:
        """Midpoint-rule moment sum(mass * midpoint**n)."""
        return float(np.sum(self.masses * self.midpoints**n))

    def write_csv(self, path, extra_header: tuple = ()) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"# Y: {self.Y:.17g}  samples: {self.sample_count}\n")
            fh.write(f"# support radius: {self.support_radius:.17g}\n")
            if self.truncation_T is not None:
                fh.write(
                    f"# finite-Y surrogate of the truncated-spectrum measure at "
                    f"T = {self.truncation_T:.17g}\n"
                )
            for line in extra_header:
                fh.write(f"# {line}\n")
            fh.write("# columns: bin_left,bin_right,mass\n")
            for j in range(len(self.masses)):
                fh.write(
                    f"{self.bin_edges[j]:.17g},{self.bin_edges[j+1]:.17g},"
                    f"{self.masses[j]:.17g}\n"
                )


@dataclass(frozen=True)
class TailFit:
    """Log-log tail-mass slope with the decay predicted from beta."""

    exponent_hat: Optional[float]
    S_values: tuple
    tail_masses: tuple
    predicted_exponent: Optional[float]
    compact_support: bool
    points_used: int


def predicted_tail_exponent(beta: float) -> float:
    """Tail decay exponent (2*beta - 1) / (2 - 2*beta); inf for beta >= 1.

    At beta = 1 the tails decay exponentially and for beta > 1 the measure
    has compact support, so the power-law exponent is reported as inf.
    """
    if beta >= 1.0:
        return math.inf
    return (2.0 * beta - 1.0) / (2.0 - 2.0 * beta)


def _degenerate_estimate(value: float, Y: float, samples: int,
                         truncation_T: Optional[float]) -> DistributionEstimate:
    half = max(5e-10, 5e-10 * abs(value))
    return DistributionEstimate(
        bin_edges=np.array([value - half, value + half]),
        masses=np.array([1.0]),
        Y=Y,
        sample_count=samples,
        support_radius=abs(value),
        truncation_T=truncation_T,
    )


def estimate_distribution(
    f: SampledFunction,
    Y: float,
    bins: int,
    truncation_T: Optional[float] = None,
) -> DistributionEstimate:
    """Occupation-time histogram of f over [y0, Y]."""
    if bins < 10:
        raise ValueError("need at least 10 bins")
    k = int(math.floor((Y - f.y0) / f.step + 1e-9))
    if k < 1:
        raise ValueError("Y too close to the grid start")
    if k > len(f.values) - 1:
        raise ValueError(f"Y exceeds grid (y_end = {f.y_end:.6g})")
    vals = f.values[: k + 1]
    Y_eff = k * f.step
    vmin = float(vals.min())
    vmax = float(vals.max())
    radius = float(np.max(np.abs(vals)))
    if vmax == vmin:
        return _degenerate_estimate(vmin, Y_eff, k + 1, truncation_T)
    edges = np.linspace(vmin, vmax, bins + 1)
    v0, v1 = vals[:-1], vals[1:]
    clo = np.minimum(v0, v1)
    chi = np.maximum(v0, v1)
    span = chi - clo
    masses = np.zeros(bins)
    flat = span == 0.0
    if np.any(flat):
        idx = np.clip(
            np.searchsorted(edges, clo[flat], side="right") - 1, 0, bins - 1
        )
        np.add.at(masses, idx, 1.0)
    nlo = clo[~flat]
    nhi = chi[~flat]
    nspan = span[~flat]
    for j in range(bins):
        overlap = np.clip(
            np.minimum(nhi, edges[j + 1]) - np.maximum(nlo, edges[j]), 0.0, None
        )
        masses[j] += float(np.sum(overlap / nspan))
    masses /= math.fsum(masses)
    return DistributionEstimate(
        bin_edges=edges,
        masses=masses,
        Y=Y_eff,
        sample_count=k + 1,
        support_radius=radius,
        truncation_T=truncation_T,
    )


def truncated_distribution(
    spec: Spectrum,
    T: float,
    Y: float,
    bins: int,
    step: Optional[float] = None,
) -> DistributionEstimate:
    """Occupation histogram of the low-frequency part (lambda_n <= T).

    This is a finite-Y surrogate of the truncated-spectrum limit measure;
    the horizon Y is recorded in the estimate.
    """
    low, _ = split_truncation(spec, T)
    if not len(low):
        return _degenerate_estimate(0.0, Y, 2, T)
    lam_max = low.max_frequency
    if step is None:
        m = int(math.ceil(Y * lam_max / 0.45))
        m += m % 2
        step = Y / m
    schedule = CutoffSchedule.constant(max(T, lam_max))
    f = eval_grid(low, 0.0, Y, step, schedule, fixed_Y=True)
    return estimate_distribution(f, Y, bins, truncation_T=T)


def fit_tails(
    est: DistributionEstimate,
    S_grid: Sequence[float],
    beta: Optional[float] = None,
) -> TailFit:
    """Tail masses mu(|x| >= S) on S_grid and their log-log decay slope.

    Bins whose mass is below the quantisation floor (NOISE_FACTOR divided
    by the sample count) are dropped from the fit.  Compact support is
    flagged as soon as a tail mass hits exactly zero before the last S.
    """
    S_values = [float(S) for S in S_grid]
    if not S_values or any(b <= a for a, b in zip(S_values, S_values[1:])):
        raise ValueError("S_grid must be non-empty and increasing")
    tails = [est.tail_mass(S) for S in S_values]
    compact = any(t == 0.0 for t in tails)
    floor = NOISE_FACTOR / max(est.sample_count, 1)
    usable = [(S, t) for S, t in zip(S_values, tails) if t > floor and S > 0]
    exponent = None
    if not compact and len(usable) >= 3:
        logS = np.log([S for S, _ in usable])
        logT = np.log([t for _, t in usable])
        A = np.vstack([logS, np.ones_like(logS)]).T
        (slope, _), *_ = np.linalg.lstsq(A, logT, rcond=None)
        exponent = -float(slope)
    predicted = None if beta is None else predicted_tail_exponent(beta)
    return TailFit(
        exponent_hat=exponent,
        S_values=tuple(S_values),
        tail_masses=tuple(tails),
        predicted_exponent=predicted,
        compact_support=compact,
        points_used=len(usable) if not compact else 0,
    )


def compare_moments(est: DistributionEstimate, reports) -> list:
    """Histogram moments against the reports' moment values.

    Each entry is (order, histogram_moment, reference, gap) where the
    reference is the theoretical value when present, else the last
    empirical value.
    """
    if isinstance(reports, MomentReport):
        reports = [reports]
    out = []
    for rep in reports:
        if rep.theoretical is not None:
            ref = rep.theoretical
        elif rep.empirical:
            ref = rep.empirical[-1][1]
        else:
            raise ValueError(f"report of order {rep.order} carries no moment value")
        hist_m = est.moment(rep.order)
        out.append((rep.order, hist_m, ref, hist_m - ref))
    return out
