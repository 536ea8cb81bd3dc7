"""Frequency/coefficient data model for almost-periodic remainder functions.

A Spectrum stores strictly increasing positive frequencies lambda_n and
complex coefficients c_n under the fixed two-sided convention: the
deterministic part of the function is

    S(y) = 2 Re sum_n c_n exp(i lambda_n y).

One-sided expansions of the form Re(sum r_n exp(i lambda y)) are ingested
by halving their coefficients (c_n = r_n / 2).  All reported coefficient
magnitudes in window sums use the one-sided normalisation |r_n| = |2 c_n|,
which is the quantity whose unit-window decay exponent beta is fitted.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import SpectrumFormatError

CONVENTION = "two-sided"


def _readonly(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class Spectrum:
    """Ordered positive frequencies with complex coefficients (two-sided)."""

    frequencies: np.ndarray
    coefficients: np.ndarray
    convention: str = field(default=CONVENTION, compare=False)

    def __post_init__(self):
        freqs = np.asarray(self.frequencies, dtype=np.float64)
        coefs = np.asarray(self.coefficients, dtype=np.complex128)
        if freqs.ndim != 1 or coefs.ndim != 1:
            raise ValueError("frequencies and coefficients must be 1-d")
        if len(freqs) != len(coefs):
            raise ValueError("frequencies and coefficients must have equal length")
        if len(freqs) and not np.all(np.isfinite(freqs)):
            raise ValueError("non-finite frequency")
        if len(coefs) and not np.all(np.isfinite(coefs.view(np.float64))):
            raise ValueError("non-finite coefficient")
        if len(freqs) and freqs[0] <= 0.0:
            raise ValueError("non-positive frequency")
        if len(freqs) > 1 and not np.all(np.diff(freqs) > 0.0):
            raise ValueError("frequencies must be strictly increasing")
        object.__setattr__(self, "frequencies", _readonly(freqs))
        object.__setattr__(self, "coefficients", _readonly(coefs))

    def __len__(self) -> int:
        return len(self.frequencies)

    @property
    def max_frequency(self) -> float:
        if not len(self):
            raise ValueError("empty spectrum has no max frequency")
        return float(self.frequencies[-1])

    def abs_coefficient_sum(self, cutoff: float = math.inf) -> float:
        """sum_{lambda_n <= cutoff} |c_n| in ascending order."""
        k = int(np.searchsorted(self.frequencies, cutoff, side="right"))
        return math.fsum(np.abs(self.coefficients[:k]))

    def restrict(self, cutoff: float) -> "Spectrum":
        """Sub-spectrum with lambda_n <= cutoff."""
        k = int(np.searchsorted(self.frequencies, cutoff, side="right"))
        return Spectrum(self.frequencies[:k].copy(), self.coefficients[:k].copy())

    def scaled(self, factor: complex) -> "Spectrum":
        return Spectrum(self.frequencies.copy(), self.coefficients * factor)


def empty_spectrum() -> Spectrum:
    return Spectrum(np.empty(0), np.empty(0, dtype=np.complex128))


@dataclass(frozen=True)
class CutoffSchedule:
    """Non-decreasing truncation schedule X(Y) with floor X(Y) >= x0 > 0.

    kind is one of "exponential" (X = e^Y), "linear" (X = Y) or
    "constant" (X = x0).
    """

    kind: str
    x0: float = 1.0

    def __post_init__(self):
        if self.kind not in ("exponential", "linear", "constant"):
            raise ValueError(f"unknown schedule kind {self.kind!r}")
        if not (self.x0 > 0.0):
            raise ValueError("schedule floor x0 must be positive")

    def __call__(self, Y: float) -> float:
        if self.kind == "exponential":
            return max(math.exp(min(Y, 700.0)), self.x0)
        if self.kind == "linear":
            return max(Y, self.x0)
        return self.x0

    @staticmethod
    def exponential(x0: float = 1.0) -> "CutoffSchedule":
        return CutoffSchedule("exponential", x0)

    @staticmethod
    def linear(x0: float = 1.0) -> "CutoffSchedule":
        return CutoffSchedule("linear", x0)

    @staticmethod
    def constant(x0: float) -> "CutoffSchedule":
        return CutoffSchedule("constant", x0)


@dataclass(frozen=True)
class DecayFit:
    """Least-squares decay exponent of unit-window coefficient sums."""

    beta_hat: float
    windows: tuple
    r_squared: float
    zero_windows_excluded: int


# --- file ingestion -------------------------------------------------------
#
# Spectrum CSV: rows "lambda,re_c,im_c", ascending lambda, '#' comments.
# Zero tables: plain text, one positive ordinate per line, ascending
# (Odlyzko-table compatible).


def load_spectrum(path) -> Spectrum:
    """Read a spectrum CSV; sorts (with a warning) and validates."""
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise SpectrumFormatError(
                    f"{path}:{lineno}: expected 3 comma-separated fields, got {len(parts)}"
                )
            try:
                lam, re_c, im_c = (float(p) for p in parts)
            except ValueError as exc:
                raise SpectrumFormatError(f"{path}:{lineno}: {exc}") from exc
            if not (lam > 0.0):
                raise SpectrumFormatError(f"{path}:{lineno}: non-positive frequency {lam!r}")
            rows.append((lam, complex(re_c, im_c), lineno))
    lams = [r[0] for r in rows]
    if any(b < a for a, b in zip(lams, lams[1:])):
        warnings.warn(f"{path}: frequencies not sorted; sorting ascending", stacklevel=2)
        rows.sort(key=lambda r: r[0])
        lams = [r[0] for r in rows]
    for prev, cur in zip(rows, rows[1:]):
        if cur[0] == prev[0]:
            raise SpectrumFormatError(f"{path}:{cur[2]}: duplicate frequency {cur[0]!r}")
    return Spectrum(np.array(lams, dtype=np.float64),
                    np.array([r[1] for r in rows], dtype=np.complex128))


def save_spectrum(spec: Spectrum, path, header: tuple = ()) -> None:
    """Write a spectrum CSV with 17-significant-digit decimal text."""
    with open(path, "w", encoding="utf-8") as fh:
        for line in header:
            fh.write(f"# {line}\n")
        fh.write("# columns: lambda,re_c,im_c\n")
        for lam, c in zip(spec.frequencies, spec.coefficients):
            fh.write(f"{lam:.17g},{c.real:.17g},{c.imag:.17g}\n")


# --- window sums and the decay exponent -----------------------------------


def window_coefficient_sums(spec: Spectrum, t_min: float, t_max: float) -> list:
    """Unit-window sums sum_{T <= lambda_n < T+1} |2 c_n| for integer T.

    Windows are half-open so they partition the frequency axis; sums use
    the one-sided |r_n| = |2 c_n| normalisation and a fixed ascending
    summation order.
    """
    if not len(spec):
        raise ValueError("empty range: spectrum has no frequencies")
    if not (1.0 <= t_min < t_max <= spec.max_frequency):
        raise ValueError(
            f"empty range: need 1 <= t_min < t_max <= {spec.max_frequency}"
        )
    freqs = spec.frequencies
    mags = 2.0 * np.abs(spec.coefficients)
    out = []
    T = math.ceil(t_min)
    while T < t_max:
        lo = int(np.searchsorted(freqs, T, side="left"))
        hi = int(np.searchsorted(freqs, T + 1, side="left"))
        out.append((T, math.fsum(mags[lo:hi])))
        T += 1
    return out


def fit_beta(windows) -> DecayFit:
    """Fit sum(T) ~ A * T**(-beta) by least squares on log-log data.

    Zero-sum windows carry no information about the decay law and are
    excluded (their count is reported); at least 5 usable windows required.
    """
    windows = list(windows)
    usable = [(T, s) for T, s in windows if s > 0.0]
    excluded = len(windows) - len(usable)
    if len(usable) < 5:
        raise ValueError(f"fewer than 5 usable windows ({len(usable)} non-empty)")
    logT = np.log([T for T, _ in usable])
    logS = np.log([s for _, s in usable])
    A = np.vstack([logT, np.ones_like(logT)]).T
    (slope, intercept), *_ = np.linalg.lstsq(A, logS, rcond=None)
    resid = logS - (slope * logT + intercept)
    ss_res = float(np.dot(resid, resid))
    ss_tot = float(np.dot(logS - logS.mean(), logS - logS.mean()))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return DecayFit(
        beta_hat=-float(slope),
        windows=tuple(windows),
        r_squared=r2,
        zero_windows_excluded=excluded,
    )
