"""Exact arithmetic generators and their normalised remainders.

Counting functions are computed exactly (integer sieves and bounded
lattice scans); the normalised remainders feed the almost-periodic
machinery:

    q(y) = (psi(e^y) - e^y) / e^(y/2)           prime counting
    u(y) = (R(y^2) - pi y^2) / sqrt(y)          circle lattice count
    v(y) = (D(y^2) - y^2 log y^2 - (2C-1) y^2) / sqrt(y)   divisor count

Spectrum builders: the zeta-zero expansion of q (zeros are ingested from a
table, never computed here), and the leading oscillatory expansion of u
with frequencies 2*pi*sqrt(n), amplitudes r(n) / (2*pi*n^(3/4)) and phase
-3*pi/4 (the J_1 asymptotics of Hardy's identity
R(x) = pi x + sum_n r(n) (x/n)^(1/2) J_1(2*pi*sqrt(n x))).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources
from typing import Optional

import numpy as np

from .errors import BudgetExceededError, SpectrumFormatError
from .spectrum import Spectrum

DEFAULT_PSI_BUDGET = 10**7
DEFAULT_LATTICE_BUDGET = 10**6

EULER_GAMMA = float(np.euler_gamma)


@dataclass(frozen=True)
class ArithmeticTable:
    """Values of an arithmetic function on 1..limit (index 0 unused)."""

    kind: str
    limit: int
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values)
        if len(vals) != self.limit + 1:
            raise ValueError("values must have length limit + 1")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)


def sieve_primes(limit: int) -> np.ndarray:
    """All primes <= limit (ascending)."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.nonzero(mask)[0].astype(np.int64)


def von_mangoldt_table(limit: int) -> ArithmeticTable:
    """Lambda(n) = log p on prime powers p^k <= limit, else 0."""
    values = np.zeros(limit + 1)
    primes = sieve_primes(limit)
    values[primes] = np.log(primes)
    for p in primes[primes <= math.isqrt(limit)]:
        pk = int(p) * int(p)
        while pk <= limit:
            values[pk] = math.log(int(p))
            pk *= int(p)
    return ArithmeticTable("vonMangoldt", limit, values)


def two_squares_table(limit: int) -> ArithmeticTable:
    """r(n): representations of n as an ordered pair of squares (signs counted)."""
    values = np.zeros(limit + 1, dtype=np.int64)
    for a in range(0, math.isqrt(limit) + 1):
        wa = 2 if a else 1
        a2 = a * a
        bmax = math.isqrt(limit - a2)
        bs = np.arange(0, bmax + 1)
        ns = a2 + bs * bs
        ws = wa * np.where(bs > 0, 2, 1)
        np.add.at(values, ns, ws)
    values[0] = 0
    return ArithmeticTable("sumTwoSquares", limit, values)


def divisor_table(limit: int) -> ArithmeticTable:
    """d(n) by the divisor sieve."""
    values = np.zeros(limit + 1, dtype=np.int64)
    for k in range(1, limit + 1):
        values[k::k] += 1
    values[0] = 0
    return ArithmeticTable("divisor", limit, values)


# --- prime counting ---------------------------------------------------------


def chebyshev_psi(x: float, table: Optional[ArithmeticTable] = None,
                  budget: int = DEFAULT_PSI_BUDGET) -> float:
    """psi(x) = sum of Lambda(n) over n <= x, correctly-rounded (fsum)."""
    if x < 1:
        raise ValueError("need x >= 1")
    nx = int(math.floor(x))
    if table is None:
        if nx > budget:
            raise BudgetExceededError(f"psi sieve budget {budget} < x = {x:g}")
        table = von_mangoldt_table(nx)
    elif table.limit < nx:
        raise ValueError(f"table limit {table.limit} < x = {x:g}")
    return math.fsum(table.values[1 : nx + 1])


def pnt_remainder(y: float, table: Optional[ArithmeticTable] = None,
                  budget: int = DEFAULT_PSI_BUDGET) -> float:
    """q(y) = (psi(e^y) - e^y) / e^(y/2) for y >= 0."""
    if y < 0:
        raise ValueError("need y >= 0")
    x = math.exp(y)
    return (chebyshev_psi(x, table, budget) - x) / math.exp(y / 2.0)


# --- Gauss circle -----------------------------------------------------------


def lattice_count_R(x: float, budget: int = DEFAULT_LATTICE_BUDGET) -> int:
    """Exact number of integer pairs (a, b) != (0, 0) with a^2 + b^2 <= x."""
    if x < 0:
        raise ValueError("need x >= 0")
    if x > budget:
        raise BudgetExceededError(f"lattice budget {budget} < x = {x:g}")
    if x < 1:
        return 0
    fx = int(math.floor(x))
    total = 0
    for a in range(0, math.isqrt(fx) + 1):
        # floor(sqrt(x - a^2)) = isqrt(floor(x) - a^2) since a^2 is integral
        bmax = math.isqrt(fx - a * a)
        count_b = 2 * bmax + 1
        total += count_b if a == 0 else 2 * count_b
    return total - 1


def gauss_remainder(y: float, budget: int = DEFAULT_LATTICE_BUDGET) -> float:
    """u(y) = (R(y^2) - pi y^2) / sqrt(y) for y > 0."""
    if not (y > 0):
        raise ValueError("need y > 0")
    x = y * y
    return (lattice_count_R(x, budget) - math.pi * x) / math.sqrt(y)


def gauss_spectrum(n_max: int, table: Optional[ArithmeticTable] = None) -> Spectrum:
    """Leading oscillatory expansion of u(y) up to the n_max-th term.

    Frequencies 2*pi*sqrt(n) for n <= n_max with r(n) > 0 (zero-coefficient
    frequencies are omitted), coefficients r(n) e^{-3i pi/4} / (2 pi n^{3/4})
    in the two-sided convention.
    """
    if n_max < 1:
        raise ValueError("need n_max >= 1")
    if table is None:
        table = two_squares_table(n_max)
    elif table.limit < n_max:
        raise ValueError("table too short")
    ns = np.nonzero(table.values[1 : n_max + 1])[0] + 1
    freqs = 2.0 * math.pi * np.sqrt(ns.astype(np.float64))
    phase = np.exp(-0.75j * math.pi)
    coefs = table.values[ns] * phase / (2.0 * math.pi * ns.astype(np.float64) ** 0.75)
    return Spectrum(freqs, coefs.astype(np.complex128))


# --- divisors ---------------------------------------------------------------


def divisor_sums(x: float, budget: int = DEFAULT_LATTICE_BUDGET) -> int:
    """D(x) = sum of d(n) over n <= x, exactly, by the hyperbola method."""
    if x < 1:
        raise ValueError("need x >= 1")
    if x > budget:
        raise BudgetExceededError(f"divisor budget {budget} < x = {x:g}")
    fx = int(math.floor(x))
    root = math.isqrt(fx)
    return 2 * sum(fx // k for k in range(1, root + 1)) - root * root


def divisor_remainder(y: float, budget: int = DEFAULT_LATTICE_BUDGET) -> float:
    """v(y) = (D(y^2) - (y^2 log y^2 - (2C - 1) y^2)) / sqrt(y), C Euler's constant."""
    if y < 1:
        raise ValueError("need y >= 1")
    x = y * y
    main = x * math.log(x) + (2.0 * EULER_GAMMA - 1.0) * x
    return (divisor_sums(x, budget) - main) / math.sqrt(y)


# --- zeta zeros -------------------------------------------------------------


@dataclass(frozen=True)
class ZeroTable:
    """Ordinates of zeros on the critical line, strictly increasing."""

    ordinates: np.ndarray

    def __post_init__(self):
        ords = np.asarray(self.ordinates, dtype=np.float64)
        if ords.ndim != 1 or len(ords) == 0:
            raise ValueError("need at least one ordinate")
        if ords[0] <= 0 or not np.all(np.diff(ords) > 0):
            raise ValueError("ordinates must be positive and strictly increasing")
        ords.flags.writeable = False
        object.__setattr__(self, "ordinates", ords)

    def __len__(self) -> int:
        return len(self.ordinates)

    @property
    def max_ordinate(self) -> float:
        return float(self.ordinates[-1])


def load_zero_table(path) -> ZeroTable:
    """Plain-text table, one positive ordinate per line ascending."""
    ords = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                g = float(line)
            except ValueError as exc:
                raise SpectrumFormatError(f"{path}:{lineno}: {exc}") from exc
            if g <= 0:
                raise SpectrumFormatError(f"{path}:{lineno}: non-positive ordinate")
            if ords and g <= ords[-1]:
                raise SpectrumFormatError(f"{path}:{lineno}: ordinates not increasing")
            ords.append(g)
    if not ords:
        raise SpectrumFormatError(f"{path}: empty zero table")
    if not (14.1 <= ords[0] <= 14.2):
        raise SpectrumFormatError(
            f"{path}: first ordinate {ords[0]:g} outside [14.1, 14.2]"
        )
    return ZeroTable(np.array(ords))


def bundled_zero_table() -> ZeroTable:
    """The zero table shipped with the package (ordinates up to ~508)."""
    ref = resources.files("apfunc").joinpath("data/zeta_zeros.txt")
    with resources.as_file(ref) as path:
        return load_zero_table(path)


def zeta_spectrum(zeros: ZeroTable, X: float) -> Spectrum:
    """Spectrum of q(y): frequencies gamma_k <= X, coefficients -1/(1/2 + i gamma_k).

    The two-sided convention absorbs the leading 2 of the explicit-formula
    expansion -2 Re sum e^{i gamma y} / rho.
    """
    if X > zeros.max_ordinate:
        raise ValueError(
            f"cutoff {X:g} exceeds the table (max ordinate {zeros.max_ordinate:g})"
        )
    gam = zeros.ordinates[zeros.ordinates <= X]
    coefs = -1.0 / (0.5 + 1j * gam)
    return Spectrum(gam.copy(), coefs)
