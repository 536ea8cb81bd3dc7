"""Exact orbit enumeration inside hyperbolic balls.

For the modular group the scan is complete by construction: if
d(z, gamma w) <= s then the triangle inequality pushes gamma into the
Frobenius-norm ball

    a^2 + b^2 + c^2 + d^2 <= 2 cosh(s + d(z, i) + d(i, w)),

and all determinant-one integer matrices in that ball are enumerated
column-family by column-family (gcd(a, c) = 1, then the t-line
(b + t a, d + t c)).  A generator word search is available for general
groups but is heuristic: word length does not uniformly bound
displacement, so its results carry complete=False.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import BudgetExceededError
from .plane import HPoint, MoebiusMap, apply_map, hyperbolic_distance

DEFAULT_NORM_BUDGET = 2.0e5


class ModularGroup:
    """PSL(2, Z) in exact integer-matrix mode."""

    name = "pslz"

    def __repr__(self) -> str:
        return "ModularGroup()"


@dataclass(frozen=True)
class GeneratorGroup:
    """A group given by generators; orbit search by pruned word BFS.

    Completeness is heuristic: the search stops expanding a word once its
    image leaves the ball of radius s + prune_margin, which can miss
    elements that detour far before coming back.
    """

    generators: tuple
    prune_margin: float = 2.0
    max_elements: int = 200_000

    def __post_init__(self):
        if not self.generators:
            raise ValueError("need at least one generator")


@dataclass(frozen=True)
class OrbitBall:
    """Enumerated orbit points gamma w with d(z, gamma w) <= s."""

    s: float
    count: int
    maps: tuple
    distances: np.ndarray
    complete: bool

    def __post_init__(self):
        d = np.asarray(self.distances, dtype=np.float64)
        d.flags.writeable = False
        object.__setattr__(self, "distances", d)


def _egcd(a: int, b: int) -> tuple:
    if b == 0:
        return (a, 1, 0)
    g, x, y = _egcd(b, a % b)
    return (g, y, x - (a // b) * y)


def _canonical(a: int, b: int, c: int, d: int) -> tuple:
    for v in (a, b, c, d):
        if v > 0:
            return (a, b, c, d)
        if v < 0:
            return (-a, -b, -c, -d)
    raise ValueError("zero matrix")


def _pslz_scan(s: float, z: HPoint, w: HPoint, budget: float):
    base = hyperbolic_distance(z, HPoint(0.0, 1.0)) + hyperbolic_distance(
        HPoint(0.0, 1.0), w
    )
    C = 2.0 * math.cosh(s + base) * (1.0 + 1e-12) + 1e-12
    if C > budget:
        raise BudgetExceededError(
            f"matrix range too large: Frobenius bound {C:.3g} exceeds budget {budget:.3g}"
        )
    amax = math.isqrt(int(C))
    found = {}
    wz = w.as_complex
    for a in range(-amax, amax + 1):
        a2 = a * a
        cmax = math.isqrt(int(C - a2))
        for c in range(-cmax, cmax + 1):
            if a == 0 and c == 0:
                continue
            if math.gcd(abs(a), abs(c)) != 1:
                continue
            g, x0, y0 = _egcd(a, c)
            # a x0 + c y0 = g with g = +-1; (b, d) = (-y0 g, x0 g) solves ad - bc = 1
            d0 = x0 * g
            b0 = -y0 * g
            # integer t range with (b0 + t a)^2 + (d0 + t c)^2 <= C - a^2 - c^2
            Q = C - a2 - c * c
            A2 = a2 + c * c
            B2 = 2.0 * (a * b0 + c * d0)
            C2 = b0 * b0 + d0 * d0 - Q
            disc = B2 * B2 - 4.0 * A2 * C2
            if disc < 0:
                continue
            root = math.sqrt(disc)
            tlo = math.ceil((-B2 - root) / (2.0 * A2) - 1e-12)
            thi = math.floor((-B2 + root) / (2.0 * A2) + 1e-12)
            for t in range(tlo, thi + 1):
                b = b0 + t * a
                d = d0 + t * c
                key = _canonical(a, b, c, d)
                if key in found:
                    continue
                gw = (a * wz + b) / (c * wz + d)
                dist = hyperbolic_distance(z, HPoint(gw.real, gw.imag))
                if dist <= s:
                    found[key] = dist
    return found


def _bfs_scan(group: GeneratorGroup, s: float, z: HPoint, w: HPoint):
    gens = list(group.generators) + [g.inverse() for g in group.generators]
    limit = s + group.prune_margin

    def key_of(m: MoebiusMap):
        return tuple(round(v * 1e9) for v in m.as_tuple())

    start = MoebiusMap.identity()
    seen = {key_of(start): start}
    frontier = [start]
    found = {}
    while frontier:
        nxt = []
        for m in frontier:
            dist = hyperbolic_distance(z, apply_map(m, w))
            if dist <= s:
                found[key_of(m)] = (m, dist)
            if dist > limit:
                continue
            for g in gens:
                cand = m * g
                k = key_of(cand)
                if k in seen:
                    continue
                if len(seen) >= group.max_elements:
                    raise BudgetExceededError(
                        f"word search exceeded {group.max_elements} elements"
                    )
                seen[k] = cand
                nxt.append(cand)
        frontier = nxt
    return found


def count_orbit(group, s: float, z: HPoint, w: HPoint,
                budget: float = DEFAULT_NORM_BUDGET) -> OrbitBall:
    """All gamma in the group with d(z, gamma w) <= s, with their distances.

    Maps are returned sorted by (distance, matrix entries) so the output
    is deterministic however the scan is chunked.
    """
    if s < 0:
        raise ValueError("radius s must be >= 0")
    if isinstance(group, ModularGroup):
        found = _pslz_scan(s, z, w, budget)
        items = sorted(
            ((dist, key) for key, dist in found.items()), key=lambda p: (p[0], p[1])
        )
        maps = tuple(MoebiusMap(*key) for _, key in items)
        dists = np.array([dist for dist, _ in items])
        return OrbitBall(s=s, count=len(maps), maps=maps, distances=dists,
                         complete=True)
    if isinstance(group, GeneratorGroup):
        found = _bfs_scan(group, s, z, w)
        items = sorted(
            ((dist, m.as_tuple()) for m, dist in found.values()),
            key=lambda p: (p[0], p[1]),
        )
        maps = tuple(MoebiusMap(*key) for _, key in items)
        dists = np.array([dist for dist, _ in items])
        return OrbitBall(s=s, count=len(maps), maps=maps, distances=dists,
                         complete=False)
    raise TypeError(f"unknown group descriptor {group!r}")
