import math

import numpy as np
import pytest

from apfunc import (
    BudgetExceededError,
    GeneratorGroup,
    HPoint,
    ModularGroup,
    MoebiusMap,
    apply_map,
    count_orbit,
    hyperbolic_distance,
)
from apfunc.hyperbolic.plane import frobenius_cosh_displacement

I_POINT = HPoint(0.0, 1.0)


def random_pslz_map(rng, word_len=6) -> MoebiusMap:
    S = MoebiusMap(0, -1, 1, 0)
    T = MoebiusMap(1, 1, 0, 1)
    Tinv = T.inverse()
    m = MoebiusMap.identity()
    for _ in range(word_len):
        m = m * rng.choice([S, T, Tinv])
    return m


class TestPlane:
    def test_distance_examples(self):
        assert hyperbolic_distance(I_POINT, I_POINT) == 0.0
        assert hyperbolic_distance(I_POINT, HPoint(0, 2)) == pytest.approx(
            math.log(2.0), rel=1e-14
        )

    def test_symmetry(self):
        z, w = I_POINT, HPoint(1.0, 1.0)
        assert abs(hyperbolic_distance(z, w) - hyperbolic_distance(w, z)) <= 1e-15

    def test_lower_half_plane_rejected(self):
        with pytest.raises(ValueError):
            HPoint(0.0, -1.0)

    def test_apply_identity(self):
        z = HPoint(0.3, 0.7)
        assert apply_map(MoebiusMap.identity(), z) == z

    def test_apply_inversion_fixes_i(self):
        S = MoebiusMap(0, -1, 1, 0)
        assert apply_map(S, I_POINT) == I_POINT

    def test_apply_translation(self):
        T = MoebiusMap(1, 1, 0, 1)
        assert apply_map(T, I_POINT) == HPoint(1.0, 1.0)

    def test_determinant_validation(self):
        with pytest.raises(ValueError, match="determinant"):
            MoebiusMap(1, 1, 1, 1)

    def test_sign_normalisation_identifies_negatives(self):
        m = MoebiusMap(-1, 0, 0, -1)
        assert m.as_tuple() == (1, 0, 0, 1)
        m2 = MoebiusMap(0, -1, 1, 0)
        m3 = MoebiusMap(0, 1, -1, 0)
        assert m2.as_tuple() == m3.as_tuple()

    def test_composition_keeps_integer_determinant(self):
        rng = np.random.default_rng(6)
        for _ in range(25):
            g = random_pslz_map(rng)
            h = random_pslz_map(rng)
            gh = g * h
            assert gh.is_exact
            assert gh.a * gh.d - gh.b * gh.c == 1

    def test_inverse(self):
        rng = np.random.default_rng(8)
        for _ in range(10):
            g = random_pslz_map(rng)
            assert (g * g.inverse()).as_tuple() == (1, 0, 0, 1)

    def test_isometry_invariance(self):
        rng = np.random.default_rng(10)
        for _ in range(25):
            g = random_pslz_map(rng)
            z = HPoint(rng.normal(), abs(rng.normal()) + 0.2)
            w = HPoint(rng.normal(), abs(rng.normal()) + 0.2)
            d1 = hyperbolic_distance(z, w)
            d2 = hyperbolic_distance(apply_map(g, z), apply_map(g, w))
            assert abs(d1 - d2) <= 1e-12 * max(1.0, d1)

    def test_frobenius_displacement_identity(self):
        rng = np.random.default_rng(12)
        for _ in range(25):
            g = random_pslz_map(rng)
            want = math.cosh(hyperbolic_distance(I_POINT, apply_map(g, I_POINT)))
            assert frobenius_cosh_displacement(g) == pytest.approx(want, rel=1e-10)


class TestCountOrbit:
    def test_stabilizer_of_i(self):
        ball = count_orbit(ModularGroup(), 0.0, I_POINT, I_POINT)
        assert ball.count == 2
        assert ball.complete
        assert {m.as_tuple() for m in ball.maps} == {(1, 0, 0, 1), (0, 1, -1, 0)}
        assert np.all(ball.distances == 0.0)

    def test_monotone_in_radius(self):
        counts = [count_orbit(ModularGroup(), float(s), I_POINT, I_POINT).count
                  for s in (1, 2, 3)]
        assert counts[0] <= counts[1] <= counts[2]
        assert counts[0] >= 2

    def test_symmetry_z_w(self):
        rng = np.random.default_rng(14)
        for _ in range(8):
            s = float(rng.uniform(0.0, 2.5))
            z = HPoint(rng.uniform(-0.5, 0.5), rng.uniform(0.7, 1.5))
            w = HPoint(rng.uniform(-0.5, 0.5), rng.uniform(0.7, 1.5))
            assert (
                count_orbit(ModularGroup(), s, z, w).count
                == count_orbit(ModularGroup(), s, w, z).count
            )

    def test_growth_rate_band(self):
        # leading growth pi e^s / vol = 3 e^s on the modular surface
        for s in (5.0, 6.0, 7.0, 8.0):
            n = count_orbit(ModularGroup(), s, I_POINT, I_POINT).count
            assert 0.8 <= n / (3.0 * math.exp(s)) <= 1.2

    def test_distances_sorted_and_within_radius(self):
        ball = count_orbit(ModularGroup(), 3.0, I_POINT, HPoint(0.2, 0.9))
        assert np.all(np.diff(ball.distances) >= 0)
        assert ball.distances[-1] <= 3.0

    def test_brute_window_against_direct_scan(self):
        # direct integer scan over a fixed box as an independent oracle
        s = 2.0
        want = set()
        for a in range(-8, 9):
            for b in range(-8, 9):
                for c in range(-8, 9):
                    for d in range(-8, 9):
                        if a * d - b * c != 1:
                            continue
                        gz = (a * 1j + b) / (c * 1j + d)
                        u = abs(gz - 1j) ** 2 / (4 * gz.imag)
                        if math.acosh(1 + 2 * u) <= s:
                            key = (a, b, c, d)
                            if next(v for v in key if v) < 0:
                                key = tuple(-v for v in key)
                            want.add(key)
        ball = count_orbit(ModularGroup(), s, I_POINT, I_POINT)
        assert {m.as_tuple() for m in ball.maps} == want

    def test_budget_exceeded(self):
        with pytest.raises(BudgetExceededError, match="budget"):
            count_orbit(ModularGroup(), 14.0, I_POINT, I_POINT, budget=1e4)

    def test_negative_radius_rejected(self):
        with pytest.raises(ValueError):
            count_orbit(ModularGroup(), -1.0, I_POINT, I_POINT)


class TestGeneratorBFS:
    def test_matches_exact_scan_at_small_radius(self):
        gens = (MoebiusMap(0.0, -1.0, 1.0, 0.0), MoebiusMap(1.0, 1.0, 0.0, 1.0))
        group = GeneratorGroup(generators=gens, prune_margin=3.0)
        for s in (0.0, 1.0, 1.5):
            bfs = count_orbit(group, s, I_POINT, I_POINT)
            exact = count_orbit(ModularGroup(), s, I_POINT, I_POINT)
            assert bfs.count == exact.count
            assert not bfs.complete

    def test_element_budget(self):
        gens = (MoebiusMap(0.0, -1.0, 1.0, 0.0), MoebiusMap(1.0, 1.0, 0.0, 1.0))
        group = GeneratorGroup(generators=gens, prune_margin=6.0, max_elements=50)
        with pytest.raises(BudgetExceededError):
            count_orbit(group, 4.0, I_POINT, I_POINT)
