import math
from fractions import Fraction

import numpy as np
import pytest

from apfunc import (
    CutoffSchedule,
    Spectrum,
    empirical_moment,
    eval_grid,
    moment_convergence,
    theoretical_moment,
)
from conftest import random_spectrum
from oracles import brute_force_moment_exact, brute_force_moment_float, quadrature_moment


def cosine_grid(Y=2000 * math.pi, step=math.pi / 100, coef=1.0 + 0j):
    spec = Spectrum(np.array([1.0]), np.array([coef]))
    return spec, eval_grid(spec, 0.0, Y, step, CutoffSchedule.constant(2.0))


class TestEmpiricalMoment:
    def test_second_moment_of_cosine(self):
        _, f = cosine_grid()
        assert empirical_moment(f, 2, 2000 * math.pi) == pytest.approx(2.0, abs=1e-6)

    def test_fourth_moment_of_cosine(self):
        # mean of (2 cos)^4 = 16 * 3/8 = 6, cross-checked by a raw
        # quadrature of the closed form
        _, f = cosine_grid()
        got = empirical_moment(f, 4, 2000 * math.pi)
        ys = np.linspace(0, 2000 * math.pi, 400001)
        oracle = np.trapezoid((2 * np.cos(ys)) ** 4, ys) / (2000 * math.pi)
        assert got == pytest.approx(6.0, abs=1e-5)
        assert got == pytest.approx(oracle, abs=1e-5)

    def test_first_moment_vanishes(self):
        _, f = cosine_grid()
        assert abs(empirical_moment(f, 1, 2000 * math.pi)) < 1e-6

    def test_Y_beyond_grid(self):
        _, f = cosine_grid(Y=10 * math.pi)
        with pytest.raises(ValueError, match="exceeds grid"):
            empirical_moment(f, 2, 11 * math.pi)

    def test_odd_interval_count_rejected(self):
        spec = Spectrum(np.array([1.0]), np.array([1.0 + 0j]))
        f = eval_grid(spec, 0.0, 1.01, 0.01, CutoffSchedule.constant(2.0))
        with pytest.raises(ValueError, match="Simpson"):
            empirical_moment(f, 2, 1.01)


class TestTheoreticalMoment:
    def test_resonant_123_orders(self, res123):
        r2 = theoretical_moment(res123, 2, exact=True)
        r3 = theoretical_moment(res123, 3, exact=True)
        assert r2.theoretical == 6.0
        assert r3.theoretical == 18.0
        # 12 ordered resonances of 1+2-3 type and 6 of 1+1-2 type
        assert r3.resonance_count == 18

    def test_order_one_always_zero(self):
        rng = np.random.default_rng(2)
        for _ in range(5):
            s = random_spectrum(rng, rng.integers(1, 8))
            rep = theoretical_moment(s, 1)
            assert rep.theoretical == 0.0
            assert rep.resonance_count == 0

    def test_single_frequency_laws_exact(self):
        rng = np.random.default_rng(7)
        for _ in range(5):
            c = complex(rng.normal(), rng.normal())
            s = Spectrum(np.array([rng.uniform(0.5, 5.0)]), np.array([c]))
            c2 = Fraction(c.real) ** 2 + Fraction(c.imag) ** 2
            assert theoretical_moment(s, 1, exact=True).theoretical == 0.0
            assert theoretical_moment(s, 2, exact=True).theoretical == float(2 * c2)
            assert theoretical_moment(s, 3, exact=True).theoretical == 0.0
            assert theoretical_moment(s, 4, exact=True).theoretical == float(6 * c2 * c2)

    def test_brute_force_equivalence_exact(self):
        rng = np.random.default_rng(123)
        for _ in range(25):
            size = int(rng.integers(1, 7))
            n = int(rng.integers(1, 5))
            s = random_spectrum(rng, size, integer_freqs=True)
            got = theoretical_moment(s, n, exact=True)
            want_val, want_count = brute_force_moment_exact(s, n)
            assert got.theoretical == want_val
            assert got.resonance_count == want_count

    def test_brute_force_equivalence_float(self):
        rng = np.random.default_rng(31)
        for _ in range(10):
            size = int(rng.integers(1, 6))
            n = int(rng.integers(1, 4))
            s = random_spectrum(rng, size)
            tol = 1e-9 * s.max_frequency
            got = theoretical_moment(s, n, tolerance=tol)
            want_val, want_count = brute_force_moment_float(s, n, tol)
            assert got.resonance_count == want_count
            assert got.theoretical == pytest.approx(want_val, abs=1e-12)

    def test_quadrature_oracle_on_res123(self, res123):
        # independent dense quadrature of 2(cos y + cos 2y + cos 3y)
        val = quadrature_moment(res123, 3, 5000.0)
        assert val == pytest.approx(18.0, abs=0.3)

    def test_scaling_law(self, res123):
        scaled = res123.scaled(3.0)
        for n in (1, 2, 3):
            a = theoretical_moment(res123, n, exact=True).theoretical
            b = theoretical_moment(scaled, n, exact=True).theoretical
            assert b == 3.0**n * a

    def test_diagonal_law_independent_frequencies(self):
        s = Spectrum(
            np.array([1.0, math.sqrt(2.0), math.sqrt(3.0)]),
            np.array([1.0, 0.5 + 0.5j, 0.25], dtype=complex),
        )
        c2 = sum(abs(c) ** 2 for c in s.coefficients)
        rep2 = theoretical_moment(s, 2)
        rep3 = theoretical_moment(s, 3)
        assert rep2.theoretical == pytest.approx(2 * c2, rel=1e-12)
        assert rep3.theoretical == 0.0
        assert rep3.resonance_count == 0

    def test_realness_residual(self):
        rng = np.random.default_rng(17)
        for _ in range(10):
            s = random_spectrum(rng, 6, integer_freqs=True)
            rep = theoretical_moment(s, 3)
            assert rep.imag_residual <= 1e-12 * max(rep.abs_amplitude_sum, 1e-300)

    def test_budget_flags_incomplete(self, res123):
        rep = theoretical_moment(res123, 4, exact=True, max_terms=10)
        assert not rep.complete
        assert rep.theoretical is None

    def test_default_tolerance_scales_with_max_frequency(self, res123):
        from apfunc.moments import default_tolerance

        assert default_tolerance(res123) == pytest.approx(3e-9, rel=1e-12)
        rep = theoretical_moment(res123, 2)
        assert rep.tolerance == pytest.approx(3e-9, rel=1e-12)

    def test_exact_matches_float_on_integer_spectrum(self, res123):
        for n in (2, 3, 4):
            a = theoretical_moment(res123, n, exact=True).theoretical
            b = theoretical_moment(res123, n).theoretical
            assert a == pytest.approx(b, rel=1e-12)

    def test_tuple_capture_float_mode_matches_exact(self, res123):
        rf = theoretical_moment(res123, 3, collect_tuples=True)
        re_ = theoretical_moment(res123, 3, exact=True, collect_tuples=True)
        assert rf.tuples is not None and len(rf.tuples) == 18
        assert {(t.indices, t.signs) for t in rf.tuples} == {
            (t.indices, t.signs) for t in re_.tuples
        }
        for t in rf.tuples:
            assert abs(t.theta) <= rf.tolerance

    def test_tuple_capture_recomputable(self, res123):
        rep = theoretical_moment(res123, 3, exact=True, collect_tuples=True)
        assert rep.tuples is not None and len(rep.tuples) == 18
        for tup in rep.tuples:
            amp = 1.0 + 0j
            theta = 0.0
            for s, j in zip(tup.signs, tup.indices):
                c = complex(res123.coefficients[j])
                amp *= c if s > 0 else c.conjugate()
                theta += s * float(res123.frequencies[j])
            assert amp == pytest.approx(tup.amplitude, abs=1e-14)
            assert abs(theta) <= rep.tolerance


class TestMomentConvergence:
    def test_cosine_convergence_envelope(self, single_cosine):
        rep = moment_convergence(
            single_cosine, 2, CutoffSchedule.constant(2.0), [100.0, 1000.0, 10000.0]
        )
        assert rep.theoretical == pytest.approx(2.0, rel=1e-12)
        for Y, value in rep.empirical:
            assert abs(value - 2.0) <= 2.0 / Y + 1e-9

    def test_resonant_convergence_to_18(self, res123):
        rep = moment_convergence(
            res123, 3, CutoffSchedule.constant(10.0), [10000.0], exact=True
        )
        assert rep.theoretical == 18.0
        assert abs(rep.empirical[-1][1] - 18.0) <= 0.5

    def test_agreement_trend_when_beta_large(self):
        # |empirical - theoretical| shrinks along Y for a convergent case
        s = Spectrum(np.array([1.0, 2.0]), np.array([1.0, 0.5], dtype=complex))
        rep = moment_convergence(
            s, 2, CutoffSchedule.constant(3.0), [50.0, 500.0, 5000.0], exact=True
        )
        gaps = [abs(v - rep.theoretical) for _, v in rep.empirical]
        assert gaps[-1] < gaps[0]
        assert gaps[-1] < 0.01

    def test_gauss_spectrum_diagonal_dominance(self):
        # among frequencies 2 pi sqrt(n) only the diagonal resonates, so
        # L2 = 2 sum|c|^2; empirical mean square at Y = 1000 within 10%
        from apfunc import gauss_spectrum

        spec = gauss_spectrum(1013).restrict(200.0)
        rep = theoretical_moment(spec, 2)
        want = 2.0 * math.fsum(abs(c) ** 2 for c in spec.coefficients)
        assert rep.resonance_count == 2 * len(spec)  # diagonal only
        assert rep.theoretical == pytest.approx(want, rel=1e-12)
        conv = moment_convergence(spec, 2, CutoffSchedule.constant(200.0),
                                  [1000.0])
        assert abs(conv.empirical[0][1] - want) <= 0.1 * want

    def test_exponential_schedule_on_zero_spectrum(self):
        # the canonical setting for the prime remainder: X(Y) = e^Y, with
        # window decay ~ log T / T (beta fit ~0.99 > 1 - 1/2), so second
        # moments converge to the enumerated value
        from apfunc import bundled_zero_table, zeta_spectrum

        spec = zeta_spectrum(bundled_zero_table(), 500.0)
        sched = CutoffSchedule.exponential()
        rep = moment_convergence(spec, 2, sched, [4.0, 6.0])
        want = 2.0 * math.fsum(abs(c) ** 2 for c in spec.coefficients)
        assert rep.theoretical == pytest.approx(want, rel=1e-6)
        gaps = [abs(v - rep.theoretical) for _, v in rep.empirical]
        assert gaps[-1] <= 0.15 * want

    def test_y_list_must_increase(self, res123):
        with pytest.raises(ValueError, match="increasing"):
            moment_convergence(res123, 2, CutoffSchedule.constant(5.0), [10.0, 5.0])

    def test_report_json_shape(self, res123):
        rep = moment_convergence(
            res123, 2, CutoffSchedule.constant(5.0), [100.0], exact=True
        )
        import json

        doc = json.loads(rep.to_json())
        assert doc["order"] == 2
        assert doc["theoretical"] == 6.0
        assert len(doc["empirical"]) == 1
