import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from apfunc import (
    CutoffSchedule,
    Spectrum,
    SpectrumFormatError,
    fit_beta,
    load_spectrum,
    save_spectrum,
    window_coefficient_sums,
)
from conftest import random_spectrum


class TestSpectrumValidation:
    def test_basic_construction(self):
        s = Spectrum(np.array([1.0, 2.0]), np.array([0.5, 0.25 + 0.25j]))
        assert len(s) == 2
        assert s.max_frequency == 2.0
        assert s.convention == "two-sided"

    def test_rejects_nonpositive_frequency(self):
        with pytest.raises(ValueError, match="non-positive"):
            Spectrum(np.array([0.0, 1.0]), np.array([1.0, 1.0], dtype=complex))

    def test_rejects_unsorted(self):
        with pytest.raises(ValueError, match="increasing"):
            Spectrum(np.array([2.0, 1.0]), np.array([1.0, 1.0], dtype=complex))

    def test_rejects_nan_coefficient(self):
        with pytest.raises(ValueError, match="finite"):
            Spectrum(np.array([1.0]), np.array([complex(np.nan, 0.0)]))

    def test_rejects_length_mismatch(self):
        with pytest.raises(ValueError, match="equal length"):
            Spectrum(np.array([1.0, 2.0]), np.array([1.0], dtype=complex))

    def test_immutable(self):
        s = Spectrum(np.array([1.0]), np.array([1.0 + 0j]))
        with pytest.raises(ValueError):
            s.frequencies[0] = 5.0


class TestFileRoundTrip:
    def test_load_basic(self, tmp_path):
        p = tmp_path / "spec.csv"
        p.write_text("# comment\n1.0,0.5,0.0\n2.0,0.25,0.25\n")
        s = load_spectrum(p)
        assert len(s) == 2
        assert s.coefficients[1] == 0.25 + 0.25j

    def test_load_unsorted_warns_and_sorts(self, tmp_path):
        p = tmp_path / "spec.csv"
        p.write_text("2.0,1.0,0.0\n1.0,1.0,0.0\n")
        with pytest.warns(UserWarning, match="not sorted"):
            s = load_spectrum(p)
        assert list(s.frequencies) == [1.0, 2.0]

    def test_load_zero_frequency_rejected(self, tmp_path):
        p = tmp_path / "spec.csv"
        p.write_text("0.0,1.0,0.0\n")
        with pytest.raises(SpectrumFormatError, match="non-positive frequency"):
            load_spectrum(p)

    def test_load_duplicate_rejected(self, tmp_path):
        p = tmp_path / "spec.csv"
        p.write_text("1.0,1.0,0.0\n1.0,2.0,0.0\n")
        with pytest.raises(SpectrumFormatError, match="duplicate"):
            load_spectrum(p)

    def test_parse_error_carries_line_number(self, tmp_path):
        p = tmp_path / "spec.csv"
        p.write_text("1.0,1.0,0.0\nnot,a,number\n")
        with pytest.raises(SpectrumFormatError, match=":2:"):
            load_spectrum(p)

    def test_round_trip_bit_exact(self, tmp_path):
        rng = np.random.default_rng(42)
        s = random_spectrum(rng, 30)
        p = tmp_path / "spec.csv"
        save_spectrum(s, p)
        s2 = load_spectrum(p)
        assert np.array_equal(s.frequencies, s2.frequencies)
        assert np.array_equal(s.coefficients, s2.coefficients)


class TestWindowSums:
    def test_unit_coefficient_windows(self):
        s = Spectrum(np.arange(1.0, 11.0), np.full(10, 0.5, dtype=complex))
        windows = window_coefficient_sums(s, 1, 4)
        assert windows == [(1, 1.0), (2, 1.0), (3, 1.0)]

    def test_empty_spectrum_errors(self):
        s = Spectrum(np.empty(0), np.empty(0, dtype=complex))
        with pytest.raises(ValueError, match="empty range"):
            window_coefficient_sums(s, 1, 4)

    def test_bad_range_errors(self, res123):
        with pytest.raises(ValueError, match="empty range"):
            window_coefficient_sums(res123, 2, 2)

    def test_totals_partition_exactly_dyadic(self):
        # dyadic magnitudes make every partial sum exact, so the window
        # partition must conserve the total to the bit
        rng = np.random.default_rng(3)
        freqs = np.sort(rng.uniform(1.0, 12.0, size=40))
        coefs = rng.integers(1, 64, size=40) / 64.0 + 0j
        s = Spectrum(freqs, coefs)
        windows = window_coefficient_sums(s, 1, s.max_frequency)
        t_end = windows[-1][0] + 1
        flat = math.fsum(
            2 * abs(c) for lam, c in zip(freqs, coefs) if 1 <= lam < t_end
        )
        assert math.fsum(w for _, w in windows) == flat

    def test_totals_partition_general(self):
        rng = np.random.default_rng(4)
        s = random_spectrum(rng, 50)
        windows = window_coefficient_sums(s, 1, s.max_frequency)
        t_end = windows[-1][0] + 1
        flat = math.fsum(
            2 * abs(c)
            for lam, c in zip(s.frequencies, s.coefficients)
            if 1 <= lam < t_end
        )
        assert math.fsum(w for _, w in windows) == pytest.approx(flat, rel=1e-14)


class TestFitBeta:
    def test_exact_power_law(self):
        windows = [(T, T**-0.5) for T in range(10, 101)]
        fit = fit_beta(windows)
        assert abs(fit.beta_hat - 0.5) < 1e-9
        assert fit.r_squared > 1 - 1e-12

    @settings(max_examples=30, deadline=None)
    @given(
        beta=st.floats(min_value=0.0, max_value=2.0),
        amp=st.floats(min_value=1e-3, max_value=1e3),
    )
    def test_power_law_recovery(self, beta, amp):
        windows = [(T, amp * T**-beta) for T in range(5, 60)]
        fit = fit_beta(windows)
        assert abs(fit.beta_hat - beta) < 1e-6

    def test_zero_windows_excluded_and_counted(self):
        windows = [(T, T**-1.0) for T in range(5, 15)] + [(15, 0.0), (16, 0.0)]
        fit = fit_beta(windows)
        assert fit.zero_windows_excluded == 2
        assert abs(fit.beta_hat - 1.0) < 1e-9

    def test_too_few_windows(self):
        with pytest.raises(ValueError, match="fewer than 5"):
            fit_beta([(1, 1.0), (2, 0.5), (3, 0.0), (4, 0.0)])


class TestCutoffSchedule:
    def test_shapes(self):
        assert CutoffSchedule.exponential()(2.0) == pytest.approx(math.exp(2.0))
        assert CutoffSchedule.linear()(7.5) == 7.5
        assert CutoffSchedule.constant(10.0)(1e9) == 10.0

    def test_floor(self):
        assert CutoffSchedule.linear(x0=3.0)(1.0) == 3.0

    def test_non_decreasing(self):
        sch = CutoffSchedule.exponential()
        ys = np.linspace(0, 20, 50)
        vals = [sch(y) for y in ys]
        assert all(b >= a for a, b in zip(vals, vals[1:]))

    def test_invalid(self):
        with pytest.raises(ValueError):
            CutoffSchedule("weird")
        with pytest.raises(ValueError):
            CutoffSchedule.constant(0.0)
