"""Tests for differential smoothing and extrema extraction."""

import numpy as np
import pytest

from stemcpd import (
    BandwidthTooLargeError,
    InvalidParameterError,
    KernelSpec,
    NoiseModel,
    TimeSeries,
    compose,
    find_local_extrema,
    kernel_value,
    kernel_weights,
    make_staircase,
    null_max_rate,
    closed_form_moments,
    sample_noise,
    smooth,
    smooth_derivative,
)
from stemcpd.detect import convolve_weights


def series(values, **kw):
    return TimeSeries(np.asarray(values, dtype=float), **kw)


class TestConvolveWeights:
    @pytest.mark.parametrize("order", [0, 1, 2, 3])
    def test_matches_numpy_convolve(self, order):
        rng = np.random.default_rng(42)
        y = rng.standard_normal(300)
        w = kernel_weights(KernelSpec(gamma=3.5, order=order))
        mine = convolve_weights(y, w, 1.0)
        ref = np.convolve(y, w, mode="same")
        k = len(w) // 2
        assert mine[k:-k] == pytest.approx(ref[k:-k], abs=1e-12)

    def test_exact_zero_on_constant_input(self):
        y = np.full(200, 3.7)
        w = kernel_weights(KernelSpec(gamma=6.0, order=1))
        out = convolve_weights(y, w, 1.0)
        k = len(w) // 2
        assert np.all(out[k:-k] == 0.0)


class TestSmoothDerivative:
    def test_single_step_becomes_kernel_bump(self):
        """An isolated jump of size a maps to a bump of height about
        a*w(0) peaking at the jump location."""
        gamma, v, a, n = 6.0, 120, 2.0, 260
        y = series(a * (np.arange(1, n + 1) >= v))
        dy = smooth_derivative(y, KernelSpec(gamma=gamma, order=1))
        lo, hi = dy.interior
        seg = dy.values[lo:hi]
        peak_at = lo + int(np.argmax(seg)) + 1  # grid location
        assert abs(peak_at - v) <= 1
        expected_height = a * float(kernel_value(KernelSpec(gamma=gamma), 0.0))
        assert seg.max() == pytest.approx(expected_height, rel=0.01)

    def test_constant_input_is_identically_zero(self):
        y = series(np.full(300, 5.0))
        dy = smooth_derivative(y, KernelSpec(gamma=6.0, order=1))
        assert np.max(np.abs(dy.values[dy.interior_slice()])) <= 1e-12
        assert find_local_extrema(dy) == []

    def test_two_distant_steps_superpose(self):
        """Two well-separated jumps produce the sum of two shifted kernel
        bumps (checked against analytic kernel evaluations)."""
        gamma = 4.0
        spec0 = KernelSpec(gamma=gamma)
        n = 400
        t = np.arange(1, n + 1)
        a1, v1, a2, v2 = 1.5, 120, -2.5, 280
        y = series(a1 * (t >= v1) + a2 * (t >= v2))
        dy = smooth_derivative(y, KernelSpec(gamma=gamma, order=1))
        expected = a1 * np.asarray(kernel_value(spec0, t - v1 + 0.5)) + a2 * np.asarray(
            kernel_value(spec0, t - v2 + 0.5)
        )
        sl = dy.interior_slice()
        assert np.max(np.abs(dy.values[sl] - expected[sl])) < 3e-4 * max(abs(a1), abs(a2))

    def test_requires_order_one(self):
        with pytest.raises(InvalidParameterError):
            smooth_derivative(series(np.zeros(100)), KernelSpec(gamma=3.0, order=0))

    def test_series_shorter_than_kernel(self):
        with pytest.raises(BandwidthTooLargeError):
            smooth_derivative(series(np.zeros(30)), KernelSpec(gamma=6.0, order=1))

    def test_interior_annotation(self):
        dy = smooth_derivative(series(np.zeros(100)), KernelSpec(gamma=3.0, order=1))
        assert dy.interior == (12, 88)


class TestFindLocalExtrema:
    def test_single_maximum(self):
        out = find_local_extrema(series([0.0, 1.0, 0.0]))
        assert len(out) == 1
        e = out[0]
        assert (e.index, e.height, e.sign) == (2, 1.0, 1)

    def test_plateau_reports_leftmost(self):
        out = find_local_extrema(series([0.0, 1.0, 1.0, 0.0]))
        assert len(out) == 1
        assert out[0].index == 2
        assert out[0].sign == 1

    def test_minimum_plateau(self):
        out = find_local_extrema(series([0.0, -1.0, -1.0, 0.0]))
        assert len(out) == 1
        assert out[0].index == 2
        assert out[0].sign == -1

    def test_monotone_has_no_extrema(self):
        assert find_local_extrema(series([0.0, 1.0, 2.0, 3.0])) == []

    def test_zero_plateau_is_skipped(self):
        # exact-zero segments never count, even when flanked by larger values
        out = find_local_extrema(series([0.5, 0.0, 0.0, 0.0, 0.7]))
        assert out == []

    def test_interior_restriction(self):
        vals = np.zeros(20)
        vals[1] = 5.0  # outside interior
        vals[10] = 1.0
        dy = TimeSeries(vals, interior=(4, 16))
        out = find_local_extrema(dy)
        assert [e.index for e in out] == [11]

    def test_sign_symmetry(self):
        rng = np.random.default_rng(0)
        vals = rng.standard_normal(500)
        plus = find_local_extrema(series(vals))
        minus = find_local_extrema(series(-vals))
        assert [(e.index, -e.sign) for e in plus] == [(e.index, e.sign) for e in minus]
        assert [pytest.approx(-e.height) for e in plus] == [e.height for e in minus]

    def test_alternation(self):
        noise = sample_noise(NoiseModel(1.0, 2.0), 20_000, seed=13)
        dy = smooth_derivative(noise, KernelSpec(gamma=6.0, order=1))
        signs = [e.sign for e in find_local_extrema(dy)]
        assert all(a != b for a, b in zip(signs, signs[1:]))

    def test_no_extremum_near_boundary(self):
        noise = sample_noise(NoiseModel(1.0, 2.0), 5_000, seed=14)
        spec = KernelSpec(gamma=6.0, order=1)
        dy = smooth_derivative(noise, spec)
        k = spec.half_width()
        for e in find_local_extrema(dy):
            assert k + 1 <= e.index - 1 <= len(noise) - k - 2

    def test_requires_unit_spacing(self):
        with pytest.raises(InvalidParameterError):
            find_local_extrema(series([0, 1, 0], spacing=0.5))

    def test_null_extrema_count_matches_analytic_rate(self):
        """On pure noise the extrema count per unit matches twice the
        analytic local-maxima rate."""
        model = NoiseModel(1.0, 2.0)
        gamma = 6.0
        noise = sample_noise(model, 100_000, seed=15)
        dy = smooth_derivative(noise, KernelSpec(gamma=gamma, order=1))
        extrema = find_local_extrema(dy)
        lo, hi = dy.interior
        rate = len(extrema) / (hi - lo)
        expected = 2.0 * null_max_rate(closed_form_moments(model, gamma))
        assert rate == pytest.approx(expected, rel=0.03)


class TestNoiselessRecovery:
    @pytest.mark.parametrize("gamma", [2.0, 6.0, 10.0])
    @pytest.mark.parametrize("jump", [2.0, -1.5])
    def test_staircase_recovered_exactly(self, gamma, jump):
        sep = int(2 * 4.0 * gamma) + 20
        length = 12 * sep
        sig = make_staircase(jump, sep, length)
        y = compose(sig, TimeSeries(np.zeros(length)))
        dy = smooth_derivative(y, KernelSpec(gamma=gamma, order=1))
        extrema = find_local_extrema(dy)
        want_sign = 1 if jump > 0 else -1
        assert len(extrema) == sig.n_jumps
        for e, v in zip(extrema, sig.locations):
            assert abs(e.index - v) <= 1
            assert e.sign == want_sign


class TestSmoothOrderZero:
    def test_smooths_toward_local_mean(self):
        rng = np.random.default_rng(21)
        y = series(rng.standard_normal(2000) + 5.0)
        sm = smooth(y, KernelSpec(gamma=10.0, order=0))
        seg = sm.values[sm.interior_slice()]
        assert seg.mean() == pytest.approx(5.0, abs=0.05)
        assert seg.var() < y.values.var() / 10
