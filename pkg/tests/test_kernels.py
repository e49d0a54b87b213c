"""Tests for kernel weight construction."""

import math

import numpy as np
import pytest

from stemcpd import (
    BandwidthTooSmallError,
    InvalidParameterError,
    KernelSpec,
    kernel_value,
    kernel_weights,
)

from helpers import gauss_kernel_samples

PHI0 = 1.0 / math.sqrt(2.0 * math.pi)


class TestKernelSpec:
    def test_defaults(self):
        spec = KernelSpec(gamma=6.0)
        assert spec.order == 0
        assert spec.cutoff == 4.0
        assert spec.family == "truncated-gaussian"

    @pytest.mark.parametrize("gamma", [0.0, -1.0])
    def test_invalid_gamma(self, gamma):
        with pytest.raises(InvalidParameterError):
            KernelSpec(gamma=gamma)

    def test_invalid_order(self):
        with pytest.raises(InvalidParameterError):
            KernelSpec(gamma=2.0, order=4)

    def test_invalid_cutoff(self):
        with pytest.raises(InvalidParameterError):
            KernelSpec(gamma=2.0, cutoff=0.0)

    def test_invalid_family(self):
        with pytest.raises(InvalidParameterError):
            KernelSpec(gamma=2.0, family="epanechnikov")

    def test_half_width(self):
        assert KernelSpec(gamma=6.0).half_width() == 24
        assert KernelSpec(gamma=6.0).half_width(0.5) == 48
        assert KernelSpec(gamma=0.3, cutoff=4.0).half_width() == 2


class TestKernelWeights:
    def test_center_value_before_renormalization(self):
        # density value at zero is phi(0)/gamma
        spec = KernelSpec(gamma=6.0)
        assert kernel_value(spec, 0.0) == pytest.approx(PHI0 / 6.0, rel=1e-12)
        assert kernel_value(spec, 0.0) == pytest.approx(0.066490, abs=1e-6)

    def test_unit_action_exact(self):
        w = kernel_weights(KernelSpec(gamma=6.0), spacing=1.0)
        assert math.fsum(w) == 1.0

    def test_unit_action_other_spacings(self):
        for spacing in (0.5, 0.25, 2.0):
            w = kernel_weights(KernelSpec(gamma=6.0), spacing=spacing)
            assert math.fsum(w) * spacing == pytest.approx(1.0, abs=1e-15)

    def test_odd_orders_sum_exactly_zero(self):
        for order in (1, 3):
            w = kernel_weights(KernelSpec(gamma=6.0, order=order))
            assert math.fsum(w) == 0.0

    def test_order1_center_weight_is_zero(self):
        for gamma in (0.7, 2.0, 6.0, 10.0):
            w = kernel_weights(KernelSpec(gamma=gamma, order=1))
            assert w[len(w) // 2] == 0.0

    def test_exact_symmetry(self):
        for order in (0, 2):
            w = kernel_weights(KernelSpec(gamma=5.0, order=order))
            assert np.array_equal(w, w[::-1])
        for order in (1, 3):
            w = kernel_weights(KernelSpec(gamma=5.0, order=order))
            assert np.array_equal(w, -w[::-1])

    def test_length_and_support(self):
        spec = KernelSpec(gamma=6.0, order=1)
        w = kernel_weights(spec, spacing=1.0)
        assert len(w) == 2 * 24 + 1
        assert w[0] != 0.0  # offset 24 <= cutoff*gamma = 24

    @pytest.mark.parametrize("order", [1, 2, 3])
    def test_weights_are_analytic_derivative_samples(self, order):
        spec = KernelSpec(gamma=3.0, order=order)
        w = kernel_weights(spec, spacing=1.0)
        k = len(w) // 2
        expected = gauss_kernel_samples(3.0, 4.0, order)
        assert w == pytest.approx(expected, rel=1e-12, abs=1e-18)
        assert len(expected) == 2 * k + 1

    @pytest.mark.parametrize("order", [1, 2, 3])
    def test_finite_difference_consistency(self, order):
        """Central differences of order-(k-1) weights reproduce order-k
        weights at fine spacing."""
        spacing = 0.01
        lower = kernel_weights(KernelSpec(gamma=6.0, order=order - 1), spacing)
        upper = kernel_weights(KernelSpec(gamma=6.0, order=order), spacing)
        fd = (lower[2:] - lower[:-2]) / (2.0 * spacing)
        target = upper[1:-1]
        mask = np.abs(target) > 1e-2 * np.max(np.abs(target))
        rel = np.abs(fd[mask] - target[mask]) / np.abs(target[mask])
        assert np.max(rel) < 1e-4

    def test_step_convolution_reproduces_kernel_shape(self):
        """Convolving a unit step with order-1 weights traces out the
        order-0 kernel shape: the running sum lands on the kernel sampled
        half a grid step off, up to the truncation edge value, and returns
        exactly to zero past the support by antisymmetry."""
        gamma = 6.0
        spec0 = KernelSpec(gamma=gamma)
        w1 = kernel_weights(KernelSpec(gamma=gamma, order=1))
        k = len(w1) // 2
        n = 200
        v = 100
        step = (np.arange(1, n + 1) >= v).astype(float)
        response = np.convolve(step, w1, mode="same")
        t = np.arange(1, n + 1)
        edge = float(kernel_value(spec0, spec0.cutoff * gamma))
        expected = np.asarray(kernel_value(spec0, t - v + 0.5)) - edge
        expected *= np.abs(t - v + 0.5) <= spec0.cutoff * gamma
        inner = slice(k + 1, n - k - 1)
        assert np.max(np.abs(response[inner] - expected[inner])) < 1e-4
        # peak height matches the kernel's center value to within a percent
        assert response.max() == pytest.approx(float(kernel_value(spec0, 0.0)), rel=0.01)
        # far from the step the running sum of antisymmetric weights cancels
        assert abs(response[v + k + 5]) < 1e-12

    def test_bandwidth_too_small(self):
        with pytest.raises(BandwidthTooSmallError):
            kernel_weights(KernelSpec(gamma=0.2), spacing=1.0)

    def test_invalid_spacing(self):
        with pytest.raises(InvalidParameterError):
            kernel_weights(KernelSpec(gamma=6.0), spacing=0.0)

    def test_kernel_value_zero_outside_support(self):
        spec = KernelSpec(gamma=2.0, order=0)
        assert kernel_value(spec, 8.01) == 0.0
        assert kernel_value(spec, -9.0) == 0.0
        assert kernel_value(spec, 7.99) > 0.0
