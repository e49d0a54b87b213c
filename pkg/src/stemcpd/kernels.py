"""Smoothing kernels and their sampled derivative weights.

Smoothing uses a bandwidth-scaled kernel ``w_g(t) = w(t/g)/g`` whose base
shape ``w`` is unimodal, symmetric, non-negative, compactly supported and
integrates to one.  Convolving a sequence with samples of ``w_g`` estimates
the underlying smooth trend; convolving with samples of the k-th derivative
of ``w_g`` estimates the k-th derivative of that trend.  Every convolution
in this package is driven by the weight sequences produced here.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import BandwidthTooSmallError, InvalidParameterError

#: Default support half-width of the truncated Gaussian, in bandwidth units.
GAUSSIAN_CUTOFF = 4.0

TRUNCATED_GAUSSIAN = "truncated-gaussian"

_SQRT_2PI = math.sqrt(2.0 * math.pi)


def _gauss_derivative(x: np.ndarray, order: int) -> np.ndarray:
    """Order-th derivative of the standard Gaussian density at x."""
    phi = np.exp(-0.5 * x * x) / _SQRT_2PI
    if order == 0:
        return phi
    if order == 1:
        return -x * phi
    if order == 2:
        return (x * x - 1.0) * phi
    return (3.0 * x - x ** 3) * phi


@dataclass(frozen=True)
class KernelSpec:
    """A bandwidth-scaled kernel together with a derivative order.

    Parameters
    ----------
    gamma : float
        Bandwidth in grid units.  Must be positive.
    order : int
        Derivative order, 0 through 3.  Order 0 is plain smoothing.
    cutoff : float
        Support half-width in bandwidth units; the kernel is identically
        zero outside ``[-cutoff*gamma, cutoff*gamma]``.
    family : str
        Kernel family.  Only the truncated Gaussian is implemented.
    """

    gamma: float
    order: int = 0
    cutoff: float = GAUSSIAN_CUTOFF
    family: str = TRUNCATED_GAUSSIAN

    def __post_init__(self) -> None:
        if self.family != TRUNCATED_GAUSSIAN:
            raise InvalidParameterError(f"unknown kernel family: {self.family!r}")
        if not self.gamma > 0:
            raise InvalidParameterError("gamma must be positive")
        if not self.cutoff > 0:
            raise InvalidParameterError("cutoff must be positive")
        if self.order not in (0, 1, 2, 3):
            raise InvalidParameterError("order must be 0, 1, 2 or 3")

    def half_width(self, spacing: float = 1.0) -> int:
        """Number of weight samples on each side of the center."""
        if not spacing > 0:
            raise InvalidParameterError("spacing must be positive")
        return int(math.ceil(self.cutoff * self.gamma / spacing))


def kernel_value(spec: KernelSpec, t) -> np.ndarray:
    """Analytic value of the order-th derivative of ``w_g`` at offset ``t``.

    Values outside the truncated support are exactly zero.  Inside the
    support the derivative of the untruncated Gaussian density is used;
    the jump introduced by truncation at the support edge is ignored.
    """
    t = np.asarray(t, dtype=float)
    x = t / spec.gamma
    out = _gauss_derivative(x, spec.order) / spec.gamma ** (spec.order + 1)
    return np.where(np.abs(t) <= spec.cutoff * spec.gamma, out, 0.0)


def kernel_weights(spec: KernelSpec, spacing: float = 1.0) -> np.ndarray:
    """Sampled weights of the order-th derivative of ``w_g`` on the grid.

    Returns an odd-length, centered array covering grid offsets
    ``-K*spacing .. K*spacing`` with ``K = ceil(cutoff*gamma/spacing)``.
    Even orders are symmetrized exactly; odd orders are antisymmetrized
    exactly, so their true sum is zero.  Order-0 weights are rescaled so
    that ``sum(weights) * spacing == 1`` (discrete unit action).

    Discrete convolution with these weights, scaled by ``spacing``,
    approximates the corresponding continuous convolution integral.
    """
    if not spacing > 0:
        raise InvalidParameterError("spacing must be positive")
    if spec.cutoff * spec.gamma < spacing:
        raise BandwidthTooSmallError(
            f"kernel support half-width {spec.cutoff * spec.gamma:g} is "
            f"narrower than the grid spacing {spacing:g}"
        )
    k = spec.half_width(spacing)
    offsets = np.arange(-k, k + 1) * spacing
    w = np.asarray(kernel_value(spec, offsets))
    if spec.order % 2 == 1:
        w = (w - w[::-1]) / 2.0
    else:
        w = (w + w[::-1]) / 2.0
    if spec.order == 0:
        target = 1.0 / spacing
        w = w / (math.fsum(w) * spacing)
        w[k] += target - math.fsum(w)
    return w
