"""Spectral moments of the smoothed noise and p-values for extremum heights.

Under the null the derivative-smoothed noise is a smooth stationary
Gaussian process, and the height of one of its local maxima has a known
distribution driven entirely by three variances: those of the first,
second and third derivatives of the smoothed noise.  The moments come
either in closed form (Gaussian autocorrelation model) or from trimmed
empirical variances of the observed smoothed derivatives.
"""

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.special import ndtr, ndtri

from .detect import smooth
from .errors import InvalidParameterError, MomentEstimationError
from .kernels import KernelSpec, GAUSSIAN_CUTOFF
from .signals import NoiseModel, TimeSeries

_SQRT_PI = math.sqrt(math.pi)
_SQRT_2PI = math.sqrt(2.0 * math.pi)
_TINY = np.finfo(float).tiny


def _phi(x):
    return np.exp(-0.5 * np.square(x)) / _SQRT_2PI


@dataclass(frozen=True)
class SpectralMoments:
    """Variances of the first three derivatives of the smoothed noise.

    ``delta = var_d1*var_d3 - var_d2**2`` must be strictly positive, which
    holds for any non-degenerate process smooth enough to have all three
    derivatives (strict Cauchy-Schwarz).
    """

    var_d1: float
    var_d2: float
    var_d3: float
    delta: float = field(init=False)

    def __post_init__(self) -> None:
        if not (self.var_d1 > 0 and self.var_d2 > 0 and self.var_d3 > 0):
            raise InvalidParameterError("derivative variances must be positive")
        delta = self.var_d1 * self.var_d3 - self.var_d2 ** 2
        if not delta > 0:
            raise InvalidParameterError(
                f"degenerate spectral moments: delta = {delta:g} is not positive"
            )
        object.__setattr__(self, "delta", delta)

    @property
    def sd_d1(self) -> float:
        """Standard deviation of the smoothed derivative itself."""
        return math.sqrt(self.var_d1)


def closed_form_moments(model: NoiseModel, gamma: float) -> SpectralMoments:
    """Exact moments for Gaussian-autocorrelation noise under a Gaussian kernel.

    Smoothing noise of correlation scale ``nu`` with a Gaussian kernel of
    bandwidth ``gamma`` gives a Gaussian-shaped combined kernel of scale
    ``xi = sqrt(gamma^2 + nu^2)``; the variance of its k-th derivative is
    ``(2k-1)!! * sigma^2 / (2^(k+1) sqrt(pi) xi^(2k+1))``.
    """
    if not gamma > 0:
        raise InvalidParameterError("gamma must be positive")
    xi = math.hypot(gamma, model.nu)
    s2 = model.sigma ** 2
    return SpectralMoments(
        var_d1=s2 / (4.0 * _SQRT_PI * xi ** 3),
        var_d2=3.0 * s2 / (8.0 * _SQRT_PI * xi ** 5),
        var_d3=15.0 * s2 / (16.0 * _SQRT_PI * xi ** 7),
    )


def trim_correction(trim: float) -> float:
    """Variance retained by a standard normal after discarding the top
    ``trim`` fraction by absolute value (used to de-bias trimmed variances)."""
    if not 0.0 <= trim < 0.5:
        raise InvalidParameterError("trim fraction must lie in [0, 0.5)")
    if trim == 0.0:
        return 1.0
    c = ndtri(1.0 - trim / 2.0)
    return 1.0 - 2.0 * c * float(_phi(c)) / (1.0 - trim)


def _trimmed_variance(x: np.ndarray, trim: float) -> float:
    n = len(x)
    if trim == 0.0:
        return float(np.mean(np.square(x)))
    drop = int(math.ceil(trim * n))
    kept = np.sort(np.abs(x))[: n - drop]
    return float(np.mean(np.square(kept))) / trim_correction(trim)


def estimate_moments_empirical(
    series: TimeSeries,
    gamma: float,
    trim: float = 0.1,
    cutoff: float = GAUSSIAN_CUTOFF,
) -> SpectralMoments:
    """Estimate the spectral moments from the observed sequence itself.

    Computes the order-1, 2 and 3 smoothed derivatives and estimates each
    variance by a trimmed second moment: the ``ceil(trim*n)`` samples of
    largest absolute value are discarded and the mean square of the rest is
    rescaled by the trimmed-normal variance factor, so the estimator is
    unbiased under a pure-noise sequence.  Trimming suppresses the extreme
    derivative values that change points produce, without assuming their
    presence or location.
    """
    if not 0.0 <= trim < 0.5:
        raise InvalidParameterError("trim fraction must lie in [0, 0.5)")
    variances = []
    for order in (1, 2, 3):
        d = smooth(series, KernelSpec(gamma=gamma, order=order, cutoff=cutoff))
        seg = d.values[d.interior_slice()]
        if len(seg) < 100:
            raise InvalidParameterError(
                f"interior too short for moment estimation ({len(seg)} samples)"
            )
        variances.append(_trimmed_variance(seg, trim))
    if min(variances) <= 0.0:
        raise MomentEstimationError("smoothed derivatives vanish; cannot estimate moments")
    v1, v2, v3 = variances
    if v1 * v3 - v2 ** 2 <= 0.0:
        raise MomentEstimationError(
            "estimated moments are inconsistent (nonpositive determinant)"
        )
    return SpectralMoments(var_d1=v1, var_d2=v2, var_d3=v3)


def peak_height_tail(u, moments: SpectralMoments):
    """Right-tail probability of the height of a null local maximum.

    For a smooth stationary Gaussian process with derivative variances
    ``(var_d1, var_d2, var_d3)``, the probability that a local maximum
    exceeds height ``u`` is

        Q(u*sqrt(var_d3/delta))
        + sqrt(2*pi*var_d2^2/(var_d3*var_d1)) * phi(u/sd)
          * Phi(u*var_d2/(sd*sqrt(delta)))

    with ``sd = sqrt(var_d1)`` and ``Q`` the standard normal survival
    function.  Strictly decreasing, with limits 1 and 0 at -inf/+inf.
    Accepts scalars or arrays; results are clipped into (0, 1] so extreme
    heights never round to an exact zero p-value.
    """
    u = np.asarray(u, dtype=float)
    sd = moments.sd_d1
    sqrt_delta = math.sqrt(moments.delta)
    tail = ndtr(-u * math.sqrt(moments.var_d3) / sqrt_delta)
    coef = _SQRT_2PI * moments.var_d2 / math.sqrt(moments.var_d3 * moments.var_d1)
    bump = coef * _phi(u / sd) * ndtr(u * moments.var_d2 / (sd * sqrt_delta))
    out = np.clip(tail + bump, _TINY, 1.0)
    if out.ndim == 0:
        return float(out)
    return out


def invert_peak_height_tail(p: float, moments: SpectralMoments) -> float:
    """Height ``u`` with ``peak_height_tail(u) == p``, by bracketed bisection.

    ``p == 1`` maps to ``-inf``.  The bracket starts at ten derivative
    standard deviations and grows geometrically until it straddles the
    target; bisection then converges well below 1e-12 in probability.
    """
    if not 0.0 < p <= 1.0:
        raise InvalidParameterError("target probability must lie in (0, 1]")
    if p == 1.0:
        return -math.inf
    sd = moments.sd_d1
    lo, hi = -10.0 * sd, 10.0 * sd
    for _ in range(200):
        if peak_height_tail(lo, moments) >= p:
            break
        lo *= 2.0
    for _ in range(200):
        if peak_height_tail(hi, moments) <= p:
            break
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if peak_height_tail(mid, moments) > p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def assign_pvalues(extrema, moments: SpectralMoments) -> list:
    """Attach a p-value to every extremum.

    Maxima are tested against the right tail at their height; minima
    against the right tail at the negated height, by sign symmetry of the
    noise process.
    """
    if not extrema:
        return []
    signed = np.array([e.sign * e.height for e in extrema])
    p = np.atleast_1d(peak_height_tail(signed, moments))
    return [replace(e, p_value=float(pi)) for e, pi in zip(extrema, p)]
