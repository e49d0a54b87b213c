"""Differential smoothing and extraction of candidate extrema.

A change point of the piecewise-constant mean turns into a signed bump of
the smoothed derivative, so candidate change points are the strict local
maxima and minima of the derivative-smoothed sequence.  Candidates are
restricted to the interior where the full kernel support fits inside the
data, which avoids partial-kernel bias at the boundaries.
"""

from dataclasses import dataclass

import numpy as np

from .errors import BandwidthTooLargeError, InvalidParameterError
from .kernels import KernelSpec, kernel_weights
from .signals import TimeSeries


@dataclass(frozen=True)
class Extremum:
    """A strict local extremum of the smoothed derivative.

    ``index`` is the integer grid location t of the sample (unit grid),
    ``height`` the derivative value there, ``sign`` +1 for a maximum and
    -1 for a minimum.  ``p_value`` is filled by the inference step.
    """

    index: int
    height: float
    sign: int
    p_value: float = None


def convolve_weights(values: np.ndarray, weights: np.ndarray, spacing: float = 1.0) -> np.ndarray:
    """Centered discrete convolution with a symmetric or antisymmetric kernel.

    Equivalent to ``spacing * convolve(values, weights, mode='same')`` but
    accumulated in symmetric pairs, so exactly antisymmetric weights yield
    exactly zero output wherever the input is locally constant.  Entries
    within half a kernel of either end use zero padding and are only
    meaningful inside the interior range.
    """
    n = len(values)
    k = (len(weights) - 1) // 2
    if len(weights) != 2 * k + 1:
        raise InvalidParameterError("weights must have odd length")
    center = weights[k]
    antisymmetric = np.array_equal(weights[::-1], -weights)
    out = np.zeros(n)
    if center != 0.0:
        out += center * values
    for j in range(1, min(k, n - 1) + 1):
        right = weights[k + j]
        term = np.zeros(n)
        if antisymmetric:
            # w[j]*y[t-j] + w[-j]*y[t+j] = w[j]*(y[t-j] - y[t+j])
            term[j:] = values[: n - j]
            term[: n - j] -= values[j:]
            out += right * term
        else:
            term[j:] = values[: n - j]
            term[: n - j] += values[j:]
            out += right * term
    return out * spacing


def smooth(series: TimeSeries, spec: KernelSpec) -> TimeSeries:
    """Convolve a series with the sampled kernel derivative weights.

    The output has the same length and grid as the input and carries the
    half-open interior range where the kernel's full support fit.  Raises
    if the series is shorter than the kernel.
    """
    weights = kernel_weights(spec, series.spacing)
    n = len(series)
    if n < len(weights):
        raise BandwidthTooLargeError(
            f"series of length {n} is shorter than the kernel ({len(weights)} samples)"
        )
    k = (len(weights) - 1) // 2
    out = convolve_weights(series.values, weights, series.spacing)
    return TimeSeries(out, series.spacing, series.origin, interior=(k, n - k))


def smooth_derivative(series: TimeSeries, spec: KernelSpec) -> TimeSeries:
    """First-derivative smoothing; requires a kernel spec with order 1."""
    if spec.order != 1:
        raise InvalidParameterError("smooth_derivative requires a kernel of order 1")
    return smooth(series, spec)


def find_local_extrema(dy: TimeSeries) -> list:
    """Strict local maxima and minima of ``dy`` inside its interior range.

    A plateau of equal values flanked by strictly smaller (larger) values
    is reported once, at its leftmost point, as a maximum (minimum).
    Exact-zero segments never produce extrema, so a constant input yields
    none.  Both flanking values must lie inside the interior, hence no
    extremum is reported within the boundary margin.
    """
    if dy.spacing != 1.0:
        raise InvalidParameterError("extrema detection requires unit spacing")
    base = int(round(dy.origin))
    if base != dy.origin:
        raise InvalidParameterError("extrema detection requires an integer origin")
    sl = dy.interior_slice()
    seg = dy.values[sl]
    if len(seg) < 3:
        return []
    # run-length encode so plateaus collapse to a single candidate
    starts = np.concatenate(([0], np.flatnonzero(seg[1:] != seg[:-1]) + 1))
    run_values = seg[starts]
    mid, left, right = run_values[1:-1], run_values[:-2], run_values[2:]
    nonzero = mid != 0.0
    is_max = nonzero & (mid > left) & (mid > right)
    is_min = nonzero & (mid < left) & (mid < right)
    hits = np.flatnonzero(is_max | is_min)
    signs = np.where(is_max[hits], 1, -1)
    offset = base + sl.start
    return [
        Extremum(index=offset + int(starts[r + 1]), height=float(run_values[r + 1]), sign=int(s))
        for r, s in zip(hits, signs)
    ]
