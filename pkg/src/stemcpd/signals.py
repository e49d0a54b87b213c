"""Piecewise-constant ground-truth signals and stationary Gaussian noise.

The observation model is a step signal plus zero-mean stationary Gaussian
noise, sampled on the unit grid t = 1..length.  Noise is built by
convolving an i.i.d. standard normal sequence with a Gaussian density of
scale ``nu`` (white noise when ``nu`` is zero), which makes the smoothed
process differentiable enough for the extremum height theory to apply.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import GridMismatchError, InvalidParameterError

_SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """A uniformly sampled real-valued sequence.

    Sample ``i`` sits at grid location ``origin + i*spacing``.  The unit
    grid with ``origin=1`` (locations 1..n) is the convention used by the
    detector, the simulator and the CLI.  ``interior`` is a half-open index
    range marking where a smoothing kernel's full support fit inside the
    data; it is attached by the smoothing step and is None otherwise.
    """

    values: np.ndarray
    spacing: float = 1.0
    origin: float = 1.0
    interior: tuple = None

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if values.ndim != 1:
            raise InvalidParameterError("values must be one-dimensional")
        if not np.all(np.isfinite(values)):
            raise InvalidParameterError("values must be finite")
        if not self.spacing > 0:
            raise InvalidParameterError("spacing must be positive")

    def __len__(self) -> int:
        return len(self.values)

    def grid(self) -> np.ndarray:
        """Grid locations of all samples."""
        return self.origin + self.spacing * np.arange(len(self.values))

    def interior_slice(self) -> slice:
        if self.interior is None:
            return slice(0, len(self.values))
        return slice(self.interior[0], self.interior[1])


@dataclass(frozen=True)
class NoiseModel:
    """Stationary Gaussian noise: white noise of scale ``sigma`` convolved
    with a Gaussian density of scale ``nu`` (``nu=0`` means white noise)."""

    sigma: float
    nu: float

    def __post_init__(self) -> None:
        if not self.sigma > 0:
            raise InvalidParameterError("sigma must be positive")
        if self.nu < 0:
            raise InvalidParameterError("nu must be non-negative")


@dataclass(frozen=True)
class PiecewiseSignal:
    """Ground truth: jump locations and sizes of a piecewise-constant mean.

    ``jumps`` is an ordered tuple of ``(location, size)`` pairs with
    strictly increasing locations and nonzero sizes.  The sampled domain is
    t = 1..length; a jump at location v means the mean changes between the
    samples at v-1 and v (the sample at v is on the new level).  An empty
    jump tuple describes a flat signal for null experiments.
    """

    jumps: tuple
    length: int

    def __post_init__(self) -> None:
        jumps = tuple((float(v), float(a)) for v, a in self.jumps)
        object.__setattr__(self, "jumps", jumps)
        if self.length <= 0:
            raise InvalidParameterError("length must be positive")
        locs = [v for v, _ in jumps]
        if any(b <= a for a, b in zip(locs, locs[1:])):
            raise InvalidParameterError("jump locations must be strictly increasing")
        if any(a == 0.0 for _, a in jumps):
            raise InvalidParameterError("jump sizes must be nonzero")

    @property
    def locations(self) -> np.ndarray:
        return np.array([v for v, _ in self.jumps], dtype=float)

    @property
    def sizes(self) -> np.ndarray:
        return np.array([a for _, a in self.jumps], dtype=float)

    @property
    def n_jumps(self) -> int:
        return len(self.jumps)

    def min_separation(self) -> float:
        locs = self.locations
        if len(locs) < 2:
            return math.inf
        return float(np.min(np.diff(locs)))

    def sample(self) -> TimeSeries:
        """Evaluate the step signal on the unit grid t = 1..length."""
        t = np.arange(1, self.length + 1, dtype=float)
        mu = np.zeros(self.length)
        for v, a in self.jumps:
            mu[t >= v] += a
        return TimeSeries(mu)


def make_staircase(jump: float, separation: int, length: int) -> PiecewiseSignal:
    """Staircase signal stepping by ``jump`` every ``separation`` samples.

    Change points sit at every multiple of ``separation`` strictly inside
    the sampled domain (multiples equal to ``length`` are excluded: a jump
    at the final sample has no post-jump segment to detect).
    """
    if jump == 0.0:
        raise InvalidParameterError("jump size must be nonzero")
    separation = int(separation)
    if separation < 2:
        raise InvalidParameterError("separation must be at least 2")
    if length <= separation:
        raise InvalidParameterError("length must exceed separation")
    locations = np.arange(separation, length, separation)
    return PiecewiseSignal(tuple((float(v), float(jump)) for v in locations), length)


def noise_kernel(nu: float) -> np.ndarray:
    """Unit-spacing samples of the Gaussian density of scale ``nu``,
    truncated at four scales."""
    half = int(math.ceil(4.0 * nu))
    k = np.arange(-half, half + 1, dtype=float)
    return np.exp(-0.5 * (k / nu) ** 2) / (nu * _SQRT_2PI)


def sample_noise(model: NoiseModel, length: int, seed: int) -> TimeSeries:
    """Draw one realization of the noise process on the grid t = 1..length.

    White noise is drawn on a grid padded by four correlation scales on
    each side before convolution so the returned window is stationary
    throughout.  Output is a deterministic function of (model, length,
    seed); the generator is numpy's PCG64.
    """
    if length < 1:
        raise InvalidParameterError("length must be at least 1")
    rng = np.random.default_rng(seed)
    if model.nu == 0.0:
        return TimeSeries(model.sigma * rng.standard_normal(length))
    g = noise_kernel(model.nu)
    pad = (len(g) - 1) // 2
    e = rng.standard_normal(length + 2 * pad)
    z = model.sigma * np.convolve(e, g, mode="valid")
    return TimeSeries(z)


def compose(signal: PiecewiseSignal, noise: TimeSeries) -> TimeSeries:
    """Pointwise sum of the sampled signal and a noise realization."""
    if noise.spacing != 1.0 or noise.origin != 1.0:
        raise GridMismatchError("noise must live on the unit grid t = 1..length")
    if len(noise) != signal.length:
        raise GridMismatchError(
            f"noise length {len(noise)} does not match signal length {signal.length}"
        )
    return TimeSeries(signal.sample().values + noise.values)
