"""End-to-end detection: smooth, extract extrema, test, threshold.

The four steps are: differential kernel smoothing of the observed
sequence, extraction of strict local maxima and minima of the result,
p-values for their heights from the null extremum-height distribution, and
step-up selection of the significant subset at the requested FDR level.
"""

import math
from dataclasses import dataclass, replace

from .detect import find_local_extrema, smooth_derivative
from .errors import InvalidParameterError, MomentEstimationError
from .inference import (
    SpectralMoments,
    assign_pvalues,
    closed_form_moments,
    estimate_moments_empirical,
)
from .kernels import GAUSSIAN_CUTOFF, KernelSpec
from .multitest import BHOutcome, bh_select, with_height_threshold
from .signals import NoiseModel, TimeSeries


@dataclass(frozen=True)
class DetectionResult:
    """Candidate extrema with p-values, the selection outcome, and context.

    ``extrema`` is the full candidate list in positional order;
    ``outcome.rejected`` indexes into it.  ``interior`` is the half-open
    index range of the input where candidates were eligible.  ``moments``
    is None only when the candidate set is empty and no moment source was
    available.
    """

    extrema: tuple
    moments: SpectralMoments
    outcome: BHOutcome
    gamma: float
    alpha: float
    interior: tuple

    @property
    def significant(self) -> tuple:
        return tuple(self.extrema[i] for i in self.outcome.rejected)

    @property
    def n_candidates(self) -> int:
        return len(self.extrema)


def detect_change_points(
    series: TimeSeries,
    gamma: float,
    alpha: float,
    moments: SpectralMoments = None,
    noise_model: NoiseModel = None,
    trim: float = 0.1,
    cutoff: float = GAUSSIAN_CUTOFF,
) -> DetectionResult:
    """Run the full detector on one sequence.

    The null moments come from, in order of precedence: ``moments`` given
    directly; the closed form for a known ``noise_model``; otherwise a
    trimmed empirical estimate from the sequence itself.  A sequence with
    no candidate extrema (for example a constant) is handled cleanly even
    when its moments cannot be estimated: the result carries no moments
    and an empty significant set.
    """
    if moments is not None and noise_model is not None:
        raise InvalidParameterError("pass either moments or noise_model, not both")
    dy = smooth_derivative(series, KernelSpec(gamma=gamma, order=1, cutoff=cutoff))
    extrema = find_local_extrema(dy)
    if moments is None:
        if noise_model is not None:
            moments = closed_form_moments(noise_model, gamma)
        else:
            try:
                moments = estimate_moments_empirical(series, gamma, trim=trim, cutoff=cutoff)
            except MomentEstimationError:
                if extrema:
                    raise
    extrema = assign_pvalues(extrema, moments) if moments is not None else []
    outcome = bh_select([e.p_value for e in extrema], alpha)
    if moments is not None:
        outcome = with_height_threshold(outcome, moments)
    else:
        outcome = replace(outcome, u_threshold=-math.inf)
    return DetectionResult(
        extrema=tuple(extrema),
        moments=moments,
        outcome=outcome,
        gamma=gamma,
        alpha=alpha,
        interior=dy.interior,
    )
