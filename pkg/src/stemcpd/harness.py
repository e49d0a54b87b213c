"""Replicated simulation grids measuring realized FDR and power.

Each replicate draws noise, overlays a staircase signal, runs the full
detector and scores it against the known change points at every requested
tolerance.  Replicate r uses the derived seed ``seed ^ r``, so any cell or
replicate range can be reproduced independently; aggregation runs in
replicate order so results are deterministic regardless of parallelism.
"""

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .errors import InvalidParameterError, StemcpdError
from .evaluation import EvalConfig, aggregate, classify
from .kernels import GAUSSIAN_CUTOFF
from .pipeline import DetectionResult, detect_change_points
from .signals import NoiseModel, PiecewiseSignal, compose, make_staircase, sample_noise

THREADS_ENV_VAR = "STEMCPD_THREADS"


@dataclass(frozen=True)
class SimulateRequest:
    """One simulation grid: jump sizes x bandwidths x tolerances.

    ``replications`` replicates are run per (jump, bandwidth) pair, indexed
    ``rep_start .. rep_start + replications - 1``; the detector runs once
    per replicate and is scored at every tolerance.  A jump size of zero
    requests a pure-noise (complete null) cell.
    """

    length: int = 12000
    separation: int = 100
    jumps: tuple = (1.0, 2.0, 3.0)
    gammas: tuple = tuple(float(g) for g in range(1, 11))
    tolerances: tuple = tuple(float(b) for b in range(2, 11))
    alpha: float = 0.05
    sigma: float = 1.0
    nu: float = 2.0
    replications: int = 500
    seed: int = 0
    rep_start: int = 0
    cutoff: float = GAUSSIAN_CUTOFF

    def __post_init__(self) -> None:
        if self.replications < 1:
            raise InvalidParameterError("replications must be at least 1")
        if self.rep_start < 0 or self.seed < 0:
            raise InvalidParameterError("seed and rep_start must be non-negative")
        for name in ("jumps", "gammas", "tolerances"):
            if not getattr(self, name):
                raise InvalidParameterError(f"{name} grid must be non-empty")
        if any(b <= 0 for b in self.tolerances):
            raise InvalidParameterError("tolerances must be positive")
        if any(g <= 0 for g in self.gammas):
            raise InvalidParameterError("bandwidths must be positive")

    def noise_model(self) -> NoiseModel:
        return NoiseModel(sigma=self.sigma, nu=self.nu)

    def truth(self, jump: float) -> PiecewiseSignal:
        if jump == 0.0:
            return PiecewiseSignal((), self.length)
        return make_staircase(jump, self.separation, self.length)


@dataclass(frozen=True)
class CellResult:
    """Aggregated realized FDR and power for one (jump, bandwidth,
    tolerance) cell."""

    jump: float
    gamma: float
    tolerance: float
    fdr: float
    fdr_se: float
    power: float
    power_se: float
    replications: int
    seed: int


def _check_threshold_equivalence(result: DetectionResult) -> None:
    """The step-up rejection set must coincide with the height-threshold
    selection; a mismatch would mean the tail inversion went wrong."""
    u = result.outcome.u_threshold
    by_height = tuple(
        i for i, e in enumerate(result.extrema) if e.sign * e.height > u
    )
    if by_height != result.outcome.rejected:
        raise StemcpdError(
            "p-value and height-threshold selections disagree "
            f"({len(result.outcome.rejected)} vs {len(by_height)} rejections)"
        )


def run_replicate(req: SimulateRequest, jump: float, gamma: float, rep: int) -> list:
    """One replicate of one (jump, bandwidth) pair, scored per tolerance."""
    model = req.noise_model()
    truth = req.truth(jump)
    noise = sample_noise(model, req.length, req.seed ^ rep)
    observed = compose(truth, noise)
    result = detect_change_points(
        observed, gamma, req.alpha, noise_model=model, cutoff=req.cutoff
    )
    _check_threshold_equivalence(result)
    detections = result.significant
    return [classify(detections, truth, EvalConfig(b)) for b in req.tolerances]


def _replicate_star(args) -> list:
    return run_replicate(*args)


def env_threads() -> int:
    """Parallelism cap from the environment (defaults to 1)."""
    raw = os.environ.get(THREADS_ENV_VAR, "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def run_simulation(req: SimulateRequest, threads: int = None) -> list:
    """Run the whole grid; one CellResult per (jump, gamma, tolerance).

    Cells appear in grid order (jumps outermost, tolerances innermost).
    With ``threads`` above 1 replicates run in a process pool; results are
    collected in replicate order, so output is independent of parallelism.
    """
    if threads is None:
        threads = env_threads()
    reps = range(req.rep_start, req.rep_start + req.replications)
    cells = []
    for jump in req.jumps:
        for gamma in req.gammas:
            tasks = [(req, jump, gamma, r) for r in reps]
            if threads > 1 and req.replications > 1:
                with ProcessPoolExecutor(max_workers=threads) as pool:
                    chunk = max(1, req.replications // (4 * threads))
                    per_rep = list(pool.map(_replicate_star, tasks, chunksize=chunk))
            else:
                per_rep = [run_replicate(*t) for t in tasks]
            for bi, b in enumerate(req.tolerances):
                agg = aggregate([row[bi] for row in per_rep])
                cells.append(
                    CellResult(
                        jump=jump,
                        gamma=gamma,
                        tolerance=b,
                        fdr=agg.fdr,
                        fdr_se=agg.fdr_se,
                        power=agg.power,
                        power_se=agg.power_se,
                        replications=req.replications,
                        seed=req.seed,
                    )
                )
    return cells
