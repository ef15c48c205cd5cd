"""Orbit iteration, bifurcation-diagram sweeps over theta and maximum Lyapunov exponents."""
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Tuple
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.spatial.distance import pdist

from plankton_dynamics.analysis.model import (
    BaseParams,
    ModelParams,
    PlanktonState,
    is_finite_state,
    jacobian_entries,
    map_components,
)
from plankton_dynamics.utils.config import Config, NumericalTolerances
from plankton_dynamics.utils.errors import InvalidParametersError, NumericalFailureError
from plankton_dynamics.utils.logger import StructuredLogger

logger = StructuredLogger(__name__)

DEFAULT_TANGENT = (1.0 / math.sqrt(2.0), 1.0 / math.sqrt(2.0))


class OrbitSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    initial: PlanktonState
    steps: int = Field(gt=0)
    transient: int = Field(default=0, ge=0)
    record_every: int = Field(default=1, gt=0)

    @model_validator(mode='after')
    def _check_transient(self) -> 'OrbitSpec':
        if self.transient >= self.steps:
            raise ValueError(f"transient ({self.transient}) must be smaller than steps ({self.steps})")
        return self

    @property
    def recorded_count(self) -> int:
        return (self.steps - self.transient) // self.record_every

    @classmethod
    def default(cls, initial: PlanktonState) -> 'OrbitSpec':
        protocol = Config.get_orbit_protocol()
        return cls(
            initial=initial,
            steps=protocol.steps,
            transient=protocol.transient,
            record_every=protocol.record_every,
        )


class OrbitResult(BaseModel):
    """Recorded post-transient states; `step` holds the iteration index of each."""
    model_config = ConfigDict(frozen=True)

    step: List[int]
    u: List[float]
    v: List[float]
    diverged: bool = False
    left_quadrant: bool = False
    steps_completed: int

    @property
    def states(self) -> List[PlanktonState]:
        return [PlanktonState.unchecked(u, v) for u, v in zip(self.u, self.v)]

    def __len__(self) -> int:
        return len(self.u)


class SweepResult(BaseModel):
    """Bifurcation-diagram data: per-theta attractor samples and Lyapunov exponents."""
    model_config = ConfigDict(frozen=True, ser_json_inf_nan='constants')

    theta_grid: List[float]
    samples: List[List[Tuple[float, float]]]
    mle: List[float]
    diverged: List[bool]

    @model_validator(mode='after')
    def _check_grid(self) -> 'SweepResult':
        if any(b <= a for a, b in zip(self.theta_grid[:-1], self.theta_grid[1:])):
            raise ValueError("theta_grid must be strictly increasing")
        if not len(self.samples) == len(self.mle) == len(self.diverged) == len(self.theta_grid):
            raise ValueError("one samples/mle/diverged entry per theta is required")
        return self

    def diameters(self) -> np.ndarray:
        """Largest pairwise distance among each column's samples."""
        out = np.zeros(len(self.theta_grid))
        for i, column in enumerate(self.samples):
            if len(column) >= 2:
                out[i] = float(pdist(np.asarray(column, dtype=float)).max())
        return out


class MLEResult(BaseModel):
    model_config = ConfigDict(frozen=True, ser_json_inf_nan='constants')

    params: ModelParams
    spec: OrbitSpec
    tangent: Tuple[float, float]
    mle: float


def iterate_orbit(
    params: ModelParams,
    spec: OrbitSpec,
    tolerances: Optional[NumericalTolerances] = None
) -> OrbitResult:
    """Apply the map spec.steps times, recording every record_every-th state after the transient.

    Stops early with diverged=True once |u| or |v| exceeds the divergence bound.
    """
    bound = (tolerances or Config.get_tolerances()).divergence_bound
    u, v = spec.initial.u, spec.initial.v
    steps: List[int] = []
    us: List[float] = []
    vs: List[float] = []
    left = False
    diverged = False
    n = 0
    for n in range(1, spec.steps + 1):
        u, v = map_components(params, u, v)
        if not is_finite_state(u, v, bound):
            diverged = True
            logger.warning("Orbit diverged", step=n, theta=params.theta, u=u, v=v)
            break
        if u < 0.0 or v < 0.0:
            left = True
        if n > spec.transient and (n - spec.transient) % spec.record_every == 0:
            steps.append(n)
            us.append(u)
            vs.append(v)
    return OrbitResult(step=steps, u=us, v=vs, diverged=diverged, left_quadrant=left, steps_completed=n)


def _tangent_step(params: ModelParams, u: float, v: float, du: float, dv: float) -> Tuple[float, float, float]:
    j11, j12, j21, j22 = jacobian_entries(params, u, v)
    nu = j11 * du + j12 * dv
    nv = j21 * du + j22 * dv
    norm = math.hypot(nu, nv)
    if norm == 0.0:
        return 0.0, 0.0, 0.0
    return nu / norm, nv / norm, norm


def _orbit_with_exponent(
    params: ModelParams,
    spec: OrbitSpec,
    keep: int,
    tangent: Tuple[float, float],
    bound: float
) -> Tuple[List[Tuple[float, float]], float, bool]:
    """One pass: kept samples, MLE over post-transient steps, divergence flag."""
    u, v = spec.initial.u, spec.initial.v
    norm0 = math.hypot(*tangent)
    du, dv = tangent[0] / norm0, tangent[1] / norm0
    recorded: deque = deque(maxlen=keep)
    log_sum = 0.0
    counted = 0
    collapsed = False
    for n in range(1, spec.steps + 1):
        if not collapsed:
            du, dv, growth = _tangent_step(params, u, v, du, dv)
            if growth == 0.0:
                collapsed = True
            elif n > spec.transient:
                log_sum += math.log(growth)
                counted += 1
        u, v = map_components(params, u, v)
        if not is_finite_state(u, v, bound):
            logger.warning("Sweep column diverged", step=n, theta=params.theta)
            return list(recorded), math.nan, True
        if n > spec.transient and (n - spec.transient) % spec.record_every == 0:
            recorded.append((u, v))
    if collapsed:
        return list(recorded), -math.inf, False
    return list(recorded), log_sum / counted, False


def max_lyapunov_exponent(
    params: ModelParams,
    spec: OrbitSpec,
    tangent: Optional[Tuple[float, float]] = None,
    tolerances: Optional[NumericalTolerances] = None
) -> float:
    """Average log growth of a renormalized tangent vector over the post-transient steps.

    Returns -inf when the tangent vector is annihilated.
    """
    bound = (tolerances or Config.get_tolerances()).divergence_bound
    tangent = tangent or DEFAULT_TANGENT
    if math.hypot(*tangent) == 0.0:
        raise InvalidParametersError("initial tangent vector must be nonzero")
    _, mle, diverged = _orbit_with_exponent(params, spec, 1, tangent, bound)
    if diverged:
        raise NumericalFailureError(f"orbit diverged at theta={params.theta}; Lyapunov exponent undefined")
    return mle


def _sweep_column(job: Tuple[ModelParams, OrbitSpec, int, float]) -> Tuple[List[Tuple[float, float]], float, bool]:
    params, spec, keep, bound = job
    return _orbit_with_exponent(params, spec, keep, DEFAULT_TANGENT, bound)


def bifurcation_sweep(
    params_base: BaseParams,
    theta_min: float,
    theta_max: float,
    grid_n: int,
    spec: OrbitSpec,
    keep: int,
    workers: Optional[int] = None,
    tolerances: Optional[NumericalTolerances] = None
) -> SweepResult:
    """Iterate the orbit for each theta of a uniform grid and keep the last `keep` states.

    params_base supplies beta, r, c and h (a ModelParams works; its theta is ignored).
    Columns may run in worker processes; the result is always in grid order.
    """
    if not 0.0 < theta_min < theta_max:
        raise InvalidParametersError(f"need 0 < theta_min < theta_max, got [{theta_min}, {theta_max}]")
    if grid_n < 2:
        raise InvalidParametersError(f"grid_n must be at least 2, got {grid_n}")
    if not 0 < keep <= spec.recorded_count:
        raise InvalidParametersError(f"keep must be in 1..{spec.recorded_count}, got {keep}")

    bound = (tolerances or Config.get_tolerances()).divergence_bound
    workers = workers or Config.SWEEP_WORKERS
    grid = np.linspace(theta_min, theta_max, grid_n)
    jobs = [(params_base.with_theta(float(theta)), spec, keep, bound) for theta in grid]

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            columns = list(pool.map(_sweep_column, jobs))
    else:
        columns = [_sweep_column(job) for job in jobs]

    logger.info("Sweep complete", columns=grid_n, theta_min=theta_min, theta_max=theta_max, workers=workers)
    return SweepResult(
        theta_grid=[float(t) for t in grid],
        samples=[col[0] for col in columns],
        mle=[col[1] for col in columns],
        diverged=[col[2] for col in columns],
    )
