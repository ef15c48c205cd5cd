"""Existence, counting and location of fixed points for both Holling cases."""
from enum import Enum
from typing import List, Optional, Tuple
import math

from pydantic import BaseModel, ConfigDict, model_validator

from plankton_dynamics.analysis.model import (
    BaseParams,
    ModelParams,
    PlanktonState,
    characteristic_p,
    characteristic_q,
    interior_state,
    jacobian_entries,
    psi2_derivative_numerator,
    psi_unchecked,
)
from plankton_dynamics.analysis.roots import bisect_root
from plankton_dynamics.analysis.values import StabilityLabel
from plankton_dynamics.utils.config import Config, NumericalTolerances
from plankton_dynamics.utils.errors import InvalidParametersError
from plankton_dynamics.utils.logger import StructuredLogger

logger = StructuredLogger(__name__)

NO_POSITIVE_FIXED_POINT = 'no-positive-fixed-point'
NO_MATCHING_SUBCASE = 'no-matching-subcase'


class FixedPointKind(str, Enum):
    ORIGIN = 'origin'
    BOUNDARY_U1 = 'boundary_u1'
    INTERIOR = 'interior'


class FixedPointRecord(BaseModel):
    """A fixed point with its characteristic data (trace p, determinant q)."""
    model_config = ConfigDict(frozen=True)

    point: PlanktonState
    kind: FixedPointKind
    label: Optional[StabilityLabel] = None
    char_p: Optional[float] = None
    char_q: Optional[float] = None
    branch: Optional[str] = None  # 'E' (h=1) or 'E-', 'E0', 'E+' (h=2)
    tangent: bool = False

    @model_validator(mode='after')
    def _check_interior(self) -> 'FixedPointRecord':
        if self.kind is FixedPointKind.INTERIOR:
            if not 0.0 < self.point.u < 1.0:
                raise ValueError(f"interior fixed point needs u in (0, 1), got {self.point.u}")
            if self.point.v != 1.0 - self.point.u:
                raise ValueError("interior fixed point must satisfy v = 1 - u")
        return self

    def with_label(self, label: StabilityLabel) -> 'FixedPointRecord':
        return self.model_copy(update={'label': label})


class CubicRoots(BaseModel):
    """Critical points of Psi_2 in (0, 1), i.e. roots of f(u) = beta c u^3 - beta u + 2r."""
    model_config = ConfigDict(frozen=True)

    u_hat_1: Optional[float] = None
    u_hat_2: Optional[float] = None

    @model_validator(mode='after')
    def _check_order(self) -> 'CubicRoots':
        if self.u_hat_2 is not None and (self.u_hat_1 is None or not self.u_hat_1 < self.u_hat_2):
            raise ValueError("u_hat_2 requires u_hat_1 < u_hat_2")
        return self

    @property
    def roots(self) -> List[float]:
        return [u for u in (self.u_hat_1, self.u_hat_2) if u is not None]


class FixedPointReport(BaseModel):
    """Interior fixed points of one parameter set, with the existence count."""
    model_config = ConfigDict(frozen=True)

    params: ModelParams
    count: int
    case_label: str
    critical_points: Optional[CubicRoots] = None
    points: List[FixedPointRecord]


def _boundary_record(kind: FixedPointKind, point: PlanktonState, params: Optional[ModelParams]) -> FixedPointRecord:
    if params is None:
        return FixedPointRecord(point=point, kind=kind)
    j11, j12, j21, j22 = jacobian_entries(params, point.u, point.v)
    return FixedPointRecord(
        point=point,
        kind=kind,
        char_p=j11 + j22,
        char_q=j11 * j22 - j12 * j21,
    )


def boundary_fixed_points(params: Optional[ModelParams] = None) -> List[FixedPointRecord]:
    """(0, 0) and (1, 0), fixed for every parameter set.

    With params the records also carry trace and determinant of the Jacobian.
    """
    return [
        _boundary_record(FixedPointKind.ORIGIN, PlanktonState(u=0.0, v=0.0), params),
        _boundary_record(FixedPointKind.BOUNDARY_U1, PlanktonState(u=1.0, v=0.0), params),
    ]


def interior_record(
    params: ModelParams,
    u: float,
    branch: Optional[str] = None,
    tangent: bool = False
) -> FixedPointRecord:
    return FixedPointRecord(
        point=interior_state(u),
        kind=FixedPointKind.INTERIOR,
        char_p=characteristic_p(u),
        char_q=characteristic_q(params, u),
        branch=branch,
        tangent=tangent,
    )


def interior_fixed_point_h1(params: ModelParams) -> Optional[FixedPointRecord]:
    """Unique positive fixed point of the Holling II map, or None when it does not exist."""
    if params.h != 1:
        raise InvalidParametersError("interior_fixed_point_h1 requires h=1")
    beta, r, theta, c = params.beta, params.r, params.theta, params.c
    if beta <= r or theta >= (beta - r) * (1.0 + c):
        return None
    disc = (beta - r * c - theta) ** 2 + 4.0 * r * c * beta
    u_bar = (r * c + theta - beta + math.sqrt(disc)) / (2.0 * c * beta)
    return interior_record(params, u_bar, branch='E')


def psi2_critical_points(
    params: BaseParams,
    tolerances: Optional[NumericalTolerances] = None
) -> CubicRoots:
    """Locate the roots of f in (0, 1) by sign changes at 0, 1/sqrt(3c) and 1."""
    if params.h != 2:
        raise InvalidParametersError("psi2_critical_points requires h=2")
    if params.beta <= params.r:
        raise InvalidParametersError("psi2_critical_points requires beta > r")
    beta, r, c = params.beta, params.r, params.c

    def f(u: float) -> float:
        return float(psi2_derivative_numerator(u, beta, r, c))

    nodes = [0.0]
    u_min = 1.0 / math.sqrt(3.0 * c)
    if u_min < 1.0:
        nodes.append(u_min)
    nodes.append(1.0)

    roots = []
    for a, b in zip(nodes[:-1], nodes[1:]):
        fa, fb = f(a), f(b)
        if fa * fb < 0.0:
            roots.append(bisect_root(f, a, b, tolerances))
    if not roots:
        return CubicRoots()
    if len(roots) == 1:
        return CubicRoots(u_hat_1=roots[0])
    return CubicRoots(u_hat_1=roots[0], u_hat_2=roots[1])


def _theorem_subcase(params: ModelParams, crit: CubicRoots, tol: float) -> str:
    """Subcase label from the literal inequalities of the three-point existence theorem."""
    beta, r, c, theta = params.beta, params.r, params.c, params.theta
    psi_one = params.psi_at_one
    psi_hat_1 = psi_unchecked(crit.u_hat_1, beta, r, c, 2) if crit.u_hat_1 is not None else None
    psi_hat_2 = psi_unchecked(crit.u_hat_2, beta, r, c, 2) if crit.u_hat_2 is not None else None
    k = (beta - 2.0 * r) / beta

    def near(value: Optional[float]) -> bool:
        return value is not None and abs(theta - value) < tol

    def below_max(value: Optional[float]) -> bool:
        return value is not None and psi_one < theta < value

    if c <= 1.0 / 3.0:
        if c >= k and theta < psi_one:
            return 'i.1'
        if c < k and near(psi_hat_1):
            return 'i.2'
        if c < k and below_max(psi_hat_1):
            return 'i.3'
        return NO_MATCHING_SUBCASE

    upper = beta ** 2 / (27.0 * r ** 2)
    if c >= upper and theta < psi_one:
        return 'ii.1'
    if c <= k and near(psi_hat_1):
        return 'ii.2'
    if c < k and below_max(psi_hat_1):
        return 'ii.3'
    if k < c < upper and (near(psi_hat_1) or near(psi_hat_2)):
        return 'ii.4'
    if k < c < upper and psi_hat_1 is not None and psi_hat_2 is not None and psi_hat_2 < theta < psi_hat_1:
        return 'ii.5'
    return NO_MATCHING_SUBCASE


def _branch_of(u: float, crit: CubicRoots) -> str:
    if crit.u_hat_1 is None or u < crit.u_hat_1:
        return 'E-'
    if crit.u_hat_2 is None or u < crit.u_hat_2:
        return 'E0'
    return 'E+'


def _psi2_roots(
    params: ModelParams,
    crit: CubicRoots,
    tol: NumericalTolerances
) -> List[Tuple[float, bool]]:
    """Roots of Psi_2(u) - theta on the monotone segments of (r/beta, 1), with tangent flags."""
    beta, r, c, theta = params.beta, params.r, params.c, params.theta

    def g(u: float) -> float:
        return float(psi_unchecked(u, beta, r, c, 2)) - theta

    left = r / beta + tol.interval_margin
    inner = [u for u in crit.roots if left < u < 1.0]
    nodes = [left] + inner + [1.0]
    values = [g(u) for u in nodes]
    tangent = [False] + [abs(val) < tol.equality for val in values[1:-1]] + [False]
    # theta on Psi_2(1) puts the crossing at u = 1, outside the open interval
    if abs(values[-1]) < tol.equality:
        values[-1] = 0.0

    roots: List[Tuple[float, bool]] = [(u, True) for u, t in zip(nodes, tangent) if t]
    for i in range(len(nodes) - 1):
        if tangent[i] or tangent[i + 1]:
            continue
        if values[i] * values[i + 1] < 0.0:
            roots.append((bisect_root(g, nodes[i], nodes[i + 1], tol), False))
    return sorted(roots)


def count_positive_fixed_points(
    params: ModelParams,
    tolerances: Optional[NumericalTolerances] = None
) -> Tuple[int, str]:
    """Number of positive fixed points of the Holling III map and its existence subcase.

    The count comes from the monotone-segment analysis of Psi_2; the label
    is the literal subcase ('i.1' ... 'ii.5') or 'no-matching-subcase' when
    the inequalities leave a gap.
    """
    if params.h != 2:
        raise InvalidParametersError("count_positive_fixed_points requires h=2")
    if params.beta <= params.r:
        return 0, NO_POSITIVE_FIXED_POINT
    tol = tolerances or Config.get_tolerances()
    crit = psi2_critical_points(params, tol)
    count = len(_psi2_roots(params, crit, tol))
    label = _theorem_subcase(params, crit, tol.equality)
    logger.debug("Counted positive fixed points", count=count, subcase=label, theta=params.theta)
    return count, label


def find_positive_fixed_points(
    params: ModelParams,
    tolerances: Optional[NumericalTolerances] = None
) -> List[FixedPointRecord]:
    """Interior fixed points in ascending u, labeled E (h=1) or E-, E0, E+ (h=2)."""
    if params.beta <= params.r:
        return []
    if params.h == 1:
        record = interior_fixed_point_h1(params)
        return [record] if record is not None else []

    tol = tolerances or Config.get_tolerances()
    crit = psi2_critical_points(params, tol)
    records = []
    for u, is_tangent in _psi2_roots(params, crit, tol):
        if is_tangent:
            branch = 'E-' if u == crit.u_hat_1 else 'E+'
            logger.info("Tangent fixed point", u=u, theta=params.theta)
        else:
            branch = _branch_of(u, crit)
        records.append(interior_record(params, u, branch=branch, tangent=is_tangent))
    return records


def fixed_point_report(
    params: ModelParams,
    tolerances: Optional[NumericalTolerances] = None
) -> FixedPointReport:
    """Count and locate the interior fixed points (labels are filled by the stability module)."""
    points = find_positive_fixed_points(params, tolerances)
    if params.h == 2:
        count, label = count_positive_fixed_points(params, tolerances)
        crit = psi2_critical_points(params, tolerances) if params.beta > params.r else None
    else:
        count = len(points)
        label = 'unique' if points else NO_POSITIVE_FIXED_POINT
        crit = None
    return FixedPointReport(params=params, count=count, case_label=label, critical_points=crit, points=points)
