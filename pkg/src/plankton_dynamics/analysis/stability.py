"""Fixed-point classification from the characteristic polynomial.

The characteristic polynomial of the Jacobian is F(lambda) = lambda^2 - p lambda + q.
Root location inside/outside the unit circle is decided from F(1), F(-1)
and the constant term; eigenvalues are computed only as a cross-check.
"""
from enum import Enum
from typing import List, Optional, Tuple
import cmath

import numpy as np
from pydantic import BaseModel, ConfigDict

from plankton_dynamics.analysis.fixed_points import (
    FixedPointKind,
    FixedPointRecord,
    FixedPointReport,
    boundary_fixed_points,
    fixed_point_report,
)
from plankton_dynamics.analysis.model import (
    ModelParams,
    characteristic_p,
    characteristic_q,
    psi,
)
from plankton_dynamics.analysis.values import ComplexValue, StabilityLabel
from plankton_dynamics.utils.config import Config, NumericalTolerances
from plankton_dynamics.utils.errors import InvalidParametersError
from plankton_dynamics.utils.logger import StructuredLogger

logger = StructuredLogger(__name__)

__all__ = [
    'RootCase',
    'RootLocation',
    'StabilityLabel',
    'ClassificationReport',
    'quadratic_root_location',
    'label_from_location',
    'eigenvalue_label',
    'characteristic_data',
    'classify_boundary',
    'classify_interior',
    'classify_all',
    'classified_fixed_points',
]


class RootCase(str, Enum):
    """Location of the roots of lambda^2 + B lambda + C relative to the unit circle."""
    BOTH_INSIDE = 'both_inside'
    ONE_ROOT_MINUS1 = 'one_root_minus1'
    INSIDE_OUTSIDE = 'inside_outside'
    BOTH_OUTSIDE = 'both_outside'
    CONJUGATE_UNIT = 'conjugate_unit'
    DOUBLE_MINUS1 = 'double_minus1'
    ROOT_AT_1_OTHER_INSIDE = 'root_at_1_other_inside'
    ROOT_AT_1_OTHER_ON = 'root_at_1_other_on'
    ROOT_AT_1_OTHER_OUTSIDE = 'root_at_1_other_outside'
    ROOT_GT1_OTHER_LT_MINUS1 = 'root_gt1_other_lt_minus1'
    ROOT_GT1_OTHER_EQ_MINUS1 = 'root_gt1_other_eq_minus1'
    ROOT_GT1_OTHER_INSIDE = 'root_gt1_other_inside'


class RootLocation(BaseModel):
    model_config = ConfigDict(frozen=True)

    case: RootCase
    b: float
    c: float
    roots: Tuple[ComplexValue, ComplexValue]


class ClassificationReport(BaseModel):
    """Labels of the boundary and interior fixed points for one parameter set."""
    model_config = ConfigDict(frozen=True)

    params: ModelParams
    origin: FixedPointRecord
    boundary_u1: FixedPointRecord
    interior: List[FixedPointRecord]


_CASE_LABELS = {
    RootCase.BOTH_INSIDE: StabilityLabel.ATTRACTIVE,
    RootCase.BOTH_OUTSIDE: StabilityLabel.REPELLING,
    RootCase.ROOT_GT1_OTHER_LT_MINUS1: StabilityLabel.REPELLING,
    RootCase.INSIDE_OUTSIDE: StabilityLabel.SADDLE,
    RootCase.ROOT_GT1_OTHER_INSIDE: StabilityLabel.SADDLE,
}


def _quadratic_roots(b: float, c: float) -> Tuple[complex, complex]:
    sq = cmath.sqrt(b * b - 4.0 * c)
    return (-b - sq) / 2.0, (-b + sq) / 2.0


def quadratic_root_location(
    b: float,
    c: float,
    tolerances: Optional[NumericalTolerances] = None
) -> RootLocation:
    """Root-location case for F(lambda) = lambda^2 + b lambda + c."""
    tol = (tolerances or Config.get_tolerances()).equality
    f_plus = 1.0 + b + c
    f_minus = 1.0 - b + c

    if abs(f_plus) < tol:
        # one root is 1, so the other equals the product c
        if abs(abs(c) - 1.0) < tol:
            case = RootCase.ROOT_AT_1_OTHER_ON
        elif abs(c) < 1.0:
            case = RootCase.ROOT_AT_1_OTHER_INSIDE
        else:
            case = RootCase.ROOT_AT_1_OTHER_OUTSIDE
    elif f_plus > 0.0:
        if abs(f_minus) < tol:
            case = RootCase.DOUBLE_MINUS1 if abs(b - 2.0) < tol else RootCase.ONE_ROOT_MINUS1
        elif f_minus < 0.0:
            case = RootCase.INSIDE_OUTSIDE
        elif abs(c - 1.0) < tol and -2.0 < b < 2.0:
            case = RootCase.CONJUGATE_UNIT
        elif c < 1.0:
            case = RootCase.BOTH_INSIDE
        else:
            case = RootCase.BOTH_OUTSIDE
    else:
        if abs(f_minus) < tol:
            case = RootCase.ROOT_GT1_OTHER_EQ_MINUS1
        elif f_minus < 0.0:
            case = RootCase.ROOT_GT1_OTHER_LT_MINUS1
        else:
            case = RootCase.ROOT_GT1_OTHER_INSIDE

    lam1, lam2 = _quadratic_roots(b, c)
    return RootLocation(case=case, b=b, c=c, roots=(ComplexValue.of(lam1), ComplexValue.of(lam2)))


def label_from_location(location: RootLocation) -> StabilityLabel:
    return _CASE_LABELS.get(location.case, StabilityLabel.NONHYPERBOLIC)


def eigenvalue_label(matrix: np.ndarray, tolerances: Optional[NumericalTolerances] = None) -> StabilityLabel:
    """Label straight from eigenvalue moduli; the oracle for the (p, q) route."""
    tol = (tolerances or Config.get_tolerances()).equality
    moduli = np.abs(np.linalg.eigvals(np.asarray(matrix, dtype=float)))
    if np.any(np.abs(moduli - 1.0) < tol):
        return StabilityLabel.NONHYPERBOLIC
    if np.all(moduli < 1.0):
        return StabilityLabel.ATTRACTIVE
    if np.all(moduli > 1.0):
        return StabilityLabel.REPELLING
    return StabilityLabel.SADDLE


def characteristic_data(
    params: ModelParams,
    u_star: float,
    tolerances: Optional[NumericalTolerances] = None
) -> Tuple[float, float]:
    """(p, q) = (trace, determinant) of the Jacobian at the interior fixed point (u*, 1 - u*)."""
    tol = tolerances or Config.get_tolerances()
    residual = psi(params, u_star) - params.theta
    if abs(residual) >= tol.fixed_point_check:
        raise InvalidParametersError(
            f"u*={u_star} is not an interior fixed point (Psi_h(u*) - theta = {residual:.3e})"
        )
    return characteristic_p(u_star), characteristic_q(params, u_star)


def classify_boundary(
    params: ModelParams,
    tolerances: Optional[NumericalTolerances] = None
) -> Tuple[StabilityLabel, StabilityLabel]:
    """Labels of (0, 0) and (1, 0)."""
    tol = (tolerances or Config.get_tolerances()).equality

    if abs(params.r - 2.0) < tol:
        origin = StabilityLabel.NONHYPERBOLIC
    elif params.r < 2.0:
        origin = StabilityLabel.SADDLE
    else:
        origin = StabilityLabel.REPELLING

    lower = (params.beta - params.r) * (1.0 + params.c)
    upper = (2.0 + params.beta - params.r) * (1.0 + params.c)
    theta = params.theta
    if abs(theta - lower) < tol or abs(theta - upper) < tol:
        u1 = StabilityLabel.NONHYPERBOLIC
    elif lower < theta < upper:
        u1 = StabilityLabel.ATTRACTIVE
    else:
        u1 = StabilityLabel.SADDLE
    return origin, u1


def classify_interior(
    params: ModelParams,
    record: FixedPointRecord,
    tolerances: Optional[NumericalTolerances] = None
) -> StabilityLabel:
    """Label of an interior fixed point from F(1) = 1 - p + q, F(-1) = 1 + p + q and q."""
    if record.kind is not FixedPointKind.INTERIOR:
        raise InvalidParametersError(f"classify_interior needs an interior record, got {record.kind.value}")
    p, q = characteristic_data(params, record.point.u, tolerances)
    location = quadratic_root_location(-p, q, tolerances)
    return label_from_location(location)


def classify_all(
    params: ModelParams,
    tolerances: Optional[NumericalTolerances] = None
) -> ClassificationReport:
    origin, boundary_u1 = boundary_fixed_points(params)
    label_origin, label_u1 = classify_boundary(params, tolerances)
    report = classified_fixed_points(params, tolerances)
    logger.info(
        "Classified fixed points",
        theta=params.theta,
        origin=label_origin.value,
        boundary_u1=label_u1.value,
        interior=[p.label.value for p in report.points],
    )
    return ClassificationReport(
        params=params,
        origin=origin.with_label(label_origin),
        boundary_u1=boundary_u1.with_label(label_u1),
        interior=report.points,
    )


def classified_fixed_points(
    params: ModelParams,
    tolerances: Optional[NumericalTolerances] = None
) -> FixedPointReport:
    """Fixed-point report with every interior record labeled."""
    report = fixed_point_report(params, tolerances)
    labeled = [p.with_label(classify_interior(params, p, tolerances)) for p in report.points]
    return report.model_copy(update={'points': labeled})
