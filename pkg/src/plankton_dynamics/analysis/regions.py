"""Nonnegativity of the zooplankton update, the trapping set M and global convergence."""
from enum import Enum
from math import comb, sqrt
from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from plankton_dynamics.analysis.fixed_points import psi2_critical_points
from plankton_dynamics.analysis.model import ModelParams, Number, PlanktonState, holling, psi_unchecked
from plankton_dynamics.utils.config import NumericalTolerances
from plankton_dynamics.utils.logger import StructuredLogger

logger = StructuredLogger(__name__)


class NonnegativityCondition(str, Enum):
    A = 'a'
    B = 'b'
    C = 'c'


class AttractorPrediction(str, Enum):
    ORIGIN = 'origin'
    BOUNDARY_U1 = 'boundary_u1'
    NOT_APPLICABLE = 'not_applicable'


class RegionM:
    """M = {0 <= u <= 1, 0 <= v <= 2 - u}."""

    @staticmethod
    def contains(s: PlanktonState) -> bool:
        return 0.0 <= s.u <= 1.0 and 0.0 <= s.v <= 2.0 - s.u

    def __contains__(self, s: PlanktonState) -> bool:
        return self.contains(s)


class BernsteinCoeffs(BaseModel):
    """Bernstein coefficients of psi(u) = beta c u^3 - (rc - c + theta) u^2 + beta u + 1 - r on [0, 1]."""
    model_config = ConfigDict(frozen=True)

    omega_0: float
    omega_1: float
    omega_2: float
    omega_3: float

    @property
    def values(self) -> Tuple[float, float, float, float]:
        return (self.omega_0, self.omega_1, self.omega_2, self.omega_3)

    @property
    def all_nonnegative(self) -> bool:
        return all(w >= 0.0 for w in self.values)


class NonnegativityReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    h: int
    holds: bool
    condition: Optional[NonnegativityCondition] = None  # Holling II only
    bernstein: Optional[BernsteinCoeffs] = None  # Holling III only
    verdict: str  # 'holds' or 'inconclusive'


class RegionsReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    params: ModelParams
    nonnegativity: NonnegativityReport
    psi_supremum: Optional[float] = None
    m_invariant: bool
    initial: Optional[PlanktonState] = None
    prediction: Optional[AttractorPrediction] = None


def v_update_factor(params: ModelParams, u: Number) -> Number:
    """Factor g(u) with v' = v g(u); works on floats and arrays."""
    return params.beta * u + 1.0 - params.r - params.theta * holling(u, params.c, params.h)


def vupdate_nonneg_h1(params: ModelParams) -> Tuple[bool, Optional[NonnegativityCondition]]:
    """First of the sufficient conditions (a), (b), (c) that makes v' >= 0 for h = 1."""
    beta, r, theta, c = params.beta, params.r, params.theta, params.c
    base = 1.0 + beta - r
    if 0.0 < r <= 1.0 and 0.0 < theta <= base:
        return True, NonnegativityCondition.A
    if 0.0 < r < 1.0 and base < theta <= base ** 2 / beta and c >= theta / base - 1.0:
        return True, NonnegativityCondition.B
    if 0.0 < r < 1.0 and theta > base ** 2 / beta and c >= (sqrt(beta) - sqrt(theta)) ** 2 / (1.0 - r):
        return True, NonnegativityCondition.C
    return False, None


def bernstein_coeffs_h2(params: ModelParams) -> Tuple[BernsteinCoeffs, bool]:
    """Bernstein coefficients of the h = 2 update cubic; all >= 0 is sufficient for v' >= 0."""
    beta, r, theta, c = params.beta, params.r, params.theta, params.c
    coeffs = BernsteinCoeffs(
        omega_0=1.0 - r,
        omega_1=beta / 3.0 + 1.0 - r,
        omega_2=(2.0 * beta - r * c + c - theta) / 3.0 + 1.0 - r,
        omega_3=(c + 1.0) * (1.0 - r + beta) - theta,
    )
    return coeffs, coeffs.all_nonnegative


def bernstein_polynomial(coeffs: BernsteinCoeffs, u: Number) -> np.ndarray:
    """Sum of omega_i C(3, i) u^i (1 - u)^(3 - i)."""
    u = np.asarray(u, dtype=float)
    return sum(w * comb(3, i) * u ** i * (1.0 - u) ** (3 - i) for i, w in enumerate(coeffs.values))


def nonnegativity_report(params: ModelParams) -> NonnegativityReport:
    if params.h == 1:
        holds, condition = vupdate_nonneg_h1(params)
        return NonnegativityReport(
            h=1, holds=holds, condition=condition, verdict='holds' if holds else 'inconclusive'
        )
    coeffs, holds = bernstein_coeffs_h2(params)
    return NonnegativityReport(
        h=2, holds=holds, bernstein=coeffs, verdict='holds' if holds else 'inconclusive'
    )


def psi_supremum(params: ModelParams, tolerances: Optional[NumericalTolerances] = None) -> Optional[float]:
    """sup of Psi_h over (0, 1]; None when beta <= r (Psi_h < 0 there)."""
    if params.beta <= params.r:
        return None
    value = params.psi_at_one
    if params.h == 2:
        crit = psi2_critical_points(params, tolerances)
        if crit.u_hat_1 is not None:
            # u_hat_1 is the local maximum of Psi_2
            value = max(value, float(psi_unchecked(crit.u_hat_1, params.beta, params.r, params.c, 2)))
    return value


def m_invariance_conditions(params: ModelParams, tolerances: Optional[NumericalTolerances] = None) -> bool:
    """Nonnegativity of v' together with v' <= v on M, so that M maps into itself."""
    if not nonnegativity_report(params).holds:
        return False
    if params.beta <= params.r:
        return True
    return params.theta >= psi_supremum(params, tolerances)


def global_attractor_prediction(
    params: ModelParams,
    s0: PlanktonState,
    tolerances: Optional[NumericalTolerances] = None
) -> AttractorPrediction:
    """Boundary fixed point every orbit from s0 in M converges to, when the invariance conditions hold."""
    if not m_invariance_conditions(params, tolerances) or not RegionM.contains(s0):
        return AttractorPrediction.NOT_APPLICABLE
    if s0.u == 0.0:
        return AttractorPrediction.ORIGIN
    return AttractorPrediction.BOUNDARY_U1


def regions_report(
    params: ModelParams,
    initial: Optional[PlanktonState] = None,
    tolerances: Optional[NumericalTolerances] = None
) -> RegionsReport:
    invariant = m_invariance_conditions(params, tolerances)
    prediction = global_attractor_prediction(params, initial, tolerances) if initial is not None else None
    logger.info("Region checks complete", theta=params.theta, m_invariant=invariant)
    return RegionsReport(
        params=params,
        nonnegativity=nonnegativity_report(params),
        psi_supremum=psi_supremum(params, tolerances),
        m_invariant=invariant,
        initial=initial,
        prediction=prediction,
    )
