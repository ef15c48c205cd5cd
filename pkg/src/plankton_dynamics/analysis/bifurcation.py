"""Neimark-Sacker detection and the normal-form computation of the first Lyapunov quantity.

Pipeline for theta as the bifurcation parameter:

1. solve q(u) = 1 together with theta = Psi_h(u) for (theta0, u~);
2. eigenvalues of the Jacobian under theta = theta0 + theta* and the
   derivative of their modulus at theta* = 0;
3. Taylor coefficients of the map shifted to the fixed point;
4. change of basis T to the real canonical rotation and the quadratic and
   cubic coefficients of the transformed system;
5. the discriminating quantity L; L < 0 gives an attracting invariant curve.
"""
from enum import Enum
from typing import List, Optional, Tuple
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from plankton_dynamics.analysis.model import BaseParams, ModelParams, psi_unchecked
from plankton_dynamics.analysis.roots import scan_roots
from plankton_dynamics.analysis.values import ComplexValue
from plankton_dynamics.utils.config import C02Form, Config, NumericalTolerances
from plankton_dynamics.utils.errors import InvalidParametersError, NumericalFailureError
from plankton_dynamics.utils.logger import StructuredLogger

logger = StructuredLogger(__name__)


class CurveStability(str, Enum):
    ATTRACTING = 'attracting'
    REPELLING = 'repelling'


class NSPoint(BaseModel):
    """Bifurcation point (theta0, u~, v~ = 1 - u~) for the parameters in `base`."""
    model_config = ConfigDict(frozen=True)

    theta0: float
    u_tilde: float
    v_tilde: float
    base: BaseParams

    @model_validator(mode='after')
    def _check_point(self) -> 'NSPoint':
        if not 0.0 < self.u_tilde < 1.0:
            raise ValueError(f"u_tilde must lie in (0, 1), got {self.u_tilde}")
        if self.v_tilde != 1.0 - self.u_tilde:
            raise ValueError("v_tilde must equal 1 - u_tilde")
        return self

    @property
    def params(self) -> ModelParams:
        return self.base.with_theta(self.theta0)

    @property
    def denominator(self) -> float:
        return 1.0 + self.base.c * self.u_tilde ** self.base.h


class TaylorCoeffs(BaseModel):
    """Nonzero coefficients of the map shifted to the fixed point, up to third order.

    x' = a10 x + a01 y + a20 x^2 + a11 x y
    y' = b10 x + b01 y + b20 x^2 + b11 x y + b21 x^2 y + b30 x^3
    """
    model_config = ConfigDict(frozen=True)

    a10: float
    a01: float
    a20: float
    a11: float
    b10: float
    b01: float
    b20: float
    b11: float
    b21: float
    b30: float


class NormalFormCoeffs(BaseModel):
    """Quadratic and cubic coefficients of F (c_ij) and G (d_ij) in the rotated basis."""
    model_config = ConfigDict(frozen=True)

    s: float
    c20: float
    c11: float
    c02: float
    c30: float
    c21: float
    c12: float
    c03: float
    d20: float
    d11: float
    d02: float
    d30: float
    d21: float
    d12: float
    d03: float


class NSReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    ns_point: NSPoint
    eigenvalues: Tuple[ComplexValue, ComplexValue]
    a0: float
    d_modulus_dtheta: float
    L20: ComplexValue
    L11: ComplexValue
    L02: ComplexValue
    L21: ComplexValue
    L_quantity: float
    curve_stability: CurveStability
    nonresonant: bool
    nondegenerate: bool
    c02_form: C02Form = 'reference'
    taylor: Optional[TaylorCoeffs] = None
    normal_form: Optional[NormalFormCoeffs] = None

    @model_validator(mode='after')
    def _check_stability(self) -> 'NSReport':
        expected = CurveStability.ATTRACTING if self.L_quantity < 0.0 else CurveStability.REPELLING
        if self.curve_stability is not expected:
            raise ValueError("curve_stability must be attracting exactly when L_quantity < 0")
        return self


def ns_residual(u, base: BaseParams):
    """Psi_h(u) minus the theta that puts q(u) = 1; vectorized over u."""
    h, c, beta = base.h, base.c, base.beta
    theta_q = (beta - 1.0 / (1.0 - u)) * (1.0 + c * u ** h) ** 2 / (h * u ** (h - 1))
    return psi_unchecked(u, beta, base.r, c, h) - theta_q


def find_ns_points(
    base: BaseParams,
    tolerances: Optional[NumericalTolerances] = None
) -> List[NSPoint]:
    """All admissible solutions of q(u) = 1, theta = Psi_h(u), ascending in u."""
    if base.beta <= base.r:
        raise InvalidParametersError(f"Neimark-Sacker analysis needs beta > r (beta={base.beta}, r={base.r})")
    tol = tolerances or Config.get_tolerances()
    lo = base.r / base.beta + tol.interval_margin
    hi = 1.0 - tol.interval_margin
    roots = scan_roots(lambda u: ns_residual(u, base), lo, hi, tol.ns_grid_points, tol)

    points = []
    for u in roots:
        theta0 = float(psi_unchecked(u, base.beta, base.r, base.c, base.h))
        if theta0 <= 0.0:
            continue
        if base.h == 1 and theta0 >= base.psi_at_one:
            continue
        points.append(NSPoint(theta0=theta0, u_tilde=u, v_tilde=1.0 - u, base=base))
    logger.info("Neimark-Sacker scan complete", found=len(points), h=base.h, beta=base.beta, c=base.c)
    return points


def solve_ns_point(
    beta: float,
    r: float,
    c: float,
    h: int,
    index: int = 0,
    tolerances: Optional[NumericalTolerances] = None
) -> Optional[NSPoint]:
    """The index-th bifurcation point (smallest u~ by default), or None when there is none."""
    base = BaseParams(beta=beta, r=r, c=c, h=h)
    points = find_ns_points(base, tolerances)
    if index >= len(points):
        return None
    return points[index]


def _a_b(ns_point: NSPoint, theta_star: float) -> Tuple[float, float]:
    u, h, c = ns_point.u_tilde, ns_point.base.h, ns_point.base.c
    denom = ns_point.denominator
    uh = u ** h
    a = 2.0 - u - theta_star * uh / denom
    b = 1.0 - theta_star * uh * (1.0 - u) * (1.0 + h + c * uh) / denom ** 2
    return a, b


def perturbed_eigenvalues(ns_point: NSPoint, theta_star: float = 0.0) -> Tuple[complex, complex]:
    """Eigenvalues under theta = theta0 + theta*; the first has negative imaginary part."""
    a, b = _a_b(ns_point, theta_star)
    disc = 4.0 * b - a * a
    if disc <= 0.0:
        raise NumericalFailureError(
            f"real eigenvalues at theta*={theta_star} (4b - a^2 = {disc:.3e}); outside the Neimark-Sacker regime"
        )
    root = math.sqrt(disc)
    return complex(a / 2.0, -root / 2.0), complex(a / 2.0, root / 2.0)


def transversality(ns_point: NSPoint) -> float:
    """d|lambda|/d theta* at theta* = 0; always negative."""
    u, h, c = ns_point.u_tilde, ns_point.base.h, ns_point.base.c
    uh = u ** h
    return -uh * (1.0 - u) * (1.0 + h + c * uh) / (2.0 * ns_point.denominator ** 2)


def taylor_coefficients(ns_point: NSPoint) -> TaylorCoeffs:
    u, h, c, beta = ns_point.u_tilde, ns_point.base.h, ns_point.base.c, ns_point.base.beta
    theta = ns_point.theta0
    uh = u ** h
    denom = ns_point.denominator
    b11 = beta - h * theta * u ** (h - 1) / denom ** 2
    b21 = h * theta * u ** (h - 2) * (denom + h * (c * uh - 1.0)) / (2.0 * denom ** 3)
    b30 = (
        -h * theta * (1.0 - u) * u ** (h - 3)
        * (2.0 * denom ** 2 + 3.0 * h * (c * c * uh * uh - 1.0) + h * h * (1.0 - 4.0 * c * uh + c * c * uh * uh))
        / (6.0 * denom ** 4)
    )
    return TaylorCoeffs(
        a10=1.0 - u,
        a01=-u,
        a20=-1.0,
        a11=-1.0,
        b10=(1.0 - u) * b11,
        b01=1.0,
        b20=(1.0 - u) * b21,
        b11=b11,
        b21=b21,
        b30=b30,
    )


def transformation_matrix(ns_point: NSPoint) -> Tuple[np.ndarray, np.ndarray]:
    """T and its inverse; T^-1 J T is the rotation [[(2 - u)/2, -s/2], [s/2, (2 - u)/2]]."""
    u = ns_point.u_tilde
    s = math.sqrt(4.0 * u - u * u)
    t = np.array([[s / 2.0, -u / 2.0], [0.0, 1.0]])
    t_inv = np.array([[2.0 / s, u / s], [0.0, 1.0]])
    return t, t_inv


def normal_form(ns_point: NSPoint, tc: TaylorCoeffs, c02_form: Optional[C02Form] = None) -> NormalFormCoeffs:
    """Coefficients of F and G after the change of variables (x, y) = T (X, Y).

    c02_form='reference' keeps b21 in the Y^2 coefficient of F, as in the
    published closed form; 'similarity' uses b11, which is what T^-1 h(T X)
    gives exactly.
    """
    form = c02_form or Config.get_c02_form()
    u = ns_point.u_tilde
    s = math.sqrt(4.0 * u - u * u)
    b20, b11, b21, b30 = tc.b20, tc.b11, tc.b21, tc.b30
    c02_coeff = b21 if form == 'reference' else b11
    return NormalFormCoeffs(
        s=s,
        c20=s * (b20 * u - 2.0) / 4.0,
        c11=(2.0 * u - 2.0 + u * (b11 - b20 * u)) / 2.0,
        c02=(2.0 * u * (2.0 - u) + u * u * (b20 * u - 2.0 * c02_coeff)) / (4.0 * s),
        c30=s * s * b30 * u / 8.0,
        c21=s * u * (2.0 * b21 - 3.0 * b30 * u) / 8.0,
        c12=u * u * (3.0 * b30 * u - 4.0 * b21) / 8.0,
        c03=u ** 3 * (2.0 * b21 - b30 * u) / (8.0 * s),
        d20=b20 * s * s / 4.0,
        d11=s * (b11 - b20 * u) / 2.0,
        d02=u * (b20 * u - 2.0 * b11) / 4.0,
        d30=b30 * s ** 3 / 8.0,
        d21=s * s * (2.0 * b21 - 3.0 * b30 * u) / 8.0,
        d12=s * u * (3.0 * b30 * u - 4.0 * b21) / 8.0,
        d03=u * u * (2.0 * b21 - b30 * u) / 8.0,
    )


def _is_nonresonant(lam: complex, margin: float) -> bool:
    return all(abs(lam ** m - 1.0) > margin for m in range(1, 5))


def lyapunov_quantity(
    ns_point: NSPoint,
    nf: NormalFormCoeffs,
    taylor: Optional[TaylorCoeffs] = None,
    c02_form: Optional[C02Form] = None,
    tolerances: Optional[NumericalTolerances] = None
) -> NSReport:
    """L20, L11, L02, L21 and the discriminating quantity L from the normal-form coefficients."""
    tol = tolerances or Config.get_tolerances()
    lam_1, lam_2 = perturbed_eigenvalues(ns_point, 0.0)

    f_xx, f_xy, f_yy = 2.0 * nf.c20, nf.c11, 2.0 * nf.c02
    f_xxx, f_xxy, f_xyy, f_yyy = 6.0 * nf.c30, 2.0 * nf.c21, 2.0 * nf.c12, 6.0 * nf.c03
    g_xx, g_xy, g_yy = 2.0 * nf.d20, nf.d11, 2.0 * nf.d02
    g_xxx, g_xxy, g_xyy, g_yyy = 6.0 * nf.d30, 2.0 * nf.d21, 2.0 * nf.d12, 6.0 * nf.d03

    l20 = complex(f_xx - f_yy + 2.0 * g_xy, g_xx - g_yy - 2.0 * f_xy) / 8.0
    l11 = complex(f_xx + f_yy, g_xx + g_yy) / 4.0
    l02 = complex(f_xx - f_yy - 2.0 * g_xy, g_xx - g_yy + 2.0 * f_xy) / 8.0
    l21 = complex(f_xxx + f_xyy + g_xxy + g_yyy, g_xxx + g_xyy - f_xxy - f_yyy) / 16.0

    # multiplier of the canonical rotation [[alpha, -omega], [omega, alpha]], omega > 0
    rot = lam_2
    rot_bar = lam_1
    quantity = (
        -(((1.0 - 2.0 * rot) * rot_bar ** 2 / (1.0 - rot)) * l11 * l20).real
        - 0.5 * abs(l11) ** 2
        - abs(l02) ** 2
        + (rot_bar * l21).real
    )

    nonresonant = _is_nonresonant(lam_1, tol.nonresonance_margin)
    stability = CurveStability.ATTRACTING if quantity < 0.0 else CurveStability.REPELLING
    logger.info(
        "Lyapunov quantity computed",
        theta0=ns_point.theta0,
        u_tilde=ns_point.u_tilde,
        L=quantity,
        curve=stability.value,
    )
    return NSReport(
        ns_point=ns_point,
        eigenvalues=(ComplexValue.of(lam_1), ComplexValue.of(lam_2)),
        a0=_a_b(ns_point, 0.0)[0],
        d_modulus_dtheta=transversality(ns_point),
        L20=ComplexValue.of(l20),
        L11=ComplexValue.of(l11),
        L02=ComplexValue.of(l02),
        L21=ComplexValue.of(l21),
        L_quantity=quantity,
        curve_stability=stability,
        nonresonant=nonresonant,
        nondegenerate=nonresonant and quantity != 0.0,
        c02_form=c02_form or Config.get_c02_form(),
        taylor=taylor,
        normal_form=nf,
    )


class NeimarkSackerAnalyzer:
    """Runs the full bifurcation pipeline for one (beta, r, c, h)."""

    def __init__(
        self,
        tolerances: Optional[NumericalTolerances] = None,
        c02_form: Optional[C02Form] = None
    ):
        self.tolerances = tolerances or Config.get_tolerances()
        self.c02_form: C02Form = c02_form or Config.get_c02_form()

    def find_points(self, base: BaseParams) -> List[NSPoint]:
        return find_ns_points(base, self.tolerances)

    def report_for(self, ns_point: NSPoint) -> NSReport:
        taylor = taylor_coefficients(ns_point)
        nf = normal_form(ns_point, taylor, self.c02_form)
        return lyapunov_quantity(ns_point, nf, taylor, self.c02_form, self.tolerances)

    def analyze(self, beta: float, r: float, c: float, h: int, index: int = 0) -> NSReport:
        """Report for the index-th bifurcation point; raises when it does not exist."""
        ns_point = solve_ns_point(beta, r, c, h, index, self.tolerances)
        if ns_point is None:
            logger.warning("No Neimark-Sacker point", beta=beta, r=r, c=c, h=h, index=index)
            raise NumericalFailureError(
                f"no Neimark-Sacker point #{index} for beta={beta}, r={r}, c={c}, h={h}"
            )
        return self.report_for(ns_point)
