"""Phytoplankton-zooplankton map with Holling type II/III toxin liberation.

Every formula reused downstream lives here: the map itself, its Jacobian,
the fixed-point characteristic function Psi_h and the determinant q(u) of
the Jacobian along the interior fixed-point curve v = 1 - u.
"""
from typing import Literal, Tuple, Union
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from plankton_dynamics.utils.errors import InvalidParametersError

Number = Union[float, np.ndarray]


class BaseParams(BaseModel):
    """Parameters without the toxin liberation rate theta."""
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    beta: float = Field(gt=0, description='conversion efficiency')
    r: float = Field(gt=0, description='zooplankton mortality')
    c: float = Field(gt=0, description='saturation constant')
    h: Literal[1, 2] = Field(description='Holling exponent')

    def with_theta(self, theta: float) -> 'ModelParams':
        return ModelParams(beta=self.beta, r=self.r, theta=theta, c=self.c, h=self.h)

    @property
    def psi_at_one(self) -> float:
        """Limit of Psi_h as u -> 1, equal to (1 + c)(beta - r)."""
        return (1.0 + self.c) * (self.beta - self.r)


class ModelParams(BaseParams):
    """The full parameter tuple (beta, r, theta, c, h)."""

    theta: float = Field(gt=0, description='toxin liberation rate')

    def base(self) -> BaseParams:
        return BaseParams(beta=self.beta, r=self.r, c=self.c, h=self.h)


class PlanktonState(BaseModel):
    """A point (u, v) of the population plane."""
    model_config = ConfigDict(frozen=True)

    u: float = Field(ge=0, description='phytoplankton density')
    v: float = Field(ge=0, description='zooplankton density')

    @classmethod
    def unchecked(cls, u: float, v: float) -> 'PlanktonState':
        """Build a state without the nonnegativity check (map images, diverging orbits)."""
        return cls.model_construct(u=float(u), v=float(v))

    @property
    def is_nonnegative(self) -> bool:
        return self.u >= 0.0 and self.v >= 0.0

    def as_tuple(self) -> Tuple[float, float]:
        return (self.u, self.v)


def holling(u: Number, c: float, h: int) -> Number:
    """Toxin liberation response u^h / (1 + c u^h)."""
    uh = u ** h
    return uh / (1.0 + c * uh)


def map_components(params: ModelParams, u: Number, v: Number) -> Tuple[Number, Number]:
    """Image of (u, v); accepts floats or numpy arrays of equal shape."""
    uh = u ** params.h
    u_next = u * (2.0 - u) - u * v
    v_next = params.beta * u * v + (1.0 - params.r) * v - params.theta * uh * v / (1.0 + params.c * uh)
    return u_next, v_next


def evaluate_map(params: ModelParams, s: PlanktonState) -> PlanktonState:
    """One step of the map. Negative images are returned as-is, never clamped."""
    u_next, v_next = map_components(params, s.u, s.v)
    return PlanktonState.unchecked(u_next, v_next)


def jacobian_entries(params: ModelParams, u: float, v: float) -> Tuple[float, float, float, float]:
    """Row-major Jacobian entries (j11, j12, j21, j22) at (u, v)."""
    h = params.h
    denom = 1.0 + params.c * u ** h
    j11 = 2.0 - 2.0 * u - v
    j12 = -u
    j21 = params.beta * v - params.theta * h * u ** (h - 1) * v / denom ** 2
    j22 = params.beta * u + 1.0 - params.r - params.theta * u ** h / denom
    return j11, j12, j21, j22


def jacobian(params: ModelParams, s: PlanktonState) -> np.ndarray:
    j11, j12, j21, j22 = jacobian_entries(params, s.u, s.v)
    return np.array([[j11, j12], [j21, j22]], dtype=float)


def psi_unchecked(u: Number, beta: float, r: float, c: float, h: int) -> Number:
    """Psi_h(u) = (beta u - r)(1 + c u^h) / u^h without domain checks.

    At u = 1 this is the limit value (1 + c)(beta - r).
    """
    uh = u ** h
    return (beta * u - r) * (1.0 + c * uh) / uh


def psi(params: BaseParams, u: float) -> float:
    """Characteristic function of the interior fixed points: theta = Psi_h(u).

    Only beta, r, c and h are read, so a ModelParams works as well.
    Negative whenever u < r / beta and unbounded below as u -> 0+.
    """
    if not 0.0 < u < 1.0:
        raise InvalidParametersError(f"Psi_h is defined on (0, 1), got u={u!r}")
    return float(psi_unchecked(u, params.beta, params.r, params.c, params.h))


def psi2_derivative_numerator(u: Number, beta: float, r: float, c: float) -> Number:
    """f(u) = beta c u^3 - beta u + 2r, so that Psi_2'(u) = f(u) / u^3."""
    return beta * c * u ** 3 - beta * u + 2.0 * r


def characteristic_q(params: ModelParams, u: float) -> float:
    """q(u) = 1 - u + u(1 - u)(beta - theta h u^(h-1) / (1 + c u^h)^2)."""
    h = params.h
    denom = 1.0 + params.c * u ** h
    slope = params.beta - params.theta * h * u ** (h - 1) / denom ** 2
    return 1.0 - u + u * (1.0 - u) * slope


def characteristic_p(u: float) -> float:
    return 2.0 - u


def interior_state(u: float) -> PlanktonState:
    """Interior fixed points lie on v = 1 - u."""
    return PlanktonState(u=u, v=1.0 - u)


def is_finite_state(u: float, v: float, bound: float) -> bool:
    return math.isfinite(u) and math.isfinite(v) and abs(u) <= bound and abs(v) <= bound
