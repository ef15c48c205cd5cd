"""Configuration management using Pydantic models."""
from typing import Literal
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError
import os

from plankton_dynamics.utils.errors import InvalidParametersError


C02Form = Literal['reference', 'similarity']
_C02_FORM: TypeAdapter[C02Form] = TypeAdapter(C02Form)


class NumericalTolerances(BaseModel):
    """Tolerances and grid sizes shared by the analysis modules."""
    model_config = ConfigDict(frozen=True)

    equality: float = Field(default=1e-9, gt=0)  # band for analytic threshold equalities
    bisection_xtol: float = Field(default=1e-14, gt=0, le=1e-12)
    bisection_maxiter: int = Field(default=200, ge=50)
    fixed_point_check: float = Field(default=1e-6, gt=0)
    interval_margin: float = Field(default=1e-9, gt=0)
    ns_grid_points: int = Field(default=10_000, ge=100)
    nonresonance_margin: float = Field(default=1e-6, gt=0)
    divergence_bound: float = Field(default=1e6, gt=0)


class OrbitProtocol(BaseModel):
    """Default iteration protocol for orbits, sweeps and Lyapunov exponents."""
    model_config = ConfigDict(frozen=True)

    steps: int = Field(default=10_000, gt=0)
    transient: int = Field(default=9_000, ge=0)
    record_every: int = Field(default=1, gt=0)
    keep: int = Field(default=200, gt=0)


class Config:
    """Application configuration."""

    SERVICE_NAME = os.environ.get('PLANKTON_SERVICE_NAME', 'plankton-dynamics')
    LOG_LEVEL = os.environ.get('PLANKTON_LOG_LEVEL', 'WARNING')

    # Sweep
    SWEEP_WORKERS = int(os.environ.get('PLANKTON_SWEEP_WORKERS', '1'))

    @classmethod
    def get_tolerances(cls) -> NumericalTolerances:
        """Get numerical tolerances from environment or defaults."""
        return NumericalTolerances(
            equality=float(os.environ.get('PLANKTON_EQUALITY_TOL', '1e-9')),
            bisection_xtol=float(os.environ.get('PLANKTON_BISECTION_XTOL', '1e-14')),
            bisection_maxiter=int(os.environ.get('PLANKTON_BISECTION_MAXITER', '200')),
            ns_grid_points=int(os.environ.get('PLANKTON_NS_GRID', '10000')),
            divergence_bound=float(os.environ.get('PLANKTON_DIVERGENCE_BOUND', '1e6')),
        )

    @classmethod
    def get_c02_form(cls) -> C02Form:
        """Closed form used for c02, from PLANKTON_NS_C02_FORM."""
        raw = os.environ.get('PLANKTON_NS_C02_FORM', 'reference')
        try:
            return _C02_FORM.validate_python(raw)
        except ValidationError as e:
            raise InvalidParametersError(
                f"PLANKTON_NS_C02_FORM must be 'reference' or 'similarity', got {raw!r}"
            ) from e

    @classmethod
    def get_orbit_protocol(cls) -> OrbitProtocol:
        """Get the default orbit protocol from environment or defaults."""
        return OrbitProtocol(
            steps=int(os.environ.get('PLANKTON_ORBIT_STEPS', '10000')),
            transient=int(os.environ.get('PLANKTON_ORBIT_TRANSIENT', '9000')),
            keep=int(os.environ.get('PLANKTON_SWEEP_KEEP', '200')),
        )
