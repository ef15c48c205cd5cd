"""Run configuration: flat key=value files merged with command-line flags."""
from pathlib import Path
from typing import Any, Dict, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from plankton_dynamics.analysis.model import BaseParams, ModelParams, PlanktonState
from plankton_dynamics.simulation.dynamics import OrbitSpec
from plankton_dynamics.utils.config import C02Form, Config
from plankton_dynamics.utils.errors import ConfigFileError, InvalidParametersError
from plankton_dynamics.utils.logger import StructuredLogger

logger = StructuredLogger(__name__)

OutputFormat = Literal['csv', 'json']


class RunConfig(BaseModel):
    """Every option a subcommand can read; keys match the flag names with '-' as '_'."""
    model_config = ConfigDict(frozen=True, extra='forbid')

    # model parameters
    beta: Optional[float] = Field(default=None, gt=0, allow_inf_nan=False)
    r: Optional[float] = Field(default=None, gt=0, allow_inf_nan=False)
    theta: Optional[float] = Field(default=None, gt=0, allow_inf_nan=False)
    c: Optional[float] = Field(default=None, gt=0, allow_inf_nan=False)
    h: Optional[int] = None

    # orbit protocol
    u0: Optional[float] = Field(default=None, ge=0, allow_inf_nan=False)
    v0: Optional[float] = Field(default=None, ge=0, allow_inf_nan=False)
    steps: Optional[int] = Field(default=None, gt=0)
    transient: Optional[int] = Field(default=None, ge=0)
    record_every: Optional[int] = Field(default=None, gt=0)

    # sweep
    theta_min: Optional[float] = Field(default=None, gt=0)
    theta_max: Optional[float] = Field(default=None, gt=0)
    grid: Optional[int] = Field(default=None, ge=2)
    keep: Optional[int] = Field(default=None, gt=0)
    workers: Optional[int] = Field(default=None, gt=0)

    # Lyapunov exponent
    tangent_u: Optional[float] = None
    tangent_v: Optional[float] = None

    # bifurcation
    index: Optional[int] = Field(default=None, ge=0)
    c02_form: Optional[C02Form] = None

    # output
    output: Optional[str] = None
    format: Optional[OutputFormat] = None
    log: Optional[Literal['debug', 'info', 'warning', 'error', 'critical']] = None

    @field_validator('h')
    @classmethod
    def _holling_exponent(cls, value: Optional[int]) -> Optional[int]:
        if value is not None and value not in (1, 2):
            raise ValueError(f"h must be 1 or 2, got {value}")
        return value

    def merged(self, overrides: Dict[str, Any]) -> 'RunConfig':
        """Copy with every non-None override applied and revalidated."""
        values = self.model_dump(exclude_none=True)
        values.update({k: v for k, v in overrides.items() if v is not None})
        return RunConfig(**values)

    def require(self, *names: str) -> None:
        missing = [n.replace('_', '-') for n in names if getattr(self, n) is None]
        if missing:
            raise InvalidParametersError(f"missing required option(s): {', '.join('--' + m for m in missing)}")

    def base_params(self) -> BaseParams:
        self.require('beta', 'r', 'c', 'h')
        return BaseParams(beta=self.beta, r=self.r, c=self.c, h=self.h)

    def model_params(self) -> ModelParams:
        self.require('beta', 'r', 'theta', 'c', 'h')
        return ModelParams(beta=self.beta, r=self.r, theta=self.theta, c=self.c, h=self.h)

    def initial_state(self) -> Optional[PlanktonState]:
        if self.u0 is None and self.v0 is None:
            return None
        self.require('u0', 'v0')
        return PlanktonState(u=self.u0, v=self.v0)

    def orbit_spec(self) -> OrbitSpec:
        self.require('u0', 'v0')
        protocol = Config.get_orbit_protocol()
        return OrbitSpec(
            initial=PlanktonState(u=self.u0, v=self.v0),
            steps=self.steps if self.steps is not None else protocol.steps,
            transient=self.transient if self.transient is not None else protocol.transient,
            record_every=self.record_every if self.record_every is not None else protocol.record_every,
        )

    def keep_count(self) -> int:
        return self.keep if self.keep is not None else Config.get_orbit_protocol().keep

    def tangent(self) -> Optional[Tuple[float, float]]:
        if self.tangent_u is None and self.tangent_v is None:
            return None
        return (self.tangent_u or 0.0, self.tangent_v or 0.0)


def _strip_comment(line: str) -> str:
    return line.split('#', 1)[0].strip()


def parse_config(path: str) -> RunConfig:
    """Read a key=value file; '#' starts a comment, keys are the flag names."""
    file_path = Path(path)
    try:
        lines = file_path.read_text(encoding='utf-8').splitlines()
    except OSError as e:
        raise InvalidParametersError(f"cannot read config file {path}: {e}") from e

    values: Dict[str, str] = {}
    for number, raw in enumerate(lines, start=1):
        content = _strip_comment(raw)
        if not content:
            continue
        if '=' not in content:
            raise ConfigFileError(path, number, raw, "expected key=value")
        key, value = (part.strip() for part in content.split('=', 1))
        field = key.replace('-', '_')
        if field not in RunConfig.model_fields:
            raise ConfigFileError(path, number, raw, f"unknown key '{key}'")
        try:
            RunConfig(**{field: value})
        except ValidationError as e:
            reason = e.errors()[0].get('msg', 'invalid value')
            raise ConfigFileError(path, number, raw, f"invalid value for '{key}' ({reason})") from e
        values[field] = value

    logger.debug("Parsed run configuration", path=path, keys=sorted(values))
    return RunConfig(**values)
