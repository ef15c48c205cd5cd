"""Small value types shared between the analysis modules."""
from enum import Enum

from pydantic import BaseModel, ConfigDict


class StabilityLabel(str, Enum):
    """Fixed-point type from the moduli of the Jacobian eigenvalues."""
    ATTRACTIVE = 'attractive'      # both moduli < 1
    REPELLING = 'repelling'        # both moduli > 1
    SADDLE = 'saddle'              # one on each side of the unit circle
    NONHYPERBOLIC = 'nonhyperbolic'  # at least one modulus equal to 1


class ComplexValue(BaseModel):
    """Complex number serialized as {re, im}."""
    model_config = ConfigDict(frozen=True)

    re: float
    im: float

    @classmethod
    def of(cls, z: complex) -> 'ComplexValue':
        z = complex(z)
        return cls(re=z.real, im=z.imag)

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)
