"""Pydantic models for quantized baker maps and their resonances."""

import math
from enum import Enum
from typing import Literal

from pydantic import BaseModel, Field, model_validator

from .classical import DampingField, OpenMapSpec


class MapKind(str, Enum):
    """Which nonselfadjoint propagator to build."""

    OPEN = "open"
    DAMPED = "damped"


class QuantumMapSpec(BaseModel):
    """Quantization parameters of an open or damped baker map.

    The effective Planck constant is 1/(2πN).
    """

    open_map: OpenMapSpec
    N: int = Field(ge=1, description="Hilbert space dimension, divisible by M")
    kind: MapKind = MapKind.OPEN
    damping: DampingField | None = Field(default=None, description="Required iff kind=damped")
    phases: tuple[float, float] = Field(
        default=(0.0, 0.0), description="Boundary phases (q, p) in [0, 1)"
    )

    model_config = {"frozen": True, "extra": "forbid"}

    @model_validator(mode="after")
    def _check_consistency(self) -> "QuantumMapSpec":
        if any(not 0.0 <= phase < 1.0 for phase in self.phases):
            raise ValueError(f"boundary phases must lie in [0, 1), got {self.phases}")
        if self.damping is not None and self.damping.branch_count != self.open_map.branch_count:
            raise ValueError(
                f"damping has {self.damping.branch_count} strips, map has "
                f"{self.open_map.branch_count} branches"
            )
        return self

    @property
    def hbar_eff(self) -> float:
        """Effective Planck constant 1/(2πN)."""
        return 1.0 / (2.0 * math.pi * self.N)

    @property
    def block_size(self) -> int:
        """Size N/M of each DFT block (integer division; validity checked by the builders)."""
        return self.N // self.open_map.branch_count


class Resonance(BaseModel):
    """One complex eigenvalue with its decay rate and lifetime.

    ``setting="map"``: z is a map eigenvalue λ, decay rate γ = -log|λ| and
    lifetime τ = 1/(2γ) in map steps. ``setting="hamiltonian"``: z is an
    energy, γ = |Im z|/ħ and τ = ħ/(2|Im z|).
    """

    re: float
    im: float
    decay_rate: float = Field(description="γ; +inf for a zero map eigenvalue")
    lifetime: float = Field(description="τ; 0 when γ = +inf, +inf when γ = 0")
    setting: Literal["map", "hamiltonian"]
    hbar: float | None = None
    method: str | None = Field(default=None, description="cap, scaling, oracle or map")
    parameter: float | None = Field(default=None, description="θ or η for grid methods")

    model_config = {"frozen": True}

    @property
    def z(self) -> complex:
        """The complex eigenvalue."""
        return complex(self.re, self.im)

    @classmethod
    def from_map_eigenvalue(cls, value: complex) -> "Resonance":
        """Build from a map eigenvalue λ."""
        modulus = abs(value)
        gamma = math.inf if modulus == 0.0 else -math.log(modulus)
        if gamma == math.inf:
            lifetime = 0.0
        elif gamma <= 0.0:
            lifetime = math.inf
        else:
            lifetime = 1.0 / (2.0 * gamma)
        return cls(
            re=value.real,
            im=value.imag,
            decay_rate=gamma,
            lifetime=lifetime,
            setting="map",
            method="map",
        )

    @classmethod
    def from_energy(
        cls,
        z: complex,
        hbar: float,
        method: str | None = None,
        parameter: float | None = None,
    ) -> "Resonance":
        """Build from a complex energy z at Planck constant ``hbar``."""
        width = abs(z.imag)
        return cls(
            re=z.real,
            im=z.imag,
            decay_rate=width / hbar,
            lifetime=math.inf if width == 0.0 else hbar / (2.0 * width),
            setting="hamiltonian",
            hbar=hbar,
            method=method,
            parameter=parameter,
        )
