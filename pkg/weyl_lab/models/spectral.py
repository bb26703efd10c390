"""Pydantic models for dense spectra."""

from typing import Any

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, Field, field_validator, model_validator

# Dense square complex matrix, double precision
ComplexMatrix = npt.NDArray[np.complex128]


def canonical_order(values: np.ndarray) -> np.ndarray:
    """Indices sorting eigenvalues by descending modulus, then real part, then imaginary part.

    Moduli are compared after rounding to 12 decimals so that values equal up
    to rounding count as ties and fall through to the real/imaginary keys.
    """
    values = np.asarray(values, dtype=complex)
    modulus = np.round(np.abs(values), 12)
    return np.lexsort((-values.imag, -values.real, -modulus))


class SpectrumRecord(BaseModel):
    """All eigenvalues of one quantum map or one discretized Hamiltonian.

    Eigenvalues are kept in canonical order (see :func:`canonical_order`) so
    that reports and golden files are deterministic.
    """

    n: int = Field(ge=0, description="Matrix dimension N")
    eigenvalues: np.ndarray = Field(description="Complex eigenvalues, canonical order")
    builder: dict[str, Any] = Field(default_factory=dict, description="Builder metadata")
    params_hash: str = Field(default="", description="Hash of the builder metadata")
    method: str = Field(default="lapack", description="Eigenvalue back-end used")
    residuals: tuple[float, ...] | None = Field(
        default=None, description="Inverse-iteration residuals of the leading eigenvalues"
    )

    model_config = {"frozen": True, "arbitrary_types_allowed": True}

    @field_validator("eigenvalues", mode="before")
    @classmethod
    def _canonicalize(cls, v: Any) -> np.ndarray:
        values = np.asarray(v, dtype=np.complex128).ravel()
        return values[canonical_order(values)]

    @model_validator(mode="after")
    def _check_count(self) -> "SpectrumRecord":
        if self.eigenvalues.size != self.n:
            raise ValueError(f"expected {self.n} eigenvalues, got {self.eigenvalues.size}")
        return self

    @property
    def moduli(self) -> np.ndarray:
        """|λ_j| in canonical order."""
        return np.abs(self.eigenvalues)

    @property
    def decay_rates(self) -> np.ndarray:
        """-log|λ_j| (+inf for zero eigenvalues)."""
        with np.errstate(divide="ignore"):
            return -np.log(self.moduli)

    @property
    def kind(self) -> str | None:
        """Builder kind (``open``, ``damped``, ``cap``, ``scaled``...), if recorded."""
        return self.builder.get("kind")
