"""Pydantic models for counting profiles, gap and concentration reports."""

from typing import Literal

from pydantic import BaseModel, Field, model_validator


class CountPoint(BaseModel):
    """One counting-function sample n(N, threshold)."""

    N: int = Field(ge=1)
    threshold: float
    count: int = Field(ge=0)

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def _check_bounded(self) -> "CountPoint":
        if self.count > self.N:
            raise ValueError(f"count {self.count} exceeds dimension {self.N}")
        return self


class CountProfile(BaseModel):
    """Counting function across a family of dimensions N and its fitted growth exponent.

    ``quantity`` names what was counted: eigenvalue moduli above a threshold
    (``modulus``), decay rates below α (``decay-below``) or above α
    (``decay-above``). ``classical_exponent`` is the prediction the fit is
    compared with (ν = log D / log M, or H(α)/log M).
    """

    quantity: Literal["modulus", "decay-below", "decay-above"] = "modulus"
    alpha: float | None = Field(default=None, description="α for decay-rate profiles")
    points: tuple[CountPoint, ...]
    window: tuple[int, ...] = Field(description="N values that entered the fit")
    dropped: tuple[int, ...] = Field(default=(), description="N values excluded from the fit")
    flags: tuple[str, ...] = Field(default=(), description="Notes on dropped points")
    exponent: float | None = Field(default=None, description="Fitted slope of log n vs log N")
    stderr: float | None = None
    intercept: float | None = None
    residual: float | None = None
    classical_exponent: float | None = None

    model_config = {"frozen": True}

    @property
    def ns(self) -> tuple[int, ...]:
        """Dimensions in profile order."""
        return tuple(p.N for p in self.points)

    @property
    def counts(self) -> tuple[int, ...]:
        """Counts in profile order."""
        return tuple(p.count for p in self.points)


class GapReport(BaseModel):
    """Outer eigenvalue moduli against the pressure bound e^P."""

    pressure: float
    weight: str = Field(description="Weight the pressure was computed with")
    predicted_radius: float = Field(description="e^P")
    ns: tuple[int, ...]
    outer_moduli: tuple[float, ...]
    margins: tuple[float, ...] = Field(description="3 / log N per dimension")
    within_bound: tuple[bool, ...]
    strictly_decreasing: bool
    verdict: Literal["consistent", "inconsistent", "inconclusive"]
    note: str = ""

    model_config = {"frozen": True}


class ConcentrationReport(BaseModel):
    """Fraction of decay rates near the typical value b̄, per N and per ε."""

    b_mean: float
    ns: tuple[int, ...]
    epsilons: tuple[float, ...]
    fractions: tuple[tuple[float, ...], ...] = Field(description="fractions[i][j] at ns[i], ε_j")
    trends: tuple[float | None, ...] = Field(description="Slope of fraction vs log N, per ε")

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def _check_shape(self) -> "ConcentrationReport":
        if len(self.fractions) != len(self.ns):
            raise ValueError("one fraction row per N is required")
        for row in self.fractions:
            if len(row) != len(self.epsilons):
                raise ValueError("one fraction per ε is required")
            if any(not 0.0 <= f <= 1.0 for f in row):
                raise ValueError("fractions must lie in [0, 1]")
        return self
