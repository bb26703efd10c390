"""Pydantic models for 1D Schrödinger resonance computations."""

import math
from enum import Enum

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

# Gaussian tails below this value count as outside the support
SUPPORT_TOLERANCE = 1e-12


class PotentialKind(str, Enum):
    """Shape family of a 1D potential."""

    GAUSSIAN_BARRIERS = "gaussian_barriers"
    PIECEWISE_CONSTANT = "piecewise_constant"


class Potential1D(BaseModel):
    """Real compactly supported potential on the line.

    Gaussian kind: V(x) = Σ_k A_k exp(-((x - c_k)/w_k)²), analytic, so it can
    be evaluated at complex-scaled positions. Piecewise kind: finitely many
    disjoint intervals ``(left, right, height)``, zero elsewhere.
    """

    kind: PotentialKind
    centers: tuple[float, ...] = ()
    heights: tuple[float, ...] = ()
    widths: tuple[float, ...] = ()
    intervals: tuple[tuple[float, float, float], ...] = ()

    model_config = {"frozen": True, "extra": "forbid"}

    @model_validator(mode="after")
    def _check_parameters(self) -> "Potential1D":
        if self.kind == PotentialKind.GAUSSIAN_BARRIERS:
            if not self.centers:
                raise ValueError("gaussian potential needs at least one barrier")
            if not len(self.centers) == len(self.heights) == len(self.widths):
                raise ValueError("centers, heights and widths must have equal length")
            if any(w <= 0 for w in self.widths):
                raise ValueError("gaussian widths must be positive")
            if self.intervals:
                raise ValueError("intervals are only valid for piecewise_constant potentials")
        else:
            if not self.intervals:
                raise ValueError("piecewise potential needs at least one interval")
            if self.centers or self.heights or self.widths:
                raise ValueError("centers/heights/widths are only valid for gaussian potentials")
            ordered = sorted(self.intervals)
            for left, right, _ in ordered:
                if not left < right:
                    raise ValueError(f"empty interval [{left}, {right}]")
            for (_, right, _), (left, _, _) in zip(ordered[:-1], ordered[1:], strict=True):
                if left < right:
                    raise ValueError("piecewise intervals must not overlap")
        return self

    @property
    def is_analytic(self) -> bool:
        """True for potentials that admit complex scaling."""
        return self.kind == PotentialKind.GAUSSIAN_BARRIERS

    @property
    def support_radius(self) -> float:
        """Radius R with |V(x)| below 1e-12 for |x| > R."""
        if self.kind == PotentialKind.PIECEWISE_CONSTANT:
            return max(max(abs(left), abs(right)) for left, right, _ in self.intervals)
        radius = 0.0
        for c, a, w in zip(self.centers, self.heights, self.widths, strict=True):
            if abs(a) > SUPPORT_TOLERANCE:
                radius = max(radius, abs(c) + w * math.sqrt(math.log(abs(a) / SUPPORT_TOLERANCE)))
            else:
                radius = max(radius, abs(c))
        return radius

    @property
    def max_height(self) -> float:
        """Largest value of V on the real line (approximate for overlapping gaussians)."""
        if self.kind == PotentialKind.PIECEWISE_CONSTANT:
            return max(0.0, max(h for _, _, h in self.intervals))
        samples = np.linspace(-self.support_radius, self.support_radius, 4001)
        return max(0.0, float(np.max(self.evaluate(samples))))

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        """V at (possibly complex) positions ``x``.

        Args:
            x: Positions; complex values are only allowed for the gaussian kind

        Returns:
            Potential values (complex dtype for complex input)
        """
        x = np.asarray(x)
        if self.kind == PotentialKind.GAUSSIAN_BARRIERS:
            total = np.zeros(x.shape, dtype=np.result_type(x.dtype, float))
            for c, a, w in zip(self.centers, self.heights, self.widths, strict=True):
                total = total + a * np.exp(-(((x - c) / w) ** 2))
            return total
        if np.iscomplexobj(x):
            raise ValueError("piecewise potentials cannot be evaluated off the real axis")
        values = np.zeros(x.shape)
        for left, right, height in self.intervals:
            values[(x >= left) & (x < right)] = height
        return values

    def layers(self) -> list[tuple[float, float, float]]:
        """Contiguous layers ``(left, right, height)`` covering [-R, R], gaps filled with 0."""
        if self.kind != PotentialKind.PIECEWISE_CONSTANT:
            raise ValueError("layers are only defined for piecewise_constant potentials")
        out: list[tuple[float, float, float]] = []
        ordered = sorted(self.intervals)
        for left, right, height in ordered:
            if out and left > out[-1][1]:
                out.append((out[-1][1], left, 0.0))
            out.append((left, right, height))
        return out


class ScalingContour(BaseModel):
    """Complex deformation x -> x + iθ f(x) of the real line.

    f vanishes on |x| <= onset and equals x for |x| >= onset + smoothing,
    with a smoothstep in between. onset = 0 is uniform scaling x -> x e^{iθ}
    to first order, which is the form the grid builder uses.
    """

    theta: float = Field(gt=0.0, lt=math.pi / 4, description="Scaling angle θ")
    onset: float = Field(default=0.0, ge=0.0, description="Deformation onset R₀")
    smoothing: float | None = Field(
        default=None, gt=0.0, description="Ramp length (default R₀, so f(x) = x from 2R₀)"
    )

    model_config = {"frozen": True, "extra": "forbid"}

    @property
    def is_uniform(self) -> bool:
        """True when the whole line is scaled."""
        return self.onset == 0.0

    @property
    def ramp(self) -> float:
        """Length of the interpolation region."""
        return self.smoothing if self.smoothing is not None else self.onset

    def deformation(self, x: np.ndarray) -> np.ndarray:
        """The profile f(x).

        Args:
            x: Real positions

        Returns:
            f(x), zero inside the onset radius and equal to x far out
        """
        x = np.asarray(x, dtype=float)
        if self.is_uniform:
            return x.copy()
        t = np.clip((np.abs(x) - self.onset) / self.ramp, 0.0, 1.0)
        return x * t * t * (3.0 - 2.0 * t)


class CapSpec(BaseModel):
    """Complex absorbing potential -iηW(x) with W = ((|x| - R₀)₊)^power."""

    strength: float = Field(gt=0.0, description="Absorber strength η")
    onset: float = Field(ge=0.0, description="Absorber onset R₀ (W = 0 for |x| <= R₀)")
    power: int = Field(default=2, ge=1, description="Ramp exponent")

    model_config = {"frozen": True, "extra": "forbid"}

    def profile(self, x: np.ndarray) -> np.ndarray:
        """W(x) >= 0, zero on the interaction region."""
        excess = np.maximum(np.abs(np.asarray(x, dtype=float)) - self.onset, 0.0)
        return excess**self.power


class Grid1D(BaseModel):
    """Cell-centred grid x_j = -L + (j + ½)h on [-L, L], Dirichlet ends."""

    half_width: float = Field(gt=0.0, description="Domain half-width L")
    n: int = Field(ge=200, description="Point count")
    hbar: float = Field(gt=0.0, description="Semiclassical parameter ħ")

    model_config = {"frozen": True, "extra": "forbid"}

    @field_validator("half_width", "hbar")
    @classmethod
    def _check_finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("grid parameters must be finite")
        return v

    @property
    def spacing(self) -> float:
        """h = 2L/n."""
        return 2.0 * self.half_width / self.n

    @property
    def points(self) -> np.ndarray:
        """Grid positions x_j."""
        return -self.half_width + (np.arange(self.n) + 0.5) * self.spacing

    def refined(self, factor: int = 2) -> "Grid1D":
        """Same domain with ``factor`` times as many points."""
        return self.model_copy(update={"n": self.n * factor})


def double_square_barrier(
    height: float = 1.0, width: float = 0.3, inner_edge: float = 0.5
) -> Potential1D:
    """Two square barriers on [-inner-width, -inner] and [inner, inner+width]."""
    outer = inner_edge + width
    return Potential1D(
        kind=PotentialKind.PIECEWISE_CONSTANT,
        intervals=((-outer, -inner_edge, height), (inner_edge, outer, height)),
    )


def double_gaussian_barrier(
    height: float = 0.3, width: float = 0.25, center: float = 0.7
) -> Potential1D:
    """Two equal gaussian barriers at ±center."""
    return Potential1D(
        kind=PotentialKind.GAUSSIAN_BARRIERS,
        centers=(-center, center),
        heights=(height, height),
        widths=(width, width),
    )
