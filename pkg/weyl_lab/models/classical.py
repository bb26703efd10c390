"""Pydantic models for the classical open baker dynamics."""

import math
from collections.abc import Sequence
from enum import Enum
from typing import Literal

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator


class Direction(str, Enum):
    """Which trapped set a sample describes."""

    FORWARD = "forward"  # K^-: forward orbit stays, vertical strips
    BACKWARD = "backward"  # K^+: backward orbit stays, horizontal strips
    FULL = "full"  # K = K^- ∩ K^+


class OpenMapSpec(BaseModel):
    """Open baker map: M vertical strips, expansion M, only ``kept`` branches survive.

    The closed map keeps every branch. The unstable Jacobian is log M per step
    on every kept branch, so the trapped set is a uniformly hyperbolic repeller
    (a product of two Cantor sets).
    """

    branch_count: int = Field(ge=2, description="Number of branches M")
    kept: tuple[int, ...] = Field(description="Strictly increasing surviving branch indices")

    model_config = {"frozen": True, "extra": "forbid"}

    @field_validator("kept")
    @classmethod
    def _check_kept(cls, kept: tuple[int, ...]) -> tuple[int, ...]:
        if not kept:
            raise ValueError("at least one branch must be kept")
        if any(b >= a for a, b in zip(kept[1:], kept[:-1], strict=False)):
            raise ValueError(f"kept branches must be strictly increasing, got {kept}")
        return kept

    @model_validator(mode="after")
    def _check_range(self) -> "OpenMapSpec":
        if self.kept[0] < 0 or self.kept[-1] >= self.branch_count:
            raise ValueError(
                f"kept branches {self.kept} outside 0..{self.branch_count - 1}"
            )
        return self

    @classmethod
    def closed(cls, branch_count: int) -> "OpenMapSpec":
        """Closed baker map keeping all ``branch_count`` branches."""
        return cls(branch_count=branch_count, kept=tuple(range(branch_count)))

    @property
    def kept_count(self) -> int:
        """Number of surviving branches D."""
        return len(self.kept)

    @property
    def is_closed(self) -> bool:
        """True when no branch is removed."""
        return self.kept_count == self.branch_count

    @property
    def unstable_jacobian(self) -> float:
        """Per-step unstable Jacobian φ_u = log M (uniform on every branch)."""
        return math.log(self.branch_count)

    @property
    def topological_entropy(self) -> float:
        """Topological entropy of the repeller, log D."""
        return math.log(self.kept_count)

    @property
    def partial_dimension(self) -> float:
        """Dimension of one Cantor factor, log D / log M (the fractal Weyl exponent ν)."""
        return math.log(self.kept_count) / math.log(self.branch_count)


class DampingField(BaseModel):
    """Damping constant on each vertical strip, optionally refined by a sampled profile.

    ``values[i]`` is the damping on strip ``[i/M, (i+1)/M)``. When ``profile``
    is given it is a periodic sample of a smooth damping b(x) on the uniform
    grid ``x_k = k / len(profile)`` and takes precedence for pointwise
    evaluation; the strip values then only label the symbols.
    """

    values: tuple[float, ...] = Field(min_length=2, description="Per-branch damping b_i >= 0")
    profile: tuple[float, ...] | None = Field(
        default=None, description="Optional periodic samples of b(x) on [0, 1)"
    )

    model_config = {"frozen": True, "extra": "forbid"}

    @field_validator("values", "profile")
    @classmethod
    def _check_nonnegative(cls, v: tuple[float, ...] | None) -> tuple[float, ...] | None:
        if v is None:
            return v
        if any(not math.isfinite(b) or b < 0 for b in v):
            raise ValueError("damping values must be finite and >= 0")
        return v

    @classmethod
    def constant(cls, branch_count: int, value: float) -> "DampingField":
        """Same damping on every strip."""
        return cls(values=(value,) * branch_count)

    @property
    def branch_count(self) -> int:
        """Number of strips M the field is defined on."""
        return len(self.values)

    @property
    def is_symbolic(self) -> bool:
        """True for piecewise-constant damping (no sampled profile)."""
        return self.profile is None

    @property
    def mean(self) -> float:
        """Average b̄ with respect to the invariant (Lebesgue) measure of the closed map."""
        source = self.values if self.profile is None else self.profile
        return float(np.mean(source))

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        """Evaluate b at positions ``x`` (taken modulo 1).

        Args:
            x: Positions

        Returns:
            Damping values, same shape as ``x``
        """
        x = np.mod(np.asarray(x, dtype=float), 1.0)
        if self.profile is None:
            strips = np.minimum((x * self.branch_count).astype(int), self.branch_count - 1)
            return np.asarray(self.values)[strips]
        samples = np.asarray(self.profile)
        grid = np.arange(samples.size) / samples.size
        return np.interp(x, grid, samples, period=1.0)

    def extremal_averages(
        self, max_period: int = 8, kept: Sequence[int] | None = None
    ) -> tuple[float, float]:
        """Extremal ergodic averages (b_-, b_+).

        Exact for symbol-constant damping (fixed points of the constant words).
        For a sampled profile, the extremes of the Birkhoff averages over all
        periodic orbits of period up to ``max_period`` of the closed map.

        Args:
            max_period: Longest period enumerated for sampled profiles
            kept: Surviving branches of an open map (symbol-constant damping only)

        Returns:
            Tuple (b_minus, b_plus)
        """
        if self.profile is None:
            values = self.values if kept is None else [self.values[i] for i in kept]
            return float(min(values)), float(max(values))
        m = self.branch_count
        lo, hi = math.inf, -math.inf
        for period in range(1, max_period + 1):
            denom = m**period - 1
            if denom >= 10**6:
                break
            # Periodic point of word w is x = w / (M^p - 1); shifting by t digits walks the orbit
            words = np.arange(denom + 1)
            total = np.zeros(words.size)
            for t in range(period):
                shifted = np.where(words == denom, denom, (words * m**t) % denom)
                total += self.evaluate(shifted / denom)
            averages = total / period
            lo = min(lo, float(averages.min()))
            hi = max(hi, float(averages.max()))
        return lo, hi


class TrappedSetSample(BaseModel):
    """Surviving cylinder cells of a trapped set at a given refinement depth.

    Cells are stored as the product of the admissible x-words and y-words
    (rows of base-M digits, leading digit first). A missing word array means
    that coordinate is unconstrained, so forward samples are vertical strips
    and backward samples horizontal strips.
    """

    branch_count: int = Field(ge=2, description="Number of branches M")
    depth: int = Field(ge=1, description="Refinement depth n")
    direction: Direction
    x_words: np.ndarray | None = Field(default=None, description="(count, depth) digits of x")
    y_words: np.ndarray | None = Field(default=None, description="(count, depth) digits of y")

    model_config = {"frozen": True, "arbitrary_types_allowed": True}

    @property
    def cell_size(self) -> float:
        """Side M^-n of each cell along the constrained coordinates."""
        return float(self.branch_count) ** (-self.depth)

    @property
    def cell_count(self) -> int:
        """Number of cells: D^n one-sided, D^(2n) full."""
        count = 1
        for words in (self.x_words, self.y_words):
            if words is not None:
                count *= int(words.shape[0])
        return count

    def _offsets(self, words: np.ndarray) -> np.ndarray:
        weights = float(self.branch_count) ** -np.arange(1, self.depth + 1)
        return words @ weights

    def cell_bounds(self) -> np.ndarray:
        """Explicit cell rectangles.

        Returns:
            Array of shape (cell_count, 4) with rows (x0, x1, y0, y1)
        """
        size = self.cell_size
        if self.x_words is not None:
            x0 = self._offsets(self.x_words)
            x1 = x0 + size
        else:
            x0, x1 = np.zeros(1), np.ones(1)
        if self.y_words is not None:
            y0 = self._offsets(self.y_words)
            y1 = y0 + size
        else:
            y0, y1 = np.zeros(1), np.ones(1)
        ix, iy = np.meshgrid(np.arange(x0.size), np.arange(y0.size), indexing="ij")
        ix, iy = ix.ravel(), iy.ravel()
        return np.column_stack([x0[ix], x1[ix], y0[iy], y1[iy]])


class DimensionEstimate(BaseModel):
    """Box-counting dimension with the full log-log table behind it."""

    dimension: float = Field(description="Least-squares slope")
    log_inverse_sizes: tuple[float, ...] = Field(description="log(1/cell size) per depth")
    log_counts: tuple[float, ...] = Field(description="log(cell count) per depth")
    depths: tuple[int, ...]
    stderr: float = Field(description="Standard error of the slope")
    residual: float = Field(description="RMS residual of the fit")

    model_config = {"frozen": True}


class PressureEstimate(BaseModel):
    """Topological pressure P(-s·φ_u - β·b) of an open baker map."""

    open_map: OpenMapSpec
    weight_s: float = Field(description="Coefficient s of -s·φ_u")
    beta: float = Field(default=0.0, description="Damping coefficient β")
    damping: DampingField | None = None
    T: int = Field(ge=1, description="Orbit-sum truncation length")
    value: float = Field(description="(1/T) log of the periodic orbit sum, -inf if empty")
    closed_form: float | None = Field(
        default=None, description="log Σ_kept M^-s e^(-β b_i) for symbol-constant weights"
    )
    method: Literal["transfer-trace", "orbit-enumeration"]

    model_config = {"frozen": True}

    @property
    def weight_description(self) -> str:
        """Human-readable weight, e.g. ``-0.5*phi_u - 1*b``."""
        text = f"-{self.weight_s:g}*phi_u"
        if self.beta != 0.0 and self.damping is not None:
            text += f" - {self.beta:g}*b"
        return text

    @property
    def error(self) -> float | None:
        """|estimate - closed form| when a closed form exists."""
        if self.closed_form is None or not math.isfinite(self.value):
            return None
        return abs(self.value - self.closed_form)


class RateFunction(BaseModel):
    """Large-deviation rate function H(α) of the Birkhoff averages of the damping."""

    alphas: tuple[float, ...]
    values: tuple[float, ...] = Field(description="H(α); -inf outside [b_-, b_+]")
    in_domain: tuple[bool, ...] = Field(description="False where H(α) = -inf")
    b_minus: float
    b_plus: float
    b_mean: float
    method: Literal["legendre", "empirical"]
    T: int | None = Field(default=None, description="Word length of the empirical path")

    model_config = {"frozen": True}

    def at(self, alpha: float) -> float:
        """H at ``alpha`` (grid value, or linear interpolation inside the domain)."""
        alphas = np.asarray(self.alphas)
        values = np.asarray(self.values)
        exact = np.flatnonzero(np.isclose(alphas, alpha, rtol=0.0, atol=1e-12))
        if exact.size:
            return float(values[exact[0]])
        if alpha < self.b_minus or alpha > self.b_plus:
            return -math.inf
        inside = np.asarray(self.in_domain)
        return float(np.interp(alpha, alphas[inside], values[inside]))


class GapCriterion(BaseModel):
    """Pressure and dimension sides of the spectral-gap criterion for an open map.

    For the self-similar baker repeller P(-φ_u/2) < 0 holds exactly when the
    trapped set has dimension 2·s* < 1, s* the root of s ↦ P(-s·φ_u).
    """

    pressure_half: float = Field(description="P(-φ_u/2)")
    bowen_root: float = Field(description="s* with P(-s*·φ_u) = 0")
    dimension: float = Field(description="2·s*, box and Hausdorff dimension of K")
    gap_predicted: bool

    model_config = {"frozen": True}
