"""Experiment configuration models (schema ``wcl-config-v1``)."""

from typing import Literal

from pydantic import BaseModel, Field, model_validator

from .classical import DampingField, Direction, OpenMapSpec
from .resonance import Grid1D, Potential1D

Command = Literal[
    "classical-dim",
    "pressure",
    "rate-function",
    "baker-spectrum",
    "damped-spectrum",
    "weyl-fit",
    "gap-report",
    "concentration",
    "ld-profile",
    "resonance-1d",
]

# Fields each command cannot run without
REQUIRED_FIELDS: dict[str, tuple[str, ...]] = {
    "classical-dim": ("open_map", "depths"),
    "pressure": ("open_map",),
    "rate-function": ("damping", "alphas"),
    "baker-spectrum": ("open_map", "N"),
    "damped-spectrum": ("damping", "N"),
    "weyl-fit": ("open_map", "r", "N_ladder"),
    "gap-report": ("N_ladder",),
    "concentration": ("damping", "epsilons", "N_ladder"),
    "ld-profile": ("damping", "alphas", "N_ladder"),
    "resonance-1d": ("potential", "method"),
}


class ExperimentConfig(BaseModel):
    """One CLI run, as stored in a config file or built from flags.

    Unknown fields are rejected. ``model_dump_json(exclude_none=True)`` is the
    normal form: loading and dumping it again reproduces it byte for byte.
    """

    schema_version: Literal["wcl-config-v1"] = "wcl-config-v1"
    command: Command

    # Classical / map parameters
    open_map: OpenMapSpec | None = None
    damping: DampingField | None = None
    direction: Direction = Direction.FULL
    depths: tuple[int, int] | None = Field(default=None, description="Inclusive depth range")
    weight_s: float = 0.5
    beta: float = 0.0
    T: int = Field(default=20, ge=1, description="Orbit-sum length for pressure")
    alphas: tuple[float, ...] | None = None
    empirical_T: int | None = Field(default=None, ge=1, description="Word length, empirical H")

    # Spectra
    N: int | None = Field(default=None, ge=1)
    N_ladder: tuple[int, ...] | None = None
    phases: tuple[float, float] = (0.0, 0.0)
    eig_method: Literal["lapack", "qr"] = "lapack"
    r: float | None = None
    epsilons: tuple[float, ...] | None = None
    fast: bool = False

    # 1D resonances
    potential: Potential1D | None = None
    grid: Grid1D | None = None
    method: Literal["cap", "scaling", "oracle"] | None = None
    theta: float | None = None
    eta: float | None = None
    cap_onset: float | None = None
    hbar: float | None = Field(default=None, gt=0.0)
    window: tuple[float, float] | None = None
    max_width: float = Field(default=10.0, gt=0.0)
    search_box: tuple[float, float, float, float] | None = Field(
        default=None, description="(re_min, re_max, im_min, im_max)"
    )

    # Output
    output: str | None = None
    csv: str | None = None
    threads: int | None = Field(default=None, ge=1)

    model_config = {"frozen": True, "extra": "forbid"}

    @model_validator(mode="after")
    def _check_required(self) -> "ExperimentConfig":
        missing = [name for name in REQUIRED_FIELDS[self.command] if getattr(self, name) is None]
        if missing:
            raise ValueError(f"command {self.command!r} requires: {', '.join(missing)}")
        if self.command == "gap-report" and self.open_map is None and self.damping is None:
            raise ValueError("gap-report requires open_map or damping")
        if self.command == "resonance-1d" and self.grid is None and self.method != "oracle":
            raise ValueError(f"method {self.method!r} requires a grid")
        if self.depths is not None and not 1 <= self.depths[0] <= self.depths[1]:
            raise ValueError(f"invalid depth range {self.depths}")
        return self


class SweepConfig(BaseModel):
    """Ordered list of experiments run by ``wcl sweep``."""

    schema_version: Literal["wcl-config-v1"] = "wcl-config-v1"
    experiments: tuple[ExperimentConfig, ...] = Field(min_length=1)
    threads: int | None = Field(default=None, ge=1)

    model_config = {"frozen": True, "extra": "forbid"}
