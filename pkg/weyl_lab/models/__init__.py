"""Pydantic models for weyl-lab.

This module exports all models from the subsystem submodules.
You can import from specific modules:
    from weyl_lab.models.classical import OpenMapSpec, DampingField
    from weyl_lab.models.quantum import QuantumMapSpec, Resonance
    from weyl_lab.models.resonance import Potential1D, Grid1D

Or from the main models module:
    from weyl_lab.models import OpenMapSpec, SpectrumRecord, CountProfile
"""

# Analysis models
from .analysis import ConcentrationReport, CountPoint, CountProfile, GapReport

# Classical models
from .classical import (
    DampingField,
    DimensionEstimate,
    Direction,
    OpenMapSpec,
    PressureEstimate,
    RateFunction,
    TrappedSetSample,
)

# Config models
from .config import ExperimentConfig, SweepConfig

# Quantum map models
from .quantum import MapKind, QuantumMapSpec, Resonance

# 1D resonance models
from .resonance import (
    CapSpec,
    Grid1D,
    Potential1D,
    PotentialKind,
    ScalingContour,
    double_gaussian_barrier,
    double_square_barrier,
)

# Spectral models
from .spectral import ComplexMatrix, SpectrumRecord, canonical_order

__all__ = [
    # Classical models
    "Direction",
    "OpenMapSpec",
    "DampingField",
    "TrappedSetSample",
    "DimensionEstimate",
    "PressureEstimate",
    "RateFunction",
    # Spectral models
    "ComplexMatrix",
    "SpectrumRecord",
    "canonical_order",
    # Quantum map models
    "MapKind",
    "QuantumMapSpec",
    "Resonance",
    # 1D resonance models
    "PotentialKind",
    "Potential1D",
    "ScalingContour",
    "CapSpec",
    "Grid1D",
    "double_square_barrier",
    "double_gaussian_barrier",
    # Analysis models
    "CountPoint",
    "CountProfile",
    "GapReport",
    "ConcentrationReport",
    # Config models
    "ExperimentConfig",
    "SweepConfig",
]
