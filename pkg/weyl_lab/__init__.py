"""weyl-lab - Fractal Weyl laws, pressure bounds and resonances of open quantum maps."""

__version__ = "0.1.0"

# Computational modules
from .analysis import (
    concentration_report,
    count_moduli,
    gap_report,
    ld_profile,
    ld_upper_profile,
    weyl_fit,
)

# Caching
from .cache_backend import FileCache, MemoryCache, NullCache, SpectrumCache
from .classical import (
    birkhoff_average,
    bowen_dimension,
    box_dimension,
    gap_criterion,
    pressure,
    pressure_curve,
    rate_function,
    trapped_set_sample,
)

# Exceptions
from .exceptions import (
    CapacityError,
    ConfigError,
    ConvergenceError,
    DomainError,
    FitDegenerateError,
    NumericalError,
    ResonanceSearchError,
    UnsupportedAnalyticityError,
    WCLError,
)

# Facade
from .lab import Laboratory

# Models
from .models import (
    CapSpec,
    ConcentrationReport,
    CountProfile,
    DampingField,
    DimensionEstimate,
    Direction,
    ExperimentConfig,
    GapReport,
    Grid1D,
    MapKind,
    OpenMapSpec,
    Potential1D,
    PotentialKind,
    PressureEstimate,
    QuantumMapSpec,
    RateFunction,
    Resonance,
    ScalingContour,
    SpectrumRecord,
    SweepConfig,
    TrappedSetSample,
)
from .quantum_maps import (
    map_resonances,
    map_spectrum,
    quantize,
    quantize_damped_baker,
    quantize_open_baker,
    rank_count,
)
from .resonances import (
    build_hamiltonian_cap,
    build_hamiltonian_scaled,
    hamiltonian_spectrum,
    resonances_from_spectrum,
    stable_resonances,
)
from .spectral import eigenvalues, spectral_radius
from .transfer_matrix import transfer_matrix_bound_states, transfer_matrix_resonances

__all__ = [
    # Facade
    "Laboratory",
    # Classical dynamics
    "trapped_set_sample",
    "box_dimension",
    "pressure",
    "pressure_curve",
    "bowen_dimension",
    "gap_criterion",
    "birkhoff_average",
    "rate_function",
    # Spectra
    "eigenvalues",
    "spectral_radius",
    # Quantum maps
    "quantize",
    "quantize_open_baker",
    "quantize_damped_baker",
    "rank_count",
    "map_spectrum",
    "map_resonances",
    # 1D resonances
    "build_hamiltonian_cap",
    "build_hamiltonian_scaled",
    "hamiltonian_spectrum",
    "resonances_from_spectrum",
    "stable_resonances",
    "transfer_matrix_resonances",
    "transfer_matrix_bound_states",
    # Analysis
    "count_moduli",
    "weyl_fit",
    "gap_report",
    "concentration_report",
    "ld_profile",
    "ld_upper_profile",
    # Caching
    "SpectrumCache",
    "NullCache",
    "MemoryCache",
    "FileCache",
    # Exceptions
    "WCLError",
    "ConfigError",
    "DomainError",
    "UnsupportedAnalyticityError",
    "CapacityError",
    "NumericalError",
    "ConvergenceError",
    "FitDegenerateError",
    "ResonanceSearchError",
    # Models
    "Direction",
    "OpenMapSpec",
    "DampingField",
    "TrappedSetSample",
    "DimensionEstimate",
    "PressureEstimate",
    "RateFunction",
    "SpectrumRecord",
    "MapKind",
    "QuantumMapSpec",
    "Resonance",
    "PotentialKind",
    "Potential1D",
    "ScalingContour",
    "CapSpec",
    "Grid1D",
    "CountProfile",
    "GapReport",
    "ConcentrationReport",
    "ExperimentConfig",
    "SweepConfig",
]
