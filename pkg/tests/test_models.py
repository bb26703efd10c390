"""Tests for Pydantic models."""

import logging
import math

import numpy as np
import pytest
from pydantic import ValidationError

from weyl_lab.models import (
    CapSpec,
    CountPoint,
    DampingField,
    ExperimentConfig,
    Grid1D,
    MapKind,
    OpenMapSpec,
    Potential1D,
    PotentialKind,
    QuantumMapSpec,
    Resonance,
    ScalingContour,
    SpectrumRecord,
    SweepConfig,
    canonical_order,
    double_square_barrier,
)

logger = logging.getLogger(__name__)


def test_open_map_spec():
    """Test OpenMapSpec properties."""
    cantor = OpenMapSpec(branch_count=3, kept=(0, 2))

    assert cantor.kept_count == 2
    assert not cantor.is_closed
    assert cantor.partial_dimension == pytest.approx(math.log(2) / math.log(3))
    assert cantor.unstable_jacobian == pytest.approx(math.log(3))

    closed = OpenMapSpec.closed(4)
    assert closed.kept == (0, 1, 2, 3)
    assert closed.is_closed
    assert closed.topological_entropy == pytest.approx(math.log(4))


def test_open_map_spec_validation():
    """Test that invalid kept sets are rejected."""
    with pytest.raises(ValidationError):
        OpenMapSpec(branch_count=3, kept=(2, 0))
    with pytest.raises(ValidationError):
        OpenMapSpec(branch_count=3, kept=(0, 3))
    with pytest.raises(ValidationError):
        OpenMapSpec(branch_count=3, kept=())
    with pytest.raises(ValidationError):
        OpenMapSpec(branch_count=1, kept=(0,))
    with pytest.raises(ValidationError):
        OpenMapSpec(branch_count=3, kept=(0,), extra=True)


def test_damping_field():
    """Test DampingField evaluation and averages."""
    damping = DampingField(values=(0.0, 1.0))

    assert damping.branch_count == 2
    assert damping.is_symbolic
    assert damping.mean == pytest.approx(0.5)
    assert damping.extremal_averages() == (0.0, 1.0)
    np.testing.assert_array_equal(damping.evaluate(np.array([0.1, 0.6, 1.2])), [0.0, 1.0, 0.0])

    assert DampingField.constant(3, 0.2).values == (0.2, 0.2, 0.2)

    with pytest.raises(ValidationError):
        DampingField(values=(0.0, -1.0))
    with pytest.raises(ValidationError):
        DampingField(values=(0.5,))


def test_damping_profile():
    """Test a sampled damping profile."""
    damping = DampingField(values=(0.2, 0.2), profile=(0.2,) * 8)

    assert not damping.is_symbolic
    assert damping.mean == pytest.approx(0.2)
    np.testing.assert_allclose(damping.evaluate(np.array([0.05, 0.5, 0.99])), 0.2)
    lo, hi = damping.extremal_averages(max_period=4)
    assert lo == pytest.approx(0.2)
    assert hi == pytest.approx(0.2)


def test_quantum_map_spec():
    """Test QuantumMapSpec validation and derived values."""
    spec = QuantumMapSpec(open_map=OpenMapSpec(branch_count=3, kept=(0, 2)), N=27)

    assert spec.kind == MapKind.OPEN
    assert spec.block_size == 9
    assert spec.hbar_eff == pytest.approx(1.0 / (2.0 * math.pi * 27))

    with pytest.raises(ValidationError):
        QuantumMapSpec(open_map=OpenMapSpec.closed(2), N=4, phases=(1.0, 0.0))
    with pytest.raises(ValidationError):
        QuantumMapSpec(
            open_map=OpenMapSpec.closed(2),
            N=4,
            kind=MapKind.DAMPED,
            damping=DampingField(values=(0.0, 1.0, 2.0)),
        )


def test_resonance_from_map_eigenvalue():
    """Test decay rate and lifetime of map eigenvalues."""
    res = Resonance.from_map_eigenvalue(complex(math.exp(-0.5), 0.0))
    assert res.decay_rate == pytest.approx(0.5)
    assert res.lifetime == pytest.approx(1.0)
    assert res.setting == "map"

    zero = Resonance.from_map_eigenvalue(0j)
    assert zero.decay_rate == math.inf
    assert zero.lifetime == 0.0

    unimodular = Resonance.from_map_eigenvalue(1j)
    assert unimodular.lifetime == math.inf


def test_resonance_from_energy():
    """Test decay rate and lifetime of Hamiltonian resonances."""
    res = Resonance.from_energy(1.0 - 0.001j, hbar=0.01, method="cap", parameter=0.02)

    assert res.z == 1.0 - 0.001j
    assert res.decay_rate == pytest.approx(0.1)
    assert res.lifetime == pytest.approx(5.0)
    assert res.method == "cap"
    assert res.parameter == 0.02


def test_spectrum_record_canonical_order():
    """Test that eigenvalues are sorted by modulus, then real, then imaginary part."""
    rec = SpectrumRecord(n=4, eigenvalues=[-1.0, 0.5, 1j, 1.0])

    np.testing.assert_array_equal(rec.eigenvalues, [1.0, 1j, -1.0, 0.5])
    np.testing.assert_allclose(rec.moduli, [1.0, 1.0, 1.0, 0.5])
    assert rec.decay_rates[-1] == pytest.approx(math.log(2))

    order = canonical_order(np.array([1j, -1j]))
    assert list(order) == [0, 1]
    # moduli equal after rounding fall through to the real part
    assert list(canonical_order(np.array([-(1.0 + 1e-14), 1.0]))) == [1, 0]

    with pytest.raises(ValidationError):
        SpectrumRecord(n=3, eigenvalues=[1.0, 2.0])


def test_count_point_bounded():
    """Test that a count cannot exceed the dimension."""
    assert CountPoint(N=4, threshold=0.5, count=4).count == 4
    with pytest.raises(ValidationError):
        CountPoint(N=4, threshold=0.5, count=5)


def test_potential_models():
    """Test Potential1D validation and derived values."""
    square = double_square_barrier(height=1.0, width=0.3, inner_edge=0.5)

    assert square.kind == PotentialKind.PIECEWISE_CONSTANT
    assert not square.is_analytic
    assert square.support_radius == pytest.approx(0.8)
    assert square.max_height == 1.0
    np.testing.assert_array_equal(square.evaluate(np.array([0.0, 0.6, -0.7, 0.9])), [0, 1, 1, 0])
    np.testing.assert_allclose(
        np.array(square.layers()), [[-0.8, -0.5, 1.0], [-0.5, 0.5, 0.0], [0.5, 0.8, 1.0]]
    )

    gaussian = Potential1D(
        kind=PotentialKind.GAUSSIAN_BARRIERS, centers=(0.0,), heights=(2.0,), widths=(0.5,)
    )
    assert gaussian.is_analytic
    assert gaussian.max_height == pytest.approx(2.0)
    assert float(gaussian.evaluate(np.array(gaussian.support_radius))) == pytest.approx(1e-12)

    with pytest.raises(ValidationError):
        Potential1D(
            kind=PotentialKind.PIECEWISE_CONSTANT,
            intervals=((0.0, 1.0, 1.0), (0.5, 2.0, 1.0)),
        )
    with pytest.raises(ValidationError):
        Potential1D(kind=PotentialKind.GAUSSIAN_BARRIERS, centers=(0.0,), heights=(), widths=())


def test_grid_and_contour_models():
    """Test Grid1D, CapSpec and ScalingContour."""
    grid = Grid1D(half_width=1.0, n=200, hbar=0.1)
    assert grid.spacing == pytest.approx(0.01)
    assert grid.points[0] == pytest.approx(-0.995)
    assert grid.refined().n == 400

    with pytest.raises(ValidationError):
        Grid1D(half_width=1.0, n=100, hbar=0.1)

    cap = CapSpec(strength=0.1, onset=1.0)
    np.testing.assert_allclose(cap.profile(np.array([0.5, -1.5, 3.0])), [0.0, 0.25, 4.0])

    contour = ScalingContour(theta=0.3, onset=1.0)
    np.testing.assert_allclose(contour.deformation(np.array([0.5, 2.0, -3.0])), [0.0, 2.0, -3.0])
    assert ScalingContour(theta=0.3).is_uniform
    with pytest.raises(ValidationError):
        ScalingContour(theta=1.0)


def test_experiment_config_validation():
    """Test required fields and unknown-field rejection."""
    config = ExperimentConfig(
        command="classical-dim",
        open_map={"branch_count": 3, "kept": (0, 2)},
        depths=(1, 8),
    )
    assert config.schema_version == "wcl-config-v1"

    with pytest.raises(ValidationError, match="requires"):
        ExperimentConfig(command="weyl-fit", open_map={"branch_count": 3, "kept": (0, 2)})
    with pytest.raises(ValidationError):
        ExperimentConfig(command="pressure", open_map=config.open_map, colour="blue")
    with pytest.raises(ValidationError, match="gap-report"):
        ExperimentConfig(command="gap-report", N_ladder=(25, 125))
    with pytest.raises(ValidationError, match="grid"):
        ExperimentConfig(command="resonance-1d", potential=double_square_barrier(), method="cap")

    sweep = SweepConfig(experiments=(config,))
    assert len(sweep.experiments) == 1
    with pytest.raises(ValidationError):
        SweepConfig(experiments=())


def test_models_are_frozen():
    """Test that specs and results reject assignment after construction."""
    cantor = OpenMapSpec(branch_count=3, kept=(0, 2))
    record = SpectrumRecord(n=2, eigenvalues=[1.0, 0.5])
    point = CountPoint(N=9, threshold=0.5, count=3)

    with pytest.raises(ValidationError):
        cantor.branch_count = 5
    with pytest.raises(ValidationError):
        record.n = 3
    with pytest.raises(ValidationError):
        point.count = 4
