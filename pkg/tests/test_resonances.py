"""Tests for grid Hamiltonians with complex absorbing potentials and complex scaling."""

import logging

import numpy as np
import pytest

from weyl_lab import (
    CapSpec,
    DomainError,
    FitDegenerateError,
    Grid1D,
    Potential1D,
    SpectrumRecord,
    UnsupportedAnalyticityError,
    build_hamiltonian_cap,
    build_hamiltonian_scaled,
    hamiltonian_spectrum,
    resonances_from_spectrum,
    stable_resonances,
    transfer_matrix_resonances,
)
from weyl_lab.models import (
    PotentialKind,
    Resonance,
    ScalingContour,
    double_gaussian_barrier,
    double_square_barrier,
)
from weyl_lab.resonances import (
    grid_warnings,
    laplacian,
    narrowest,
    nearest_eigenvalue,
    resonance_rows,
    richardson_order,
)

logger = logging.getLogger(__name__)


@pytest.fixture
def flat_potential():
    """Gaussian family with zero height (free particle)."""
    return Potential1D(
        kind=PotentialKind.GAUSSIAN_BARRIERS, centers=(0.0,), heights=(0.0,), widths=(1.0,)
    )


def test_laplacian():
    """Test the 3-point stencil with Dirichlet ends."""
    grid = Grid1D(half_width=1.0, n=200, hbar=1.0)

    matrix = laplacian(grid)

    h2 = grid.spacing**2
    assert matrix[0, 0] == pytest.approx(-2 / h2)
    assert matrix[0, 1] == pytest.approx(1 / h2)
    assert matrix[0, 2] == 0.0
    np.testing.assert_array_equal(matrix, matrix.T)


def test_cap_hamiltonian_structure():
    """Test that the CAP Hamiltonian is complex symmetric with -i eta W on the diagonal."""
    grid = Grid1D(half_width=4.0, n=400, hbar=0.1)
    potential = double_square_barrier()
    cap = CapSpec(strength=0.5, onset=1.0)

    matrix = build_hamiltonian_cap(grid, potential, cap)

    np.testing.assert_array_equal(matrix, matrix.T)
    expected = -cap.strength * cap.profile(grid.points)
    np.testing.assert_allclose(np.diag(matrix).imag, expected)
    inside = np.abs(grid.points) < 1.0
    assert np.all(np.diag(matrix).imag[inside] == 0.0)


def test_scaled_free_particle(flat_potential):
    """Test that scaling rotates the free spectrum by -2 theta."""
    grid = Grid1D(half_width=1.0, n=200, hbar=1.0)

    rec = hamiltonian_spectrum(grid, flat_potential, "scaling", theta=0.3)

    np.testing.assert_allclose(np.angle(rec.eigenvalues), -0.6, atol=1e-8)
    assert rec.kind == "scaling"
    assert rec.builder["theta"] == 0.3


def test_scaled_theta_zero_is_real(flat_potential):
    """Test that theta=0 reproduces the selfadjoint Hamiltonian."""
    grid = Grid1D(half_width=1.0, n=200, hbar=1.0)

    matrix = build_hamiltonian_scaled(grid, flat_potential, 0.0)

    np.testing.assert_allclose(matrix.imag, 0.0, atol=1e-12)
    np.testing.assert_allclose(np.diag(matrix).real, 1.0 / grid.spacing**2)


def test_scaled_potential_on_rotated_line(flat_potential):
    """Test that a uniform contour puts V(x e^{i theta}) on the diagonal."""
    grid = Grid1D(half_width=4.0, n=400, hbar=0.05)
    potential = double_gaussian_barrier()
    contour = ScalingContour(theta=0.3)

    matrix = build_hamiltonian_scaled(grid, potential, contour)
    free = build_hamiltonian_scaled(grid, flat_potential, contour)

    expected = potential.evaluate(grid.points * np.exp(0.3j))
    np.testing.assert_allclose(np.diag(matrix - free), expected, rtol=1e-10, atol=1e-12)


def test_scaling_rejects_piecewise_potential():
    """Test that complex scaling of a square barrier raises."""
    grid = Grid1D(half_width=4.0, n=400, hbar=0.05)

    with pytest.raises(UnsupportedAnalyticityError):
        build_hamiltonian_scaled(grid, double_square_barrier(), 0.3)
    with pytest.raises(UnsupportedAnalyticityError):
        hamiltonian_spectrum(grid, double_square_barrier(), "scaling", theta=0.3)
    assert issubclass(UnsupportedAnalyticityError, DomainError)


def test_scaling_parameter_checks(flat_potential):
    """Test theta range and contour checks."""
    grid = Grid1D(half_width=1.0, n=200, hbar=1.0)

    with pytest.raises(DomainError):
        build_hamiltonian_scaled(grid, flat_potential, 0.9)
    with pytest.raises(DomainError):
        build_hamiltonian_scaled(grid, flat_potential, ScalingContour(theta=0.3, onset=0.5))
    with pytest.raises(DomainError):
        hamiltonian_spectrum(grid, flat_potential, "scaling")
    with pytest.raises(DomainError):
        hamiltonian_spectrum(grid, flat_potential, "cap")
    with pytest.raises(DomainError):
        hamiltonian_spectrum(grid, flat_potential, "pml")


def test_grid_warnings():
    """Test soft precondition warnings."""
    potential = double_square_barrier()

    coarse = Grid1D(half_width=8.0, n=200, hbar=0.01)
    assert any("under-resolved" in w for w in grid_warnings(coarse, potential))

    fine = Grid1D(half_width=4.0, n=800, hbar=0.05)
    assert grid_warnings(fine, potential, onset=1.0) == []

    messages = grid_warnings(fine, potential, onset=0.6)
    assert any("inside the potential support" in w for w in messages)

    small = Grid1D(half_width=1.5, n=800, hbar=0.05)
    assert any("half-width" in w for w in grid_warnings(small, potential, onset=1.0))


def test_resonances_from_spectrum():
    """Test window and width selection of resonance candidates."""
    rec = SpectrumRecord(n=3, eigenvalues=[1.0 - 0.001j, 2.0, 0.5 - 1.0j])

    found = resonances_from_spectrum(rec, (0.9, 1.1), hbar=0.001, max_width=10.0)

    assert len(found) == 1
    assert found[0].z == 1.0 - 0.001j
    assert found[0].lifetime == pytest.approx(0.001 / 0.002)
    assert resonances_from_spectrum(rec, (0.0, 3.0), hbar=0.001, max_width=0.5) == []


def test_stable_resonances_and_narrowest():
    """Test the perturbation filter and narrow-width selection."""
    first = [
        Resonance.from_energy(1.0 - 1e-4j, 0.05),
        Resonance.from_energy(2.0 - 1e-2j, 0.05),
    ]
    second = [
        Resonance.from_energy(1.0 + 1e-9 - 1e-4j, 0.05),
        Resonance.from_energy(2.3 - 1e-2j, 0.05),
    ]

    stable = stable_resonances(first, second)

    assert [res.re for res in stable] == [1.0]
    assert stable_resonances(first, []) == []
    assert [res.re for res in narrowest(first, 1)] == [1.0]
    assert [res.re for res in narrowest(first[::-1], 2)] == [1.0, 2.0]


def test_richardson_order():
    """Test the observed order of a second-order sequence."""
    exact = 1.0 - 0.01j
    values = [exact + 0.1 * h**2 for h in (0.4, 0.2, 0.1)]

    assert richardson_order(*values) == pytest.approx(2.0)

    with pytest.raises(FitDegenerateError, match="coincident"):
        richardson_order(1.0, 1.0, 2.0)


def test_resonance_rows():
    """Test CSV rows of resonances."""
    rows = resonance_rows([Resonance.from_energy(1.0 - 0.01j, 0.1, "cap", 0.02)], n_grid=800)

    assert rows == [
        {
            "method": "cap",
            "hbar": 0.1,
            "re_z": 1.0,
            "im_z": -0.01,
            "lifetime": pytest.approx(5.0),
            "n_grid": 800,
            "theta_or_eta": 0.02,
        }
    ]


def test_cap_matches_transfer_matrix_oracle():
    """Test the CAP resonance of a square double barrier against the exact root."""
    potential = double_square_barrier(height=1.0, width=0.3, inner_edge=0.5)
    hbar = 0.05
    (oracle,) = transfer_matrix_resonances(potential, hbar, (0.005, 0.02, -1e-3, 1e-4))

    grid = Grid1D(half_width=4.0, n=1600, hbar=hbar)
    rec = hamiltonian_spectrum(grid, potential, "cap", cap=CapSpec(strength=0.01, onset=1.0))

    z = nearest_eigenvalue(rec, oracle.z)
    assert oracle.re == pytest.approx(0.0108, rel=2e-2)
    assert z.real == pytest.approx(oracle.re, rel=1e-3)
    assert rec.builder["warnings"] == []
