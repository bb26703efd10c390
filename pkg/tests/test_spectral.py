"""Tests for the dense eigenvalue back-ends."""

import logging
import math

import numpy as np
import pytest
from scipy import optimize, stats

from weyl_lab import ConvergenceError, DomainError, SpectrumRecord, eigenvalues, spectral_radius
from weyl_lab.spectral import (
    determinant_defect,
    dft_matrix,
    hessenberg_qr_eigenvalues,
    inverse_iteration,
    trace_defect,
    unitarity_defect,
)

logger = logging.getLogger(__name__)


@pytest.fixture
def random_matrix():
    """Seeded dense complex 30 x 30 matrix."""
    rng = np.random.default_rng(12345)
    return rng.standard_normal((30, 30)) + 1j * rng.standard_normal((30, 30))


def test_dft_matrix():
    """Test the DFT closed form and its unitarity."""
    np.testing.assert_allclose(dft_matrix(2), np.array([[1, 1], [1, -1]]) / math.sqrt(2))
    np.testing.assert_allclose(dft_matrix(3, "positive"), dft_matrix(3).conj())

    assert unitarity_defect(dft_matrix(4)) < 1e-14
    assert unitarity_defect(dft_matrix(12, phases=(0.5, 0.25))) < 1e-13

    with pytest.raises(DomainError):
        dft_matrix(0)
    with pytest.raises(DomainError):
        dft_matrix(4, "sideways")


@pytest.mark.parametrize("n", [64, 256])
def test_dft_eigenvalues_on_unit_circle(n):
    """Test that DFT eigenvalues are unimodular and satisfy trace/determinant identities."""
    matrix = dft_matrix(n)

    rec = eigenvalues(matrix)

    assert rec.n == n
    assert np.max(np.abs(rec.moduli - 1.0)) < 1e-10
    assert trace_defect(matrix, rec) < 1e-9
    assert determinant_defect(matrix, rec) < 1e-8


def test_hermitian_input():
    """Test that exactly Hermitian matrices come back sorted by modulus."""
    rec = eigenvalues(np.diag([1.0, 2.0, 3.0]))

    np.testing.assert_allclose(rec.eigenvalues, [3.0, 2.0, 1.0])
    assert rec.method == "lapack"
    assert rec.builder == {"kind": "matrix", "n": 3}
    assert len(rec.params_hash) == 16


def test_qr_matches_lapack(random_matrix):
    """Test the explicit Hessenberg/QR path against LAPACK."""
    lapack = eigenvalues(random_matrix)
    qr = eigenvalues(random_matrix, method="qr")

    assert qr.method == "qr"
    np.testing.assert_allclose(qr.eigenvalues, lapack.eigenvalues, atol=1e-9)
    assert trace_defect(random_matrix, qr) < 1e-9
    assert determinant_defect(random_matrix, qr) < 1e-9


def test_qr_sweep_limit(random_matrix):
    """Test that the sweep limit raises ConvergenceError."""
    with pytest.raises(ConvergenceError):
        hessenberg_qr_eigenvalues(random_matrix, max_sweeps=1)


def test_inverse_iteration_residuals(random_matrix):
    """Test residuals of the leading eigenpairs."""
    rec = eigenvalues(random_matrix, residual_count=3)

    assert len(rec.residuals) == 3
    assert max(rec.residuals) < 1e-8

    value, vector, residual = inverse_iteration(random_matrix, rec.eigenvalues[0])
    assert abs(value - rec.eigenvalues[0]) < 1e-8
    assert np.linalg.norm(vector) == pytest.approx(1.0)
    assert residual < 1e-8


def test_invalid_input():
    """Test validation of matrix input."""
    with pytest.raises(DomainError):
        eigenvalues(np.ones((2, 3)))
    with pytest.raises(DomainError):
        eigenvalues(np.array([[1.0, np.nan], [0.0, 1.0]]))
    with pytest.raises(DomainError):
        eigenvalues(np.eye(2), method="arnoldi")


def test_spectral_radius():
    """Test max modulus of a record."""
    rec = eigenvalues(np.diag([0.3, -0.5j]))

    assert spectral_radius(rec) == pytest.approx(0.5)

    with pytest.raises(DomainError):
        spectral_radius(SpectrumRecord(n=0, eigenvalues=[]))


def test_determinant_defect_singular():
    """Test the determinant check on a singular matrix."""
    matrix = np.array([[1.0, 1.0], [1.0, 1.0]])

    assert determinant_defect(matrix, SpectrumRecord(n=2, eigenvalues=[2.0, 0.0])) == 0.0
    assert determinant_defect(matrix, SpectrumRecord(n=2, eigenvalues=[2.0, 1.0])) == math.inf


def test_small_dft_eigenvalues():
    """Test the 4 x 4 DFT: eigenvalues among 1, -1, i, -i and unimodular."""
    rec = eigenvalues(dft_matrix(4))

    fourth_roots = np.array([1.0, -1.0, 1j, -1j])
    for value in rec.eigenvalues:
        assert np.min(np.abs(fourth_roots - value)) < 1e-10
    assert np.max(np.abs(rec.moduli - 1.0)) < 1e-10
    np.testing.assert_allclose(dft_matrix(1), [[1.0]])


def test_diagonal_examples():
    """Test identity, triangular and zero inputs."""
    np.testing.assert_allclose(eigenvalues(np.eye(5)).eigenvalues, np.ones(5))
    np.testing.assert_allclose(
        eigenvalues(np.diag([1.0, 2.0, 3.0]), method="qr").eigenvalues, [3.0, 2.0, 1.0]
    )
    assert spectral_radius(eigenvalues(np.zeros((3, 3)))) == 0.0
    assert spectral_radius(eigenvalues(dft_matrix(16))) == pytest.approx(1.0, abs=1e-10)


def test_similarity_invariance():
    """Test that A and Q* A Q have the same eigenvalues for a random unitary Q."""
    rng = np.random.default_rng(2024)
    n = 64
    matrix = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    unitary = stats.unitary_group.rvs(n, random_state=rng)

    original = eigenvalues(matrix).eigenvalues
    rotated = eigenvalues(unitary.conj().T @ matrix @ unitary).eigenvalues

    distance = np.abs(original[:, None] - rotated[None, :])
    rows, cols = optimize.linear_sum_assignment(distance)
    assert np.max(distance[rows, cols]) < 1e-8
