"""Dense complex eigenvalue problems.

Two back-ends compute the full spectrum of a dense nonsymmetric matrix:

* ``lapack``: scipy's zgeev driver (Hessenberg reduction plus shifted QR).
  Exactly Hermitian input goes through ``eigvalsh``.
* ``qr``: an explicit reduction to Hessenberg form followed by
  Wilkinson-shifted QR sweeps built from Givens rotations, with deflation
  and a hard limit of 30·n sweeps. Slower; kept as an independent check of
  the LAPACK path on small matrices.

Eigenvectors are only computed on request, by inverse iteration.
"""

import cmath
import logging
import math
from typing import Any, Literal

import numpy as np
import scipy.linalg

from .exceptions import ConvergenceError, DomainError
from .models import ComplexMatrix, SpectrumRecord
from .utils import params_hash

logger = logging.getLogger(__name__)

EPS = np.finfo(float).eps

# Sweeps without deflation before an exceptional shift is used
_EXCEPTIONAL_EVERY = 10


def as_complex_matrix(A: Any) -> ComplexMatrix:
    """Validate and convert ``A`` to a square finite complex128 array.

    Args:
        A: Array-like matrix

    Returns:
        C-contiguous complex128 copy

    Raises:
        DomainError: If A is not square, empty, or has non-finite entries
    """
    matrix = np.array(A, dtype=np.complex128, order="C")
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {matrix.shape}")
    if matrix.shape[0] < 1:
        raise DomainError("matrix dimension must be >= 1")
    if not np.all(np.isfinite(matrix)):
        raise DomainError("matrix has non-finite entries")
    return matrix


def dft_matrix(
    n: int,
    sign_convention: Literal["negative", "positive"] = "negative",
    phases: tuple[float, float] = (0.0, 0.0),
) -> ComplexMatrix:
    """Unitary DFT matrix with entries exp(∓2πi (k+q)(j+p)/n)/√n.

    Args:
        n: Dimension (>= 1)
        sign_convention: "negative" for exp(-2πi...), "positive" for exp(+2πi...)
        phases: Boundary phases (q, p); (0, 0) is the plain DFT

    Returns:
        n x n unitary matrix

    Raises:
        DomainError: If n < 1 or the sign convention is unknown
    """
    if n < 1:
        raise DomainError(f"DFT dimension must be >= 1, got {n}")
    if sign_convention not in ("negative", "positive"):
        raise DomainError(f"unknown sign convention {sign_convention!r}")
    sign = -1.0 if sign_convention == "negative" else 1.0
    q, p = phases
    rows = np.arange(n) + q
    cols = np.arange(n) + p
    # Reduce the integer part of the product first to keep the phase accurate
    if q == 0.0 and p == 0.0:
        exponent = np.outer(np.arange(n), np.arange(n)) % n / n
    else:
        exponent = np.outer(rows, cols) / n
    return np.exp(sign * 2j * np.pi * exponent) / math.sqrt(n)


def unitarity_defect(A: Any) -> float:
    """max |(A*A - I)_ij|."""
    matrix = np.asarray(A, dtype=np.complex128)
    return float(np.abs(matrix.conj().T @ matrix - np.eye(matrix.shape[0])).max())


def _wilkinson_shift(H: np.ndarray, hi: int) -> complex:
    a, b = H[hi - 1, hi - 1], H[hi - 1, hi]
    c, d = H[hi, hi - 1], H[hi, hi]
    half = (a - d) / 2.0
    root = np.sqrt(half * half + b * c)
    mean = (a + d) / 2.0
    first, second = mean + root, mean - root
    return complex(first if abs(first - d) <= abs(second - d) else second)


def _qr_sweep(block: np.ndarray, shift: complex) -> None:
    """One shifted QR step H - μI = QR, H <- RQ + μI on a Hessenberg block, in place."""
    m = block.shape[0]
    block[np.diag_indices(m)] -= shift
    rotations = []
    for k in range(m - 1):
        x, y = block[k, k], block[k + 1, k]
        r = math.hypot(abs(x), abs(y))
        if r == 0.0:
            c, s = 1.0 + 0j, 0j
        else:
            c, s = x / r, y / r
        G = np.array([[np.conj(c), np.conj(s)], [-s, c]])
        block[k : k + 2, k:] = G @ block[k : k + 2, k:]
        rotations.append(G)
    for k, G in enumerate(rotations):
        block[: k + 2, k : k + 2] = block[: k + 2, k : k + 2] @ G.conj().T
    block[np.diag_indices(m)] += shift


def hessenberg_qr_eigenvalues(A: Any, max_sweeps: int | None = None) -> np.ndarray:
    """Eigenvalues by Hessenberg reduction and shifted QR with deflation.

    Args:
        A: Square complex matrix
        max_sweeps: Sweep limit (default 30·n)

    Returns:
        All n eigenvalues, in deflation order

    Raises:
        ConvergenceError: If the sweep limit is reached before full deflation
    """
    H = np.array(scipy.linalg.hessenberg(as_complex_matrix(A)), dtype=np.complex128)
    n = H.shape[0]
    limit = max_sweeps if max_sweeps is not None else 30 * n
    norm = float(np.abs(H).max()) or 1.0
    values = np.empty(n, dtype=np.complex128)
    hi = n - 1
    sweeps = 0
    stalled = 0

    while hi >= 0:
        # Locate the start of the trailing unreduced block
        lo = hi
        while lo > 0:
            scale = abs(H[lo, lo]) + abs(H[lo - 1, lo - 1])
            if scale == 0.0:
                scale = norm
            if abs(H[lo, lo - 1]) <= EPS * scale:
                H[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            values[hi] = H[hi, hi]
            hi -= 1
            stalled = 0
            continue
        if sweeps >= limit:
            raise ConvergenceError(
                f"QR iteration did not converge after {sweeps} sweeps "
                f"({hi + 1} of {n} eigenvalues undeflated)"
            )
        sweeps += 1
        stalled += 1
        if stalled % _EXCEPTIONAL_EVERY == 0:
            shift = complex(H[hi, hi] + 0.75 * abs(H[hi, hi - 1]))
            logger.debug(f"Exceptional shift at sweep {sweeps} (active block {lo}..{hi})")
        else:
            shift = _wilkinson_shift(H, hi)
        block = H[lo : hi + 1, lo : hi + 1]
        _qr_sweep(block, shift)

    logger.debug(f"QR converged in {sweeps} sweeps for n={n}")
    return values


def inverse_iteration(
    A: Any, eigenvalue: complex, iterations: int = 3
) -> tuple[complex, np.ndarray, float]:
    """Refine an eigenpair by shifted inverse iteration.

    Args:
        A: Square complex matrix
        eigenvalue: Approximate eigenvalue used as shift
        iterations: Number of solves

    Returns:
        Tuple (Rayleigh quotient, unit eigenvector, residual ‖Av - λv‖ / ‖A‖_max)
    """
    matrix = as_complex_matrix(A)
    n = matrix.shape[0]
    norm = float(np.abs(matrix).max()) or 1.0
    # Nudge off the exact eigenvalue so the LU factorisation stays regular
    shift = eigenvalue + 64 * EPS * norm
    lu = scipy.linalg.lu_factor(matrix - shift * np.eye(n), check_finite=False)
    vector = np.ones(n, dtype=np.complex128) / math.sqrt(n)
    for _ in range(iterations):
        vector = scipy.linalg.lu_solve(lu, vector, check_finite=False)
        size = np.linalg.norm(vector)
        if not np.isfinite(size) or size == 0.0:
            break
        vector /= size
    quotient = complex(np.vdot(vector, matrix @ vector))
    residual = float(np.linalg.norm(matrix @ vector - quotient * vector) / norm)
    return quotient, vector, residual


def eigenvalues(
    A: Any,
    method: Literal["lapack", "qr"] = "lapack",
    builder: dict[str, Any] | None = None,
    residual_count: int = 0,
    max_sweeps: int | None = None,
) -> SpectrumRecord:
    """All eigenvalues of a dense complex matrix.

    Args:
        A: Square matrix with finite entries
        method: "lapack" (default) or "qr" (explicit Hessenberg/QR reference path)
        builder: Metadata describing how A was built (stored and hashed)
        residual_count: Number of leading eigenvalues to check by inverse iteration
        max_sweeps: Sweep limit for the "qr" path (default 30·n)

    Returns:
        SpectrumRecord in canonical order

    Raises:
        DomainError: On non-square input, non-finite entries, or an unknown method
        ConvergenceError: If the eigensolver fails to converge
    """
    matrix = as_complex_matrix(A)
    n = matrix.shape[0]

    if method == "lapack":
        try:
            if np.array_equal(matrix, matrix.conj().T):
                values = scipy.linalg.eigvalsh(matrix, check_finite=False).astype(np.complex128)
            else:
                values = scipy.linalg.eigvals(matrix, check_finite=False)
        except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as e:
            raise ConvergenceError(f"LAPACK eigensolver failed for n={n}: {e}") from e
    elif method == "qr":
        values = hessenberg_qr_eigenvalues(matrix, max_sweeps=max_sweeps)
    else:
        raise DomainError(f"unknown eigenvalue method {method!r}")

    metadata = dict(builder) if builder is not None else {"kind": "matrix", "n": n}
    record = SpectrumRecord(
        n=n,
        eigenvalues=values,
        builder=metadata,
        params_hash=params_hash(metadata),
        method=method,
    )
    if residual_count > 0:
        leading = record.eigenvalues[: min(residual_count, n)]
        residuals = tuple(inverse_iteration(matrix, lam)[2] for lam in leading)
        record = record.model_copy(update={"residuals": residuals})

    logger.info(f"Computed {n} eigenvalues ({method})")
    return record


def spectral_radius(rec: SpectrumRecord) -> float:
    """max |λ| of a non-empty record.

    Raises:
        DomainError: If the record is empty
    """
    if rec.n == 0:
        raise DomainError("spectral radius of an empty record")
    return float(rec.moduli.max())


def trace_defect(A: Any, rec: SpectrumRecord) -> float:
    """|Σ λ_j - trace(A)|."""
    matrix = np.asarray(A, dtype=np.complex128)
    return float(abs(rec.eigenvalues.sum() - np.trace(matrix)))


def determinant_defect(A: Any, rec: SpectrumRecord) -> float:
    """Relative difference |Π λ_j / det(A) - 1| with det(A) from an LU factorisation.

    Both products are accumulated as complex logarithms, so large or small
    determinants do not overflow. Returns 0 when both vanish and inf when only
    one does.
    """
    matrix = as_complex_matrix(A)
    lu, piv = scipy.linalg.lu_factor(matrix, check_finite=False)
    diagonal = np.diag(lu)
    values = rec.eigenvalues
    lu_zero = bool(np.any(diagonal == 0))
    eig_zero = bool(np.any(values == 0))
    if lu_zero or eig_zero:
        return 0.0 if lu_zero and eig_zero else math.inf
    swaps = int(np.sum(piv != np.arange(piv.size)))
    log_det = np.sum(np.log(diagonal)) + (1j * math.pi if swaps % 2 else 0.0)
    log_prod = np.sum(np.log(values))
    return abs(cmath.exp(complex(log_prod - log_det)) - 1.0)
