"""Quantized open and damped baker maps.

The open baker B_N = F_N^† · blockdiag(G_0, ..., G_{M-1}) keeps the DFT block
G_i = F_{N/M} on every surviving branch and zeroes the others, so it is a
partial isometry of rank D·N/M. The damped baker multiplies the closed
baker by the amplitude factor e^{-b(x_j)} at x_j = (j + ½)/N. The effective
Planck constant is 1/(2πN).
"""

import logging
from typing import Any, Literal

import numpy as np
import scipy.fft
import scipy.linalg

from .exceptions import DomainError
from .models import (
    ComplexMatrix,
    MapKind,
    OpenMapSpec,
    QuantumMapSpec,
    Resonance,
    SpectrumRecord,
)
from .spectral import dft_matrix, eigenvalues
from .utils import params_hash

logger = logging.getLogger(__name__)

# Dimensions from which F_N^† is applied by inverse FFT instead of being formed
BLOCKWISE_THRESHOLD = 1024


def _check_divisible(spec: QuantumMapSpec) -> None:
    if spec.block_size * spec.open_map.branch_count != spec.N:
        raise DomainError(
            f"N={spec.N} is not divisible by M={spec.open_map.branch_count}"
        )


def _inverse_dft_columns(blocks: np.ndarray, phases: tuple[float, float]) -> np.ndarray:
    """F_N^† · X without forming F_N.

    F_N = c·D_p·F0·D_q with F0 the plain unitary DFT, so
    F_N^† X = c̄·D_q^*·ifft(D_p^* X).
    """
    n = blocks.shape[0]
    q, p = phases
    k = np.arange(n)
    scaled = blocks * np.exp(2j * np.pi * k * p / n)[:, None] if p else blocks
    out = scipy.fft.ifft(scaled, axis=0, norm="ortho")
    if q:
        out *= (np.exp(2j * np.pi * q * p / n) * np.exp(2j * np.pi * q * k / n))[:, None]
    return out


def _baker_matrix(
    open_map: OpenMapSpec, N: int, phases: tuple[float, float], blockwise: bool
) -> ComplexMatrix:
    m = open_map.branch_count
    size = N // m
    block = dft_matrix(size, phases=phases)
    kept = set(open_map.kept)

    if not blockwise:
        blocks = [block if i in kept else np.zeros((size, size)) for i in range(m)]
        inverse = dft_matrix(N, phases=phases).conj().T
        return inverse @ scipy.linalg.block_diag(*blocks)

    matrix = np.zeros((N, N), dtype=np.complex128)
    for i in sorted(kept):
        columns = np.zeros((N, size), dtype=np.complex128)
        columns[i * size : (i + 1) * size, :] = block
        matrix[:, i * size : (i + 1) * size] = _inverse_dft_columns(columns, phases)
    return matrix


def quantize_open_baker(spec: QuantumMapSpec, blockwise: bool | None = None) -> ComplexMatrix:
    """Open baker propagator B_N.

    Args:
        spec: Quantization with kind=open
        blockwise: Assemble by inverse FFT per column block (default: N >= 1024)

    Returns:
        N x N partial isometry of rank D·N/M

    Raises:
        DomainError: If N is not divisible by M or the spec is not of kind open
    """
    if spec.kind != MapKind.OPEN:
        raise DomainError(f"expected an open map spec, got kind={spec.kind.value}")
    _check_divisible(spec)
    use_blocks = spec.N >= BLOCKWISE_THRESHOLD if blockwise is None else blockwise
    matrix = _baker_matrix(spec.open_map, spec.N, spec.phases, use_blocks)
    logger.debug(
        f"Built open baker N={spec.N}, M={spec.open_map.branch_count}, "
        f"kept={spec.open_map.kept} ({'blockwise' if use_blocks else 'dense'})"
    )
    return matrix


def quantize_damped_baker(spec: QuantumMapSpec, blockwise: bool | None = None) -> ComplexMatrix:
    """Damped baker propagator D_N = U_N · diag(e^{-b(x_j)}).

    U_N is the closed baker on the same number of branches; the surviving
    branches of ``spec.open_map`` are not used.

    Args:
        spec: Quantization with kind=damped and a damping field
        blockwise: Assembly mode of U_N (default: N >= 1024)

    Returns:
        N x N matrix with singular values e^{-b(x_j)}

    Raises:
        DomainError: If the spec is not of kind damped, the damping is missing or N is
            not divisible by M
    """
    if spec.kind != MapKind.DAMPED:
        raise DomainError(f"expected a damped map spec, got kind={spec.kind.value}")
    if spec.damping is None:
        raise DomainError("damped baker requires a damping field")
    _check_divisible(spec)
    closed = OpenMapSpec.closed(spec.open_map.branch_count)
    use_blocks = spec.N >= BLOCKWISE_THRESHOLD if blockwise is None else blockwise
    unitary = _baker_matrix(closed, spec.N, spec.phases, use_blocks)
    positions = (np.arange(spec.N) + 0.5) / spec.N
    amplitude = np.exp(-spec.damping.evaluate(positions))
    logger.debug(f"Built damped baker N={spec.N}, b̄={spec.damping.mean:.6g}")
    return unitary * amplitude[None, :]


def quantize(spec: QuantumMapSpec, blockwise: bool | None = None) -> ComplexMatrix:
    """Build the propagator matching ``spec.kind``."""
    if spec.kind == MapKind.DAMPED:
        return quantize_damped_baker(spec, blockwise=blockwise)
    return quantize_open_baker(spec, blockwise=blockwise)


def rank_count(B: Any, tol: float | None = None) -> int:
    """Number of singular values above ``tol``.

    Args:
        B: Square matrix
        tol: Threshold (default 1e-8 times the largest singular value)

    Returns:
        Numerical rank

    Raises:
        DomainError: If tol <= 0
    """
    singular = scipy.linalg.svdvals(np.asarray(B, dtype=np.complex128))
    if singular.size == 0 or singular[0] == 0.0:
        return 0
    threshold = 1e-8 * float(singular[0]) if tol is None else tol
    if threshold <= 0.0:
        raise DomainError(f"rank tolerance must be > 0, got {threshold}")
    return int(np.sum(singular > threshold))


def spec_metadata(spec: QuantumMapSpec) -> dict[str, Any]:
    """Builder metadata stored with a map spectrum."""
    metadata: dict[str, Any] = {
        "kind": spec.kind.value,
        "M": spec.open_map.branch_count,
        "kept": list(spec.open_map.kept),
        "N": spec.N,
        "phases": list(spec.phases),
    }
    if spec.damping is not None:
        metadata["damping"] = list(spec.damping.values)
        if spec.damping.profile is not None:
            metadata["profile"] = list(spec.damping.profile)
    return metadata


def map_spectrum(
    spec: QuantumMapSpec,
    method: Literal["lapack", "qr"] = "lapack",
    residual_count: int = 0,
) -> SpectrumRecord:
    """Quantize ``spec`` and compute all its eigenvalues.

    Args:
        spec: Quantum map specification
        method: Eigenvalue back-end
        residual_count: Leading eigenvalues checked by inverse iteration

    Returns:
        SpectrumRecord whose builder metadata identifies the map
    """
    metadata = spec_metadata(spec)
    record = eigenvalues(
        quantize(spec), method=method, builder=metadata, residual_count=residual_count
    )
    logger.info(
        f"Map spectrum {spec.kind.value} N={spec.N} (hbar_eff={spec.hbar_eff:.3e}) "
        f"[{params_hash(metadata)}]: "
        f"radius {float(record.moduli.max()):.6f}"
    )
    return record


def map_resonances(rec: SpectrumRecord) -> list[Resonance]:
    """Decay rates γ = -log|λ| and lifetimes 1/(2γ) of a map spectrum, canonical order."""
    return [Resonance.from_map_eigenvalue(complex(value)) for value in rec.eigenvalues]