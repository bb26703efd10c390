"""Resonances of 1D Schrödinger operators as eigenvalues of nonselfadjoint grid Hamiltonians.

Both builders discretize P = -(ħ²/2) d²/dx² + V(x) on a cell-centred grid
with the 3-point Laplacian and Dirichlet ends. The complex absorbing
potential path adds -iηW(x) outside the interaction region; the complex
scaling path rotates the whole line, x -> x e^{iθ}, and therefore needs an
analytic potential.
"""

import logging
import math
from collections.abc import Sequence
from typing import Any, Literal

import numpy as np

from .exceptions import DomainError, FitDegenerateError, UnsupportedAnalyticityError
from .models import (
    CapSpec,
    ComplexMatrix,
    Grid1D,
    Potential1D,
    Resonance,
    ScalingContour,
    SpectrumRecord,
)
from .spectral import eigenvalues

logger = logging.getLogger(__name__)

# Minimum points per ħ before a grid counts as resolved
MIN_POINTS_PER_HBAR = 5.0

# Default resonance width cutoff, in units of ħ
DEFAULT_MAX_WIDTH = 10.0


def laplacian(grid: Grid1D) -> np.ndarray:
    """3-point second difference Δ_h with Dirichlet ends (dense)."""
    n = grid.n
    h2 = grid.spacing**2
    matrix = np.diag(np.full(n, -2.0 / h2))
    off = np.full(n - 1, 1.0 / h2)
    matrix += np.diag(off, 1) + np.diag(off, -1)
    return matrix


def grid_warnings(grid: Grid1D, potential: Potential1D, onset: float | None = None) -> list[str]:
    """Soft precondition checks for a grid Hamiltonian.

    Args:
        grid: Discretization
        potential: Potential on the grid
        onset: Start of the absorbing or scaled region, if any

    Returns:
        Human-readable warnings (empty when every check passes)
    """
    warnings = []
    ratio = grid.hbar / grid.spacing
    if ratio < MIN_POINTS_PER_HBAR:
        warnings.append(f"under-resolved grid: hbar/h = {ratio:.3g} < {MIN_POINTS_PER_HBAR:g}")
    if onset is not None:
        if grid.half_width <= 2.0 * onset:
            warnings.append(f"domain half-width {grid.half_width:g} <= 2*R0 = {2.0 * onset:g}")
        if onset < potential.support_radius:
            warnings.append(
                f"absorber onset {onset:g} inside the potential support "
                f"radius {potential.support_radius:.3g}"
            )
    for message in warnings:
        logger.warning(message)
    return warnings


def build_hamiltonian_cap(grid: Grid1D, potential: Potential1D, cap: CapSpec) -> ComplexMatrix:
    """H = -(ħ²/2)Δ_h + diag(V(x_j)) - iη·diag(W(x_j)).

    Violated soft preconditions (resolution, domain size, absorber placement)
    are logged as warnings; see :func:`grid_warnings`.

    Args:
        grid: Discretization
        potential: Real potential (either kind)
        cap: Absorber strength and profile

    Returns:
        Complex symmetric n x n matrix
    """
    grid_warnings(grid, potential, cap.onset)
    return _cap_matrix(grid, potential, cap)


def _cap_matrix(grid: Grid1D, potential: Potential1D, cap: CapSpec) -> ComplexMatrix:
    x = grid.points
    hamiltonian = (-0.5 * grid.hbar**2) * laplacian(grid).astype(np.complex128)
    absorber = cap.strength * cap.profile(x)
    hamiltonian[np.diag_indices(grid.n)] += potential.evaluate(x) - 1j * absorber
    logger.debug(f"Built CAP Hamiltonian n={grid.n}, eta={cap.strength:g}, R0={cap.onset:g}")
    return hamiltonian


def build_hamiltonian_scaled(
    grid: Grid1D, potential: Potential1D, theta: float | ScalingContour
) -> ComplexMatrix:
    """H_θ = -e^{-2iθ}(ħ²/2)Δ_h + diag(V(x_j e^{iθ})).

    Args:
        grid: Discretization
        potential: Analytic (gaussian) potential
        theta: Scaling angle in [0, π/4), or a uniform ScalingContour

    Returns:
        Complex n x n matrix; θ = 0 gives the real selfadjoint Hamiltonian

    Raises:
        UnsupportedAnalyticityError: If the potential is piecewise constant
        DomainError: If θ is out of range or the contour is not uniform
    """
    if not potential.is_analytic:
        raise UnsupportedAnalyticityError(
            "complex scaling needs an analytic potential; use the cap method for "
            "piecewise-constant potentials"
        )
    if isinstance(theta, ScalingContour):
        if not theta.is_uniform:
            raise DomainError("only uniform scaling is discretized; use the cap method instead")
        angle = theta.theta
    else:
        angle = float(theta)
    if not 0.0 <= angle < math.pi / 4:
        raise DomainError(f"scaling angle must lie in [0, pi/4), got {angle}")

    grid_warnings(grid, potential)
    return _scaled_matrix(grid, potential, angle)


def _scaled_matrix(grid: Grid1D, potential: Potential1D, angle: float) -> ComplexMatrix:
    rotation = np.exp(1j * angle)
    x = grid.points
    hamiltonian = (-0.5 * grid.hbar**2 / rotation**2) * laplacian(grid).astype(np.complex128)
    if angle:
        contour = ScalingContour(theta=angle)
        values = potential.evaluate(x + (rotation - 1.0) * contour.deformation(x))
    else:
        values = potential.evaluate(x)
    hamiltonian[np.diag_indices(grid.n)] += values
    logger.debug(f"Built scaled Hamiltonian n={grid.n}, theta={angle:g}")
    return hamiltonian


def hamiltonian_spectrum(
    grid: Grid1D,
    potential: Potential1D,
    method: Literal["cap", "scaling"],
    theta: float | None = None,
    cap: CapSpec | None = None,
    eig_method: Literal["lapack", "qr"] = "lapack",
) -> SpectrumRecord:
    """Build a grid Hamiltonian and compute its spectrum, recording the builder and warnings.

    Args:
        grid: Discretization
        potential: Potential
        method: "cap" or "scaling"
        theta: Scaling angle (scaling method)
        cap: Absorber (cap method)
        eig_method: Eigenvalue back-end

    Returns:
        SpectrumRecord with builder kind "cap" or "scaling"

    Raises:
        DomainError: If the parameters of the chosen method are missing
    """
    metadata: dict[str, Any] = {
        "kind": method,
        "grid": grid.model_dump(mode="json"),
        "potential": potential.model_dump(mode="json", exclude_defaults=True),
    }
    if method == "cap":
        if cap is None:
            raise DomainError("cap method requires a CapSpec")
        metadata["eta"] = cap.strength
        metadata["cap_onset"] = cap.onset
        metadata["warnings"] = grid_warnings(grid, potential, cap.onset)
        matrix = _cap_matrix(grid, potential, cap)
    elif method == "scaling":
        if theta is None:
            raise DomainError("scaling method requires theta")
        if not potential.is_analytic:
            raise UnsupportedAnalyticityError(
                "complex scaling needs an analytic potential; use the cap method for "
                "piecewise-constant potentials"
            )
        if not 0.0 <= theta < math.pi / 4:
            raise DomainError(f"scaling angle must lie in [0, pi/4), got {theta}")
        metadata["theta"] = float(theta)
        metadata["warnings"] = grid_warnings(grid, potential)
        matrix = _scaled_matrix(grid, potential, float(theta))
    else:
        raise DomainError(f"unknown grid method {method!r}")
    return eigenvalues(matrix, method=eig_method, builder=metadata)


def _method_parameter(rec: SpectrumRecord) -> tuple[str | None, float | None]:
    kind = rec.kind
    if kind == "cap":
        return kind, rec.builder.get("eta")
    if kind == "scaling":
        return kind, rec.builder.get("theta")
    return kind, None


def resonances_from_spectrum(
    rec: SpectrumRecord,
    energy_window: tuple[float, float],
    hbar: float,
    max_width: float = DEFAULT_MAX_WIDTH,
) -> list[Resonance]:
    """Eigenvalues with Re z in the window and 0 < -Im z <= max_width·ħ, sorted by Re z.

    Args:
        rec: Grid Hamiltonian spectrum
        energy_window: (low, high) bounds on Re z
        hbar: Semiclassical parameter
        max_width: Width cutoff in units of ħ

    Returns:
        Resonances with lifetimes ħ/(2|Im z|); possibly empty
    """
    low, high = energy_window
    method, parameter = _method_parameter(rec)
    found = []
    for z in rec.eigenvalues:
        if low <= z.real <= high and 0.0 < -z.imag <= max_width * hbar:
            found.append(
                Resonance.from_energy(complex(z), hbar, method=method, parameter=parameter)
            )
    found.sort(key=lambda res: (res.re, res.im))
    logger.debug(f"{len(found)} resonances in [{low:g}, {high:g}]")
    return found


def stable_resonances(
    first: Sequence[Resonance], second: Sequence[Resonance], rtol: float = 1e-4
) -> list[Resonance]:
    """Resonances of ``first`` that reappear in ``second`` within relative ``rtol``.

    ``second`` comes from a perturbed run (η -> 2η, θ -> θ + 0.05, or a
    refined grid). Eigenvalues that move are discretization or branch
    artifacts and are dropped.
    """
    if not second:
        return []
    others = np.array([res.z for res in second])
    kept = []
    for res in first:
        distance = float(np.min(np.abs(others - res.z)))
        if distance <= rtol * abs(res.z):
            kept.append(res)
    return kept


def narrowest(resonances: Sequence[Resonance], count: int) -> list[Resonance]:
    """The ``count`` resonances with the smallest |Im z|, returned sorted by Re z."""
    chosen = sorted(resonances, key=lambda res: abs(res.im))[:count]
    return sorted(chosen, key=lambda res: res.re)


def nearest_eigenvalue(rec: SpectrumRecord, target: complex) -> complex:
    """Eigenvalue of ``rec`` closest to ``target``."""
    if rec.n == 0:
        raise DomainError("empty spectrum")
    return complex(rec.eigenvalues[int(np.argmin(np.abs(rec.eigenvalues - target)))])


def richardson_order(coarse: complex, medium: complex, fine: complex) -> float:
    """Observed convergence order log2(|z_h - z_{h/2}| / |z_{h/2} - z_{h/4}|).

    Raises:
        FitDegenerateError: If two consecutive values coincide
    """
    first = abs(coarse - medium)
    second = abs(medium - fine)
    if first == 0.0 or second == 0.0:
        raise FitDegenerateError("coincident values; convergence order undefined")
    return math.log2(first / second)


def resonance_rows(resonances: Sequence[Resonance], n_grid: int | None = None) -> list[dict]:
    """Rows (method, hbar, re_z, im_z, lifetime, n_grid, theta_or_eta) for the CSV table."""
    return [
        {
            "method": res.method or "",
            "hbar": res.hbar,
            "re_z": res.re,
            "im_z": res.im,
            "lifetime": res.lifetime,
            "n_grid": n_grid,
            "theta_or_eta": res.parameter,
        }
        for res in resonances
    ]
