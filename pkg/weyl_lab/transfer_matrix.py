"""Exact resonances of piecewise-constant 1D potentials by the transfer-matrix method.

The wave function starts as the left-outgoing wave e^{-ikx} at the left edge
of the support and is propagated through each constant layer with the 2x2
matrix acting on (ψ, ψ'). The outgoing-wave mismatch

    f(z) = ψ'(R) - ik ψ(R),  k = √(2z)/ħ (principal branch)

vanishes exactly at resonances (Re z > 0, Im z < 0) and at bound states
(z < 0). Roots in a search box are counted by the argument principle and
refined by Newton's method; the number of refined roots must equal the
winding number of f over the box boundary.
"""

import logging
import math
from collections.abc import Callable

import numpy as np
from scipy import optimize

from .exceptions import DomainError, ResonanceSearchError
from .models import Potential1D, Resonance

logger = logging.getLogger(__name__)

# Largest phase step tolerated between neighbouring boundary samples
MAX_PHASE_STEP = math.pi / 3

# Split fractions tried in order when a cut passes too close to a root
SPLIT_FRACTIONS = (0.382, 0.5, 0.618, 0.447)

MAX_SUBDIVISION_DEPTH = 40
MAX_EDGE_SAMPLES = 1 << 16
INITIAL_EDGE_SAMPLES = 32


def outgoing_mismatch(
    potential: Potential1D, hbar: float
) -> Callable[[np.ndarray | complex], np.ndarray]:
    """Vectorized f(z) for a piecewise-constant potential.

    Args:
        potential: Piecewise-constant potential
        hbar: Planck constant

    Returns:
        Function mapping complex energies (scalar or array) to f(z)

    Raises:
        DomainError: If the potential is not piecewise constant
    """
    if potential.is_analytic:
        raise DomainError("the transfer-matrix oracle needs a piecewise_constant potential")
    layers = potential.layers()

    def mismatch(z: np.ndarray | complex) -> np.ndarray:
        energy = np.asarray(z, dtype=np.complex128)
        k = np.sqrt(2.0 * energy) / hbar
        psi = np.ones_like(energy)
        dpsi = -1j * k
        for left, right, height in layers:
            width = right - left
            q = np.sqrt(2.0 * (energy - height)) / hbar
            cos = np.cos(q * width)
            # sin(qw)/q, regular at q = 0
            sinc = width * np.sinc(q * width / np.pi)
            psi, dpsi = cos * psi + sinc * dpsi, -q * q * sinc * psi + cos * dpsi
        return dpsi - 1j * k * psi

    return mismatch


def _edge_phase_change(
    f: Callable[[np.ndarray], np.ndarray], start: complex, end: complex
) -> float:
    """Continuous change of arg f along the segment start -> end, sampled adaptively."""
    t = np.linspace(0.0, 1.0, INITIAL_EDGE_SAMPLES + 1)
    while True:
        values = f(start + t * (end - start))
        if np.any(values == 0) or not np.all(np.isfinite(values)):
            raise ResonanceSearchError(f"f vanishes or overflows on the edge {start} -> {end}")
        steps = np.angle(values[1:] / values[:-1])
        coarse = np.abs(steps) > MAX_PHASE_STEP
        if not np.any(coarse):
            return float(steps.sum())
        if t.size >= MAX_EDGE_SAMPLES:
            raise ResonanceSearchError(
                f"phase of f not resolved on the edge {start} -> {end} "
                f"with {t.size} samples (root on or near the boundary)"
            )
        midpoints = (t[:-1][coarse] + t[1:][coarse]) / 2.0
        t = np.sort(np.concatenate([t, midpoints]))


def winding_number(
    f: Callable[[np.ndarray], np.ndarray], box: tuple[float, float, float, float]
) -> int:
    """Number of zeros of ``f`` inside the rectangle (argument principle).

    Args:
        f: Vectorized analytic function
        box: (re_min, re_max, im_min, im_max)

    Returns:
        Winding number of f over the counter-clockwise boundary

    Raises:
        ResonanceSearchError: If the phase cannot be resolved or the total is not an integer
    """
    re0, re1, im0, im1 = box
    corners = [complex(re0, im0), complex(re1, im0), complex(re1, im1), complex(re0, im1)]
    total = sum(
        _edge_phase_change(f, corners[i], corners[(i + 1) % 4]) for i in range(4)
    )
    turns = total / (2.0 * math.pi)
    count = round(turns)
    if abs(turns - count) > 0.1:
        raise ResonanceSearchError(f"non-integer winding {turns:.3f} over box {box}")
    return int(count)


def _newton_root(
    f: Callable[[np.ndarray], np.ndarray], box: tuple[float, float, float, float]
) -> complex | None:
    re0, re1, im0, im1 = box
    start = complex((re0 + re1) / 2.0, (im0 + im1) / 2.0)
    step = 1e-7 * max(abs(start), 1e-3)

    def scalar(z: complex) -> complex:
        return complex(f(np.asarray(z)))

    def derivative(z: complex) -> complex:
        return (scalar(z + step) - scalar(z - step)) / (2.0 * step)

    try:
        root = complex(optimize.newton(scalar, start, fprime=derivative, tol=1e-15, maxiter=100))
    except (RuntimeError, ZeroDivisionError, OverflowError) as e:
        logger.debug(f"Newton failed in box {box}: {e}")
        return None
    slack = 1e-9 * max(abs(re1 - re0), abs(im1 - im0))
    inside = re0 - slack <= root.real <= re1 + slack and im0 - slack <= root.imag <= im1 + slack
    return root if inside else None


def _split(
    box: tuple[float, float, float, float], fraction: float
) -> tuple[tuple[float, float, float, float], tuple[float, float, float, float]]:
    re0, re1, im0, im1 = box
    if re1 - re0 >= im1 - im0:
        cut = re0 + fraction * (re1 - re0)
        return (re0, cut, im0, im1), (cut, re1, im0, im1)
    cut = im0 + fraction * (im1 - im0)
    return (re0, re1, im0, cut), (re0, re1, cut, im1)


def _search(
    f: Callable[[np.ndarray], np.ndarray],
    box: tuple[float, float, float, float],
    winding: int,
    depth: int,
) -> list[complex]:
    if winding == 0:
        return []
    if winding == 1:
        root = _newton_root(f, box)
        if root is not None:
            return [root]
    if depth >= MAX_SUBDIVISION_DEPTH:
        raise ResonanceSearchError(
            f"box {box} still holds {winding} roots after {depth} subdivisions"
        )
    for fraction in SPLIT_FRACTIONS:
        first, second = _split(box, fraction)
        try:
            w_first = winding_number(f, first)
            w_second = winding_number(f, second)
        except ResonanceSearchError as e:
            logger.debug(f"Split at {fraction} of {box} rejected: {e}")
            continue
        if w_first + w_second != winding:
            logger.debug(f"Split at {fraction} of {box} lost roots, retrying")
            continue
        logger.debug(f"Split {box} -> windings {w_first} + {w_second}")
        return _search(f, first, w_first, depth + 1) + _search(f, second, w_second, depth + 1)
    raise ResonanceSearchError(f"could not split box {box} away from its roots")


def transfer_matrix_resonances(
    potential: Potential1D,
    hbar: float,
    search_box: tuple[float, float, float, float],
) -> list[Resonance]:
    """Certified resonances of a piecewise-constant potential inside ``search_box``.

    The box may reach slightly above the real axis so that resonances of
    tiny width do not sit on its boundary; there are no roots with Re z > 0
    in the upper half-plane.

    Args:
        potential: Piecewise-constant potential
        hbar: Planck constant (> 0)
        search_box: (re_min, re_max, im_min, im_max) with re_min > 0

    Returns:
        Resonances sorted by Re z

    Raises:
        DomainError: On a non-piecewise potential or an invalid box
        ResonanceSearchError: If the refined roots disagree with the winding number
    """
    re0, re1, im0, im1 = search_box
    if hbar <= 0.0:
        raise DomainError(f"hbar must be > 0, got {hbar}")
    if not (0.0 < re0 < re1 and im0 < im1):
        raise DomainError(f"invalid search box {search_box}; need 0 < re_min < re_max")
    if im0 >= 0.0:
        raise DomainError(f"search box {search_box} does not reach the lower half-plane")

    f = outgoing_mismatch(potential, hbar)
    total = winding_number(f, search_box)
    roots = _search(f, search_box, total, 0)

    roots.sort(key=lambda z: (z.real, z.imag))
    distinct = [
        z
        for i, z in enumerate(roots)
        if all(abs(z - other) > 1e-10 * max(abs(z), 1.0) for other in roots[:i])
    ]
    if len(distinct) != total:
        raise ResonanceSearchError(
            f"found {len(distinct)} distinct roots but the winding number is {total}"
        )
    logger.info(f"Transfer-matrix oracle: {total} resonances in box {search_box}")
    return [Resonance.from_energy(z, hbar, method="oracle") for z in distinct]


def transfer_matrix_bound_states(
    potential: Potential1D,
    hbar: float,
    energy_range: tuple[float, float] | None = None,
    samples: int = 2000,
) -> list[float]:
    """Real negative eigenvalues where the decaying solutions match.

    On z < 0, k = iκ and f(z) = ψ' + κψ is real, so bound states are its sign
    changes, refined by Brent's method.

    Args:
        potential: Piecewise-constant potential
        hbar: Planck constant
        energy_range: (low, high) with high < 0 (default: (min V, 0))
        samples: Scan resolution

    Returns:
        Bound-state energies, ascending
    """
    layers = potential.layers()
    low, high = energy_range if energy_range is not None else (
        min(height for _, _, height in layers),
        0.0,
    )
    if low >= 0.0:
        return []
    high = min(high, -1e-12 * max(1.0, abs(low)))

    def real_mismatch(energy: float) -> float:
        kappa = math.sqrt(-2.0 * energy) / hbar
        psi, dpsi = 1.0 + 0j, complex(kappa)
        for left, right, height in layers:
            width = right - left
            q = np.sqrt(complex(2.0 * (energy - height))) / hbar
            cos = np.cos(q * width)
            sinc = width * np.sinc(q * width / np.pi)
            psi, dpsi = cos * psi + sinc * dpsi, -q * q * sinc * psi + cos * dpsi
        return float((dpsi + kappa * psi).real)

    grid = np.linspace(low, high, samples)
    values = np.array([real_mismatch(e) for e in grid])
    energies = []
    for i in np.flatnonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0):
        energies.append(
            float(optimize.brentq(real_mismatch, grid[i], grid[i + 1], xtol=1e-15, rtol=1e-15))
        )
    energies.extend(float(grid[i]) for i in np.flatnonzero(values == 0.0))
    logger.info(f"Found {len(energies)} bound states in [{low:g}, {high:g}]")
    return sorted(energies)
