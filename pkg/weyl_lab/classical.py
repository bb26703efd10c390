"""Symbolic dynamics of open baker maps.

Trapped sets, box-counting dimension, Birkhoff averages of a damping field,
topological pressure and large-deviation rate functions. Every function is a
pure function of its arguments.

The baker map sends (x, y) to (Mx mod 1, (y + ⌊Mx⌋)/M). A point survives one
step when the leading base-M digit of x is a kept branch, so the forward
trapped set K⁻ is a union of vertical strips and the backward set K⁺ a union
of horizontal strips. For these self-similar repellers box and Hausdorff
dimensions coincide.
"""

import logging
import math
from collections.abc import Sequence

import numpy as np
from scipy import optimize, special

from .exceptions import CapacityError, DomainError
from .models import (
    DampingField,
    DimensionEstimate,
    Direction,
    OpenMapSpec,
    PressureEstimate,
    RateFunction,
    TrappedSetSample,
)
from .models.classical import GapCriterion
from .utils import DEFAULT_CELL_CAP, MAX_SYMBOLIC_DEPTH, env_int, fit_line

logger = logging.getLogger(__name__)

# Rows processed per block when enumerating periodic words
_WORD_CHUNK = 1 << 16


def cell_cap(cap: int | None = None) -> int:
    """Enumeration cap: argument, else WCL_CELL_CAP, else 10^7."""
    return cap if cap is not None else env_int("WCL_CELL_CAP", DEFAULT_CELL_CAP)


def admissible_words(kept: Sequence[int], length: int) -> np.ndarray:
    """All words of ``length`` symbols drawn from ``kept``, in lexicographic order.

    Args:
        kept: Allowed symbols
        length: Word length (>= 1)

    Returns:
        uint8 array of shape (len(kept)**length, length)
    """
    symbols = np.asarray(kept, dtype=np.uint8)
    grids = np.meshgrid(*([symbols] * length), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def _check_damping(open_map: OpenMapSpec, damping: DampingField) -> None:
    if damping.branch_count != open_map.branch_count:
        raise DomainError(
            f"damping has {damping.branch_count} strips but the map has "
            f"{open_map.branch_count} branches"
        )


def trapped_set_sample(
    open_map: OpenMapSpec,
    depth: int,
    direction: Direction | str = Direction.FULL,
    cap: int | None = None,
) -> TrappedSetSample:
    """Enumerate the cylinder cells of a trapped set at refinement ``depth``.

    Args:
        open_map: Open baker map
        depth: Number of base-M digits fixed per constrained coordinate
        direction: forward (K⁻), backward (K⁺) or full (K)
        cap: Maximum number of cells (default: WCL_CELL_CAP or 10^7)

    Returns:
        TrappedSetSample with D^depth (one-sided) or D^(2·depth) (full) cells

    Raises:
        DomainError: If depth is outside 1..40
        CapacityError: If the cell count would exceed the cap
    """
    direction = Direction(direction)
    if not 1 <= depth <= MAX_SYMBOLIC_DEPTH:
        raise DomainError(f"depth must lie in 1..{MAX_SYMBOLIC_DEPTH}, got {depth}")

    d = open_map.kept_count
    exponent = 2 * depth if direction == Direction.FULL else depth
    limit = cell_cap(cap)
    # Compare in log space
    if exponent * math.log(d) > math.log(limit) + 1e-12:
        raise CapacityError(
            f"{d}^{exponent} cells exceed the cap of {limit} (set WCL_CELL_CAP to raise it)"
        )

    words = admissible_words(open_map.kept, depth)
    x_words = words if direction in (Direction.FORWARD, Direction.FULL) else None
    y_words = words if direction in (Direction.BACKWARD, Direction.FULL) else None
    sample = TrappedSetSample(
        branch_count=open_map.branch_count,
        depth=depth,
        direction=direction,
        x_words=x_words,
        y_words=y_words,
    )
    logger.debug(f"Sampled {sample.cell_count} {direction.value} cells at depth {depth}")
    return sample


def box_dimension(
    sample: TrappedSetSample, depth_range: tuple[int, int] | None = None
) -> DimensionEstimate:
    """Box-counting dimension from the nested covers contained in ``sample``.

    At each depth k the number of occupied M^-k boxes is the number of distinct
    length-k prefixes on each constrained coordinate (their product for the
    full set). One-sided samples therefore measure the Cantor factor only.

    Args:
        sample: Trapped set sample
        depth_range: Inclusive (first, last) depth used in the fit (default 1..depth)

    Returns:
        DimensionEstimate with the fitted slope, the log-log table and the residual

    Raises:
        DomainError: If the range is outside 1..sample.depth
        FitDegenerateError: If fewer than 3 depths are available
    """
    first, last = depth_range if depth_range is not None else (1, sample.depth)
    if not 1 <= first <= last <= sample.depth:
        raise DomainError(f"depth range ({first}, {last}) outside 1..{sample.depth}")

    depths = list(range(first, last + 1))
    log_counts = []
    for k in depths:
        count = 1
        for words in (sample.x_words, sample.y_words):
            if words is not None:
                count *= np.unique(words[:, :k], axis=0).shape[0]
        log_counts.append(math.log(count))
    log_sizes = [k * math.log(sample.branch_count) for k in depths]

    slope, _, stderr, rms = fit_line(np.array(log_sizes), np.array(log_counts))
    estimate = DimensionEstimate(
        dimension=slope,
        log_inverse_sizes=tuple(log_sizes),
        log_counts=tuple(log_counts),
        depths=tuple(depths),
        stderr=stderr,
        residual=rms,
    )
    logger.info(f"Box dimension {slope:.6f} over depths {first}..{last} (rms {rms:.2e})")
    return estimate


def _log_weights(
    open_map: OpenMapSpec, weight_s: float, damping: DampingField | None, beta: float
) -> np.ndarray:
    """log of M^-s e^(-β b_i) for each kept branch."""
    log_w = np.full(open_map.kept_count, -weight_s * open_map.unstable_jacobian)
    if damping is not None and beta != 0.0:
        log_w -= beta * np.asarray(damping.values)[list(open_map.kept)]
    return log_w


def _transfer_trace(log_w: np.ndarray, T: int) -> float:
    """log trace(L^T) for the kept-symbol transfer matrix L = 1·diag(w), log-scaled."""
    shift = float(log_w.max())
    transfer = np.ones((log_w.size, log_w.size)) * np.exp(log_w - shift)[None, :]
    power = np.eye(log_w.size)
    log_scale = T * shift
    for _ in range(T):
        power = power @ transfer
        scale = float(np.abs(power).max())
        power /= scale
        log_scale += math.log(scale)
    trace = float(np.trace(power))
    if trace <= 0.0:
        return -math.inf
    return log_scale + math.log(trace)


def _periodic_birkhoff_sums(
    open_map: OpenMapSpec, damping: DampingField, T: int, cap: int | None = None
) -> np.ndarray:
    """Birkhoff sums Σ_{t<T} b over the periodic orbit of every admissible word of length T.

    Symbol-constant damping sums the strip values of the word. A sampled profile
    is evaluated at the T points of the periodic orbit x = w/(M^T - 1) and its
    shifts.
    """
    d = open_map.kept_count
    limit = cell_cap(cap)
    if T * math.log(d) > math.log(limit) + 1e-12:
        raise CapacityError(f"{d}^{T} periodic words exceed the cap of {limit}")

    words = admissible_words(open_map.kept, T)
    if damping.is_symbolic:
        return np.asarray(damping.values)[words].sum(axis=1)

    m = float(open_map.branch_count)
    weights = m ** -np.arange(1, T + 1) / (1.0 - m**-T)
    sums = np.zeros(words.shape[0])
    for start in range(0, words.shape[0], _WORD_CHUNK):
        block = words[start : start + _WORD_CHUNK].astype(float)
        for t in range(T):
            x = np.roll(block, -t, axis=1) @ weights
            sums[start : start + block.shape[0]] += damping.evaluate(x)
    return sums


def pressure(
    open_map: OpenMapSpec,
    weight_s: float,
    damping: DampingField | None = None,
    beta: float = 0.0,
    T: int = 20,
    method: str = "auto",
    cap: int | None = None,
) -> PressureEstimate:
    """Topological pressure P(-s·φ_u - β·b) from the periodic word sum of length T.

    Symbol-constant weights are summed as the trace of the kept-symbol transfer
    matrix, which equals the sum over all periodic words and is exactly
    geometric. A sampled damping profile needs explicit orbit enumeration.

    Args:
        open_map: Open baker map
        weight_s: Coefficient s of the unstable Jacobian
        damping: Optional damping field
        beta: Damping coefficient β
        T: Word length (>= 1)
        method: "auto", "transfer-trace" or "orbit-enumeration"
        cap: Word cap for orbit enumeration

    Returns:
        PressureEstimate, with the closed form when the weights are symbol-constant

    Raises:
        DomainError: If T < 1, the damping does not match the map, or the method is unknown
        CapacityError: If orbit enumeration would exceed the cap
    """
    if T < 1:
        raise DomainError(f"T must be >= 1, got {T}")
    if damping is not None:
        _check_damping(open_map, damping)
    symbolic = damping is None or beta == 0.0 or damping.is_symbolic
    if method == "auto":
        method = "transfer-trace" if symbolic else "orbit-enumeration"
    if method not in ("transfer-trace", "orbit-enumeration"):
        raise DomainError(f"unknown pressure method {method!r}")
    if method == "transfer-trace" and not symbolic:
        raise DomainError("transfer-trace needs symbol-constant damping")

    closed_form = None
    if symbolic:
        closed_form = float(special.logsumexp(_log_weights(open_map, weight_s, damping, beta)))

    if method == "transfer-trace":
        log_sum = _transfer_trace(_log_weights(open_map, weight_s, damping, beta), T)
    else:
        limit = cell_cap(cap)
        if T * open_map.topological_entropy > math.log(limit) + 1e-12:
            raise CapacityError(
                f"{open_map.kept_count}^{T} periodic words exceed the cap of {limit}"
            )
        log_terms = np.full(open_map.kept_count**T, -weight_s * T * open_map.unstable_jacobian)
        if damping is not None and beta != 0.0:
            log_terms = log_terms - beta * _periodic_birkhoff_sums(open_map, damping, T, cap)
        log_sum = float(special.logsumexp(log_terms)) if log_terms.size else -math.inf

    value = log_sum / T if math.isfinite(log_sum) else -math.inf
    estimate = PressureEstimate(
        open_map=open_map,
        weight_s=weight_s,
        beta=beta,
        damping=damping,
        T=T,
        value=value,
        closed_form=closed_form,
        method=method,
    )
    logger.info(f"P({estimate.weight_description}) = {value:.12g} at T={T} ({method})")
    return estimate


def pressure_curve(
    open_map: OpenMapSpec,
    s_grid: Sequence[float],
    damping: DampingField | None = None,
    beta: float = 0.0,
    T: int = 20,
) -> list[PressureEstimate]:
    """Pressure at each s of ``s_grid`` (same damping, β and T)."""
    return [pressure(open_map, s, damping=damping, beta=beta, T=T) for s in s_grid]


def bowen_dimension(open_map: OpenMapSpec) -> float:
    """Root s* of s ↦ P(-s·φ_u).

    The trapped set K has dimension 2·s*, which equals log D / log M times 2.

    Args:
        open_map: Open baker map

    Returns:
        s* in [0, 1]
    """

    def log_partition(s: float) -> float:
        return float(special.logsumexp(_log_weights(open_map, s, None, 0.0)))

    # P(0) = log D >= 0 and P(-φ_u) = log(D/M) <= 0
    return float(optimize.brentq(log_partition, 0.0, 1.0, xtol=1e-15))


def gap_criterion(open_map: OpenMapSpec) -> GapCriterion:
    """Compare P(-φ_u/2) < 0 with the dimension condition 2·s* < 1."""
    half = float(special.logsumexp(_log_weights(open_map, 0.5, None, 0.0)))
    root = bowen_dimension(open_map)
    return GapCriterion(
        pressure_half=half,
        bowen_root=root,
        dimension=2.0 * root,
        gap_predicted=half < 0.0,
    )


def birkhoff_average(
    open_map: OpenMapSpec, damping: DampingField, word: Sequence[int], T: int
) -> float:
    """Average (1/T) Σ_{t<T} b_{word[t]} of the strip damping along a symbol word.

    Args:
        open_map: Open baker map
        damping: Damping field (strip values are used)
        word: Symbol sequence of length >= T
        T: Averaging time (>= 1)

    Returns:
        Time average of the damping

    Raises:
        DomainError: On T < 1, a too short word, or an invalid symbol
    """
    _check_damping(open_map, damping)
    if T < 1:
        raise DomainError(f"T must be >= 1, got {T}")
    if len(word) < T:
        raise DomainError(f"word of length {len(word)} is shorter than T={T}")
    symbols = list(word[:T])
    invalid = [s for s in symbols if not 0 <= int(s) < open_map.branch_count]
    if invalid:
        raise DomainError(f"invalid symbols {invalid} for M={open_map.branch_count}")
    return float(np.mean(np.asarray(damping.values)[symbols]))


def _tilted_entropy(values: np.ndarray, alpha: float) -> float:
    """H(α) = inf_β [Λ(β) + βα] with Λ(β) = log Σ e^(-β b_i), for b_- < α < b_+."""
    spread = float(values.max() - values.min())

    def tilted_mean(beta: float) -> float:
        return float(np.dot(special.softmax(-beta * values), values)) - alpha

    bound = 1.0 / spread
    while tilted_mean(-bound) * tilted_mean(bound) > 0.0:
        bound *= 2.0
    beta = optimize.brentq(tilted_mean, -bound, bound, xtol=1e-14)
    p = special.softmax(-beta * values)
    return float(special.entr(p).sum())


def _empirical_default_T(kept_count: int) -> int:
    if kept_count == 2:
        return 16
    if kept_count == 3:
        return 12
    return max(2, int(math.log(1e6) / math.log(kept_count)))


def rate_function(
    open_map: OpenMapSpec,
    damping: DampingField,
    alphas: Sequence[float],
    method: str = "auto",
    T: int | None = None,
    cap: int | None = None,
) -> RateFunction:
    """Large-deviation rate function H(α) of Birkhoff averages of the damping.

    The Legendre path tilts the uniform measure on the kept symbols; the
    maximum H(b̄) is log D, the topological entropy (log M for the closed map).
    The empirical path enumerates every periodic word of length T and counts
    averages within 1/(2T) of α; the counts at T and T/2 are combined to cancel
    the 1/√T prefactor.

    Args:
        open_map: Open baker map
        damping: Damping field
        alphas: α grid (non-empty)
        method: "auto", "legendre" or "empirical"
        T: Word length for the empirical path (default 16 for D=2, 12 for D=3)
        cap: Word cap for the empirical path

    Returns:
        RateFunction with H = -inf and in_domain=False outside [b_-, b_+]

    Raises:
        DomainError: On an empty grid, or the Legendre path with sampled damping
        CapacityError: If the empirical enumeration would exceed the cap
    """
    _check_damping(open_map, damping)
    if len(alphas) == 0:
        raise DomainError("alpha grid is empty")
    if method == "auto":
        method = "legendre" if damping.is_symbolic else "empirical"
    if method == "legendre" and not damping.is_symbolic:
        raise DomainError("the Legendre path needs symbol-constant damping")
    if method not in ("legendre", "empirical"):
        raise DomainError(f"unknown rate-function method {method!r}")

    grid = [float(a) for a in alphas]
    if method == "legendre":
        values = np.asarray(damping.values)[list(open_map.kept)]
        b_minus, b_plus = damping.extremal_averages(kept=open_map.kept)
        b_mean = float(values.mean())
        rates = []
        for alpha in grid:
            if alpha < b_minus - 1e-12 or alpha > b_plus + 1e-12:
                rates.append(-math.inf)
            elif abs(alpha - b_minus) <= 1e-12 or abs(alpha - b_plus) <= 1e-12:
                # Endpoint: only the words made of extremal symbols contribute
                endpoint = b_minus if abs(alpha - b_minus) <= 1e-12 else b_plus
                rates.append(math.log(int(np.sum(np.abs(values - endpoint) <= 1e-12))))
            else:
                rates.append(_tilted_entropy(values, alpha))
        used_T = None
    else:
        used_T = T if T is not None else _empirical_default_T(open_map.kept_count)
        averages = _periodic_birkhoff_sums(open_map, damping, used_T, cap) / used_T
        half_T = used_T // 2
        half_averages = (
            _periodic_birkhoff_sums(open_map, damping, half_T, cap) / half_T
            if used_T >= 4
            else None
        )
        if open_map.kept_count == open_map.branch_count:
            b_minus, b_plus = damping.extremal_averages(max_period=used_T)
        else:
            b_minus, b_plus = float(averages.min()), float(averages.max())
        b_mean = float(averages.mean())
        rates = []
        for alpha in grid:
            count = int(np.sum(np.abs(averages - alpha) <= 0.5 / used_T + 1e-12))
            if count == 0:
                rates.append(-math.inf)
                continue
            half_count = (
                int(np.sum(np.abs(half_averages - alpha) <= 0.5 / half_T + 1e-12))
                if half_averages is not None
                else 0
            )
            if half_count == 0:
                rates.append(math.log(count) / used_T)
            else:
                rates.append(
                    (math.log(count) - math.log(half_count)) / (used_T - half_T)
                    + math.log(2.0) / used_T
                )

    result = RateFunction(
        alphas=tuple(grid),
        values=tuple(rates),
        in_domain=tuple(math.isfinite(v) for v in rates),
        b_minus=b_minus,
        b_plus=b_plus,
        b_mean=b_mean,
        method=method,
        T=used_T,
    )
    logger.info(f"Rate function on {len(grid)} points ({method}), b̄={b_mean:.6g}")
    return result
