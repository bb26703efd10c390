"""Counting functions, Weyl-exponent fits, gap and concentration reports.

Map-analog dictionary used throughout:

* ħ ↦ 1/(2πN)
* the strip -Im z/ħ ∈ [0, α] ↦ decay rate -log|λ| ∈ [0, α], i.e. |λ| >= e^{-α}
* O(ħ^{-ν-0}) ↦ fitted growth exponent of a count in N, tested one-sided
* d - 1 ↦ log M, so the total count N has exponent 1
* the real window [E - cħ, E + cħ] has no counterpart; counts use moduli only

Fit windows drop the smallest N (transient) when at least three larger N
remain, and always drop zero counts; both are flagged in the profile.
"""

import logging
import math
from collections.abc import Sequence

import numpy as np
from scipy import stats

from .exceptions import DomainError, FitDegenerateError
from .models import (
    ConcentrationReport,
    CountPoint,
    CountProfile,
    DampingField,
    GapReport,
    PressureEstimate,
    RateFunction,
    SpectrumRecord,
)
from .spectral import spectral_radius
from .utils import fit_line

logger = logging.getLogger(__name__)

# Largest admissible modulus threshold
MAX_THRESHOLD = 1.1


def count_moduli(rec: SpectrumRecord, r: float) -> int:
    """#{j : |λ_j| >= r}.

    Raises:
        DomainError: If r is outside [0, 1.1]
    """
    if not 0.0 <= r <= MAX_THRESHOLD:
        raise DomainError(f"threshold must lie in [0, {MAX_THRESHOLD}], got {r}")
    return int(np.sum(rec.moduli >= r))


def _sorted_by_dimension(records: Sequence[SpectrumRecord]) -> list[SpectrumRecord]:
    ordered = sorted(records, key=lambda rec: rec.n)
    if len({rec.n for rec in ordered}) != len(ordered):
        raise DomainError("records must have distinct dimensions N")
    return ordered


def _fit_counts(
    points: list[CountPoint],
) -> tuple[list[int], list[int], list[str], tuple[float, float, float, float]]:
    """Select the fit window and fit log count against log N.

    Returns:
        Tuple (window, dropped, flags, (slope, intercept, stderr, rms))

    Raises:
        FitDegenerateError: If fewer than 3 points survive
    """
    window = list(points)
    dropped: list[int] = []
    flags: list[str] = []
    if len(window) >= 4:
        first = window.pop(0)
        dropped.append(first.N)
        flags.append(f"dropped smallest N={first.N} (transient)")
    for point in list(window):
        if point.count == 0:
            window.remove(point)
            dropped.append(point.N)
            flags.append(f"zero count at N={point.N}")
    if len(window) < 3:
        raise FitDegenerateError(
            f"only {len(window)} usable points after dropping {dropped}; need 3"
        )
    fit = fit_line(
        np.log([p.N for p in window]).astype(float),
        np.log([p.count for p in window]).astype(float),
    )
    return [p.N for p in window], dropped, flags, fit


def classical_weyl_exponent(rec: SpectrumRecord) -> float | None:
    """ν = log D / log M from the builder metadata of an open-map record."""
    builder = rec.builder
    if builder.get("kind") != "open" or "M" not in builder or "kept" not in builder:
        return None
    return math.log(len(builder["kept"])) / math.log(builder["M"])


def weyl_fit(
    records: Sequence[SpectrumRecord],
    r: float,
    classical_exponent: float | None = None,
) -> CountProfile:
    """Growth exponent ν̂ of n(N, r) = #{|λ| >= r} across a ladder of dimensions.

    Args:
        records: Spectra at (at least 3) distinct N
        r: Modulus threshold in [0, 1.1]
        classical_exponent: Prediction to report alongside (default log D / log M
            from the builder metadata of open-map records)

    Returns:
        CountProfile with the fitted slope, standard error and residual

    Raises:
        DomainError: On duplicate dimensions or an invalid threshold
        FitDegenerateError: If fewer than 3 points survive the window
    """
    ordered = _sorted_by_dimension(records)
    if len(ordered) < 3:
        raise FitDegenerateError(f"need at least 3 distinct N, got {len(ordered)}")
    points = [CountPoint(N=rec.n, threshold=r, count=count_moduli(rec, r)) for rec in ordered]
    window, dropped, flags, (slope, intercept, stderr, rms) = _fit_counts(points)
    if classical_exponent is None:
        classical_exponent = classical_weyl_exponent(ordered[0])

    profile = CountProfile(
        quantity="modulus",
        points=tuple(points),
        window=tuple(window),
        dropped=tuple(dropped),
        flags=tuple(flags),
        exponent=slope,
        stderr=stderr,
        intercept=intercept,
        residual=rms,
        classical_exponent=classical_exponent,
    )
    logger.info(
        f"Weyl fit r={r:g}: exponent {slope:.4f} ± {stderr:.2g}, classical {classical_exponent}"
    )
    return profile


def _branch_count(records: Sequence[SpectrumRecord]) -> int:
    m = records[0].builder.get("M")
    if m is None:
        raise DomainError("records carry no branch count M in their builder metadata")
    return int(m)


def _decay_profile(
    ordered: list[SpectrumRecord],
    alpha: float,
    rate_fn: RateFunction,
    log_m: float,
    upper: bool,
) -> CountProfile:
    threshold = math.exp(-alpha)
    points = []
    for rec in ordered:
        if upper:
            # decay rate >= α  <=>  |λ| <= e^{-α}
            count = int(np.sum(rec.moduli <= threshold))
        else:
            count = count_moduli(rec, threshold) if threshold <= MAX_THRESHOLD else 0
        points.append(CountPoint(N=rec.n, threshold=threshold, count=count))

    rate = rate_fn.at(alpha)
    classical = rate / log_m if math.isfinite(rate) else None
    try:
        window, dropped, flags, (slope, intercept, stderr, rms) = _fit_counts(points)
    except FitDegenerateError as e:
        logger.debug(f"Degenerate fit at alpha={alpha:g}: {e}")
        zero = tuple(p.N for p in points if p.count == 0)
        return CountProfile(
            quantity="decay-above" if upper else "decay-below",
            alpha=alpha,
            points=tuple(points),
            window=(),
            dropped=tuple(p.N for p in points),
            flags=("fit-degenerate",) + tuple(f"zero count at N={n}" for n in zero),
            classical_exponent=classical,
        )
    return CountProfile(
        quantity="decay-above" if upper else "decay-below",
        alpha=alpha,
        points=tuple(points),
        window=tuple(window),
        dropped=tuple(dropped),
        flags=tuple(flags),
        exponent=slope,
        stderr=stderr,
        intercept=intercept,
        residual=rms,
        classical_exponent=classical,
    )


def ld_profile(
    records: Sequence[SpectrumRecord], rate_fn: RateFunction, alphas: Sequence[float]
) -> list[CountProfile]:
    """Counts m(N, α) = #{-log|λ_j| <= α} and their growth exponents Ĥ(α).

    m(N, α) is count_moduli at threshold e^{-α}. Each profile reports
    H(α)/log M next to the fit. An α whose counts leave fewer than 3 usable
    points gets ``exponent=None`` and the flag ``fit-degenerate``.

    Args:
        records: Damped-map spectra at distinct N
        rate_fn: Classical rate function
        alphas: α grid (normally inside [b_-, b̄])

    Returns:
        One CountProfile per α, in grid order
    """
    if not alphas:
        raise DomainError("alpha grid is empty")
    ordered = _sorted_by_dimension(records)
    log_m = math.log(_branch_count(ordered))
    profiles = [_decay_profile(ordered, float(a), rate_fn, log_m, upper=False) for a in alphas]
    logger.info(f"Large-deviation profile on {len(profiles)} alpha values")
    return profiles


def ld_upper_profile(
    records: Sequence[SpectrumRecord], rate_fn: RateFunction, alphas: Sequence[float]
) -> list[CountProfile]:
    """Upper-tail counts #{-log|λ_j| >= α} for α > b̄, reported without assuming symmetry."""
    if not alphas:
        raise DomainError("alpha grid is empty")
    ordered = _sorted_by_dimension(records)
    log_m = math.log(_branch_count(ordered))
    return [_decay_profile(ordered, float(a), rate_fn, log_m, upper=True) for a in alphas]


def _check_gap_inputs(records: list[SpectrumRecord], pressure: PressureEstimate) -> None:
    if pressure.weight_s != 0.5:
        raise DomainError(f"gap reports need the weight -phi_u/2, got s={pressure.weight_s}")
    expected_m = pressure.open_map.branch_count
    for rec in records:
        builder = rec.builder
        if builder.get("M") != expected_m:
            raise DomainError(
                f"record N={rec.n} has M={builder.get('M')}, pressure has {expected_m}"
            )
        if builder.get("kind") == "damped":
            if pressure.damping is None or pressure.beta != 1.0:
                raise DomainError("damped spectra need the pressure P(-phi_u/2 - b)")
            if list(pressure.damping.values) != list(builder.get("damping", [])):
                raise DomainError(f"record N={rec.n} was built with different damping")
            if not pressure.open_map.is_closed:
                raise DomainError("damped spectra use the closed map; pressure map is open")
        else:
            if list(builder.get("kept", [])) != list(pressure.open_map.kept):
                raise DomainError(
                    f"record N={rec.n} keeps {builder.get('kept')}, "
                    f"pressure keeps {list(pressure.open_map.kept)}"
                )
            if pressure.beta != 0.0 and pressure.damping is not None:
                raise DomainError("open-map spectra need the undamped pressure P(-phi_u/2)")


def gap_report(records: Sequence[SpectrumRecord], pressure: PressureEstimate) -> GapReport:
    """Compare the outer eigenvalue moduli with e^P.

    Verdict rules: P >= 0 is "inconclusive" (no gap predicted); otherwise
    "consistent" when max|λ| <= e^P + 3/log N at every N and "inconsistent"
    when any N violates it.

    Args:
        records: Spectra of one map at several N
        pressure: P(-φ_u/2) (open) or P(-φ_u/2 - b) (damped)

    Returns:
        GapReport with the margins and per-N outcomes

    Raises:
        DomainError: If the spectra and the pressure describe different maps
    """
    ordered = _sorted_by_dimension(records)
    if not ordered:
        raise DomainError("gap report needs at least one spectrum")
    _check_gap_inputs(ordered, pressure)

    value = pressure.value
    predicted = math.exp(value) if math.isfinite(value) else 0.0
    ns = tuple(rec.n for rec in ordered)
    outer = tuple(spectral_radius(rec) for rec in ordered)
    margins = tuple(3.0 / math.log(n) if n > 1 else math.inf for n in ns)
    within = tuple(o <= predicted + m for o, m in zip(outer, margins, strict=True))
    decreasing = all(b < a for a, b in zip(outer[:-1], outer[1:], strict=True))

    notes = []
    if value >= 0.0:
        verdict = "inconclusive"
        notes.append("inconclusive: no gap predicted (P >= 0)")
    else:
        verdict = "consistent" if all(within) else "inconsistent"
        above = [n for n, o in zip(ns, outer, strict=True) if o > predicted]
        if above:
            notes.append(
                f"outer moduli exceed e^P without margin at N={above}; finite-N deviation "
                "from the asymptotic bound (extra gap discussion applies)"
            )
    if len(ns) > 1 and not decreasing:
        notes.append("outer moduli are not strictly decreasing along the ladder")

    report = GapReport(
        pressure=value,
        weight=pressure.weight_description,
        predicted_radius=predicted,
        ns=ns,
        outer_moduli=outer,
        margins=margins,
        within_bound=within,
        strictly_decreasing=decreasing,
        verdict=verdict,
        note="; ".join(notes),
    )
    logger.info(f"Gap report: P={value:.6g}, e^P={predicted:.6g}, verdict {verdict}")
    return report


def concentration_report(
    records: Sequence[SpectrumRecord], damping: DampingField, epsilons: Sequence[float]
) -> ConcentrationReport:
    """Fraction of decay rates -log|λ| within ε of b̄, per N and per ε.

    Args:
        records: Damped-map spectra
        damping: The damping field the spectra were built with
        epsilons: Positive tolerances

    Returns:
        ConcentrationReport with the slope of fraction vs log N per ε

    Raises:
        DomainError: On an empty or non-positive ε grid
    """
    if not epsilons:
        raise DomainError("epsilon grid is empty")
    if any(eps <= 0 for eps in epsilons):
        raise DomainError("epsilons must be positive")
    ordered = _sorted_by_dimension(records)
    b_mean = damping.mean
    rows = []
    for rec in ordered:
        deviation = np.abs(rec.decay_rates - b_mean)
        rows.append(tuple(float(np.mean(deviation <= eps)) for eps in epsilons))

    trends: list[float | None] = []
    log_ns = np.log([rec.n for rec in ordered])
    for j in range(len(epsilons)):
        if len(ordered) < 2:
            trends.append(None)
            continue
        column = np.array([row[j] for row in rows])
        trends.append(float(stats.linregress(log_ns, column).slope))

    report = ConcentrationReport(
        b_mean=b_mean,
        ns=tuple(rec.n for rec in ordered),
        epsilons=tuple(float(eps) for eps in epsilons),
        fractions=tuple(rows),
        trends=tuple(trends),
    )
    logger.info(f"Concentration around b̄={b_mean:.6g} for N={report.ns}")
    return report
