"""Report documents (schema ``wcl-report-v1``), CSV mirrors and sidecar metadata.

Primary report files depend only on the config, so two runs with the same
config are byte-identical. Run-specific data (timestamp, package version,
thread count) goes to ``<report>.meta.json`` next to the report.
"""

import csv
import io
import logging
import math
from collections.abc import Sequence
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import BaseModel, Field

from .models import (
    ConcentrationReport,
    CountProfile,
    DimensionEstimate,
    GapReport,
    PressureEstimate,
    RateFunction,
    SpectrumRecord,
)
from .parsers.spectra import spectrum_to_dict
from .utils import REPORT_SCHEMA, atomic_write_text, canonical_json, format_float, params_hash

logger = logging.getLogger(__name__)


def to_document(obj: Any) -> Any:
    """Convert results into plain JSON-compatible data.

    Spectrum records use their ``[re, im]`` record form; other pydantic models
    are dumped field by field with computed properties left out.
    """
    if isinstance(obj, SpectrumRecord):
        return spectrum_to_dict(obj)
    if isinstance(obj, BaseModel):
        return {name: to_document(getattr(obj, name)) for name in type(obj).model_fields}
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): to_document(v) for k, v in obj.items()}
    if isinstance(obj, np.ndarray):
        return [to_document(v) for v in obj.tolist()]
    if isinstance(obj, list | tuple):
        return [to_document(v) for v in obj]
    if isinstance(obj, complex | np.complexfloating):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


class Report(BaseModel):
    """One command's output: the nested JSON document and its flat CSV rows."""

    command: str
    config: dict[str, Any] = Field(description="Normalized config the report was produced from")
    result: Any = Field(description="JSON-compatible result document")
    rows: list[dict[str, Any]] = Field(default_factory=list, description="CSV mirror rows")

    model_config = {"frozen": True}

    def document(self) -> dict[str, Any]:
        """The primary report document in fixed key order."""
        return {
            "schema": REPORT_SCHEMA,
            "command": self.command,
            "config_hash": params_hash(self.config),
            "config": self.config,
            "result": self.result,
        }

    def to_json(self) -> str:
        """Canonical JSON text of :meth:`document`."""
        return canonical_json(self.document())


def sweep_document(reports: Sequence[Report]) -> dict[str, Any]:
    """Sweep report: the experiment reports in config order."""
    return {
        "schema": REPORT_SCHEMA,
        "command": "sweep",
        "experiments": [report.document() for report in reports],
    }


def _format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool | np.bool_):
        return "true" if value else "false"
    if isinstance(value, float | np.floating):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format_float(value)
    return str(value)


def rows_to_csv(rows: Sequence[dict[str, Any]]) -> str:
    """CSV text with a header from the first row's keys, ``\\n`` line endings."""
    if not rows:
        return ""
    columns = list(rows[0].keys())
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_format_cell(row.get(column)) for column in columns])
    return buffer.getvalue()


def sidecar_path(path: str | Path) -> Path:
    """``<report>.meta.json`` next to the report."""
    path = Path(path)
    return path.with_name(path.name + ".meta.json")


def write_report(
    document: dict[str, Any], path: str | Path, version: str, threads: int
) -> Path:
    """Write a report atomically, then its sidecar metadata.

    Args:
        document: Report document (see :meth:`Report.document`)
        path: Destination JSON file
        version: Package version recorded in the sidecar
        threads: Worker threads used for the run

    Returns:
        Resolved report path
    """
    target = atomic_write_text(path, canonical_json(document))
    meta = {
        "report": target.name,
        "created": datetime.now(timezone.utc).isoformat(),
        "version": version,
        "threads": threads,
        "report_hash": params_hash(document),
    }
    atomic_write_text(sidecar_path(target), canonical_json(meta))
    logger.info(f"Wrote report {target}")
    return target


def write_csv(rows: Sequence[dict[str, Any]], path: str | Path) -> Path:
    """Write CSV rows atomically."""
    target = atomic_write_text(path, rows_to_csv(rows))
    logger.info(f"Wrote {len(rows)} CSV rows to {target}")
    return target


# Row builders, one per result type


def dimension_rows(estimate: DimensionEstimate) -> list[dict[str, Any]]:
    return [
        {"depth": depth, "log_inverse_size": size, "log_count": count}
        for depth, size, count in zip(
            estimate.depths, estimate.log_inverse_sizes, estimate.log_counts, strict=True
        )
    ]


def pressure_rows(estimates: Sequence[PressureEstimate]) -> list[dict[str, Any]]:
    return [
        {
            "weight_s": est.weight_s,
            "beta": est.beta,
            "T": est.T,
            "pressure": est.value,
            "closed_form": est.closed_form,
            "method": est.method,
        }
        for est in estimates
    ]


def rate_rows(rate_fn: RateFunction) -> list[dict[str, Any]]:
    return [
        {"alpha": alpha, "H": value, "in_domain": inside}
        for alpha, value, inside in zip(
            rate_fn.alphas, rate_fn.values, rate_fn.in_domain, strict=True
        )
    ]


def spectrum_rows(rec: SpectrumRecord) -> list[dict[str, Any]]:
    decay = rec.decay_rates
    return [
        {
            "N": rec.n,
            "index": j,
            "re": float(z.real),
            "im": float(z.imag),
            "modulus": float(abs(z)),
            "decay_rate": float(decay[j]),
        }
        for j, z in enumerate(rec.eigenvalues)
    ]


def profile_rows(profiles: Sequence[CountProfile]) -> list[dict[str, Any]]:
    rows = []
    for profile in profiles:
        for point in profile.points:
            rows.append(
                {
                    "quantity": profile.quantity,
                    "alpha": profile.alpha,
                    "N": point.N,
                    "threshold": point.threshold,
                    "count": point.count,
                    "in_window": point.N in profile.window,
                    "exponent": profile.exponent,
                    "stderr": profile.stderr,
                    "classical_exponent": profile.classical_exponent,
                }
            )
    return rows


def gap_rows(report: GapReport) -> list[dict[str, Any]]:
    return [
        {
            "N": n,
            "outer_modulus": outer,
            "predicted_radius": report.predicted_radius,
            "margin": margin,
            "within_bound": within,
            "verdict": report.verdict,
        }
        for n, outer, margin, within in zip(
            report.ns, report.outer_moduli, report.margins, report.within_bound, strict=True
        )
    ]


def concentration_rows(report: ConcentrationReport) -> list[dict[str, Any]]:
    return [
        {"N": n, "epsilon": eps, "fraction": fraction}
        for n, row in zip(report.ns, report.fractions, strict=True)
        for eps, fraction in zip(report.epsilons, row, strict=True)
    ]
