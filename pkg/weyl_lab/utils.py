"""Utility functions for weyl-lab package."""

import hashlib
import json
import logging
import math
import os
import tempfile
from pathlib import Path
from typing import Any

import numpy as np
from scipy import stats

from .exceptions import FitDegenerateError

logger = logging.getLogger(__name__)

# Schema tag written into every report
REPORT_SCHEMA = "wcl-report-v1"

# Enumeration limits
DEFAULT_CELL_CAP = 10**7
MAX_SYMBOLIC_DEPTH = 40

# Significant digits for every float written to a report
FLOAT_DIGITS = 17


def format_float(value: float) -> str:
    """Format a float with 17 significant digits.

    Args:
        value: Finite float

    Returns:
        Decimal representation that round-trips exactly
    """
    text = f"{value:.{FLOAT_DIGITS}g}"
    if "e" not in text and "." not in text and "n" not in text:
        text += ".0"
    return text


def canonical_json(obj: Any, indent: int | None = 2) -> str:
    """Serialize ``obj`` to JSON with deterministic float formatting.

    Dict keys keep their insertion order (callers build documents in a fixed
    order); floats are written with 17 significant digits; non-finite floats
    become ``null``.

    Args:
        obj: Nested structure of dicts, lists, tuples, str, int, float, bool, None
        indent: Indentation width, or None for a single line

    Returns:
        JSON text terminated by a newline when indented
    """
    text = _encode(obj, indent, 0)
    return text + "\n" if indent is not None else text


def _encode(obj: Any, indent: int | None, level: int) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, bool | np.bool_):
        return "true" if obj else "false"
    if isinstance(obj, int | np.integer):
        return str(int(obj))
    if isinstance(obj, float | np.floating):
        value = float(obj)
        return format_float(value) if math.isfinite(value) else "null"
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        items = [(json.dumps(str(k), ensure_ascii=False), v) for k, v in obj.items()]
        if not items:
            return "{}"
        if indent is None:
            return "{" + ", ".join(f"{k}: {_encode(v, None, 0)}" for k, v in items) + "}"
        pad = " " * (indent * (level + 1))
        body = ",\n".join(f"{pad}{k}: {_encode(v, indent, level + 1)}" for k, v in items)
        return "{\n" + body + "\n" + " " * (indent * level) + "}"
    if isinstance(obj, list | tuple | np.ndarray):
        values = list(obj)
        if not values:
            return "[]"
        # Short numeric rows stay on one line ([re, im] pairs, small grids)
        if indent is None or all(not isinstance(v, dict | list | tuple) for v in values):
            return "[" + ", ".join(_encode(v, None, 0) for v in values) + "]"
        pad = " " * (indent * (level + 1))
        body = ",\n".join(f"{pad}{_encode(v, indent, level + 1)}" for v in values)
        return "[\n" + body + "\n" + " " * (indent * level) + "]"
    raise TypeError(f"Cannot serialize object of type {type(obj).__name__}")


def params_hash(params: dict[str, Any]) -> str:
    """Stable short hash of a parameter dictionary.

    Args:
        params: JSON-compatible parameters

    Returns:
        First 16 hex digits of the SHA-256 of the canonical single-line JSON
    """
    digest = hashlib.sha256(canonical_json(params, indent=None).encode("utf-8"))
    return digest.hexdigest()[:16]


def atomic_write_text(path: str | Path, text: str) -> Path:
    """Write text to ``path`` atomically (temp file in the same directory + rename).

    Args:
        path: Destination file
        text: UTF-8 content

    Returns:
        Resolved destination path
    """
    target = Path(path).expanduser().resolve()
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", dir=target.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(tmp_name, target)
    except OSError:
        Path(tmp_name).unlink(missing_ok=True)
        raise
    logger.debug(f"Wrote {len(text)} bytes to {target}")
    return target


def fit_line(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float, float]:
    """Least-squares line through (x, y).

    Args:
        x: Abscissae (at least 3 distinct values)
        y: Ordinates

    Returns:
        Tuple (slope, intercept, slope standard error, RMS residual)

    Raises:
        FitDegenerateError: If fewer than 3 points or all x coincide
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 3:
        raise FitDegenerateError(f"Need at least 3 points for a fit, got {x.size}")
    if np.ptp(x) == 0:
        raise FitDegenerateError("All abscissae coincide; slope undefined")
    result = stats.linregress(x, y)
    residual = y - (result.slope * x + result.intercept)
    rms = float(np.sqrt(np.mean(residual**2)))
    return float(result.slope), float(result.intercept), float(result.stderr), rms


def env_int(name: str, default: int) -> int:
    """Read a positive integer from the environment.

    Args:
        name: Environment variable name
        default: Value when unset or invalid

    Returns:
        Parsed integer
    """
    raw = os.environ.get(name)
    if raw is None or not raw.strip():
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning(f"Ignoring non-integer {name}={raw!r}, using {default}")
        return default
    if value < 1:
        logger.warning(f"Ignoring non-positive {name}={value}, using {default}")
        return default
    return value
