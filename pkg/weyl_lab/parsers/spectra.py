"""Spectrum record (de)serialization."""

import json
import logging
from typing import Any

import numpy as np
from pydantic import ValidationError

from ..exceptions import ConfigError
from ..models import SpectrumRecord
from ..utils import canonical_json

logger = logging.getLogger(__name__)


def spectrum_to_dict(rec: SpectrumRecord) -> dict[str, Any]:
    """JSON-compatible form of a record; eigenvalues as ``[re, im]`` pairs in canonical order."""
    data: dict[str, Any] = {
        "n": rec.n,
        "method": rec.method,
        "params_hash": rec.params_hash,
        "builder": rec.builder,
        "eigenvalues": [[float(z.real), float(z.imag)] for z in rec.eigenvalues],
    }
    if rec.residuals is not None:
        data["residuals"] = list(rec.residuals)
    return data


def spectrum_to_json(rec: SpectrumRecord) -> str:
    """Canonical JSON text of a record (17 significant digits)."""
    return canonical_json(spectrum_to_dict(rec))


def spectrum_from_dict(data: dict[str, Any]) -> SpectrumRecord:
    """Rebuild a record from :func:`spectrum_to_dict` output.

    Raises:
        ConfigError: If fields are missing or malformed
    """
    try:
        pairs = np.asarray(data["eigenvalues"], dtype=float).reshape(-1, 2)
        return SpectrumRecord(
            n=data["n"],
            eigenvalues=pairs[:, 0] + 1j * pairs[:, 1],
            builder=data.get("builder", {}),
            params_hash=data.get("params_hash", ""),
            method=data.get("method", "lapack"),
            residuals=data.get("residuals"),
        )
    except (KeyError, TypeError, ValueError, ValidationError) as e:
        raise ConfigError(f"Malformed spectrum record: {e}") from e


def parse_spectrum_json(text: str) -> SpectrumRecord:
    """Parse JSON text written by :func:`spectrum_to_json`.

    Args:
        text: JSON document

    Returns:
        SpectrumRecord

    Raises:
        ConfigError: If the text is not valid JSON or misses fields
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"Spectrum file is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError("Spectrum JSON must be an object")
    record = spectrum_from_dict(data)
    logger.debug(f"Parsed spectrum n={record.n} [{record.params_hash}]")
    return record
