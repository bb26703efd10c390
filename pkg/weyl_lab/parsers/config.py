"""Experiment configs and the list/range syntax used on the command line."""

import json
import logging
from pathlib import Path

from pydantic import ValidationError

from ..exceptions import ConfigError
from ..models import ExperimentConfig, SweepConfig

logger = logging.getLogger(__name__)


def _validation_message(e: ValidationError) -> str:
    parts = []
    for error in e.errors():
        location = ".".join(str(item) for item in error["loc"]) or "<root>"
        parts.append(f"{location}: {error['msg']}")
    return "; ".join(parts)


def parse_experiment(text: str) -> ExperimentConfig:
    """Validate one experiment config from JSON text.

    Raises:
        ConfigError: On invalid JSON, unknown fields or missing parameters
    """
    try:
        return ExperimentConfig.model_validate_json(text)
    except ValidationError as e:
        raise ConfigError(f"Invalid config: {_validation_message(e)}") from e


def parse_sweep(text: str) -> SweepConfig:
    """Validate a sweep config (``{"experiments": [...]}``) from JSON text.

    Raises:
        ConfigError: On invalid JSON, unknown fields or missing parameters
    """
    try:
        return SweepConfig.model_validate_json(text)
    except ValidationError as e:
        raise ConfigError(f"Invalid sweep config: {_validation_message(e)}") from e


def load_config(path: str | Path) -> ExperimentConfig | SweepConfig:
    """Read a config file; a top-level ``experiments`` key marks a sweep.

    Args:
        path: JSON config file

    Returns:
        ExperimentConfig or SweepConfig

    Raises:
        ConfigError: If the file cannot be read or fails validation
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"Cannot read config {path}: {e}") from e
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"Config {path} is not valid JSON: {e}") from e
    if isinstance(raw, dict) and "experiments" in raw:
        config: ExperimentConfig | SweepConfig = parse_sweep(text)
    else:
        config = parse_experiment(text)
    logger.debug(f"Loaded config from {path}")
    return config


def normalize_config(config: ExperimentConfig | SweepConfig) -> str:
    """Normal form of a config: ``model_dump_json(exclude_none=True)``."""
    return config.model_dump_json(exclude_none=True)


def parse_int_list(text: str) -> tuple[int, ...]:
    """Parse ``"0,2"`` into ``(0, 2)``.

    Raises:
        ConfigError: On empty or non-integer items
    """
    try:
        values = tuple(int(item) for item in text.split(",") if item.strip())
    except ValueError as e:
        raise ConfigError(f"Expected a comma-separated integer list, got {text!r}") from e
    if not values:
        raise ConfigError("Empty integer list")
    return values


def parse_float_list(text: str) -> tuple[float, ...]:
    """Parse ``"0.1,0.25"`` into ``(0.1, 0.25)``.

    Raises:
        ConfigError: On empty or non-numeric items
    """
    try:
        values = tuple(float(item) for item in text.split(",") if item.strip())
    except ValueError as e:
        raise ConfigError(f"Expected a comma-separated number list, got {text!r}") from e
    if not values:
        raise ConfigError("Empty number list")
    return values


def parse_range(text: str) -> tuple[int, int]:
    """Parse an inclusive integer range ``"1..8"`` (a single ``"5"`` means ``5..5``).

    Raises:
        ConfigError: On malformed or decreasing ranges
    """
    try:
        if ".." in text:
            low, high = (int(part) for part in text.split("..", 1))
        else:
            low = high = int(text)
    except ValueError as e:
        raise ConfigError(f"Expected a range like 1..8, got {text!r}") from e
    if low > high:
        raise ConfigError(f"Decreasing range {text!r}")
    return low, high
