"""Tests for config, list syntax and spectrum record parsers."""

import json
import logging

import numpy as np
import pytest

from weyl_lab import ConfigError, ExperimentConfig, SpectrumRecord, SweepConfig
from weyl_lab.parsers.config import (
    load_config,
    normalize_config,
    parse_experiment,
    parse_float_list,
    parse_int_list,
    parse_range,
    parse_sweep,
)
from weyl_lab.parsers.spectra import (
    parse_spectrum_json,
    spectrum_from_dict,
    spectrum_to_dict,
    spectrum_to_json,
)

logger = logging.getLogger(__name__)

PRESSURE_CONFIG = {
    "command": "pressure",
    "open_map": {"branch_count": 5, "kept": [1, 3]},
    "weight_s": 0.5,
}


def test_parse_lists_and_ranges():
    """Test the comma-list and range syntax."""
    assert parse_int_list("0,2") == (0, 2)
    assert parse_int_list("27, 81,243") == (27, 81, 243)
    assert parse_float_list("0.1,0.25") == (0.1, 0.25)
    assert parse_range("1..8") == (1, 8)
    assert parse_range("5") == (5, 5)

    for bad in ("", "0,x"):
        with pytest.raises(ConfigError):
            parse_int_list(bad)
    with pytest.raises(ConfigError):
        parse_float_list("a,b")
    with pytest.raises(ConfigError):
        parse_range("8..1")
    with pytest.raises(ConfigError):
        parse_range("1-8")


def test_parse_experiment():
    """Test JSON config validation."""
    config = parse_experiment(json.dumps(PRESSURE_CONFIG))

    assert isinstance(config, ExperimentConfig)
    assert config.open_map.kept == (1, 3)

    with pytest.raises(ConfigError, match="open_map"):
        parse_experiment(json.dumps({**PRESSURE_CONFIG, "open_map": {"branch_count": 5}}))
    with pytest.raises(ConfigError):
        parse_experiment(json.dumps({**PRESSURE_CONFIG, "unknown": 1}))
    with pytest.raises(ConfigError):
        parse_experiment("{")


def test_normal_form_is_stable():
    """Test that dumping a loaded normal form reproduces it."""
    config = parse_experiment(json.dumps(PRESSURE_CONFIG))

    normal = normalize_config(config)

    assert normalize_config(parse_experiment(normal)) == normal
    assert "null" not in normal


def test_load_config(tmp_path):
    """Test experiment and sweep detection from files."""
    single = tmp_path / "single.json"
    single.write_text(json.dumps(PRESSURE_CONFIG))
    sweep = tmp_path / "sweep.json"
    sweep.write_text(json.dumps({"experiments": [PRESSURE_CONFIG, PRESSURE_CONFIG]}))

    assert isinstance(load_config(single), ExperimentConfig)
    loaded = load_config(sweep)
    assert isinstance(loaded, SweepConfig)
    assert len(loaded.experiments) == 2
    assert isinstance(parse_sweep(sweep.read_text()), SweepConfig)

    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json")
    (tmp_path / "bad.json").write_text("not json")
    with pytest.raises(ConfigError):
        load_config(tmp_path / "bad.json")


def test_spectrum_record_json():
    """Test the [re, im] record form."""
    rec = SpectrumRecord(
        n=2,
        eigenvalues=[0.5 - 0.25j, 1.0],
        builder={"kind": "matrix", "n": 2},
        params_hash="0123456789abcdef",
        residuals=(1e-14,),
    )

    data = spectrum_to_dict(rec)

    assert data["eigenvalues"] == [[1.0, 0.0], [0.5, -0.25]]
    assert data["residuals"] == [1e-14]
    parsed = parse_spectrum_json(spectrum_to_json(rec))
    np.testing.assert_array_equal(parsed.eigenvalues, rec.eigenvalues)
    assert parsed.params_hash == rec.params_hash
    assert spectrum_to_json(parsed) == spectrum_to_json(rec)


def test_malformed_spectrum_records():
    """Test that broken records raise ConfigError."""
    with pytest.raises(ConfigError):
        spectrum_from_dict({"eigenvalues": [[1.0, 0.0]]})
    with pytest.raises(ConfigError):
        spectrum_from_dict({"n": 1, "eigenvalues": [[1.0]]})
    with pytest.raises(ConfigError):
        parse_spectrum_json("[]")
    with pytest.raises(ConfigError):
        parse_spectrum_json("{")
