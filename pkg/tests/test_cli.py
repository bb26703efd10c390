"""Tests for the wcl command line."""

import json
import logging
import math

import numpy as np
import pytest

from weyl_lab.cli import EXIT_CAPACITY, EXIT_CONFIG, EXIT_OK, build_parser, config_from_args, main
from weyl_lab.models.spectral import canonical_order

logger = logging.getLogger(__name__)


def _last_error(capsys) -> dict:
    """Parse the JSON error line written to stderr."""
    lines = [line for line in capsys.readouterr().err.splitlines() if line.startswith("{")]
    return json.loads(lines[-1])


def test_classical_dim_writes_report(tmp_path):
    """Test a report file with its sidecar."""
    output = tmp_path / "dim.json"
    args = ["classical-dim", "--M", "3", "--keep", "0,2", "--depths", "1..6", "-o", str(output)]

    code = main(args)

    assert code == EXIT_OK
    document = json.loads(output.read_text())
    assert document["schema"] == "wcl-report-v1"
    assert document["command"] == "classical-dim"
    assert document["result"]["estimate"]["dimension"] == pytest.approx(
        2 * math.log(2) / math.log(3), abs=1e-9
    )
    assert "output" not in document["config"]
    assert (tmp_path / "dim.json.meta.json").exists()


def test_pressure_to_stdout(capsys):
    """Test printing a report when no output path is given."""
    code = main(["pressure", "--M", "5", "--keep", "1,3", "--s", "0.5"])

    assert code == EXIT_OK
    document = json.loads(capsys.readouterr().out)
    assert document["result"]["estimate"]["value"] == pytest.approx(-0.1116, abs=1e-4)
    assert document["result"]["gap_criterion"]["gap_predicted"] is True


def test_invalid_kept_branches(capsys):
    """Test that a config error exits with code 2 and a JSON message."""
    code = main(["classical-dim", "--M", "3", "--keep", "0,5", "--depths", "1..4"])

    assert code == EXIT_CONFIG
    error = _last_error(capsys)
    assert error["error"] == "ConfigError"
    assert error["exit_code"] == EXIT_CONFIG


def test_cell_cap_exceeded(capsys, monkeypatch):
    """Test that WCL_CELL_CAP overflow exits with code 4."""
    monkeypatch.setenv("WCL_CELL_CAP", "10")

    code = main(["classical-dim", "--M", "3", "--keep", "0,2", "--depths", "1..8"])

    assert code == EXIT_CAPACITY
    assert _last_error(capsys)["error"] == "CapacityError"


def test_scaling_rejects_square_barrier(capsys):
    """Test the analyticity error of complex scaling."""
    code = main(
        ["resonance-1d", "--method", "scaling", "--hbar", "0.05", "--L", "4", "--n", "400"]
    )

    assert code == EXIT_CONFIG
    assert _last_error(capsys)["error"] == "UnsupportedAnalyticityError"


def test_report_independent_of_threads(tmp_path):
    """Test byte-identical reports for one and two worker threads."""
    paths = []
    for threads in (1, 2):
        output = tmp_path / f"conc-{threads}.json"
        args = [
            "concentration",
            "--damping",
            "0,1",
            "--epsilons",
            "0.1,0.2",
            "--N-ladder",
            "4,8,16",
            "--threads",
            str(threads),
            "-o",
            str(output),
            "--csv",
            str(tmp_path / f"conc-{threads}.csv"),
        ]
        assert main(args) == EXIT_OK
        paths.append(output)

    assert paths[0].read_bytes() == paths[1].read_bytes()
    meta = json.loads((tmp_path / "conc-2.json.meta.json").read_text())
    assert meta["threads"] == 2
    header = (tmp_path / "conc-1.csv").read_text().splitlines()[0]
    assert header == "N,epsilon,fraction"


def test_config_file_round_trip(tmp_path):
    """Test that --config reproduces the report of the equivalent flags."""
    from_flags = tmp_path / "flags.json"
    assert main(["pressure", "--M", "3", "--keep", "0,2", "-o", str(from_flags)]) == EXIT_OK

    config_path = tmp_path / "config.json"
    config_path.write_text(json.dumps(json.loads(from_flags.read_text())["config"]))
    from_file = tmp_path / "file.json"
    code = main(["pressure", "--config", str(config_path), "-o", str(from_file)])

    assert code == EXIT_OK
    assert from_file.read_bytes() == from_flags.read_bytes()


def test_config_command_mismatch(tmp_path, capsys):
    """Test that a config for another command is rejected."""
    config_path = tmp_path / "config.json"
    config_path.write_text(
        json.dumps({"command": "pressure", "open_map": {"branch_count": 3, "kept": [0, 2]}})
    )

    code = main(["weyl-fit", "--config", str(config_path)])

    assert code == EXIT_CONFIG
    assert "not 'weyl-fit'" in _last_error(capsys)["message"]


def test_sweep(tmp_path):
    """Test running several experiments from one config."""
    config_path = tmp_path / "sweep.json"
    config_path.write_text(
        json.dumps(
            {
                "experiments": [
                    {"command": "pressure", "open_map": {"branch_count": 5, "kept": [1, 3]}},
                    {
                        "command": "rate-function",
                        "damping": {"values": [0.0, 1.0]},
                        "alphas": [0.25, 0.5],
                    },
                ]
            }
        )
    )
    output = tmp_path / "sweep-report.json"

    assert main(["sweep", str(config_path), "-o", str(output)]) == EXIT_OK

    document = json.loads(output.read_text())
    assert document["command"] == "sweep"
    assert [e["command"] for e in document["experiments"]] == ["pressure", "rate-function"]
    values = document["experiments"][1]["result"]["values"]
    assert values[1] == pytest.approx(math.log(2))


def test_oracle_resonance(capsys):
    """Test the transfer-matrix oracle through the command line."""
    code = main(
        [
            "resonance-1d",
            "--method",
            "oracle",
            "--hbar",
            "0.05",
            "--box",
            "0.005,0.02,-0.001,0.0001",
        ]
    )

    assert code == EXIT_OK
    result = json.loads(capsys.readouterr().out)["result"]
    assert len(result["resonances"]) == 1
    assert result["resonances"][0]["re"] == pytest.approx(0.0108, rel=2e-2)
    assert result["bound_states"] == []


def test_config_from_args_defaults():
    """Test that omitted --keep keeps every branch."""
    args = build_parser().parse_args(["baker-spectrum", "--M", "3", "--N", "9"])

    config = config_from_args(args)

    assert config.open_map.kept == (0, 1, 2)
    assert config.eig_method == "lapack"


def test_argument_syntax_errors():
    """Test that malformed lists are rejected by the parser."""
    with pytest.raises(SystemExit):
        build_parser().parse_args(["classical-dim", "--M", "3", "--keep", "0,x"])


@pytest.mark.parametrize(
    "args",
    [
        ["baker-spectrum", "--M", "3", "--keep", "0,2", "--N", "243"],
        ["damped-spectrum", "--damping", "0,1,2", "--N", "243"],
    ],
)
def test_spectrum_commands_end_to_end(tmp_path, args):
    """Test full N=243 spectra written in canonical order with their sidecar."""
    output = tmp_path / "spectrum.json"

    code = main([*args, "-o", str(output)])

    assert code == EXIT_OK
    result = json.loads(output.read_text())["result"]
    values = np.array([complex(re, im) for re, im in result["eigenvalues"]])
    assert result["n"] == 243
    assert len(values) == 243
    np.testing.assert_array_equal(canonical_order(values), np.arange(243))
    assert json.loads((tmp_path / "spectrum.json.meta.json").read_text())["threads"] >= 1


def test_sweep_threads_flag_wins(tmp_path):
    """Test that --threads overrides the thread count stored in a sweep file."""
    config_path = tmp_path / "sweep.json"
    config_path.write_text(
        json.dumps(
            {
                "threads": 3,
                "experiments": [
                    {"command": "pressure", "open_map": {"branch_count": 3, "kept": [0, 2]}}
                ],
            }
        )
    )
    output = tmp_path / "sweep-report.json"

    assert main(["sweep", str(config_path), "--threads", "2", "-o", str(output)]) == EXIT_OK

    meta = json.loads((tmp_path / "sweep-report.json.meta.json").read_text())
    assert meta["threads"] == 2


def test_resonance_grid_default():
    """Test the default grid of resonance-1d."""
    args = build_parser().parse_args(["resonance-1d", "--method", "cap", "--hbar", "0.05"])

    config = config_from_args(args)

    assert config.grid.half_width == 8.0
    assert config.grid.n == 3200
