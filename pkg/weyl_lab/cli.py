"""Command-line interface ``wcl``.

Every subcommand builds (or loads) an ExperimentConfig, runs it through the
Laboratory and writes a ``wcl-report-v1`` document. Errors are reported as
one JSON object on stderr with a matching exit code.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from . import __version__
from .exceptions import CapacityError, ConfigError, NumericalError, WCLError
from .lab import Laboratory
from .models import (
    ExperimentConfig,
    Potential1D,
    SweepConfig,
    double_gaussian_barrier,
    double_square_barrier,
)
from .parsers.config import (
    load_config,
    parse_float_list,
    parse_int_list,
    parse_range,
)
from .reports import Report, sweep_document, write_csv, write_report
from .utils import canonical_json

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_CAPACITY = 4

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

PRESETS = {
    "double-square": double_square_barrier,
    "double-gaussian": double_gaussian_barrier,
}


def exit_code_for(error: Exception) -> int:
    """Exit code of a library error: 2 config/domain, 3 numerical, 4 capacity."""
    if isinstance(error, CapacityError):
        return EXIT_CAPACITY
    if isinstance(error, NumericalError):
        return EXIT_NUMERICAL
    return EXIT_CONFIG


def error_json(error: Exception, exit_code: int) -> str:
    """Machine-readable error line written to stderr."""
    return json.dumps(
        {"error": type(error).__name__, "message": str(error), "exit_code": exit_code}
    )


def _argument_type(parse):
    """Adapt a parser raising ConfigError to argparse's error reporting."""

    def convert(text: str):
        try:
            return parse(text)
        except ConfigError as e:
            raise argparse.ArgumentTypeError(str(e)) from e

    convert.__name__ = parse.__name__
    return convert


_int_list = _argument_type(parse_int_list)
_float_list = _argument_type(parse_float_list)
_range = _argument_type(parse_range)


# Argument groups shared by several subcommands


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="Experiment config file (JSON); only output flags apply")
    parser.add_argument("--output", "-o", help="Report path (default: print to stdout)")
    parser.add_argument("--csv", help="CSV mirror path")
    parser.add_argument("--threads", type=int, help="Worker threads (default: WCL_THREADS)")


def _add_map(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--M", type=int, help="Number of branches")
    parser.add_argument("--keep", type=_int_list, help="Kept branches, e.g. 0,2 (default all)")


def _add_damping(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--damping", type=_float_list, help="Strip damping b_0,...,b_{M-1}")


def _add_spectrum(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--phases", type=_float_list, help="Boundary phases q,p in [0,1)")
    parser.add_argument("--eig-method", choices=["lapack", "qr"], default="lapack")


def _add_ladder(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--N-ladder", dest="N_ladder", type=_int_list, help="e.g. 27,81,243")


def build_parser() -> argparse.ArgumentParser:
    """The ``wcl`` argument parser with all subcommands."""
    parser = argparse.ArgumentParser(
        prog="wcl", description="Fractal Weyl laws and resonances of open quantum maps"
    )
    parser.add_argument("--version", action="version", version=f"wcl {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classical-dim", help="Box dimension of a trapped set")
    _add_map(p)
    p.add_argument("--depths", type=_range, help="Depth range, e.g. 1..8")
    p.add_argument("--direction", choices=["forward", "backward", "full"], default="full")

    p = sub.add_parser("pressure", help="Topological pressure P(-s*phi_u - beta*b)")
    _add_map(p)
    p.add_argument("--s", type=float, default=0.5, help="Coefficient of -phi_u")
    p.add_argument("--beta", type=float, default=0.0)
    _add_damping(p)
    p.add_argument("--T", type=int, default=20, help="Orbit length")

    p = sub.add_parser("rate-function", help="Rate function H(alpha) of the damping")
    _add_map(p)
    _add_damping(p)
    p.add_argument("--alphas", type=_float_list)
    p.add_argument("--empirical-T", dest="empirical_T", type=int, help="Use the empirical path")

    p = sub.add_parser("baker-spectrum", help="Spectrum of the open baker map")
    _add_map(p)
    p.add_argument("--N", type=int)
    _add_spectrum(p)

    p = sub.add_parser("damped-spectrum", help="Spectrum of the damped baker map")
    _add_damping(p)
    p.add_argument("--N", type=int)
    _add_spectrum(p)

    p = sub.add_parser("weyl-fit", help="Fractal Weyl exponent of #{|lambda| >= r}")
    _add_map(p)
    p.add_argument("--r", type=float)
    _add_ladder(p)
    _add_spectrum(p)

    p = sub.add_parser("gap-report", help="Outer moduli against e^P")
    _add_map(p)
    _add_damping(p)
    _add_ladder(p)
    p.add_argument("--T", type=int, default=20)
    p.add_argument("--fast", action="store_true", help="Skip the largest N of the ladder")
    _add_spectrum(p)

    p = sub.add_parser("concentration", help="Concentration of decay rates around b-mean")
    _add_damping(p)
    p.add_argument("--epsilons", type=_float_list)
    _add_ladder(p)
    _add_spectrum(p)

    p = sub.add_parser("ld-profile", help="Decay-rate counts against H(alpha)/log M")
    _add_damping(p)
    p.add_argument("--alphas", type=_float_list)
    p.add_argument("--empirical-T", dest="empirical_T", type=int)
    _add_ladder(p)
    _add_spectrum(p)

    p = sub.add_parser("resonance-1d", help="Resonances of a 1D barrier potential")
    p.add_argument("--method", choices=["cap", "scaling", "oracle"])
    p.add_argument("--potential", choices=sorted(PRESETS), default="double-square")
    p.add_argument("--potential-file", help="Potential1D as JSON (overrides --potential)")
    p.add_argument("--height", type=float, help="Barrier height of the preset")
    p.add_argument("--width", type=float, help="Barrier width of the preset")
    p.add_argument("--hbar", type=float)
    p.add_argument("--L", type=float, default=8.0, help="Grid half-width")
    p.add_argument("--n", type=int, default=3200, help="Grid points")
    p.add_argument("--theta", type=float)
    p.add_argument("--eta", type=float)
    p.add_argument("--cap-onset", dest="cap_onset", type=float)
    p.add_argument("--window", type=_float_list, help="Re z window lo,hi")
    p.add_argument("--box", type=_float_list, help="Oracle box re0,re1,im0,im1")
    p.add_argument("--max-width", dest="max_width", type=float, default=10.0)
    p.add_argument("--eig-method", choices=["lapack", "qr"], default="lapack")

    for name in sub.choices:
        _add_common(sub.choices[name])

    p = sub.add_parser("sweep", help="Run a config file listing several experiments")
    p.add_argument("config", help="Sweep config (JSON)")
    p.add_argument("--output", "-o", help="Report path (default: print to stdout)")
    p.add_argument("--threads", type=int)
    return parser


def _map_fields(args: argparse.Namespace) -> dict[str, Any]:
    if getattr(args, "M", None) is None:
        return {}
    keep = args.keep if args.keep is not None else tuple(range(args.M))
    return {"open_map": {"branch_count": args.M, "kept": keep}}


def _potential(args: argparse.Namespace) -> Potential1D:
    if args.potential_file:
        try:
            return Potential1D.model_validate_json(Path(args.potential_file).read_text())
        except (OSError, ValidationError) as e:
            raise ConfigError(f"Invalid potential file {args.potential_file}: {e}") from e
    overrides = {
        key: value
        for key, value in (("height", args.height), ("width", args.width))
        if value is not None
    }
    return PRESETS[args.potential](**overrides)


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    """Translate parsed flags into a validated ExperimentConfig.

    Raises:
        ConfigError: If the flags do not form a valid config
    """
    fields: dict[str, Any] = {"command": args.command}
    fields.update(_map_fields(args))
    if getattr(args, "damping", None) is not None:
        fields["damping"] = {"values": args.damping}
    for name in ("N", "N_ladder", "r", "alphas", "epsilons", "empirical_T", "T", "beta"):
        value = getattr(args, name, None)
        if value is not None:
            fields[name] = value
    if getattr(args, "phases", None) is not None:
        fields["phases"] = args.phases
    if getattr(args, "eig_method", None) is not None:
        fields["eig_method"] = args.eig_method
    if args.command == "classical-dim":
        fields["depths"] = args.depths
        fields["direction"] = args.direction
    if args.command == "pressure":
        fields["weight_s"] = args.s
    if args.command == "gap-report":
        fields["fast"] = args.fast
    if args.command == "resonance-1d":
        fields["potential"] = _potential(args).model_dump(mode="json", exclude_defaults=True)
        fields["method"] = args.method
        fields["hbar"] = args.hbar
        fields["max_width"] = args.max_width
        if args.method != "oracle":
            fields["grid"] = {"half_width": args.L, "n": args.n, "hbar": args.hbar}
        for name in ("theta", "eta", "cap_onset", "window"):
            if getattr(args, name) is not None:
                fields[name] = getattr(args, name)
        if args.box is not None:
            fields["search_box"] = args.box
    for name in ("output", "csv", "threads"):
        if getattr(args, name, None) is not None:
            fields[name] = getattr(args, name)
    try:
        return ExperimentConfig.model_validate(fields)
    except ValidationError as e:
        raise ConfigError(f"Invalid arguments: {e}") from e


def _emit(report: Report, config: ExperimentConfig, threads: int) -> None:
    if config.output:
        write_report(report.document(), config.output, __version__, threads)
    else:
        sys.stdout.write(report.to_json())
    if config.csv:
        write_csv(report.rows, config.csv)


def run(args: argparse.Namespace) -> int:
    """Execute a parsed command line; library errors propagate to :func:`main`."""
    if args.command == "sweep":
        sweep = load_config(args.config)
        if not isinstance(sweep, SweepConfig):
            sweep = SweepConfig(experiments=(sweep,))
        lab = Laboratory(threads=args.threads)
        reports = lab.sweep(sweep)
        document = sweep_document(reports)
        if args.output:
            write_report(document, args.output, __version__, lab.threads)
        else:
            sys.stdout.write(canonical_json(document))
        for report, config in zip(reports, sweep.experiments, strict=True):
            if config.csv:
                write_csv(report.rows, config.csv)
        return EXIT_OK

    if args.config:
        config = load_config(args.config)
        if isinstance(config, SweepConfig):
            raise ConfigError("sweep configs must be run with 'wcl sweep'")
        if config.command != args.command:
            raise ConfigError(f"config is for {config.command!r}, not {args.command!r}")
        overrides = {
            name: getattr(args, name)
            for name in ("output", "csv", "threads")
            if getattr(args, name) is not None
        }
        config = config.model_copy(update=overrides)
    else:
        config = config_from_args(args)
    lab = Laboratory(threads=config.threads)
    _emit(lab.run(config), config, lab.threads)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    """Entry point of the ``wcl`` console script.

    Returns:
        Process exit code (0 success, 2 config/domain, 3 numerical, 4 capacity)
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format=LOG_FORMAT,
        stream=sys.stderr,
    )
    try:
        return run(args)
    except WCLError as e:
        code = exit_code_for(e)
        sys.stderr.write(error_json(e, code) + "\n")
        return code
    except ValidationError as e:
        # Models built inside the run (e.g. a ladder entry N=0)
        error = ConfigError(str(e))
        sys.stderr.write(error_json(error, EXIT_CONFIG) + "\n")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
