"""Command-line interface.

Subcommands: point, scan, peaks, sweep, validate.  Result payloads go to
files or stdout only; diagnostics go to stderr, so the CLI composes in
pipelines.  Exit codes: 0 success, 1 argument/config error, 2 numerical
failure, 3 validation failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import os
import sys
from pathlib import Path

from . import fileio, localization, model, validate
from .fileio import ConfigError, RunConfig
from .localization import GridSpec, UnknownParameterError
from .numerics import NonFiniteStateError, SingularMatrixError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_VALIDATION = 3

log = logging.getLogger("atomloc")


class CliUsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of calling sys.exit(2)."""

    def error(self, message):
        raise CliUsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="atomloc", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--config", type=Path, default=None,
                        help="JSON config file; flags override its keys")

    common = _Parser(add_help=False)
    for name in fileio.PARAM_KEYS:
        common.add_argument(f"--{name.replace('_', '-')}", type=float,
                            default=None, dest=name)
    for name in ("x_min", "x_max", "y_min", "y_max"):
        common.add_argument(f"--{name.replace('_', '-')}", type=float,
                            default=None, dest=name)
    for name in ("nx", "ny"):
        common.add_argument(f"--{name}", type=int, default=None, dest=name)
    common.add_argument("--output-dir", type=Path, default=None, dest="output_dir")
    common.add_argument("--formats", type=str, default=None,
                        help="comma-separated subset of csv,json,pgm")

    sub = parser.add_subparsers(dest="command", required=True)

    p_point = sub.add_parser("point", parents=[common],
                             help="steady state and chi'' at one position")
    p_point.add_argument("--x", type=float, required=True)
    p_point.add_argument("--y", type=float, required=True)

    sub.add_parser("scan", parents=[common],
                   help="write the chi'' map in the requested formats")

    sub.add_parser("peaks", parents=[common],
                   help="scan, then write the per-quadrant peak report")

    p_sweep = sub.add_parser("sweep", parents=[common],
                             help="scan once per value of a swept parameter")
    p_sweep.add_argument("--param", type=str, default=None,
                         choices=localization.SWEEPABLE_PARAMS)
    p_sweep.add_argument("--values", type=str, default=None,
                         help="comma-separated numbers, e.g. 21,30,40,60")

    sub.add_parser("validate", parents=[common],
                   help="run the oracle cross-check suite")
    return parser


def _merge_config(args) -> RunConfig:
    """Defaults, then config file, then command-line flags."""
    config = fileio.load_config(args.config) if args.config else RunConfig()

    param_overrides = {
        name: getattr(args, name)
        for name in fileio.PARAM_KEYS
        if getattr(args, name, None) is not None
    }
    # replace() re-runs the PhysParams validation on the combination
    params = dataclasses.replace(config.params, **param_overrides)

    grid_overrides = {
        name: getattr(args, name)
        for name in fileio.GRID_KEYS
        if getattr(args, name, None) is not None
    }
    grid_kwargs = {k: getattr(config.grid, k) for k in fileio.GRID_KEYS}
    grid_kwargs.update(grid_overrides)
    grid = GridSpec(**grid_kwargs)

    output_dir = args.output_dir if args.output_dir is not None else config.output_dir
    formats = config.formats
    if getattr(args, "formats", None):
        requested = [f.strip() for f in args.formats.split(",") if f.strip()]
        if not requested:
            raise ConfigError("--formats must name at least one format")
        for fmt in requested:
            if fmt not in fileio.VALID_FORMATS:
                raise ConfigError(f"unknown format {fmt!r}")
        formats = tuple(dict.fromkeys(requested))

    return RunConfig(params=params, grid=grid, output_dir=Path(output_dir),
                     formats=formats, sweep=config.sweep)


def _ensure_output_dir(path: Path) -> None:
    path.mkdir(parents=True, exist_ok=True)
    if not os.access(path, os.W_OK):
        raise ConfigError(f"output directory {path} is not writable")


def _write_map(lmap, formats, out_dir: Path, stem: str) -> list[Path]:
    written = []
    writers = {"csv": fileio.write_csv, "pgm": fileio.write_pgm,
               "json": fileio.write_map_json}
    for fmt in formats:
        path = out_dir / f"{stem}.{fmt}"
        writers[fmt](lmap, path)
        written.append(path)
    return written


def _cmd_point(args, config: RunConfig) -> int:
    omega_c = float(model.rabi_at(config.params, args.x, args.y))
    rho = model.steady_state(config.params, omega_c)
    chi = model.susceptibility_imag(config.params, omega_c)
    doc = {
        "x": args.x,
        "y": args.y,
        "omega_c": omega_c,
        "chi_im": chi,
        "rho": {
            label: [float(rho.reshape(9)[k].real), float(rho.reshape(9)[k].imag)]
            for k, label in enumerate(model.STATE_LABELS)
        },
    }
    print(json.dumps(doc, indent=1))
    return EXIT_OK


def _cmd_scan(args, config: RunConfig) -> int:
    _ensure_output_dir(config.output_dir)
    lmap = localization.scan(config.params, config.grid)
    for path in _write_map(lmap, config.formats, config.output_dir, "chi_map"):
        log.info("wrote %s", path)
    return EXIT_OK


def _cmd_peaks(args, config: RunConfig) -> int:
    _ensure_output_dir(config.output_dir)
    lmap = localization.scan(config.params, config.grid)
    report = localization.find_peaks(lmap)
    for path in _write_map(lmap, config.formats, config.output_dir, "chi_map"):
        log.info("wrote %s", path)
    peaks_path = config.output_dir / "peaks.json"
    fileio.write_peaks_json([(None, report)], peaks_path)
    log.info("wrote %s", peaks_path)
    return EXIT_OK


def _cmd_sweep(args, config: RunConfig) -> int:
    if args.param is not None and args.values is not None:
        param, values = args.param, [float(v) for v in args.values.split(",")]
    elif config.sweep is not None and args.param is None and args.values is None:
        param, values = config.sweep
    else:
        raise CliUsageError(
            "sweep needs --param and --values together (or a config 'sweep' entry)"
        )
    _ensure_output_dir(config.output_dir)
    results = localization.sweep(config.params, config.grid, param, values)
    for result in results:
        token = f"{result.value:g}"
        stem = f"sweep_{param}_{token}"
        for path in _write_map(result.map, config.formats, config.output_dir, stem):
            log.info("wrote %s", path)
    summary = config.output_dir / f"sweep_{param}_peaks.json"
    fileio.write_peaks_json([(r.value, r.report) for r in results], summary)
    log.info("wrote %s", summary)
    return EXIT_OK


def _cmd_validate(args, config: RunConfig) -> int:
    results = validate.run_validation_suite()
    width = max(len(r.name) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{r.name:<{width}}  {status}  {r.detail}")
    failed = sum(not r.passed for r in results)
    print(f"{failed} of {len(results)} checks failed" if failed
          else f"all {len(results)} checks passed")
    return EXIT_VALIDATION if failed else EXIT_OK


_COMMANDS = {
    "point": _cmd_point,
    "scan": _cmd_scan,
    "peaks": _cmd_peaks,
    "sweep": _cmd_sweep,
    "validate": _cmd_validate,
}


def main(argv=None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO,
                        format="%(levelname)s %(message)s")
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        config = _merge_config(args)
        return _COMMANDS[args.command](args, config)
    except (SingularMatrixError, NonFiniteStateError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (CliUsageError, ConfigError, UnknownParameterError, OSError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
