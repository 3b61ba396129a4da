"""``qhe-spectro`` command line.

Exit codes: 0 success, 1 validation failure, 2 configuration error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import __version__, config as cfg
from .errors import ConfigError, QHEError
from .output import render_csv, write_svg
from .scans import RUNNERS, svg_series
from .validate import FAIL, render_report, run_validate

EXIT_OK, EXIT_VALIDATION, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2, 3
JOBS_ENV = "QHE_SPECTRO_JOBS"


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qhe-spectro",
        description="Effective-bath dynamics, heat-engine maxima and pump-probe comparisons.")
    parser.add_argument("mode", choices=cfg.MODES)
    parser.add_argument("--config", required=True, help="flat dotted-key JSON file")
    parser.add_argument("--out", help="output path (CSV, or the report for validate)")
    parser.add_argument("--svg", help="also write a line plot (needs matplotlib)")
    parser.add_argument("--jobs", type=int, help=f"worker processes (default ${JOBS_ENV} or 1)")
    parser.add_argument("--seed", type=int, help="seed for randomised validation draws")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return parser


def resolve_jobs(value):
    if value is None:
        env = os.environ.get(JOBS_ENV)
        if env is None or env == "":
            return 1
        try:
            value = int(env)
        except ValueError:
            raise ConfigError(f"{JOBS_ENV} must be an integer, got {env!r}") from None
    if value < 1:
        raise ConfigError(f"--jobs must be >= 1, got {value}")
    return value


def _write(path, text):
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise ConfigError(f"cannot write {path}: {exc}") from None


def run(argv=None, stdout=None):
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        config = cfg.load(args.config, args.mode)
        if args.seed is not None:
            config = cfg.from_flat({**config.to_flat(), "validate.seed": args.seed})
        jobs = resolve_jobs(args.jobs)
        out_path = args.out or config["output.csv_path"]
        svg_path = args.svg or config["output.svg_path"]

        if args.mode == "validate":
            results = run_validate(config, jobs)
            report = render_report(results, config)
            stdout.write(report)
            if out_path:
                _write(out_path, report)
            return EXIT_VALIDATION if any(r.status == FAIL for r in results) else EXIT_OK

        result = RUNNERS[args.mode](config, jobs)
        text = render_csv(result, config.precision, __version__, config.digest())
        if out_path:
            _write(out_path, text)
        else:
            stdout.write(text)
        if svg_path:
            write_svg(svg_path, *svg_series(result, args.mode), title=args.mode)
        return EXIT_OK
    except ConfigError as exc:
        print(f"qhe-spectro: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (QHEError, ArithmeticError, RuntimeError) as exc:
        print(f"qhe-spectro: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
