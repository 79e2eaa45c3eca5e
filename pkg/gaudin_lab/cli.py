"""
Command-line front end.

    glab run --config exp.json --out dir/ [--seed N] [--tol-scale x]
    glab plot --report dir/report.json --out dir/

Exit codes: 0 when every check passes, 1 on a failed check or a numerical
error, 2 on an invalid config.
"""
import argparse
import json
import logging
import os
import sys
from typing import List, Optional

from gaudin_lab.config import ExperimentConfig
from gaudin_lab.errors import ConfigError, GaudinLabError
from gaudin_lab.pipelines import run_pipeline
from gaudin_lab.reports import load_report, report_plot, write_report

logger = logging.getLogger("gaudin_lab")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="glab", description="Gaudin model Hamiltonians, Bethe Ansatz and opers.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Run the pipeline named in an experiment config.")
    run.add_argument("--config", required=True, help="Path to the JSON experiment config.")
    run.add_argument("--out", required=True, help="Output directory for reports.")
    run.add_argument("--seed", type=int, default=None, help="Override the config seed.")
    run.add_argument("--tol-scale", type=float, default=None,
                     help="Multiply every tolerance by this factor.")

    plot = sub.add_parser("plot", help="Render static plots of a JSON report.")
    plot.add_argument("--report", required=True, help="Path to report.json.")
    plot.add_argument("--out", required=True, help="Output directory for images.")
    return parser


def configure_logging(level: str, out_dir: Optional[str] = None) -> None:
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        handlers.append(logging.FileHandler(os.path.join(out_dir, "glab.log"), mode="w"))
    logging.basicConfig(level=getattr(logging, level),
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
                        handlers=handlers, force=True)


def load_config(path: str) -> ExperimentConfig:
    """
    Read and validate a config file.

    Raises:
        ConfigError: For unreadable JSON or an invalid field.
    """
    try:
        with open(path) as handle:
            raw = json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}", "") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON at line {exc.lineno}: {exc.msg}", "") from exc
    return ExperimentConfig.from_dict(raw)


def command_run(args: argparse.Namespace) -> int:
    try:
        config = load_config(args.config).with_overrides(args.seed, args.tol_scale)
    except ConfigError as exc:
        configure_logging("INFO")
        logger.error("invalid config %s: %s", args.config, exc)
        print(f"[config] {exc.field or '/'}: {exc.message}", file=sys.stderr)
        return EXIT_CONFIG

    configure_logging(config.log_level, args.out)
    try:
        report = run_pipeline(config)
    except GaudinLabError as exc:
        logger.error("pipeline %s aborted: %s", config.pipeline, exc)
        return EXIT_FAILED
    write_report(report, args.out)

    if report.passed:
        print(f"[{config.pipeline}] OK ({len(report.checks)} checks)")
        return EXIT_OK
    print(f"[{config.pipeline}] FAIL ({len(report.failures)} of {len(report.checks)} checks)")
    for check in report.failures:
        print(f"  - {check.operation}: {check.claim} [{check.anchor}]")
    return EXIT_FAILED


def command_plot(args: argparse.Namespace) -> int:
    configure_logging("INFO")
    try:
        document = load_report(args.report)
    except (OSError, json.JSONDecodeError) as exc:
        logger.error("cannot read report %s: %s", args.report, exc)
        return EXIT_CONFIG
    for path in report_plot(document, args.out):
        print(path)
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return command_run(args)
    return command_plot(args)


if __name__ == "__main__":
    sys.exit(main())
