"""Command-line entry point.

    python -m src field [--field LABEL]
    python -m src zeta --field LABEL (--s S | --leading R)
    python -m src verify CHECK [--field LABEL] [--r R]
    python -m src report [--all | --check NAME ...] [--r R]
    python -m src checks

Exit codes: 0 when every selected check passes, 1 on a failed or errored
check, 2 on a usage error, 3 on a data or configuration error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction
from typing import Callable, Optional, Sequence

from src.cli.render import leading_summary, render_fields, render_mapping, render_report, value_summary
from src.config import OUTPUT_FORMATS, CliConfig, build_cli_config
from src.conjectures.registry import DEFAULT_R_RANGE, full_report, list_checks, report_passed
from src.errors import DataError, WorkbenchError
from src.fields.invariants import FieldInvariants
from src.fields.loader import find_field, load_fields, load_invariants, load_kgroup_tables
from src.logging_setup import configure_logging
from src.zeta.dedekind import dedekind_zeta
from src.zeta.hurwitz import EvalPrecision
from src.zeta.leading import leading_term

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_DATA = 3

ALL_CHECKS = "all"


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: '{text}'") from None


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prec", type=int, default=None, help="working precision in bits (>= 64)")
    common.add_argument("--tol", type=float, default=None, help="tolerance on |log2 ratio - k|")
    common.add_argument("--seed", type=int, default=None, help="seed for the randomized sweeps")
    common.add_argument("--format", choices=OUTPUT_FORMATS, default=None, dest="output_format")
    common.add_argument("--data-dir", default=None, help="fixture directory (default: $ZW_DATA_DIR or app.yml)")
    common.add_argument("--jobs", type=int, default=None, help="worker processes for batch runs")
    common.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    check_names = [check.name for check in list_checks()]
    parser = argparse.ArgumentParser(
        prog="python -m src",
        description="Verification workbench for special values of Dedekind zeta functions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    field_cmd = sub.add_parser("field", parents=[common], help="show the invariants of a fixture field")
    field_cmd.add_argument("--field", default=None, help="field label (default: every fixture)")

    zeta_cmd = sub.add_parser("zeta", parents=[common], help="evaluate ζ_F or its leading Laurent term")
    zeta_cmd.add_argument("--field", required=True, help="field label")
    point = zeta_cmd.add_mutually_exclusive_group(required=True)
    point.add_argument("--s", type=_rational, default=None, help="real point, e.g. 2, 1/2 or --s=-3/2")
    point.add_argument("--leading", type=int, default=None, metavar="R", help="integer r for ζ*(F, r)")

    verify_cmd = sub.add_parser("verify", parents=[common], help="run one registered check")
    verify_cmd.add_argument("check", choices=check_names + [ALL_CHECKS])
    verify_cmd.add_argument("--field", default=None, help="restrict to one field (default: every fixture)")
    verify_cmd.add_argument("--r", type=int, default=None, help="restrict to one r (default: -4..6)")

    report_cmd = sub.add_parser("report", parents=[common], help="run the full sweep and emit one report")
    selection = report_cmd.add_mutually_exclusive_group()
    selection.add_argument("--all", action="store_true", help="every registered check (the default)")
    selection.add_argument("--check", action="append", choices=check_names, default=None, dest="checks")
    report_cmd.add_argument("--r", type=int, default=None, help="restrict to one r (default: -4..6)")

    sub.add_parser("checks", parents=[common], help="list the registered checks")
    return parser


# --- loading ---


def _load(cfg: CliConfig, label: Optional[str]) -> list[FieldInvariants]:
    loaded = [find_field(cfg.data_dir, label)] if label else load_fields(cfg.data_dir)
    return [load_invariants(entry, cfg.precision_bits) for entry in loaded]


def _r_range(r: Optional[int]) -> Sequence[int]:
    return [r] if r is not None else DEFAULT_R_RANGE


def _emit(text: str) -> None:
    print(text)


# --- subcommands ---


def cmd_field_info(args: argparse.Namespace, cfg: CliConfig) -> int:
    _emit(render_fields(_load(cfg, args.field), cfg.output_format))
    return EXIT_OK


def cmd_zeta(args: argparse.Namespace, cfg: CliConfig) -> int:
    inv = _load(cfg, args.field)[0]
    precision = EvalPrecision.from_config(cfg.precision_bits, cfg.zeta)
    if args.leading is not None:
        leading = leading_term(inv, args.leading, precision, cfg.zeta)
        summary = leading_summary(inv.label, args.leading, leading)
    else:
        summary = value_summary(inv.label, args.s, dedekind_zeta(inv, args.s, precision))
    _emit(render_mapping(summary, cfg.output_format))
    return EXIT_OK


def _run_report(cfg: CliConfig, label: Optional[str], r: Optional[int], names: Optional[Sequence[str]]) -> int:
    fields = _load(cfg, label)
    ktables = load_kgroup_tables(cfg.data_dir)
    document = full_report(fields, _r_range(r), ktables, cfg, names)
    _emit(render_report(document, cfg.output_format))
    return EXIT_OK if report_passed(document) else EXIT_FAILED


def cmd_verify(args: argparse.Namespace, cfg: CliConfig) -> int:
    names = None if args.check == ALL_CHECKS else [args.check]
    return _run_report(cfg, args.field, args.r, names)


def cmd_report_all(args: argparse.Namespace, cfg: CliConfig) -> int:
    return _run_report(cfg, None, args.r, args.checks)


def cmd_checks(args: argparse.Namespace, cfg: CliConfig) -> int:
    rows = {check.name: check.description for check in list_checks()}
    _emit(render_mapping(rows, cfg.output_format))
    return EXIT_OK


COMMANDS: dict[str, Callable[[argparse.Namespace, CliConfig], int]] = {
    "field": cmd_field_info,
    "zeta": cmd_zeta,
    "verify": cmd_verify,
    "report": cmd_report_all,
    "checks": cmd_checks,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE

    configure_logging(args.log_level)
    try:
        cfg = build_cli_config(
            data_dir=args.data_dir,
            precision_bits=args.prec,
            tolerance=args.tol,
            seed=args.seed,
            output_format=args.output_format,
            jobs=args.jobs,
        )
        return COMMANDS[args.command](args, cfg)
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except WorkbenchError as exc:
        logger.debug("command %s failed", args.command, exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED
