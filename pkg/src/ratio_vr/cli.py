"""Command-line entry point: ``ratio-vr simulate|analyze|evaluate|version``.

Exit codes: 0 on success, 1 on invalid input (bad flags, configs or data
files), 2 on any other error.  Diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import Any, NoReturn, Sequence

from ratio_vr import __version__
from ratio_vr._versioning import SCHEMA_VERSION, check_schema_version
from ratio_vr.evaluation.table import render_table, run_table
from ratio_vr.io.config import AnalysisConfig
from ratio_vr.io.ingest import detect_format, ingest, read_suite
from ratio_vr.io.report import analysis_report, write_details_csv, write_json, write_suite
from ratio_vr.io.table import UnitTable
from ratio_vr.reduction.pipeline import run_vr_test
from ratio_vr.reduction.presets import PRESETS, resolve_config
from ratio_vr.reduction.schemas import VRConfig
from ratio_vr.simulation.presets import SUITE_PRESETS, generate_preset_suite, resolve_suite
from ratio_vr.simulation.schemas import EffectDistribution, SuitePreset

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_INTERNAL = 2

DEFAULT_EVAL_METHODS = ("pre", "pred", "union")


class _Parser(argparse.ArgumentParser):
    """Usage errors are validation failures (exit 1), not argparse's 2."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ratio-vr", description="Variance-reduced A/B tests on ratio metrics.")
    parser.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="stderr log level (default: WARNING)",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sim = sub.add_parser("simulate", help="write a suite of synthetic experiments")
    sim.add_argument("--output", required=True, type=Path, help="suite directory")
    sim.add_argument(
        "--preset",
        choices=sorted(SUITE_PRESETS),
        help="start from a named suite; the flags below override it (default: default)",
    )
    sim.add_argument("--users", type=int, help="users per variant (default: 10000)")
    sim.add_argument("--days", type=int, help="days in the experiment window (default: 7)")
    sim.add_argument("--pre-days", type=int, help="days in the pre-period window (default: 7)")
    sim.add_argument("--pre-overlap-days", type=int, help="experiment days also counted in the pre-period (default: 0)")
    sim.add_argument("--effect", type=float, help="true retention effect (mean when --effect-sd > 0)")
    sim.add_argument("--effect-sd", type=float, help="spread of per-experiment effects")
    sim.add_argument("--base-retention", type=float)
    sim.add_argument("--heterogeneity", type=float)
    sim.add_argument("--pre-post-correlation", type=float)
    sim.add_argument("--features", type=int)
    sim.add_argument("--signal-fraction", type=float)
    sim.add_argument("--experiments", type=int)
    sim.add_argument("--format", choices=["csv", "jsonl"], default="csv")
    sim.add_argument("--seed", type=int)
    sim.set_defaults(handler=_cmd_simulate)

    ana = sub.add_parser("analyze", help="test one experiment, raw and variance-reduced")
    ana.add_argument("--config", required=True, type=Path, help="analysis config JSON")
    ana.add_argument("--input", type=Path, help="unit file; replaces the config's input_paths")
    ana.add_argument("--output", type=Path, help="result JSON (default: stdout)")
    ana.add_argument("--control", help="control variant label")
    ana.add_argument("--method", choices=sorted(PRESETS))
    ana.add_argument("--folds", type=int, help="cross-fitting folds (0 = in-sample)")
    ana.add_argument("--alpha", type=float)
    ana.add_argument("--seed", type=int)
    ana.set_defaults(handler=_cmd_analyze)

    ev = sub.add_parser("evaluate", help="compare methods across experiment suites")
    ev.add_argument("--ab-suite", required=True, type=Path)
    ev.add_argument("--aa-suite", type=Path)
    ev.add_argument(
        "--method",
        action="append",
        choices=sorted(PRESETS),
        help=f"repeatable (default: {' '.join(DEFAULT_EVAL_METHODS)})",
    )
    ev.add_argument("--folds", type=int)
    ev.add_argument("--control", default="control")
    ev.add_argument("--alpha", type=float, default=0.05)
    ev.add_argument("--output", type=Path, help="report JSON (default: stdout)")
    ev.add_argument("--table", type=Path, help="aligned text table")
    ev.add_argument("--details", type=Path, help="per-experiment CSV")
    ev.add_argument("--seed", type=int, default=0)
    ev.add_argument(
        "--workers",
        type=int,
        default=os.cpu_count() or 1,
        help="processes evaluating experiments concurrently (default: all CPUs)",
    )
    ev.set_defaults(handler=_cmd_evaluate)

    ver = sub.add_parser("version", help="print package and schema versions")
    ver.set_defaults(handler=_cmd_version)
    return parser


# simulate flag -> SimConfig field
_TEMPLATE_FLAGS = {
    "users": "n_users",
    "days": "window_days",
    "pre_days": "pre_days",
    "pre_overlap_days": "pre_overlap_days",
    "base_retention": "base_retention",
    "heterogeneity": "user_heterogeneity",
    "pre_post_correlation": "pre_post_correlation",
    "features": "n_features",
    "signal_fraction": "feature_signal_fraction",
}


def _suite_preset(args: argparse.Namespace) -> SuitePreset:
    base = resolve_suite(args.preset)
    overrides: dict[str, Any] = {}
    template = {
        name: getattr(args, flag) for flag, name in _TEMPLATE_FLAGS.items() if getattr(args, flag) is not None
    }
    if template:
        overrides["template"] = template
    if args.effect is not None or args.effect_sd is not None:
        value = base.effects.value if args.effect is None else args.effect
        scale = base.effects.scale if args.effect_sd is None else args.effect_sd
        if scale > 0:
            overrides["effects"] = EffectDistribution(kind="normal", value=value, scale=scale)
        else:
            overrides["effects"] = EffectDistribution(kind="constant", value=value)
    if args.experiments is not None:
        overrides["n_experiments"] = args.experiments
    if args.seed is not None:
        overrides["seed"] = args.seed
    return resolve_suite(args.preset, overrides)


def _cmd_simulate(args: argparse.Namespace) -> int:
    preset = _suite_preset(args)
    suite = generate_preset_suite(preset)
    manifest = write_suite(suite, args.output, preset.template, preset.effects, preset.seed, args.format)
    logger.info("wrote %d experiments to %s", len(manifest.experiments), args.output)
    return EXIT_OK


def _vr_config(base: VRConfig, method: str | None, folds: int | None) -> VRConfig:
    """*base* with the method's covariate set and the fold count swapped in."""
    overrides: dict[str, Any] = {}
    if method is not None:
        overrides["covariate_set"] = resolve_config(method).covariate_set
    if folds is not None:
        overrides["cross_fit_folds"] = folds
    if not overrides:
        return base
    return VRConfig.model_validate({**base.model_dump(), **overrides})


def _cmd_analyze(args: argparse.Namespace) -> int:
    raw = AnalysisConfig.model_validate_json(args.config.read_text(encoding="utf-8"))
    check_schema_version(raw.schema_version)
    updates: dict[str, Any] = {}
    if args.control is not None:
        updates["control_variant"] = args.control
    if args.alpha is not None:
        updates["alpha"] = args.alpha
    if args.seed is not None:
        updates["seed"] = args.seed
    if args.output is not None:
        updates["output_path"] = str(args.output)
    if args.input is not None:
        updates["input_paths"] = [str(args.input)]
        updates["input_format"] = detect_format(args.input)
    config = AnalysisConfig.model_validate({**raw.model_dump(), **updates})
    if not config.input_paths:
        raise ValueError("no input: set input_paths in the config or pass --input")
    vr = _vr_config(config.vr, args.method, args.folds)

    records = []
    reports = []
    for path in config.input_paths:
        result = ingest(path, config.input_format, config.metric, config.reject_threshold)
        records.extend(result.records)
        reports.append(result.report)
    units = UnitTable.from_records(records)
    logger.info("analyzing %d units with method %s", len(units), vr.label)

    outcome = run_vr_test(units, config.metric, vr, config.control_variant, seed=config.seed)
    report = analysis_report(outcome, vr.label, config.alpha, reports)
    if config.output_path:
        write_json(report, config.output_path)
    else:
        sys.stdout.write(report.model_dump_json(indent=2) + "\n")
    return EXIT_OK


def _cmd_evaluate(args: argparse.Namespace) -> int:
    overrides = {"cross_fit_folds": args.folds} if args.folds is not None else None
    methods = [resolve_config(name, overrides) for name in (args.method or DEFAULT_EVAL_METHODS)]
    suite_ab = read_suite(args.ab_suite)
    suite_aa = read_suite(args.aa_suite) if args.aa_suite else None
    report = run_table(
        suite_ab,
        suite_aa,
        methods,
        control_variant=args.control,
        alpha=args.alpha,
        seed=args.seed,
        workers=args.workers,
    )
    table = render_table(report)
    if args.output:
        write_json(report, args.output)
    else:
        sys.stdout.write(report.model_dump_json(indent=2) + "\n")
    if args.table:
        args.table.parent.mkdir(parents=True, exist_ok=True)
        args.table.write_text(table, encoding="utf-8")
    elif args.output:
        sys.stdout.write(table)
    if args.details:
        write_details_csv(report, args.details)
    return EXIT_OK


def _cmd_version(args: argparse.Namespace) -> int:
    sys.stdout.write(f"ratio-vr {__version__} (schema {SCHEMA_VERSION})\n")
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        level=args.log_level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.handler(args)
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"ratio-vr {args.command}: error: {exc}\n")
        return EXIT_INVALID
    except Exception as exc:  # noqa: BLE001
        logger.debug("internal error", exc_info=True)
        sys.stderr.write(f"ratio-vr {args.command}: internal error: {type(exc).__name__}: {exc}\n")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
