"""Method comparison over experiment suites, and its text rendering.

Every method runs on every experiment; experiments are visited in sorted
``experiment_id`` order so the report depends only on the suite contents.
GBDT predictions are computed once per experiment and GBDT setting and
shared between the methods that use them.  Experiments can be evaluated in
worker processes; results are gathered back in the same sorted order.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Protocol, Sequence

import numpy as np

from ratio_vr.evaluation.metrics import (
    frac_lower_pvalue,
    median_relative_z,
    sample_size_reduction,
    type_i_error,
    variance_reduction_pct,
)
from ratio_vr.evaluation.schemas import EvaluationReport, ExperimentDetail, MethodComparison
from ratio_vr.gbdt.schemas import ComponentPredictions
from ratio_vr.io.table import UnitTable
from ratio_vr.ratio.schemas import RatioMetricSpec
from ratio_vr.reduction.pipeline import component_predictions, run_vr_test
from ratio_vr.reduction.presets import PRESET_LABELS
from ratio_vr.reduction.schemas import VRConfig, VRTestOutcome

logger = logging.getLogger(__name__)


class SuiteMember(Protocol):
    """An experiment in a suite; ``effect`` is the ground truth when known."""

    @property
    def experiment_id(self) -> str: ...

    @property
    def units(self) -> UnitTable: ...

    @property
    def effect(self) -> float | None: ...


def _ordered(suite: Sequence[SuiteMember]) -> list[SuiteMember]:
    ordered = sorted(suite, key=lambda e: e.experiment_id)
    ids = [e.experiment_id for e in ordered]
    if len(set(ids)) != len(ids):
        raise ValueError("experiment ids within a suite must be unique")
    return ordered


def _detail(member: SuiteMember, outcome: VRTestOutcome, suite: str) -> ExperimentDetail:
    sign_flip = None
    if member.effect:
        sign_flip = bool(np.sign(outcome.reduced.z) != np.sign(member.effect))
    return ExperimentDetail(
        experiment_id=member.experiment_id,
        suite=suite,
        true_effect=member.effect,
        z_raw=outcome.raw.z,
        z_vr=outcome.reduced.z,
        p_raw=outcome.raw.p_value,
        p_vr=outcome.reduced.p_value,
        ate_raw=outcome.raw.ate,
        ate_vr=outcome.reduced.ate,
        var_raw=outcome.pooled_variance_raw,
        var_vr=outcome.pooled_variance_reduced,
        variance_reduction_pct=variance_reduction_pct(
            outcome.pooled_variance_raw, outcome.pooled_variance_reduced
        ),
        sign_flip=sign_flip,
    )


def _prediction_setting(config: VRConfig) -> str:
    return config.model_dump_json(include={"gbdt_params", "cross_fit_folds", "compose_linearized_prediction"})


def evaluate_experiment(
    units: UnitTable,
    methods: Sequence[VRConfig],
    spec: RatioMetricSpec,
    control_variant: str = "control",
    seed: int = 0,
) -> list[VRTestOutcome]:
    """Run every method on one experiment, in the order given.

    Methods with the same GBDT setting share one set of predictions.
    """
    predictions: dict[str, ComponentPredictions] = {}
    outcomes = []
    for config in methods:
        shared = None
        if config.covariate_set.uses_predictions:
            key = _prediction_setting(config)
            if key not in predictions:
                predictions[key] = component_predictions(units, spec, config, control_variant, seed)
            shared = predictions[key]
        outcomes.append(run_vr_test(units, spec, config, control_variant, seed=seed, predictions=shared))
    return outcomes


def run_table(
    suite_ab: Sequence[SuiteMember],
    suite_aa: Sequence[SuiteMember] | None,
    methods: Sequence[VRConfig],
    spec: RatioMetricSpec | None = None,
    control_variant: str = "control",
    alpha: float = 0.05,
    seed: int = 0,
    workers: int = 1,
) -> EvaluationReport:
    """Compare every method with the raw test across the suites.

    Args:
        suite_ab: Experiments for variance reduction, p-value and relative-z
            statistics.
        suite_aa: Optional A/A experiments for the type-I error column.
        methods: One report row per method, in the given order.
        spec: Ratio metric; defaults to one-day retention on the
            ``numerator`` / ``denominator`` fields.
        control_variant: Control label shared by all experiments.
        alpha: Significance level for the type-I error.
        seed: Cross-fitting seed used for every experiment.
        workers: Processes evaluating experiments concurrently; 1 runs in
            this process.  The report does not depend on it.
    """
    if not suite_ab:
        raise ValueError("the A/B suite must contain at least one experiment")
    if not methods:
        raise ValueError("at least one method is required")
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    metric = spec or RatioMetricSpec()
    members = [("ab", m) for m in _ordered(suite_ab)] + [("aa", m) for m in _ordered(suite_aa or [])]
    task = partial(
        evaluate_experiment,
        methods=list(methods),
        spec=metric,
        control_variant=control_variant,
        seed=seed,
    )
    tables = [member.units for _, member in members]
    if workers > 1 and len(members) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(members))) as pool:
            per_experiment = list(pool.map(task, tables))
    else:
        per_experiment = [task(units) for units in tables]
    n_ab = sum(1 for suite, _ in members if suite == "ab")
    n_aa = len(members) - n_ab
    logger.info("evaluated %d A/B and %d A/A experiments with %d methods", n_ab, n_aa, len(methods))

    rows: list[MethodComparison] = []
    for i, config in enumerate(methods):
        details = [
            _detail(member, outcomes[i], suite)
            for (suite, member), outcomes in zip(members, per_experiment)
        ]
        aa_results = [
            outcomes[i].reduced
            for (suite, _), outcomes in zip(members, per_experiment)
            if suite == "aa"
        ]
        ab_details = [d for d in details if d.suite == "ab"]
        rel_z = median_relative_z([(d.z_raw, d.z_vr) for d in ab_details])
        rows.append(
            MethodComparison(
                method_label=config.label,
                display_label=PRESET_LABELS.get(config.label, config.label),
                variance_reduction_pct=float(np.mean([d.variance_reduction_pct for d in ab_details])),
                frac_lower_pvalue=frac_lower_pvalue([(d.p_raw, d.p_vr) for d in ab_details]),
                median_relative_z=rel_z,
                sample_size_reduction=sample_size_reduction(rel_z) if rel_z > 0 else None,
                type_i_error=type_i_error(aa_results, alpha) if aa_results else None,
                details=details,
            )
        )

    return EvaluationReport(
        metric=metric.name,
        alpha=alpha,
        n_ab=n_ab,
        n_aa=n_aa,
        methods=rows,
    )


_HEADERS = ("Covariates", "Var. Red.", "P(p-value lower)", "med. rel. z", "Type-I Error")


def render_table(report: EvaluationReport) -> str:
    """Aligned plain-text table, one row per method."""
    body: list[tuple[str, ...]] = []
    for row in report.methods:
        if row.type_i_error is None:
            type_i = "n/a"
        else:
            t = row.type_i_error
            type_i = f"{100 * t.rate:.1f} % [{100 * t.interval.low:.1f}, {100 * t.interval.high:.1f}]"
        body.append(
            (
                row.display_label,
                f"{row.variance_reduction_pct:.2f} %",
                f"{100 * row.frac_lower_pvalue:.2f} %",
                f"{row.median_relative_z:.2f}",
                type_i,
            )
        )
    widths = [max(len(r[i]) for r in [_HEADERS, *body]) for i in range(len(_HEADERS))]

    def fmt(cells: tuple[str, ...]) -> str:
        first = cells[0].ljust(widths[0])
        rest = [cell.rjust(w) for cell, w in zip(cells[1:], widths[1:])]
        return "  ".join([first, *rest]).rstrip()

    lines = [
        f"metric: {report.metric}   A/B experiments: {report.n_ab}   "
        f"A/A experiments: {report.n_aa}   alpha: {report.alpha}",
        fmt(_HEADERS),
        "  ".join("-" * w for w in widths),
        *(fmt(r) for r in body),
    ]
    return "\n".join(lines) + "\n"
