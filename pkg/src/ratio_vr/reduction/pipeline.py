"""End-to-end variance-reduced test of one two-variant experiment.

Pipeline
--------
1. Per-unit outcome: the linearised metric L = M_N - c M_D with ``c`` from
   the control variant, or the raw components for the Delta-method path.
2. Covariates for the configured set; GBDT predictions are trained from
   pre-experiment features when the set needs them.
3. Pooled regression of the outcome on the covariates.
4. Control-variate subtraction of the fitted prediction.
5. Per-variant moments of the reduced outcome.
6. z and two-tailed p, alongside the unreduced test.
"""

from __future__ import annotations

import numpy as np

from ratio_vr.gbdt.crossfit import predict_components
from ratio_vr.gbdt.schemas import ComponentPredictions
from ratio_vr.io.table import UnitTable
from ratio_vr.ratio.delta import (
    delta_ratio_test,
    linearization_coefficient,
    linearize,
    ratio_stats,
)
from ratio_vr.ratio.schemas import ComponentArrays, LinearizationSource, RatioMetricSpec
from ratio_vr.reduction.covariates import build_covariates
from ratio_vr.reduction.cuped import apply_control_variate
from ratio_vr.reduction.regression import fit_pooled_regression
from ratio_vr.reduction.schemas import Outcome, VRConfig, VRTestOutcome
from ratio_vr.stats.moments import summarize
from ratio_vr.stats.ztest import compare_samples


def treatment_variant(units: UnitTable, control_variant: str) -> str:
    """The single non-control variant label.

    Raises:
        ValueError: If the control label is absent or there are not exactly
            two variants.
    """
    labels = sorted(set(units.variants.tolist()))
    if control_variant not in labels:
        raise ValueError(f"control variant {control_variant!r} not found; variants are {labels}")
    others = [label for label in labels if label != control_variant]
    if len(others) != 1:
        raise ValueError(f"expected exactly two variants, got {labels}")
    return others[0]


def _subset(arrays: ComponentArrays, mask: np.ndarray) -> ComponentArrays:
    return ComponentArrays(numerator=arrays.numerator[mask], denominator=arrays.denominator[mask])


def experiment_c(experiment: UnitTable, spec: RatioMetricSpec, control_variant: str) -> float:
    """The linearisation coefficient of *spec* for *experiment*."""
    if spec.linearization_source is LinearizationSource.FIXED:
        return float(spec.fixed_c)  # type: ignore[arg-type]
    is_control = experiment.variants == control_variant
    return linearization_coefficient(_subset(experiment.components(spec), is_control))


def component_predictions(
    experiment: UnitTable,
    spec: RatioMetricSpec,
    config: VRConfig,
    control_variant: str,
    seed: int = 0,
) -> ComponentPredictions:
    """GBDT predictions of the metric components from pre-experiment features."""
    components = experiment.components(spec)
    return predict_components(
        experiment.features,
        components.numerator,
        components.denominator,
        experiment_c(experiment, spec, control_variant),
        config.gbdt_params,
        config.cross_fit_folds,
        seed,
        compose_linearized=config.compose_linearized_prediction,
    )


def run_vr_test(
    experiment: UnitTable,
    spec: RatioMetricSpec,
    config: VRConfig,
    control_variant: str,
    seed: int = 0,
    predictions: ComponentPredictions | None = None,
) -> VRTestOutcome:
    """Run the raw and the variance-reduced test of *experiment*.

    Args:
        experiment: Both variants' units.
        spec: The ratio metric under test.
        config: Covariate set, outcome and GBDT settings.
        control_variant: Label of the control variant; the other variant
            is tested against it (``ate`` = treatment - control).
        seed: Seed of the cross-fitting fold split.
        predictions: Precomputed GBDT predictions for these units (for
            example shared by several methods); trained here when omitted.
    """
    treated_label = treatment_variant(experiment, control_variant)
    is_control = experiment.variants == control_variant
    is_treated = ~is_control
    components = experiment.components(spec)

    c = experiment_c(experiment, spec, control_variant)
    if predictions is None and config.covariate_set.uses_predictions:
        predictions = component_predictions(experiment, spec, config, control_variant, seed)
    covariates = build_covariates(experiment, config, predictions)

    if config.outcome is Outcome.LINEARIZED:
        outcome = linearize(components, c).values
        fit = fit_pooled_regression(covariates, outcome)
        reduced_outcome = apply_control_variate(outcome, fit.predict(covariates))
        raw = compare_samples(outcome[is_treated], outcome[is_control], "raw")
        reduced = compare_samples(reduced_outcome[is_treated], reduced_outcome[is_control], config.label)
        pooled_raw = summarize(outcome).require_variance()
        pooled_reduced = summarize(reduced_outcome).require_variance()
        fits = {"linearized": fit}
    else:
        fit_n = fit_pooled_regression(covariates, components.numerator)
        fit_d = fit_pooled_regression(covariates, components.denominator)
        adjusted = ComponentArrays(
            numerator=apply_control_variate(components.numerator, fit_n.predict(covariates)),
            denominator=apply_control_variate(components.denominator, fit_d.predict(covariates)),
        )
        raw = delta_ratio_test(_subset(components, is_treated), _subset(components, is_control), "raw")
        reduced = delta_ratio_test(_subset(adjusted, is_treated), _subset(adjusted, is_control), config.label)
        pooled_raw = ratio_stats(components).require_variance()
        pooled_reduced = ratio_stats(adjusted).require_variance()
        fits = {"numerator": fit_n, "denominator": fit_d}

    return VRTestOutcome(
        metric=spec.name,
        control_variant=control_variant,
        treatment_variant=treated_label,
        c=c,
        raw=raw,
        reduced=reduced,
        pooled_variance_raw=pooled_raw,
        pooled_variance_reduced=pooled_reduced,
        fits=fits,
    )
