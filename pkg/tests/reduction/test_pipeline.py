"""Tests for the end-to-end variance-reduced test."""

import numpy as np
import pytest

from ratio_vr.evaluation.metrics import binomial_acceptance_interval
from ratio_vr.gbdt.schemas import GBDTParams
from ratio_vr.io.table import UnitTable
from ratio_vr.ratio.delta import delta_ratio_test
from ratio_vr.ratio.schemas import ComponentArrays, LinearizationSource, RatioMetricSpec
from ratio_vr.reduction.pipeline import experiment_c, run_vr_test, treatment_variant
from ratio_vr.reduction.presets import PRESETS, resolve_config
from ratio_vr.reduction.schemas import CovariateSet, Outcome, VRConfig

_SPEC = RatioMetricSpec()
_FAST_GBDT = GBDTParams(n_trees=20, max_depth=3, min_samples_leaf=20)


def _gaussian_experiment(rng, n=20_000, rho=0.8, effect=0.05):
    """Per-unit outcome y with denominator 1 and a pre-period value correlated at *rho*."""
    pre = rng.normal(size=n)
    y = rho * pre + np.sqrt(1 - rho**2) * rng.normal(size=n)
    treated = np.arange(n) % 2 == 0
    y = y + effect * treated + 5.0
    return UnitTable.from_columns(
        unit_ids=[f"u{i:06d}" for i in range(n)],
        variants=np.where(treated, "treatment", "control"),
        numerator=y,
        denominator=np.ones(n),
        pre_numerator=pre + 5.0,
        pre_denominator=rng.integers(1, 4, n).astype(float),
    )


class TestTreatmentVariant:
    def test_other_label(self, aa_experiment):
        assert treatment_variant(aa_experiment.units, "control") == "treatment"

    def test_missing_control(self, aa_experiment):
        with pytest.raises(ValueError, match="not found"):
            treatment_variant(aa_experiment.units, "baseline")

    def test_three_variants(self, aa_experiment):
        units = aa_experiment.units
        labels = np.array(["control", "treatment", "other"])[np.arange(len(units)) % 3]
        with pytest.raises(ValueError, match="exactly two variants"):
            treatment_variant(units.with_variants(labels), "control")


class TestExperimentC:
    def test_control_ratio(self, aa_experiment):
        units = aa_experiment.units
        control = units.variants == "control"
        expected = units.numerator[control].sum() / units.denominator[control].sum()
        assert experiment_c(units, _SPEC, "control") == pytest.approx(expected)

    def test_fixed(self, aa_experiment):
        spec = RatioMetricSpec(linearization_source=LinearizationSource.FIXED, fixed_c=0.25)
        assert experiment_c(aa_experiment.units, spec, "control") == 0.25


class TestRunVRTest:
    def test_raw_method_changes_nothing(self, ab_experiment):
        outcome = run_vr_test(ab_experiment.units, _SPEC, PRESETS["raw"], "control")
        assert outcome.reduced.z == pytest.approx(outcome.raw.z)
        assert outcome.pooled_variance_reduced == pytest.approx(outcome.pooled_variance_raw)
        assert outcome.reduced.method_label == "raw"

    def test_sides(self, ab_experiment):
        outcome = run_vr_test(ab_experiment.units, _SPEC, PRESETS["pre"], "control")
        assert outcome.treatment_variant == "treatment"
        assert outcome.raw.ate > 0
        assert outcome.reduced.method_label == "pre"
        assert outcome.raw.n_a + outcome.raw.n_b == len(ab_experiment.units)

    def test_pre_period_reduces_variance(self, ab_experiment):
        outcome = run_vr_test(ab_experiment.units, _SPEC, PRESETS["pre"], "control")
        assert outcome.pooled_variance_reduced < outcome.pooled_variance_raw
        assert set(outcome.fits) == {"linearized"}

    def test_predictions_reduce_variance(self, ab_experiment):
        config = VRConfig(covariate_set=CovariateSet.PRED, gbdt_params=_FAST_GBDT)
        outcome = run_vr_test(ab_experiment.units, _SPEC, config, "control", seed=3)
        assert outcome.pooled_variance_reduced < outcome.pooled_variance_raw

    def test_cuped_variance_factor(self, rng):
        units = _gaussian_experiment(rng)
        outcome = run_vr_test(units, _SPEC, PRESETS["pre"], "control")
        ratio = outcome.pooled_variance_reduced / outcome.pooled_variance_raw
        assert ratio == pytest.approx(1 - 0.8**2, rel=0.05)

    @pytest.mark.parametrize("rho", [0.3, 0.6, 0.9])
    def test_cuped_variance_factor_large_sample(self, rho):
        units = _gaussian_experiment(np.random.default_rng(41), n=100_000, rho=rho)
        outcome = run_vr_test(units, _SPEC, PRESETS["pre"], "control")
        ratio = outcome.pooled_variance_reduced / outcome.pooled_variance_raw
        assert ratio == pytest.approx(1 - rho**2, rel=0.03)

    def test_noise_covariates_leave_z(self, rng):
        units = _gaussian_experiment(rng, rho=0.0)
        noisy = UnitTable.from_columns(
            units.unit_ids,
            units.variants,
            units.numerator,
            units.denominator,
            rng.integers(0, 3, len(units)).astype(float),
            rng.integers(3, 6, len(units)).astype(float),
        )
        outcome = run_vr_test(noisy, _SPEC, PRESETS["pre"], "control")
        assert outcome.reduced.z == pytest.approx(outcome.raw.z, rel=0.05)

    def test_row_order_irrelevant(self, ab_experiment):
        units = ab_experiment.units
        order = np.random.default_rng(0).permutation(len(units))
        shuffled = UnitTable.from_columns(
            units.unit_ids[order],
            units.variants[order],
            units.numerator[order],
            units.denominator[order],
            units.pre_numerator[order],
            units.pre_denominator[order],
            units.features[order],
        )
        config = VRConfig(covariate_set=CovariateSet.UNION, gbdt_params=_FAST_GBDT)
        a = run_vr_test(units, _SPEC, config, "control", seed=1)
        b = run_vr_test(shuffled, _SPEC, config, "control", seed=1)
        assert a.reduced == b.reduced

    def test_delta_ratio_outcome(self, ab_experiment):
        units = ab_experiment.units
        config = VRConfig(covariate_set=CovariateSet.PRE, outcome=Outcome.DELTA_RATIO)
        outcome = run_vr_test(units, _SPEC, config, "control")
        treated = units.variants == "treatment"
        components = units.components(_SPEC)
        raw = delta_ratio_test(
            ComponentArrays(components.numerator[treated], components.denominator[treated]),
            ComponentArrays(components.numerator[~treated], components.denominator[~treated]),
        )
        assert outcome.raw == raw
        assert set(outcome.fits) == {"numerator", "denominator"}
        assert outcome.pooled_variance_reduced < outcome.pooled_variance_raw

    def test_missing_features_for_predictions(self, rng):
        units = _gaussian_experiment(rng, n=400)
        with pytest.raises(ValueError, match="feature"):
            run_vr_test(units, _SPEC, PRESETS["pred"], "control")

    @pytest.mark.slow
    def test_aa_calibration(self):
        rng = np.random.default_rng(99)
        reps, alpha = 2_000, 0.05
        rejections = 0
        for _ in range(reps):
            units = _gaussian_experiment(rng, n=600, rho=0.6, effect=0.0)
            outcome = run_vr_test(units, _SPEC, PRESETS["pre"], "control")
            rejections += outcome.reduced.p_value < alpha
        interval = binomial_acceptance_interval(reps, alpha, 0.99)
        assert interval.contains(rejections / reps)


class TestPresets:
    def test_labels(self):
        assert [PRESETS[name].label for name in ("raw", "pre", "pred", "union")] == [
            "raw",
            "pre",
            "pred",
            "union",
        ]

    def test_default_is_pred(self):
        assert resolve_config().covariate_set is CovariateSet.PRED

    def test_override(self):
        config = resolve_config("union", {"cross_fit_folds": 0})
        assert config.cross_fit_folds == 0
        assert config.covariate_set is CovariateSet.UNION

    def test_unknown_preset(self):
        with pytest.raises(ValueError, match="Unknown method"):
            resolve_config("magic")

    def test_unknown_field(self):
        with pytest.raises(ValueError):
            resolve_config("pre", {"shrinkage": 2})

    def test_one_fold_rejected(self):
        with pytest.raises(ValueError, match="cross_fit_folds"):
            VRConfig(cross_fit_folds=1)
