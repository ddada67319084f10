"""Control-variate variance reduction: CUPED, pooled regression, GBDT covariates."""

from ratio_vr.reduction.covariates import build_covariates
from ratio_vr.reduction.cuped import apply_control_variate, cuped_control_variate, cuped_theta
from ratio_vr.reduction.pipeline import (
    component_predictions,
    experiment_c,
    run_vr_test,
    treatment_variant,
)
from ratio_vr.reduction.presets import PRESET_LABELS, PRESETS, resolve_config
from ratio_vr.reduction.regression import fit_pooled_regression
from ratio_vr.reduction.schemas import (
    CovariateMatrix,
    CovariateSet,
    Outcome,
    RegressionFit,
    VRConfig,
    VRTestOutcome,
)

__all__ = [
    "CovariateSet",
    "Outcome",
    "VRConfig",
    "CovariateMatrix",
    "RegressionFit",
    "VRTestOutcome",
    "PRESETS",
    "PRESET_LABELS",
    "resolve_config",
    "cuped_theta",
    "cuped_control_variate",
    "apply_control_variate",
    "fit_pooled_regression",
    "build_covariates",
    "run_vr_test",
    "treatment_variant",
    "experiment_c",
    "component_predictions",
]
