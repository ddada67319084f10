"""Histogram gradient-boosted regression trees for predicted control variates."""

from ratio_vr.gbdt.binning import FeatureBins, bin_features
from ratio_vr.gbdt.booster import fit, predict, training_mse_path
from ratio_vr.gbdt.crossfit import (
    cross_fit_predict,
    cross_fit_predict_many,
    fold_assignment,
    predict_components,
)
from ratio_vr.gbdt.schemas import ComponentPredictions, GBDTModel, GBDTParams, RegressionTree

__all__ = [
    "GBDTParams",
    "GBDTModel",
    "RegressionTree",
    "ComponentPredictions",
    "FeatureBins",
    "bin_features",
    "fit",
    "predict",
    "training_mse_path",
    "fold_assignment",
    "cross_fit_predict",
    "cross_fit_predict_many",
    "predict_components",
]
