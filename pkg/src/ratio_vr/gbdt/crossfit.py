"""Out-of-fold GBDT predictions and the metric-component predictor.

Each unit's cross-fitted prediction comes from a model that never saw the
unit's own target, so the prediction carries no trace of that unit's
experiment-period noise.
"""

from __future__ import annotations

import logging
from typing import Mapping

import numpy as np

from ratio_vr.gbdt.booster import fit, predict
from ratio_vr.gbdt.schemas import ComponentPredictions, GBDTParams

logger = logging.getLogger(__name__)


def fold_assignment(n: int, folds: int, seed: int) -> np.ndarray:
    """Balanced fold index per row from a seeded permutation of row indices."""
    if folds < 2:
        raise ValueError(f"folds must be >= 2, got {folds}")
    return np.random.default_rng(seed).permutation(n) % folds


def _check_fold_sizes(n: int, folds: int, params: GBDTParams) -> None:
    if folds > n / (2 * params.min_samples_leaf):
        raise ValueError(
            f"too few rows per fold: {n} rows cannot fill {folds} folds of "
            f"{2 * params.min_samples_leaf} (2 * min_samples_leaf)"
        )


def cross_fit_predict_many(
    features: np.ndarray,
    targets: Mapping[str, np.ndarray],
    params: GBDTParams,
    folds: int,
    seed: int,
) -> dict[str, np.ndarray]:
    """Out-of-fold predictions for several targets sharing one fold split."""
    X = np.asarray(features, dtype=float)
    n = X.shape[0]
    _check_fold_sizes(n, folds, params)
    assignment = fold_assignment(n, folds, seed)
    out = {name: np.empty(n) for name in targets}
    for k in range(folds):
        held_out = assignment == k
        for name, y in targets.items():
            y = np.asarray(y, dtype=float)
            model = fit(X[~held_out], y[~held_out], params)
            out[name][held_out] = predict(model, X[held_out])
        logger.debug("cross-fit fold %d/%d done (%d held out)", k + 1, folds, int(held_out.sum()))
    return out


def cross_fit_predict(
    features: np.ndarray,
    targets: np.ndarray,
    params: GBDTParams,
    folds: int,
    seed: int,
) -> np.ndarray:
    """Out-of-fold prediction for every unit.

    Raises:
        ValueError: If ``folds < 2`` or ``folds > n / (2 * min_samples_leaf)``.
    """
    return cross_fit_predict_many(features, {"y": targets}, params, folds, seed)["y"]


def predict_components(
    features: np.ndarray,
    numerator: np.ndarray,
    denominator: np.ndarray,
    c: float,
    params: GBDTParams,
    folds: int,
    seed: int,
    compose_linearized: bool = False,
) -> ComponentPredictions:
    """Predict M_N, M_D and L(M) = M_N - c * M_D from pre-experiment features.

    ``folds = 0`` fits and predicts in-sample.  With ``compose_linearized``
    the linearised prediction is M_N_hat - c * M_D_hat instead of a third
    model.
    """
    X = np.asarray(features, dtype=float)
    if X.ndim != 2 or X.shape[1] == 0:
        raise ValueError("GBDT predictions need at least one pre-experiment feature column")
    targets = {"numerator": np.asarray(numerator, dtype=float), "denominator": np.asarray(denominator, dtype=float)}
    if not compose_linearized:
        targets["linearized"] = targets["numerator"] - c * targets["denominator"]

    if folds == 0:
        preds = {name: predict(fit(X, y, params), X) for name, y in targets.items()}
    else:
        preds = cross_fit_predict_many(X, targets, params, folds, seed)

    linearized = (
        preds["numerator"] - c * preds["denominator"] if compose_linearized else preds["linearized"]
    )
    return ComponentPredictions(
        numerator=preds["numerator"],
        denominator=preds["denominator"],
        linearized=linearized,
    )
