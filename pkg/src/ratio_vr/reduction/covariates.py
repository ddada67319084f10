"""Covariate matrices for the three control-variate configurations.

``pre``   -> M_N_pre, M_D_pre, L_pre (L_pre linearised with the pooled
             pre-period ratio)
``pred``  -> pred_N, pred_D, pred_L (GBDT predictions)
``union`` -> all six
``raw``   -> no columns

Units without pre-period data are imputed with the pooled mean of the
observed values and flagged in an extra ``pre_missing`` column.  Columns are
mean-centred over the pooled sample.  The builder never looks at variant
labels.
"""

from __future__ import annotations

import numpy as np

from ratio_vr.gbdt.schemas import ComponentPredictions
from ratio_vr.io.table import UnitTable
from ratio_vr.reduction.schemas import (
    L_PRE,
    M_D_PRE,
    M_N_PRE,
    PRE_MISSING,
    PRED_D,
    PRED_L,
    PRED_N,
    CovariateMatrix,
    VRConfig,
)


def _pre_period_columns(units: UnitTable) -> dict[str, np.ndarray]:
    has_pre = units.has_pre_period
    if not has_pre.any():
        raise ValueError("missing required fields: no unit has pre_numerator/pre_denominator")
    pre_n = units.pre_numerator
    pre_d = units.pre_denominator
    total_d = float(pre_d[has_pre].sum())
    if total_d <= 0.0:
        raise ValueError("pre-period ratio undefined: all pre_denominator values are zero")
    c_pre = float(pre_n[has_pre].sum()) / total_d

    columns = {
        M_N_PRE: pre_n,
        M_D_PRE: pre_d,
        L_PRE: pre_n - c_pre * pre_d,
    }
    if not has_pre.all():
        columns = {
            name: np.where(has_pre, col, col[has_pre].mean()) for name, col in columns.items()
        }
        columns[PRE_MISSING] = (~has_pre).astype(float)
    return columns


def _prediction_columns(units: UnitTable, predictions: ComponentPredictions | None) -> dict[str, np.ndarray]:
    if predictions is None:
        raise ValueError("missing required fields: GBDT predictions are required for this covariate set")
    columns = {
        PRED_N: np.asarray(predictions.numerator, dtype=float),
        PRED_D: np.asarray(predictions.denominator, dtype=float),
        PRED_L: np.asarray(predictions.linearized, dtype=float),
    }
    for name, col in columns.items():
        if col.shape != (len(units),):
            raise ValueError(f"{name} has {col.size} values for {len(units)} units")
    return columns


def build_covariates(
    units: UnitTable,
    config: VRConfig,
    predictions: ComponentPredictions | None = None,
) -> CovariateMatrix:
    """Assemble (and by default centre) the covariates *config* asks for."""
    columns: dict[str, np.ndarray] = {}
    if config.covariate_set.uses_pre_period:
        columns.update(_pre_period_columns(units))
    if config.covariate_set.uses_predictions:
        columns.update(_prediction_columns(units, predictions))

    if config.center_covariates:
        columns = {name: col - col.mean() for name, col in columns.items()}
    values = np.column_stack(list(columns.values())) if columns else np.zeros((len(units), 0))
    return CovariateMatrix(unit_ids=units.unit_ids, names=tuple(columns), values=values)
