"""Pooled multiple regression of the outcome on centred covariates.

Solved through the normal equations with a Cholesky factorisation.  When
the Gram matrix is numerically singular (the factorisation fails, or a
pivot collapses relative to the largest diagonal entry) a ridge of
``1e-10 * trace / k`` is added to the diagonal and the solve repeated.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
from scipy import linalg

from ratio_vr.reduction.schemas import CovariateMatrix, RegressionFit

_RIDGE_SCALE = 1e-10
# Squared Cholesky pivots below this fraction of the largest diagonal entry count as singular.
_PIVOT_TOLERANCE = 1e-12


def _factor(gram: np.ndarray) -> tuple[np.ndarray, bool] | None:
    try:
        factor = linalg.cho_factor(gram, lower=True, check_finite=False)
    except linalg.LinAlgError:
        return None
    pivots = np.diag(factor[0]) ** 2
    if pivots.min() < _PIVOT_TOLERANCE * np.max(np.diag(gram)):
        return None
    return factor


def fit_pooled_regression(
    covariates: CovariateMatrix,
    outcome: np.ndarray | Sequence[float],
) -> RegressionFit:
    """OLS of *outcome* on the covariate columns over both variants together.

    Raises:
        ValueError: ``"underdetermined"`` when n <= k, or on non-finite or
            misaligned outcome values.
    """
    y = np.asarray(outcome, dtype=float).ravel()
    X = covariates.values
    n, k = X.shape
    if y.shape[0] != n:
        raise ValueError(f"{n} covariate rows but {y.shape[0]} outcome values")
    if not np.all(np.isfinite(y)):
        raise ValueError("outcome contains non-finite values")
    if k == 0:
        return RegressionFit(coefficients={}, k=0, n=n)
    if n <= k:
        raise ValueError(f"underdetermined: {n} units for {k} covariates")

    gram = X.T @ X
    rhs = X.T @ y
    regularized = False
    factor = _factor(gram)
    if factor is None:
        ridge = _RIDGE_SCALE * float(np.trace(gram)) / k
        if ridge <= 0.0:
            raise ValueError("covariate matrix is identically zero")
        factor = linalg.cho_factor(gram + ridge * np.eye(k), lower=True, check_finite=False)
        regularized = True
    beta = linalg.cho_solve(factor, rhs, check_finite=False)
    return RegressionFit(
        coefficients={name: float(b) for name, b in zip(covariates.names, beta)},
        k=k,
        n=n,
        regularized=regularized,
    )
