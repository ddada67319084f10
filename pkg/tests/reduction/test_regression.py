"""Tests for the pooled multiple regression."""

import numpy as np
import pytest

from ratio_vr.reduction.cuped import cuped_theta
from ratio_vr.reduction.regression import fit_pooled_regression
from ratio_vr.reduction.schemas import CovariateMatrix


def _matrix(*columns: np.ndarray, center: bool = True) -> CovariateMatrix:
    values = np.column_stack(columns) if columns else np.zeros((0, 0))
    if center:
        values = values - values.mean(axis=0)
    n = values.shape[0]
    return CovariateMatrix(
        unit_ids=np.array([f"u{i}" for i in range(n)]),
        names=tuple(f"x{j}" for j in range(values.shape[1])),
        values=values,
    )


class TestFitPooledRegression:
    def test_single_covariate_is_cuped(self, rng):
        pre = rng.normal(size=1_000)
        y = 0.7 * pre + rng.normal(size=1_000)
        fit = fit_pooled_regression(_matrix(pre), y)
        assert fit.coefficients["x0"] == pytest.approx(cuped_theta(y, pre), abs=1e-9)
        assert not fit.regularized

    def test_exact_linear_fit(self, rng):
        covariates = _matrix(rng.normal(size=400), rng.normal(size=400))
        y = 2.0 * covariates.values[:, 0] - 3.0 * covariates.values[:, 1]
        residual = y - fit_pooled_regression(covariates, y).predict(covariates)
        assert residual.var() < 1e-18 * y.var()

    def test_duplicated_column(self, rng):
        x = rng.normal(size=500)
        y = 1.5 * x + rng.normal(size=500)
        single = _matrix(x)
        double = _matrix(x, x)
        fit = fit_pooled_regression(double, y)
        assert fit.regularized
        np.testing.assert_allclose(
            fit.predict(double),
            fit_pooled_regression(single, y).predict(single),
            atol=1e-6,
        )

    def test_no_covariates(self, rng):
        covariates = CovariateMatrix(
            unit_ids=np.array(["a", "b", "c"]), names=(), values=np.zeros((3, 0))
        )
        fit = fit_pooled_regression(covariates, [1.0, 2.0, 3.0])
        assert fit.k == 0
        assert np.array_equal(fit.predict(covariates), np.zeros(3))

    def test_underdetermined(self, rng):
        covariates = _matrix(rng.normal(size=3), rng.normal(size=3), rng.normal(size=3))
        with pytest.raises(ValueError, match="underdetermined"):
            fit_pooled_regression(covariates, [1.0, 2.0, 3.0])

    def test_outcome_length(self, rng):
        with pytest.raises(ValueError, match="outcome values"):
            fit_pooled_regression(_matrix(rng.normal(size=10)), np.zeros(9))

    def test_non_finite_covariate(self):
        with pytest.raises(ValueError, match="non-finite"):
            CovariateMatrix(unit_ids=np.array(["a", "b"]), names=("x",), values=np.array([[1.0], [np.inf]]))

    def test_predict_checks_names(self, rng):
        fit = fit_pooled_regression(_matrix(rng.normal(size=50)), rng.normal(size=50))
        other = CovariateMatrix(unit_ids=np.array(["a"]), names=("z",), values=np.zeros((1, 1)))
        with pytest.raises(ValueError, match="do not match"):
            fit.predict(other)


class TestAteShrinkage:
    def test_noise_covariates_shrink_mean_ate(self):
        rng = np.random.default_rng(2)
        n, reps, effect = 1_000, 500, 1.0
        treated = np.arange(n) < n // 2
        mean_ate = {0: 0.0, 10: 0.0, 50: 0.0}
        for _ in range(reps):
            y = effect * treated + rng.normal(size=n)
            noise = rng.normal(size=(n, 50))
            for k in mean_ate:
                covariates = _matrix(*noise[:, :k].T) if k else CovariateMatrix(
                    unit_ids=np.arange(n).astype(str), names=(), values=np.zeros((n, 0))
                )
                reduced = y - fit_pooled_regression(covariates, y).predict(covariates)
                mean_ate[k] += (reduced[treated].mean() - reduced[~treated].mean()) / reps
        assert mean_ate[0] > mean_ate[10] > mean_ate[50]
        assert mean_ate[50] / mean_ate[0] == pytest.approx(1 - 50 / n, abs=0.02)
