"""Configuration and result types for control-variate variance reduction."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from ratio_vr._versioning import SCHEMA_VERSION
from ratio_vr.gbdt.schemas import GBDTParams
from ratio_vr.stats.schemas import TestResult

# Covariate column names.
M_N_PRE = "M_N_pre"
M_D_PRE = "M_D_pre"
L_PRE = "L_pre"
PRED_N = "pred_N"
PRED_D = "pred_D"
PRED_L = "pred_L"
PRE_MISSING = "pre_missing"

PRE_COLUMNS: tuple[str, ...] = (M_N_PRE, M_D_PRE, L_PRE)
PRED_COLUMNS: tuple[str, ...] = (PRED_N, PRED_D, PRED_L)


class CovariateSet(str, Enum):
    """Which control variates to regress on; values double as method labels."""

    NONE = "raw"
    PRE = "pre"
    PRED = "pred"
    UNION = "union"

    @property
    def uses_pre_period(self) -> bool:
        return self in (CovariateSet.PRE, CovariateSet.UNION)

    @property
    def uses_predictions(self) -> bool:
        return self in (CovariateSet.PRED, CovariateSet.UNION)


class Outcome(str, Enum):
    """Per-unit outcome the control variate is subtracted from."""

    LINEARIZED = "linearized"
    DELTA_RATIO = "delta_ratio"


class VRConfig(BaseModel):
    """One variance-reduction method.

    ``cross_fit_folds = 0`` uses in-sample GBDT predictions (ablation only);
    otherwise predictions are out-of-fold over that many folds.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    covariate_set: CovariateSet = CovariateSet.PRED
    outcome: Outcome = Outcome.LINEARIZED
    gbdt_params: GBDTParams = Field(default_factory=GBDTParams)
    cross_fit_folds: int = Field(default=5, ge=0)
    center_covariates: bool = True
    compose_linearized_prediction: bool = False

    @field_validator("cross_fit_folds")
    @classmethod
    def _folds(cls, v: int) -> int:
        if v == 1:
            raise ValueError("cross_fit_folds must be 0 (in-sample) or >= 2")
        return v

    @property
    def label(self) -> str:
        return self.covariate_set.value


@dataclass(frozen=True)
class CovariateMatrix:
    """Named, unit-aligned covariate columns (n x k)."""

    unit_ids: np.ndarray
    names: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self) -> None:
        n = self.unit_ids.shape[0]
        if self.values.shape != (n, len(self.names)):
            raise ValueError(
                f"covariate values have shape {self.values.shape}, expected {(n, len(self.names))}"
            )
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate covariate names: {list(self.names)}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("covariate matrix contains non-finite values")

    @property
    def n(self) -> int:
        return int(self.values.shape[0])

    @property
    def k(self) -> int:
        return len(self.names)

    @property
    def columns(self) -> dict[str, np.ndarray]:
        return {name: self.values[:, i] for i, name in enumerate(self.names)}

    def column(self, name: str) -> np.ndarray:
        return self.values[:, self.names.index(name)]


class RegressionFit(BaseModel):
    """Pooled OLS coefficients on mean-centred covariates (no intercept)."""

    model_config = ConfigDict(frozen=True)

    coefficients: dict[str, float]
    k: int = Field(ge=0)
    n: int = Field(ge=0)
    regularized: bool = False

    def predict(self, covariates: CovariateMatrix) -> np.ndarray:
        """The fitted control variate for every unit of *covariates*."""
        if list(covariates.names) != list(self.coefficients):
            raise ValueError(
                f"covariates {list(covariates.names)} do not match fit {list(self.coefficients)}"
            )
        if self.k == 0:
            return np.zeros(covariates.n)
        return covariates.values @ np.array(list(self.coefficients.values()))


class VRTestOutcome(BaseModel):
    """Unreduced and variance-reduced tests of one experiment under one method.

    ``pooled_variance_raw`` / ``pooled_variance_reduced`` are per-unit
    variances of the outcome over both variants together (for the Delta
    path, the Delta-method variance of the pooled ratio).
    """

    model_config = ConfigDict(frozen=True)

    schema_version: str = SCHEMA_VERSION
    metric: str
    control_variant: str
    treatment_variant: str
    c: float
    raw: TestResult
    reduced: TestResult
    pooled_variance_raw: float = Field(ge=0.0)
    pooled_variance_reduced: float = Field(ge=0.0)
    fits: dict[str, RegressionFit] = Field(default_factory=dict)
