"""Report types of the suite-level method comparison.

The four headline statistics per method mirror the usual variance
reduction table: variance reduction (%), fraction of experiments with a
lower p-value, median relative |z|, and type-I error on an A/A suite.
"""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field

from ratio_vr._versioning import SCHEMA_VERSION


class BinomialInterval(BaseModel):
    """An interval on a proportion at the given confidence level."""

    model_config = ConfigDict(frozen=True)

    low: float = Field(ge=0.0, le=1.0)
    high: float = Field(ge=0.0, le=1.0)
    confidence: float = Field(gt=0.0, lt=1.0)

    def contains(self, value: float) -> bool:
        return self.low <= value <= self.high


class TypeIErrorEstimate(BaseModel):
    """Rejection rate on an A/A suite with its exact binomial intervals.

    ``interval`` is the Clopper-Pearson interval around the observed rate;
    ``acceptance`` is the central binomial range of rates expected when the
    true rate equals ``alpha``.  ``calibrated`` is true when the observed
    rate falls inside ``acceptance``.
    """

    model_config = ConfigDict(frozen=True)

    rate: float = Field(ge=0.0, le=1.0)
    rejections: int = Field(ge=0)
    n: int = Field(ge=1)
    alpha: float = Field(gt=0.0, lt=1.0)
    interval: BinomialInterval
    acceptance: BinomialInterval
    calibrated: bool


class ExperimentDetail(BaseModel):
    """Raw versus variance-reduced test of one experiment under one method."""

    model_config = ConfigDict(frozen=True)

    experiment_id: str
    suite: str  # "ab" or "aa"
    true_effect: float | None = None
    z_raw: float
    z_vr: float
    p_raw: float
    p_vr: float
    ate_raw: float
    ate_vr: float
    var_raw: float
    var_vr: float
    variance_reduction_pct: float
    # z_vr points the opposite way from a known non-zero effect.
    sign_flip: bool | None = None


class MethodComparison(BaseModel):
    """One report row."""

    model_config = ConfigDict(frozen=True)

    method_label: str
    display_label: str
    variance_reduction_pct: float
    frac_lower_pvalue: float = Field(ge=0.0, le=1.0)
    median_relative_z: float = Field(ge=0.0)
    sample_size_reduction: float | None = None
    type_i_error: TypeIErrorEstimate | None = None
    details: list[ExperimentDetail] = Field(default_factory=list)


class EvaluationReport(BaseModel):
    """Full method comparison over an A/B suite and an optional A/A suite."""

    model_config = ConfigDict(frozen=True)

    schema_version: str = SCHEMA_VERSION
    metric: str
    alpha: float = Field(gt=0.0, lt=1.0)
    n_ab: int = Field(ge=1)
    n_aa: int = Field(default=0, ge=0)
    methods: list[MethodComparison] = Field(default_factory=list)
