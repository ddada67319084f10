"""Suite-level evaluation: variance reduction, p-value improvement, relative z, type-I error."""

from ratio_vr.evaluation.metrics import (
    binomial_acceptance_interval,
    binomial_interval,
    frac_lower_pvalue,
    median_relative_z,
    sample_size_reduction,
    type_i_error,
    variance_reduction_pct,
)
from ratio_vr.evaluation.schemas import (
    BinomialInterval,
    EvaluationReport,
    ExperimentDetail,
    MethodComparison,
    TypeIErrorEstimate,
)
from ratio_vr.evaluation.table import SuiteMember, evaluate_experiment, render_table, run_table

__all__ = [
    "BinomialInterval",
    "TypeIErrorEstimate",
    "ExperimentDetail",
    "MethodComparison",
    "EvaluationReport",
    "variance_reduction_pct",
    "frac_lower_pvalue",
    "median_relative_z",
    "sample_size_reduction",
    "binomial_interval",
    "binomial_acceptance_interval",
    "type_i_error",
    "SuiteMember",
    "run_table",
    "evaluate_experiment",
    "render_table",
]
