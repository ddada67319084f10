"""Ratio metrics: retention components, Delta method and linearisation."""

from ratio_vr.ratio.delta import (
    delta_ratio_test,
    delta_variance,
    linearization_coefficient,
    linearize,
    ratio_point_estimate,
    ratio_stats,
)
from ratio_vr.ratio.retention import compute_retention_components, retention_counts
from ratio_vr.ratio.schemas import (
    ComponentArrays,
    LinearizationSource,
    LinearizedMetric,
    RatioMetricSpec,
    UnitMetricComponents,
)

__all__ = [
    "RatioMetricSpec",
    "LinearizationSource",
    "UnitMetricComponents",
    "ComponentArrays",
    "LinearizedMetric",
    "compute_retention_components",
    "retention_counts",
    "ratio_point_estimate",
    "ratio_stats",
    "delta_variance",
    "delta_ratio_test",
    "linearization_coefficient",
    "linearize",
]
