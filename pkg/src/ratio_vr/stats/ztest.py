"""Two-tailed two-sample z-test with per-variant (Welch-style) variances."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from scipy import special

from ratio_vr.stats.moments import summarize
from ratio_vr.stats.schemas import SampleStats, TestResult

# Beyond |z| = 8 the tail mass is below 1e-15 and is reported as exactly 0/1.
_CDF_CLAMP = 8.0


class DegenerateVarianceError(ValueError):
    """Both variants have zero variance, so the z denominator vanishes."""


def std_normal_cdf(z: float) -> float:
    """Standard normal CDF, clamped to {0, 1} outside [-8, 8]."""
    if not math.isfinite(z):
        raise ValueError(f"z must be finite, got {z}")
    if z < -_CDF_CLAMP:
        return 0.0
    if z > _CDF_CLAMP:
        return 1.0
    return float(special.ndtr(z))


def z_statistic(stats_a: SampleStats, stats_b: SampleStats) -> float:
    """(mean_a - mean_b) / sqrt(var_a / n_a + var_b / n_b).

    Raises:
        ValueError: If either variance is undefined (n = 1).
        DegenerateVarianceError: If the pooled standard error is zero.
    """
    se2 = stats_a.require_variance() / stats_a.n + stats_b.require_variance() / stats_b.n
    if se2 <= 0.0:
        raise DegenerateVarianceError("degenerate variance")
    return (stats_a.mean - stats_b.mean) / math.sqrt(se2)


def p_value(z: float) -> float:
    """Two-tailed p-value 2 * Phi(-|z|)."""
    return min(2.0 * std_normal_cdf(-abs(z)), 1.0)


def compare_stats(stats_a: SampleStats, stats_b: SampleStats, label: str) -> TestResult:
    """Package a z-test over two summarised samples as a :class:`TestResult`."""
    z = z_statistic(stats_a, stats_b)
    return TestResult(
        method_label=label,
        z=z,
        p_value=p_value(z),
        ate=stats_a.mean - stats_b.mean,
        variance_a=stats_a.require_variance(),
        variance_b=stats_b.require_variance(),
        n_a=stats_a.n,
        n_b=stats_b.n,
    )


def compare_samples(
    values_a: np.ndarray | Sequence[float],
    values_b: np.ndarray | Sequence[float],
    label: str,
) -> TestResult:
    """z-test of per-unit values, variant A (treatment) against B (control)."""
    return compare_stats(summarize(values_a), summarize(values_b), label)
