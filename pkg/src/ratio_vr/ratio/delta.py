"""Ratio point estimates, Delta-method variance and linearisation.

Variances here are per-unit: the value returned by :func:`delta_variance`
is the sigma^2 of the z-test, which divides by the variant size itself.
"""

from __future__ import annotations

import math
from typing import Sequence, Union

import numpy as np

from ratio_vr.ratio.schemas import ComponentArrays, LinearizedMetric, UnitMetricComponents
from ratio_vr.stats.moments import joint_stats
from ratio_vr.stats.schemas import SampleStats, TestResult
from ratio_vr.stats.ztest import compare_stats

Components = Union[Sequence[UnitMetricComponents], ComponentArrays]

# Floating-point noise tolerated below zero before a variance is declared inconsistent.
_NEGATIVE_SLACK = 1e-9


def _arrays(components: Components) -> ComponentArrays:
    if isinstance(components, ComponentArrays):
        return components
    return ComponentArrays.from_components(components)


def ratio_point_estimate(components: Components) -> float:
    """(sum of numerators) / (sum of denominators).

    Raises:
        ValueError: On an empty sample or when every denominator is zero.
    """
    arrays = _arrays(components)
    if len(arrays) == 0:
        raise ValueError("empty sample")
    total_den = float(arrays.denominator.sum())
    if total_den <= 0.0:
        raise ValueError("ratio undefined: all denominators are zero")
    return float(arrays.numerator.sum()) / total_den


def delta_variance(num_stats: SampleStats, den_stats: SampleStats, cov_nd: float) -> float:
    """Per-unit variance of the ratio of means by the Delta method.

    Evaluates (mu_N^2 / mu_D^2) * (s_N^2 / mu_N^2 + s_D^2 / mu_D^2
    - 2 cov / (mu_N mu_D)) in its expanded form
    (s_N^2 - 2 r cov + r^2 s_D^2) / mu_D^2 with r = mu_N / mu_D.

    Raises:
        ValueError: ``"delta method undefined"`` for a zero component mean;
            ``"inconsistent moments"`` for a result below -1e-9.
    """
    mu_n, mu_d = num_stats.mean, den_stats.mean
    if mu_n == 0.0 or mu_d == 0.0:
        raise ValueError("delta method undefined: zero numerator or denominator mean")
    r = mu_n / mu_d
    var = (
        num_stats.require_variance()
        - 2.0 * r * cov_nd
        + r * r * den_stats.require_variance()
    ) / (mu_d * mu_d)
    if var < -_NEGATIVE_SLACK:
        raise ValueError(f"inconsistent moments: delta variance {var} < 0")
    return max(var, 0.0)


def ratio_stats(components: Components) -> SampleStats:
    """Ratio estimate of one variant with its Delta-method per-unit variance."""
    arrays = _arrays(components)
    joint = joint_stats({"num": arrays.numerator, "den": arrays.denominator})
    variance = delta_variance(joint.stats("num"), joint.stats("den"), joint.covariance("num", "den"))
    return SampleStats(n=joint.n, mean=ratio_point_estimate(arrays), variance=variance)


def delta_ratio_test(
    components_a: Components,
    components_b: Components,
    label: str = "raw",
) -> TestResult:
    """z-test on the ratio metric itself, variant A (treatment) against B (control)."""
    return compare_stats(ratio_stats(components_a), ratio_stats(components_b), label)


def linearization_coefficient(control_components: Components) -> float:
    """c = mu_C(M_N) / mu_C(M_D), the control variant's ratio."""
    return ratio_point_estimate(control_components)


def linearize(components: Components, c: float) -> LinearizedMetric:
    """Per-unit L = M_N - c * M_D."""
    if not math.isfinite(c):
        raise ValueError(f"linearisation coefficient must be finite, got {c}")
    arrays = _arrays(components)
    values = arrays.numerator - c * arrays.denominator
    return LinearizedMetric(c=float(c), values=np.asarray(values, dtype=float))
