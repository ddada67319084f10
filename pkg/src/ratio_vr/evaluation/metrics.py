"""Suite-level statistics comparing a variance-reduced test with the raw one."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from scipy import stats

from ratio_vr.evaluation.schemas import BinomialInterval, TypeIErrorEstimate
from ratio_vr.stats.schemas import TestResult


def variance_reduction_pct(var_raw: float, var_vr: float) -> float:
    """100 * (var_vr - var_raw) / var_raw; negative means reduced.

    Raises:
        ValueError: On a non-positive baseline variance.
    """
    if not var_raw > 0.0:
        raise ValueError(f"zero baseline variance: var_raw = {var_raw}")
    return 100.0 * (var_vr - var_raw) / var_raw


def frac_lower_pvalue(pairs: Sequence[tuple[float, float]]) -> float:
    """Fraction of ``(p_raw, p_vr)`` pairs with p_vr strictly below p_raw."""
    if not pairs:
        raise ValueError("frac_lower_pvalue needs at least one (p_raw, p_vr) pair")
    arr = np.asarray(pairs, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("pairs must be (p_raw, p_vr) tuples")
    if np.any((arr < 0.0) | (arr > 1.0)):
        raise ValueError("p-values must lie in [0, 1]")
    return float(np.mean(arr[:, 1] < arr[:, 0]))


def median_relative_z(pairs: Sequence[tuple[float, float]]) -> float:
    """Median of |z_vr| / |z_raw| (even counts average the two middle values)."""
    if not pairs:
        raise ValueError("median_relative_z needs at least one (z_raw, z_vr) pair")
    arr = np.asarray(pairs, dtype=float)
    if np.any(arr[:, 0] == 0.0):
        raise ValueError("relative z undefined: a raw z-score is exactly 0")
    return float(np.median(np.abs(arr[:, 1]) / np.abs(arr[:, 0])))


def sample_size_reduction(median_rel_z: float) -> float:
    """Fraction of units saved at equal confidence: 1 - 1 / rel_z^2."""
    if not median_rel_z > 0.0 or not math.isfinite(median_rel_z):
        raise ValueError(f"median relative z must be > 0, got {median_rel_z}")
    return 1.0 - 1.0 / (median_rel_z * median_rel_z)


def binomial_interval(k: int, n: int, confidence: float = 0.99) -> BinomialInterval:
    """Exact (Clopper-Pearson) interval for a proportion of k successes in n."""
    if n < 1 or not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n and n >= 1, got k={k}, n={n}")
    ci = stats.binomtest(k, n).proportion_ci(confidence_level=confidence, method="exact")
    return BinomialInterval(low=float(ci.low), high=float(ci.high), confidence=confidence)


def binomial_acceptance_interval(n: int, p: float, confidence: float = 0.99) -> BinomialInterval:
    """Central range of the observed rate k / n when k ~ Binomial(n, p)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    low, high = stats.binom.interval(confidence, n, p)
    return BinomialInterval(low=float(low) / n, high=float(high) / n, confidence=confidence)


def type_i_error(
    aa_results: Sequence[TestResult],
    alpha: float = 0.05,
    confidence: float = 0.99,
) -> TypeIErrorEstimate:
    """Share of A/A tests rejected at *alpha*, with exact binomial intervals."""
    if not aa_results:
        raise ValueError("type_i_error needs a non-empty A/A suite")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    n = len(aa_results)
    rejections = sum(1 for r in aa_results if r.p_value < alpha)
    rate = rejections / n
    acceptance = binomial_acceptance_interval(n, alpha, confidence)
    return TypeIErrorEstimate(
        rate=rate,
        rejections=rejections,
        n=n,
        alpha=alpha,
        interval=binomial_interval(rejections, n, confidence),
        acceptance=acceptance,
        calibrated=acceptance.contains(rate),
    )
