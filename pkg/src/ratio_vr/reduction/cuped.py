"""Single-covariate CUPED and control-variate subtraction."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ratio_vr.stats.moments import joint_stats


def cuped_theta(
    metric: np.ndarray | Sequence[float],
    pre_metric: np.ndarray | Sequence[float],
) -> float:
    """theta = cov(M, M_pre) / var(M_pre) over the pooled sample.

    Raises:
        ValueError: ``"constant covariate"`` when M_pre has zero variance.
    """
    m = np.asarray(metric, dtype=float)
    pre = np.asarray(pre_metric, dtype=float)
    if m.shape != pre.shape:
        raise ValueError(f"length mismatch: {m.size} vs {pre.size}")
    joint = joint_stats({"m": m, "pre": pre})
    var_pre = joint.stats("pre").require_variance()
    if var_pre <= 0.0:
        raise ValueError("constant covariate: pre-period metric has zero variance")
    return joint.covariance("m", "pre") / var_pre


def cuped_control_variate(pre_metric: np.ndarray | Sequence[float], theta: float) -> np.ndarray:
    """theta * (M_pre - mean(M_pre))."""
    pre = np.asarray(pre_metric, dtype=float)
    return theta * (pre - pre.mean())


def apply_control_variate(
    metric: np.ndarray | Sequence[float],
    cv: np.ndarray | Sequence[float],
) -> np.ndarray:
    """M_VR = M - CV per unit."""
    m = np.asarray(metric, dtype=float)
    control = np.asarray(cv, dtype=float)
    if m.shape != control.shape:
        raise ValueError(f"length mismatch: {m.size} metric values vs {control.size} control variates")
    return m - control
