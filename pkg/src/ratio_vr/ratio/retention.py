"""One-day retention components from per-day activity flags.

For each unit, every day d of the window that has a following day is a
possible D_0: the denominator counts days the unit was active on d, the
numerator counts days it was active on both d and d + 1.  Summing over the
window keeps numerator <= denominator per unit.
"""

from __future__ import annotations

from typing import Mapping, Sequence

import numpy as np

from ratio_vr.ratio.schemas import UnitMetricComponents


def retention_counts(activity: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Retained-day and eligible-day counts for an (units x days) flag matrix.

    Returns:
        ``(numerator, denominator)`` integer arrays, one entry per row,
        including rows with a zero denominator.

    Raises:
        ValueError: If the window is shorter than 2 days.
    """
    active = np.asarray(activity, dtype=bool)
    if active.ndim != 2:
        raise ValueError(f"activity must be a 2-D (units x days) array, got shape {active.shape}")
    if active.shape[1] < 2:
        raise ValueError(f"activity window must span at least 2 days, got {active.shape[1]}")
    today = active[:, :-1]
    numerator = (today & active[:, 1:]).sum(axis=1)
    denominator = today.sum(axis=1)
    return numerator, denominator


def compute_retention_components(
    activity: Mapping[str, Sequence[bool]],
) -> list[UnitMetricComponents]:
    """Per-unit retention components, dropping units with no eligible day.

    Args:
        activity: Unit id to its daily activity flags; every unit must cover
            the same window.

    Returns:
        Components in the mapping's iteration order, without the units that
        were never active before the final day.

    Raises:
        ValueError: If the window is shorter than 2 days (an empty mapping
            has no window) or units cover different windows.
    """
    unit_ids = list(activity)
    if not unit_ids:
        raise ValueError("activity window must span at least 2 days, got 0")
    widths = {len(activity[u]) for u in unit_ids}
    if len(widths) != 1:
        raise ValueError(f"units cover windows of different lengths: {sorted(widths)}")
    matrix = np.array([list(activity[u]) for u in unit_ids], dtype=bool)
    numerator, denominator = retention_counts(matrix)
    return [
        UnitMetricComponents(unit_id=u, numerator=float(n), denominator=float(d))
        for u, n, d in zip(unit_ids, numerator, denominator)
        if d > 0
    ]
