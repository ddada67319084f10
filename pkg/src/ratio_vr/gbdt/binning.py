"""Quantile binning of feature columns for histogram split search.

Split candidates are observed feature values (lower quantiles), so a rank
preserving transform of a column moves its thresholds but never changes
which training rows fall on either side of them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class FeatureBins:
    """Per-feature split thresholds and the bin code of every row.

    ``codes[i, f]`` is the number of thresholds of feature ``f`` strictly
    below ``x[i, f]``, so ``x[i, f] <= thresholds[f][j]`` exactly when
    ``codes[i, f] <= j``.
    """

    thresholds: tuple[np.ndarray, ...]
    codes: np.ndarray

    def n_bins(self, feature: int) -> int:
        return int(self.thresholds[feature].size) + 1


def column_thresholds(column: np.ndarray, max_bins: int) -> np.ndarray:
    """Up to ``max_bins - 1`` distinct cut values taken from the data itself."""
    qs = np.linspace(0.0, 1.0, max_bins + 1)[1:-1]
    cuts = np.unique(np.quantile(column, qs, method="lower"))
    # A cut at the column maximum sends every row left.
    return cuts[cuts < column.max()]


def bin_features(features: np.ndarray, max_bins: int) -> FeatureBins:
    thresholds = tuple(column_thresholds(features[:, f], max_bins) for f in range(features.shape[1]))
    codes = np.empty(features.shape, dtype=np.int64)
    for f, cuts in enumerate(thresholds):
        codes[:, f] = np.searchsorted(cuts, features[:, f], side="left")
    return FeatureBins(thresholds=thresholds, codes=codes)
