"""Squared-error gradient boosting over histogram-split regression trees.

Algorithm overview
------------------
1. ``base_score`` is the target mean; the running prediction starts there.
2. Each stage fits a depth-limited tree to the residuals ``y - prediction``
   (on a seeded row subsample when ``subsample < 1``):
   a. Every feature is quantised once into at most ``max_bins`` bins.
   b. A node's candidate splits are scored from per-bin residual sums and
      counts; the gain is the reduction in squared error.  Splits leaving
      fewer than ``min_samples_leaf`` rows on a side are skipped.
   c. Ties go to the lowest feature index, then the lowest threshold.
   d. Leaves hold the mean residual of their rows.
3. The prediction advances by ``learning_rate`` times the tree output.
"""

from __future__ import annotations

import numpy as np

from ratio_vr.gbdt.binning import FeatureBins, bin_features
from ratio_vr.gbdt.schemas import GBDTModel, GBDTParams, RegressionTree

# A split must remove at least this fraction of the node's squared error.
_MIN_RELATIVE_GAIN = 1e-12


def _as_matrix(features: np.ndarray) -> np.ndarray:
    X = np.asarray(features, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2:
        raise ValueError(f"features must be a 2-D matrix, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError("features contain non-finite values")
    return X


def fit(features: np.ndarray, targets: np.ndarray, params: GBDTParams | None = None) -> GBDTModel:
    """Fit a boosted ensemble to *targets*.

    Raises:
        ValueError: Fewer than ``2 * min_samples_leaf`` rows, a row-count
            mismatch, or non-finite input.
    """
    cfg = params or GBDTParams()
    X = _as_matrix(features)
    y = np.asarray(targets, dtype=float).ravel()
    n = X.shape[0]
    if y.shape[0] != n:
        raise ValueError(f"{n} feature rows but {y.shape[0]} targets")
    if n < 2 * cfg.min_samples_leaf:
        raise ValueError(
            f"need at least {2 * cfg.min_samples_leaf} rows (2 * min_samples_leaf), got {n}"
        )
    if not np.all(np.isfinite(y)):
        raise ValueError("targets contain non-finite values")

    base = float(y[0]) if np.all(y == y[0]) else float(np.mean(y))
    bins = bin_features(X, cfg.max_bins)
    rng = np.random.default_rng(cfg.seed)
    n_rows = max(int(round(cfg.subsample * n)), 2 * cfg.min_samples_leaf)

    prediction = np.full(n, base)
    trees: list[RegressionTree] = []
    for _ in range(cfg.n_trees):
        residual = y - prediction
        if n_rows < n:
            rows = np.sort(rng.choice(n, size=n_rows, replace=False))
        else:
            rows = np.arange(n)
        tree = _grow_tree(bins, residual, rows, cfg)
        trees.append(tree)
        prediction = prediction + cfg.learning_rate * _tree_output(tree, X)

    return GBDTModel(params=cfg, base_score=base, n_features=X.shape[1], trees=trees)


def predict(model: GBDTModel, features: np.ndarray) -> np.ndarray:
    """``base_score`` plus the learning-rate-scaled output of every tree."""
    X = _as_matrix(features)
    if X.shape[1] != model.n_features:
        raise ValueError(f"model expects {model.n_features} features, got {X.shape[1]}")
    prediction = np.full(X.shape[0], model.base_score)
    for tree in model.trees:
        prediction = prediction + model.params.learning_rate * _tree_output(tree, X)
    return prediction


def training_mse_path(model: GBDTModel, features: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """Mean squared error after 0, 1, ..., n_trees stages."""
    X = _as_matrix(features)
    y = np.asarray(targets, dtype=float).ravel()
    prediction = np.full(X.shape[0], model.base_score)
    path = [float(np.mean((y - prediction) ** 2))]
    for tree in model.trees:
        prediction = prediction + model.params.learning_rate * _tree_output(tree, X)
        path.append(float(np.mean((y - prediction) ** 2)))
    return np.asarray(path)


def _tree_output(tree: RegressionTree, X: np.ndarray) -> np.ndarray:
    feature = np.asarray(tree.feature, dtype=np.int64)
    threshold = np.asarray(tree.threshold, dtype=float)
    left = np.asarray(tree.left, dtype=np.int64)
    right = np.asarray(tree.right, dtype=np.int64)
    value = np.asarray(tree.value, dtype=float)

    rows = np.arange(X.shape[0])
    node = np.zeros(X.shape[0], dtype=np.int64)
    while True:
        split_on = feature[node]
        internal = split_on >= 0
        if not internal.any():
            break
        x = X[rows, np.where(internal, split_on, 0)]
        child = np.where(x <= threshold[node], left[node], right[node])
        node = np.where(internal, child, node)
    return value[node]


class _TreeBuilder:
    """Accumulates flat node arrays while growing one tree depth-first."""

    def __init__(self, bins: FeatureBins, residual: np.ndarray, params: GBDTParams) -> None:
        self.bins = bins
        self.residual = residual
        self.params = params
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.value: list[float] = []
        self.n_samples: list[int] = []

    def build(self, rows: np.ndarray, depth: int) -> int:
        node = len(self.feature)
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(float(self.residual[rows].mean()))
        self.n_samples.append(int(rows.size))

        if depth >= self.params.max_depth or rows.size < 2 * self.params.min_samples_leaf:
            return node
        split = _best_split(self.bins, self.residual, rows, self.params.min_samples_leaf)
        if split is None:
            return node

        f, j = split
        goes_left = self.bins.codes[rows, f] <= j
        self.feature[node] = f
        self.threshold[node] = float(self.bins.thresholds[f][j])
        self.left[node] = self.build(rows[goes_left], depth + 1)
        self.right[node] = self.build(rows[~goes_left], depth + 1)
        return node

    def tree(self) -> RegressionTree:
        return RegressionTree(
            feature=self.feature,
            threshold=self.threshold,
            left=self.left,
            right=self.right,
            value=self.value,
            n_samples=self.n_samples,
        )


def _grow_tree(
    bins: FeatureBins,
    residual: np.ndarray,
    rows: np.ndarray,
    params: GBDTParams,
) -> RegressionTree:
    builder = _TreeBuilder(bins, residual, params)
    builder.build(rows, depth=0)
    return builder.tree()


def _best_split(
    bins: FeatureBins,
    residual: np.ndarray,
    rows: np.ndarray,
    min_leaf: int,
) -> tuple[int, int] | None:
    """Best ``(feature, bin)`` split of *rows*, or ``None`` if nothing helps."""
    r = residual[rows]
    count = rows.size
    total = float(r.sum())
    node_sse = float(np.sum((r - total / count) ** 2))
    if node_sse <= 0.0:
        return None

    best: tuple[int, int] | None = None
    best_gain = _MIN_RELATIVE_GAIN * node_sse
    parent_term = total * total / count
    for f in range(bins.codes.shape[1]):
        n_bins = bins.n_bins(f)
        if n_bins < 2:
            continue
        codes = bins.codes[rows, f]
        sums = np.bincount(codes, weights=r, minlength=n_bins)
        counts = np.bincount(codes, minlength=n_bins)
        left_sum = np.cumsum(sums)[:-1]
        left_count = np.cumsum(counts)[:-1]
        right_sum = total - left_sum
        right_count = count - left_count
        valid = (left_count >= min_leaf) & (right_count >= min_leaf)
        if not valid.any():
            continue
        gain = np.full(n_bins - 1, -np.inf)
        gain[valid] = (
            left_sum[valid] ** 2 / left_count[valid]
            + right_sum[valid] ** 2 / right_count[valid]
            - parent_term
        )
        j = int(np.argmax(gain))
        if gain[j] > best_gain:
            best, best_gain = (f, j), float(gain[j])
    return best
