"""Streaming, mergeable sample moments.

The accumulator consumes batches of rows, computes each batch's mean and
centred cross products in two passes over the batch, and folds them into the
running totals with the pairwise update of Chan, Golub and LeVeque.  The same
path serves a one-shot array and a file read in chunks, and two accumulators
built on disjoint data merge into the accumulator of their union.
"""

from __future__ import annotations

from typing import Mapping, Sequence

import numpy as np

from ratio_vr.stats.schemas import JointSampleStats, SampleStats


class MomentAccumulator:
    """Single-writer accumulator of means and co-moments for named components."""

    def __init__(self, names: Sequence[str]) -> None:
        if not names:
            raise ValueError("at least one component name is required")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate component names: {list(names)}")
        self._names = tuple(names)
        k = len(self._names)
        self._n = 0
        self._mean = np.zeros(k)
        self._comoment = np.zeros((k, k))

    @property
    def names(self) -> tuple[str, ...]:
        return self._names

    @property
    def n(self) -> int:
        return self._n

    def update(self, batch: np.ndarray | Sequence[float]) -> None:
        """Fold a batch of rows (shape ``(m, k)``, or ``(m,)`` when k = 1)."""
        rows = np.asarray(batch, dtype=float)
        if rows.ndim == 1 and len(self._names) == 1:
            rows = rows[:, None]
        if rows.ndim != 2 or rows.shape[1] != len(self._names):
            raise ValueError(
                f"batch shape {rows.shape} does not match {len(self._names)} components"
            )
        if rows.shape[0] == 0:
            return
        if not np.all(np.isfinite(rows)):
            raise ValueError("sample contains non-finite values")
        mean = rows.mean(axis=0)
        centred = rows - mean
        self._combine(rows.shape[0], mean, centred.T @ centred)

    def _combine(self, m: int, mean: np.ndarray, comoment: np.ndarray) -> None:
        if m == 0:
            return
        if self._n == 0:
            self._n, self._mean, self._comoment = m, mean.copy(), comoment.copy()
            return
        n = self._n + m
        delta = mean - self._mean
        self._mean = self._mean + delta * (m / n)
        self._comoment = self._comoment + comoment + np.outer(delta, delta) * (self._n * m / n)
        self._n = n

    def merge(self, other: MomentAccumulator) -> MomentAccumulator:
        """Return a new accumulator holding the union of both samples."""
        if other.names != self._names:
            raise ValueError(f"cannot merge components {other.names} into {self._names}")
        merged = MomentAccumulator(self._names)
        merged._combine(self._n, self._mean, self._comoment)
        merged._combine(other._n, other._mean, other._comoment)
        return merged

    def result(self) -> JointSampleStats:
        if self._n == 0:
            raise ValueError("empty sample")
        return JointSampleStats(
            names=self._names,
            n=self._n,
            means=self._mean.copy(),
            comoment=self._comoment.copy(),
        )


def joint_stats(columns: Mapping[str, np.ndarray | Sequence[float]]) -> JointSampleStats:
    """Moments of equally long, unit-aligned columns."""
    names = list(columns)
    arrays = [np.asarray(columns[name], dtype=float) for name in names]
    lengths = {a.shape[0] for a in arrays}
    if len(lengths) != 1:
        raise ValueError(f"length mismatch between components: {sorted(lengths)}")
    acc = MomentAccumulator(names)
    acc.update(np.column_stack(arrays))
    return acc.result()


def summarize(values: np.ndarray | Sequence[float]) -> SampleStats:
    """Count, mean and unbiased variance of *values*.

    Raises:
        ValueError: ``"empty sample"`` for no values, or on non-finite input.
    """
    arr = np.asarray(values, dtype=float).ravel()
    if arr.size == 0:
        raise ValueError("empty sample")
    acc = MomentAccumulator(["x"])
    acc.update(arr)
    return acc.result().stats("x")


def covariance(
    x: np.ndarray | Sequence[float],
    y: np.ndarray | Sequence[float],
) -> float:
    """Unbiased sample covariance of two unit-paired samples."""
    xa = np.asarray(x, dtype=float).ravel()
    ya = np.asarray(y, dtype=float).ravel()
    if xa.shape != ya.shape:
        raise ValueError(f"length mismatch: {xa.size} vs {ya.size}")
    if xa.size < 2:
        raise ValueError(f"covariance needs at least 2 paired values, got {xa.size}")
    return joint_stats({"x": xa, "y": ya}).covariance("x", "y")
