"""Value types for per-variant sample moments and two-sample test results.

``SampleStats`` describes one metric component within one variant;
``JointSampleStats`` bundles several components measured on the same units
together with their covariance table.  ``TestResult`` is the outcome of a
single z-test for one experiment under one method.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class SampleStats(BaseModel):
    """Count, mean and unbiased variance of one sample.

    ``variance`` is ``None`` for a single observation: an n = 1 sample has no
    variance, and reporting 0 would silently inflate any z built on it.
    """

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1)
    mean: float
    variance: float | None = None

    @model_validator(mode="after")
    def _check_variance(self) -> SampleStats:
        if self.n == 1 and self.variance is not None:
            raise ValueError("variance is undefined for a sample of size 1")
        if self.n >= 2 and self.variance is None:
            raise ValueError(f"variance required for n = {self.n}")
        if self.variance is not None and not self.variance >= 0.0:
            raise ValueError(f"variance must be >= 0, got {self.variance}")
        return self

    def require_variance(self) -> float:
        """Return the variance, raising ``ValueError`` when it is undefined."""
        if self.variance is None:
            raise ValueError("variance undefined: sample has a single unit")
        return self.variance

    @property
    def std(self) -> float:
        return math.sqrt(self.require_variance())


@dataclass(frozen=True)
class JointSampleStats:
    """Moments of several components observed on the same units.

    Attributes:
        names: Component names, in column order.
        n: Number of units.
        means: Per-component means, aligned with ``names``.
        comoment: Sum of centred cross products (k x k), i.e.
            ``(n - 1) * covariance``.
    """

    names: tuple[str, ...]
    n: int
    means: np.ndarray
    comoment: np.ndarray

    def _index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown component {name!r}; have {list(self.names)}") from None

    def stats(self, name: str) -> SampleStats:
        i = self._index(name)
        variance = None
        if self.n >= 2:
            variance = max(float(self.comoment[i, i]) / (self.n - 1), 0.0)
        return SampleStats(n=self.n, mean=float(self.means[i]), variance=variance)

    def covariance(self, a: str, b: str) -> float:
        if self.n < 2:
            raise ValueError(f"covariance needs n >= 2, got n = {self.n}")
        return float(self.comoment[self._index(a), self._index(b)]) / (self.n - 1)

    @property
    def covariances(self) -> dict[tuple[str, str], float]:
        """Covariance table keyed by component-name pair."""
        return {(a, b): self.covariance(a, b) for a in self.names for b in self.names}


class TestResult(BaseModel):
    """Outcome of one two-sample z-test.

    ``ate`` is the difference of means of the tested metric, treatment minus
    control; ``variance_a`` and ``variance_b`` are the per-unit variances
    plugged into the z denominator (before the division by n).
    """

    __test__ = False  # not a pytest test class

    model_config = ConfigDict(frozen=True)

    method_label: str
    z: float
    p_value: float = Field(ge=0.0, le=1.0)
    ate: float
    variance_a: float = Field(ge=0.0)
    variance_b: float = Field(ge=0.0)
    n_a: int = Field(ge=1)
    n_b: int = Field(ge=1)
