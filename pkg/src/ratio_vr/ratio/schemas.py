"""Ratio-metric definitions and per-unit component records.

A ratio metric M = M_N / M_D has no natural per-unit value; each unit
(user) instead contributes a numerator and a denominator, and the metric is
the ratio of the component means.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class LinearizationSource(str, Enum):
    """Where the linearisation coefficient ``c`` comes from."""

    CONTROL_MEAN = "control_mean"
    FIXED = "fixed"


class RatioMetricSpec(BaseModel):
    """Names a ratio metric's component fields and its linearisation policy.

    ``bounded`` declares a retention-type metric whose numerator can never
    exceed its denominator per unit; ingestion rejects rows that violate it.
    """

    model_config = ConfigDict(frozen=True)

    name: str = "one_day_retention"
    numerator_field: str = "numerator"
    denominator_field: str = "denominator"
    linearization_source: LinearizationSource = LinearizationSource.CONTROL_MEAN
    fixed_c: float | None = None
    bounded: bool = True

    @model_validator(mode="after")
    def _check(self) -> RatioMetricSpec:
        if self.numerator_field == self.denominator_field:
            raise ValueError(
                f"numerator_field and denominator_field must differ, both are {self.numerator_field!r}"
            )
        if self.linearization_source is LinearizationSource.FIXED:
            if self.fixed_c is None or not math.isfinite(self.fixed_c):
                raise ValueError("linearization_source 'fixed' requires a finite fixed_c")
        return self


class UnitMetricComponents(BaseModel):
    """One unit's numerator and denominator contribution."""

    model_config = ConfigDict(frozen=True)

    unit_id: str
    numerator: float = Field(ge=0.0)
    denominator: float = Field(ge=0.0)


@dataclass(frozen=True)
class ComponentArrays:
    """Column form of a sequence of :class:`UnitMetricComponents`."""

    numerator: np.ndarray
    denominator: np.ndarray

    def __post_init__(self) -> None:
        if self.numerator.shape != self.denominator.shape:
            raise ValueError(
                f"length mismatch: {self.numerator.size} numerators vs "
                f"{self.denominator.size} denominators"
            )

    def __len__(self) -> int:
        return int(self.numerator.size)

    @classmethod
    def from_components(cls, components: Sequence[UnitMetricComponents]) -> ComponentArrays:
        return cls(
            numerator=np.array([c.numerator for c in components], dtype=float),
            denominator=np.array([c.denominator for c in components], dtype=float),
        )


@dataclass(frozen=True)
class LinearizedMetric:
    """Per-unit linearised values L = M_N - c * M_D and the ``c`` used."""

    c: float
    values: np.ndarray
