"""Configuration and output types of the synthetic experiment generator."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ratio_vr._versioning import SCHEMA_VERSION
from ratio_vr.io.table import UnitTable

CONTROL = "control"
TREATMENT = "treatment"


class SimConfig(BaseModel):
    """Population and experiment parameters.

    Each user has a latent propensity z ~ N(0, 1).  Next-day retention
    probability is ``expit(logit(base_retention) + user_heterogeneity * z)``,
    shifted by ``effect`` for treated users.  The pre-period uses a latent
    correlated with z at ``pre_post_correlation``.  Pre-period metrics also
    count the first ``pre_overlap_days`` days of the experiment window, as
    when the pre-period window runs past the experiment start; those days
    carry part of the treatment effect into the pre-period covariates.

    Of the ``n_features`` pre-experiment features,
    ``feature_signal_fraction`` are monotone nonlinear functions of z plus
    ``feature_noise`` Gaussian noise; the rest are pure noise.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    n_users: int = Field(default=10_000, ge=2)
    window_days: int = Field(default=7, ge=2)
    pre_days: int = Field(default=7, ge=2)
    pre_overlap_days: int = Field(default=0, ge=0)
    base_retention: float = Field(default=0.4, gt=0.0, lt=1.0)
    base_activity: float = Field(default=0.6, gt=0.0, lt=1.0)
    return_rate: float = Field(default=0.3, ge=0.0, le=1.0)
    user_heterogeneity: float = Field(default=1.0, ge=0.0)
    pre_post_correlation: float = Field(default=0.6, ge=0.0, le=1.0)
    effect: float = 0.0
    n_features: int = Field(default=6, ge=0)
    feature_signal_fraction: float = Field(default=0.5, ge=0.0, le=1.0)
    feature_noise: float = Field(default=0.5, ge=0.0)
    new_user_fraction: float = Field(default=0.0, ge=0.0, lt=1.0)
    seed: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def _ranges(self) -> SimConfig:
        if self.pre_overlap_days > self.window_days:
            raise ValueError(
                f"pre_overlap_days must be <= window_days, got {self.pre_overlap_days} > {self.window_days}"
            )
        if self.base_retention + abs(self.effect) >= 1.0:
            raise ValueError(
                f"base_retention + |effect| must be < 1, got {self.base_retention} + {abs(self.effect)}"
            )
        return self


class EffectDistribution(BaseModel):
    """Distribution of true effects across a suite (``constant`` 0 for A/A)."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["constant", "normal", "uniform"] = "constant"
    value: float = 0.0
    scale: float = Field(default=0.0, ge=0.0)
    low: float = 0.0
    high: float = 0.0

    @model_validator(mode="after")
    def _bounds(self) -> EffectDistribution:
        if self.kind == "uniform" and self.high < self.low:
            raise ValueError(f"uniform effect needs low <= high, got [{self.low}, {self.high}]")
        return self

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        if self.kind == "normal":
            return rng.normal(self.value, self.scale, size)
        if self.kind == "uniform":
            return rng.uniform(self.low, self.high, size)
        return np.full(size, self.value)


@dataclass(frozen=True)
class SimulatedExperiment:
    """One generated two-variant experiment and its ground truth."""

    experiment_id: str
    units: UnitTable
    effect: float
    seed: int
    clamped: int
    config: SimConfig


class ManifestEntry(BaseModel):
    """One experiment file of a written suite."""

    model_config = ConfigDict(frozen=True)

    experiment_id: str
    file: str
    effect: float
    seed: int
    n_units: int = Field(ge=0)
    clamped: int = Field(default=0, ge=0)


class SuiteManifest(BaseModel):
    """``suite.json``: how a suite directory was generated and what it holds."""

    model_config = ConfigDict(frozen=True)

    schema_version: str = SCHEMA_VERSION
    template: SimConfig
    effects: EffectDistribution
    seed: int
    file_format: Literal["csv", "jsonl"] = "csv"
    experiments: list[ManifestEntry] = Field(default_factory=list)


class SuitePreset(BaseModel):
    """A reproducible suite: template config, effect draw, size and seed."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    template: SimConfig
    effects: EffectDistribution = Field(default_factory=EffectDistribution)
    n_experiments: int = Field(ge=1)
    seed: int = Field(default=0, ge=0)
