"""Gradient-boosted regression tree parameters, trees and models.

Trees are stored as flat parallel arrays indexed by node id; node 0 is the
root and a node with ``feature == -1`` is a leaf.  Rows with
``x[feature] <= threshold`` go left.  Leaf values are the mean residual of
the leaf's training rows, unscaled: prediction multiplies them by the
learning rate.

Serialised models embed ``schema_version`` and round-trip bit-exactly
through :meth:`GBDTModel.to_json` / :meth:`GBDTModel.from_json`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ratio_vr._versioning import SCHEMA_VERSION, check_schema_version


class GBDTParams(BaseModel):
    """Boosting hyperparameters (squared loss only)."""

    model_config = ConfigDict(frozen=True)

    n_trees: int = Field(default=100, ge=0)
    learning_rate: float = Field(default=0.1, gt=0.0, le=1.0)
    max_depth: int = Field(default=4, ge=1)
    min_samples_leaf: int = Field(default=50, ge=1)
    max_bins: int = Field(default=64, ge=2)
    subsample: float = Field(default=1.0, gt=0.0, le=1.0)
    seed: int = Field(default=0, ge=0)


class RegressionTree(BaseModel):
    """One fitted tree as flat node arrays."""

    model_config = ConfigDict(frozen=True)

    feature: list[int]
    threshold: list[float]
    left: list[int]
    right: list[int]
    value: list[float]
    n_samples: list[int]

    @model_validator(mode="after")
    def _aligned(self) -> RegressionTree:
        sizes = {
            len(self.feature),
            len(self.threshold),
            len(self.left),
            len(self.right),
            len(self.value),
            len(self.n_samples),
        }
        if len(sizes) != 1 or not self.feature:
            raise ValueError("tree node arrays must be non-empty and equally long")
        return self

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    def leaf_ids(self) -> list[int]:
        return [i for i, f in enumerate(self.feature) if f < 0]


class GBDTModel(BaseModel):
    """A fitted ensemble: base score plus learning-rate-scaled trees."""

    model_config = ConfigDict(frozen=True)

    schema_version: str = SCHEMA_VERSION
    params: GBDTParams
    base_score: float
    n_features: int = Field(ge=1)
    trees: list[RegressionTree] = Field(default_factory=list)

    def to_json(self) -> str:
        return self.model_dump_json()

    @classmethod
    def from_json(cls, data: str | bytes) -> GBDTModel:
        model = cls.model_validate_json(data)
        check_schema_version(model.schema_version)
        return model


@dataclass(frozen=True)
class ComponentPredictions:
    """Predicted experiment-period numerator, denominator and linearised metric per unit."""

    numerator: np.ndarray
    denominator: np.ndarray
    linearized: np.ndarray
