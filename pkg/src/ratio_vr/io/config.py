"""The ``analyze`` command's JSON config file."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

from ratio_vr._versioning import SCHEMA_VERSION
from ratio_vr.ratio.schemas import RatioMetricSpec
from ratio_vr.reduction.schemas import VRConfig


class AnalysisConfig(BaseModel):
    """Contents of the ``analyze`` command's JSON config file."""

    model_config = ConfigDict(frozen=True)

    schema_version: str = SCHEMA_VERSION
    metric: RatioMetricSpec = Field(default_factory=RatioMetricSpec)
    control_variant: str = Field(min_length=1)
    vr: VRConfig = Field(default_factory=VRConfig)
    alpha: float = Field(default=0.05, gt=0.0, lt=1.0)
    input_paths: list[str] = Field(default_factory=list)
    input_format: Literal["csv", "jsonl"] = "csv"
    output_path: str | None = None
    reject_threshold: float = Field(default=0.01, ge=0.0, le=1.0)
    seed: int = Field(default=0, ge=0)
