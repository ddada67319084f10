"""Unit-level input records and the flat file layout they are read from.

One ``UnitRecord`` is one user in one experiment.  The flat CSV form is

    unit_id,variant,numerator,denominator,pre_numerator,pre_denominator,f0,...,f{d-1}

and JSONL lines carry the same field names, with ``features`` either as a
list or as individual ``f{i}`` keys.
"""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field, model_validator


BASE_COLUMNS: tuple[str, ...] = (
    "unit_id",
    "variant",
    "numerator",
    "denominator",
    "pre_numerator",
    "pre_denominator",
)


def feature_column(i: int) -> str:
    return f"f{i}"


def csv_header(n_features: int) -> list[str]:
    """The exact CSV header for a file with *n_features* feature columns."""
    return [*BASE_COLUMNS, *(feature_column(i) for i in range(n_features))]


class UnitRecord(BaseModel):
    """One experimental unit: assignment, metric components, pre-period data, features."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    unit_id: str = Field(min_length=1)
    variant: str = Field(min_length=1)
    numerator: float = Field(ge=0.0)
    denominator: float = Field(ge=0.0)
    pre_numerator: float | None = Field(default=None, ge=0.0)
    pre_denominator: float | None = Field(default=None, ge=0.0)
    features: list[float] = Field(default_factory=list)

    @model_validator(mode="after")
    def _pre_period_complete(self) -> UnitRecord:
        if (self.pre_numerator is None) != (self.pre_denominator is None):
            raise ValueError("pre_numerator and pre_denominator must both be present or both absent")
        return self

    @property
    def has_pre_period(self) -> bool:
        return self.pre_numerator is not None

    def bound_violation(self) -> str | None:
        """Reason string when a retention-type bound is broken, else ``None``."""
        if self.numerator > self.denominator:
            return "component bound violated: numerator > denominator"
        if self.has_pre_period and self.pre_numerator > self.pre_denominator:  # type: ignore[operator]
            return "component bound violated: pre_numerator > pre_denominator"
        return None

