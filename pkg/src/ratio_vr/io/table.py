"""Column-oriented view of an experiment's unit records.

Analysis code works on numpy columns rather than on per-unit pydantic
objects.  Tables are kept in canonical ``unit_id`` order so that every
statistic computed from them is independent of input row order.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ratio_vr.io.schemas import UnitRecord
from ratio_vr.ratio.schemas import ComponentArrays, RatioMetricSpec

_FLOAT_COLUMNS = ("numerator", "denominator", "pre_numerator", "pre_denominator")


@dataclass(frozen=True)
class UnitTable:
    """Aligned per-unit columns of one experiment.

    Missing pre-period values are NaN; ``features`` is an (n x d) matrix,
    with d = 0 when the records carry no features.
    """

    unit_ids: np.ndarray
    variants: np.ndarray
    numerator: np.ndarray
    denominator: np.ndarray
    pre_numerator: np.ndarray
    pre_denominator: np.ndarray
    features: np.ndarray

    def __post_init__(self) -> None:
        n = self.unit_ids.shape[0]
        for field in dataclasses.fields(self):
            column = getattr(self, field.name)
            if column.shape[0] != n:
                raise ValueError(f"column {field.name!r} has {column.shape[0]} rows, expected {n}")
        if self.features.ndim != 2:
            raise ValueError(f"features must be 2-D, got shape {self.features.shape}")

    def __len__(self) -> int:
        return int(self.unit_ids.shape[0])

    @property
    def n_features(self) -> int:
        return int(self.features.shape[1])

    @property
    def has_pre_period(self) -> np.ndarray:
        return ~(np.isnan(self.pre_numerator) | np.isnan(self.pre_denominator))

    @classmethod
    def from_columns(
        cls,
        unit_ids: Sequence[str] | np.ndarray,
        variants: Sequence[str] | np.ndarray,
        numerator: Sequence[float] | np.ndarray,
        denominator: Sequence[float] | np.ndarray,
        pre_numerator: Sequence[float] | np.ndarray | None = None,
        pre_denominator: Sequence[float] | np.ndarray | None = None,
        features: np.ndarray | None = None,
    ) -> UnitTable:
        """Build a table, sorting rows by ``unit_id`` and rejecting duplicate ids."""
        ids = np.asarray(unit_ids, dtype=str)
        n = ids.shape[0]
        missing = np.full(n, np.nan)
        feats = np.zeros((n, 0)) if features is None else np.asarray(features, dtype=float).reshape(n, -1)
        order = np.argsort(ids, kind="stable")
        sorted_ids = ids[order]
        if n > 1 and np.any(sorted_ids[1:] == sorted_ids[:-1]):
            dup = sorted_ids[1:][sorted_ids[1:] == sorted_ids[:-1]][0]
            raise ValueError(f"duplicate unit_id {str(dup)!r}")
        return cls(
            unit_ids=sorted_ids,
            variants=np.asarray(variants, dtype=str)[order],
            numerator=np.asarray(numerator, dtype=float)[order],
            denominator=np.asarray(denominator, dtype=float)[order],
            pre_numerator=(missing if pre_numerator is None else np.asarray(pre_numerator, dtype=float))[order],
            pre_denominator=(missing if pre_denominator is None else np.asarray(pre_denominator, dtype=float))[order],
            features=feats[order],
        )

    @classmethod
    def from_records(cls, records: Iterable[UnitRecord]) -> UnitTable:
        rows = list(records)
        widths = {len(r.features) for r in rows}
        if len(widths) > 1:
            raise ValueError(f"records carry different feature counts: {sorted(widths)}")
        d = widths.pop() if widths else 0
        nan = float("nan")
        return cls.from_columns(
            unit_ids=[r.unit_id for r in rows],
            variants=[r.variant for r in rows],
            numerator=[r.numerator for r in rows],
            denominator=[r.denominator for r in rows],
            pre_numerator=[nan if r.pre_numerator is None else r.pre_numerator for r in rows],
            pre_denominator=[nan if r.pre_denominator is None else r.pre_denominator for r in rows],
            features=np.array([r.features for r in rows], dtype=float).reshape(len(rows), d),
        )

    def to_records(self) -> list[UnitRecord]:
        has_pre = self.has_pre_period
        return [
            UnitRecord(
                unit_id=str(self.unit_ids[i]),
                variant=str(self.variants[i]),
                numerator=float(self.numerator[i]),
                denominator=float(self.denominator[i]),
                pre_numerator=float(self.pre_numerator[i]) if has_pre[i] else None,
                pre_denominator=float(self.pre_denominator[i]) if has_pre[i] else None,
                features=[float(v) for v in self.features[i]],
            )
            for i in range(len(self))
        ]

    def column(self, name: str) -> np.ndarray:
        """A numeric column by its record field name (``f{i}`` for features)."""
        if name in _FLOAT_COLUMNS:
            return getattr(self, name)
        if name.startswith("f") and name[1:].isdigit():
            i = int(name[1:])
            if i < self.n_features:
                return self.features[:, i]
        raise KeyError(f"unknown numeric column {name!r}")

    def components(self, spec: RatioMetricSpec) -> ComponentArrays:
        return ComponentArrays(
            numerator=self.column(spec.numerator_field),
            denominator=self.column(spec.denominator_field),
        )

    def select(self, mask: np.ndarray) -> UnitTable:
        """Rows where *mask* is true, order preserved."""
        return UnitTable(**{f.name: getattr(self, f.name)[mask] for f in dataclasses.fields(self)})

    def with_variants(self, variants: Sequence[str] | np.ndarray) -> UnitTable:
        """The same units under a different variant assignment."""
        return dataclasses.replace(self, variants=np.asarray(variants, dtype=str))
