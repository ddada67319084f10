"""Tests for unit records, the unit table and the analysis config."""

import numpy as np
import pytest

from ratio_vr.io.config import AnalysisConfig
from ratio_vr.io.schemas import UnitRecord, csv_header
from ratio_vr.io.table import UnitTable
from ratio_vr.ratio.schemas import RatioMetricSpec
from ratio_vr.reduction.schemas import CovariateSet


def _record(**overrides) -> UnitRecord:
    data = {"unit_id": "u1", "variant": "control", "numerator": 1.0, "denominator": 2.0}
    data.update(overrides)
    return UnitRecord(**data)


class TestUnitRecord:
    def test_minimal(self):
        record = _record()
        assert not record.has_pre_period
        assert record.features == []

    def test_negative_component(self):
        with pytest.raises(ValueError):
            _record(numerator=-1.0)

    def test_nan_rejected(self):
        with pytest.raises(ValueError):
            _record(denominator=float("nan"))

    def test_partial_pre_period(self):
        with pytest.raises(ValueError, match="both be present"):
            _record(pre_numerator=1.0)

    def test_bound_violation(self):
        assert _record(numerator=3.0).bound_violation() == "component bound violated: numerator > denominator"
        assert _record(pre_numerator=2.0, pre_denominator=1.0).bound_violation().startswith(
            "component bound violated"
        )
        assert _record().bound_violation() is None

    def test_csv_header(self):
        assert csv_header(2) == [
            "unit_id",
            "variant",
            "numerator",
            "denominator",
            "pre_numerator",
            "pre_denominator",
            "f0",
            "f1",
        ]


class TestUnitTable:
    def test_sorted_by_unit_id(self):
        table = UnitTable.from_columns(["b", "c", "a"], ["t", "c", "c"], [1, 2, 3], [4, 5, 6])
        assert table.unit_ids.tolist() == ["a", "b", "c"]
        assert table.numerator.tolist() == [3.0, 1.0, 2.0]
        assert table.variants.tolist() == ["c", "t", "c"]

    def test_duplicate_unit_id(self):
        with pytest.raises(ValueError, match="duplicate unit_id 'a'"):
            UnitTable.from_columns(["a", "b", "a"], ["c", "c", "t"], [1, 2, 3], [4, 5, 6])

    def test_records_round_trip(self):
        records = [
            _record(unit_id="x2", features=[0.5, 1.5]),
            _record(unit_id="x1", pre_numerator=0.0, pre_denominator=3.0, features=[2.0, -1.0]),
        ]
        table = UnitTable.from_records(records)
        assert table.n_features == 2
        assert table.has_pre_period.tolist() == [True, False]
        assert table.to_records() == sorted(records, key=lambda r: r.unit_id)

    def test_ragged_features(self):
        with pytest.raises(ValueError, match="feature counts"):
            UnitTable.from_records([_record(unit_id="a", features=[1.0]), _record(unit_id="b")])

    def test_columns(self):
        table = UnitTable.from_columns(["a", "b"], ["c", "t"], [1, 2], [3, 4], features=np.array([[5.0], [6.0]]))
        assert table.column("f0").tolist() == [5.0, 6.0]
        with pytest.raises(KeyError):
            table.column("f1")
        custom = RatioMetricSpec(numerator_field="f0", denominator_field="denominator", bounded=False)
        assert table.components(custom).numerator.tolist() == [5.0, 6.0]

    def test_select(self):
        table = UnitTable.from_columns(["a", "b", "c"], ["c", "t", "c"], [1, 2, 3], [4, 5, 6])
        control = table.select(table.variants == "c")
        assert control.unit_ids.tolist() == ["a", "c"]


class TestAnalysisConfig:
    def test_defaults(self):
        config = AnalysisConfig(control_variant="control")
        assert config.schema_version == "1.0"
        assert config.alpha == 0.05
        assert config.vr.covariate_set is CovariateSet.PRED
        assert config.input_format == "csv"

    def test_from_json(self):
        config = AnalysisConfig.model_validate_json(
            '{"control_variant": "A", "vr": {"covariate_set": "union", "cross_fit_folds": 0},'
            ' "metric": {"name": "ctr", "bounded": false}}'
        )
        assert config.vr.covariate_set is CovariateSet.UNION
        assert config.metric.name == "ctr"

    def test_control_required(self):
        with pytest.raises(ValueError):
            AnalysisConfig()

    def test_bad_alpha(self):
        with pytest.raises(ValueError):
            AnalysisConfig(control_variant="c", alpha=1.5)

    def test_bad_format(self):
        with pytest.raises(ValueError):
            AnalysisConfig(control_variant="c", input_format="parquet")
