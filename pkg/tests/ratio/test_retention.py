"""Tests for one-day retention components."""

import numpy as np
import pytest

from ratio_vr.ratio.retention import compute_retention_components, retention_counts


class TestComputeRetentionComponents:
    def test_active_every_day(self):
        (unit,) = compute_retention_components({"u1": [True, True, True]})
        assert unit.unit_id == "u1"
        assert (unit.numerator, unit.denominator) == (2.0, 2.0)

    def test_only_final_day_excluded(self):
        assert compute_retention_components({"u1": [False, False, True]}) == []

    def test_first_day_only(self):
        (unit,) = compute_retention_components({"u1": [True, False, False]})
        assert (unit.numerator, unit.denominator) == (0.0, 1.0)

    def test_order_preserved(self):
        result = compute_retention_components(
            {"b": [True, True], "z": [False, True], "a": [True, False]}
        )
        assert [u.unit_id for u in result] == ["b", "a"]

    def test_empty_mapping_has_no_window(self):
        with pytest.raises(ValueError, match="at least 2 days, got 0"):
            compute_retention_components({})

    def test_single_day_window(self):
        with pytest.raises(ValueError, match="at least 2 days, got 1"):
            compute_retention_components({"u1": [True], "u2": [False]})

    def test_ragged_windows(self):
        with pytest.raises(ValueError, match="different lengths"):
            compute_retention_components({"a": [True, True], "b": [True, True, True]})


class TestRetentionCounts:
    def test_numerator_never_exceeds_denominator(self, rng):
        activity = rng.random((500, 9)) < 0.4
        num, den = retention_counts(activity)
        assert np.all(num <= den)
        assert np.all(den <= 8)

    def test_gap_day(self):
        num, den = retention_counts(np.array([[1, 0, 1, 1]]))
        assert num.tolist() == [1]
        assert den.tolist() == [2]

    def test_window_too_short(self):
        with pytest.raises(ValueError, match="at least 2 days"):
            retention_counts(np.ones((3, 1), dtype=bool))
