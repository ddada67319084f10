"""Tests for CUPED theta and control-variate subtraction."""

import numpy as np
import pytest

from ratio_vr.reduction.cuped import apply_control_variate, cuped_control_variate, cuped_theta


class TestCupedTheta:
    def test_perfect_predictor(self, rng):
        pre = rng.normal(size=200)
        assert cuped_theta(pre, pre) == pytest.approx(1.0)

    def test_independent(self, rng):
        n = 100_000
        assert abs(cuped_theta(rng.normal(size=n), rng.normal(size=n))) < 0.02

    def test_linear_limit(self, rng):
        pre = rng.normal(size=5_000)
        metric = 2.0 * pre + rng.normal(scale=1e-6, size=5_000)
        assert cuped_theta(metric, pre) == pytest.approx(2.0, abs=1e-3)

    def test_constant_covariate(self):
        with pytest.raises(ValueError, match="constant covariate"):
            cuped_theta([1.0, 2.0, 3.0], [4.0, 4.0, 4.0])

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="length mismatch"):
            cuped_theta([1.0, 2.0], [1.0, 2.0, 3.0])


class TestApplyControlVariate:
    def test_zero_control_variate(self):
        metric = np.array([1.0, 5.0, -2.0])
        assert np.array_equal(apply_control_variate(metric, np.zeros(3)), metric)

    def test_perfect_reduction(self, rng):
        pre = rng.normal(size=300)
        reduced = apply_control_variate(pre, cuped_control_variate(pre, 1.0))
        assert np.ptp(reduced) < 1e-12
        assert reduced.mean() == pytest.approx(pre.mean())

    def test_preserves_pooled_mean(self, rng):
        metric = rng.normal(loc=3.0, size=500)
        pre = metric + rng.normal(size=500)
        cv = cuped_control_variate(pre, cuped_theta(metric, pre))
        assert apply_control_variate(metric, cv).mean() == pytest.approx(metric.mean())

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="length mismatch"):
            apply_control_variate([1.0, 2.0], [0.0])
