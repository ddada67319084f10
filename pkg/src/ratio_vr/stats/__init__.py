"""Sample moments, the standard normal CDF and the two-sample z-test."""

from ratio_vr.stats.moments import (
    MomentAccumulator,
    covariance,
    joint_stats,
    summarize,
)
from ratio_vr.stats.schemas import JointSampleStats, SampleStats, TestResult
from ratio_vr.stats.ztest import (
    DegenerateVarianceError,
    p_value,
    std_normal_cdf,
    compare_stats,
    compare_samples,
    z_statistic,
)

__all__ = [
    "SampleStats",
    "JointSampleStats",
    "TestResult",
    "MomentAccumulator",
    "summarize",
    "covariance",
    "joint_stats",
    "std_normal_cdf",
    "z_statistic",
    "p_value",
    "compare_stats",
    "compare_samples",
    "DegenerateVarianceError",
]
