"""Variance-reduced two-sample tests for ratio metrics.

Delta-method and linearised tests, CUPED-style control variates built from
pre-period data and cross-fitted GBDT predictions, a synthetic retention
simulator and the method-comparison harness.
"""

__version__ = "0.1.0"

from ratio_vr import stats  # noqa: F401
from ratio_vr import ratio  # noqa: F401
from ratio_vr import gbdt  # noqa: F401
from ratio_vr import reduction  # noqa: F401
from ratio_vr import io  # noqa: F401
from ratio_vr import simulation  # noqa: F401
from ratio_vr import evaluation  # noqa: F401
