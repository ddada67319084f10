"""Named variance-reduction methods.

Keys are the method labels used in reports.  ``resolve_config`` merges a
preset with per-field overrides.
"""

from __future__ import annotations

from typing import Any

from ratio_vr.reduction.schemas import CovariateSet, VRConfig

PRESETS: dict[str, VRConfig] = {
    # Baseline: linearised metric, no control variate.
    "raw": VRConfig(covariate_set=CovariateSet.NONE),
    # Classical CUPED extended to ratios: pre-period numerator, denominator, linearisation.
    "pre": VRConfig(covariate_set=CovariateSet.PRE),
    # GBDT predictions of numerator, denominator, linearisation (5-fold cross-fitted).
    "pred": VRConfig(covariate_set=CovariateSet.PRED),
    # Both sets, six covariates.
    "union": VRConfig(covariate_set=CovariateSet.UNION),
}

# Row labels for the human-readable report.  Keys match PRESETS.
PRESET_LABELS: dict[str, str] = {
    "raw": "M",
    "pre": "{M_pre}",
    "pred": "{M_hat}",
    "union": "{M_pre} u {M_hat}",
}


def resolve_config(
    preset_name: str | None = None,
    overrides: dict[str, Any] | None = None,
) -> VRConfig:
    """Resolve a :class:`VRConfig` from a preset name and optional overrides.

    Args:
        preset_name: Key in :data:`PRESETS`.  Defaults to ``"pred"`` when
            *None* or empty.
        overrides: Per-field overrides applied on top of the preset.

    Raises:
        ValueError: Unknown preset name or unknown / invalid override field.
    """
    name = preset_name or "pred"
    if name not in PRESETS:
        raise ValueError(f"Unknown method {name!r}. Choose from: {sorted(PRESETS)}")
    config = PRESETS[name]
    if overrides:
        config = VRConfig.model_validate({**config.model_dump(), **overrides})
    return config
