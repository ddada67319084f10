"""Named experiment suites.

Each preset pins everything :func:`generate_suite` needs, so a suite can be
regenerated bit-for-bit from its name.  ``resolve_suite`` merges a preset
with optional overrides; a ``template`` override is merged field by field.
"""

from __future__ import annotations

from typing import Any

from ratio_vr.simulation.generator import generate_suite
from ratio_vr.simulation.schemas import EffectDistribution, SimConfig, SimulatedExperiment, SuitePreset

SUITE_PRESETS: dict[str, SuitePreset] = {
    # One experiment from the default population.
    "default": SuitePreset(template=SimConfig(), n_experiments=1),
    # A/A calibration: 10,000 users per variant over a 7-day window.
    "aa": SuitePreset(
        template=SimConfig(n_users=10_000, window_days=7),
        n_experiments=2_000,
        seed=2,
    ),
    # Small effects, nonlinear feature signal, weak latent pre/post coupling,
    # and a pre-period window that runs 6 days into the experiment.
    "sensitivity": SuitePreset(
        template=SimConfig(
            n_users=5_000,
            window_days=7,
            pre_days=2,
            pre_overlap_days=6,
            user_heterogeneity=1.2,
            pre_post_correlation=0.3,
            n_features=6,
            feature_signal_fraction=1.0,
            feature_noise=0.25,
        ),
        effects=EffectDistribution(kind="constant", value=0.025),
        n_experiments=200,
        seed=7,
    ),
}


def resolve_suite(
    preset_name: str | None = None,
    overrides: dict[str, Any] | None = None,
) -> SuitePreset:
    """Resolve a :class:`SuitePreset` from a preset name and optional overrides.

    Args:
        preset_name: Key in :data:`SUITE_PRESETS`.  Defaults to
            ``"default"`` when *None* or empty.
        overrides: Fields of :class:`SuitePreset`; ``template`` is a dict of
            :class:`SimConfig` fields.

    Raises:
        ValueError: Unknown preset name or unknown / invalid override field.
    """
    name = preset_name or "default"
    if name not in SUITE_PRESETS:
        raise ValueError(f"Unknown suite {name!r}. Choose from: {sorted(SUITE_PRESETS)}")
    preset = SUITE_PRESETS[name]
    if not overrides:
        return preset
    data = preset.model_dump()
    for key, value in overrides.items():
        if key == "template":
            data["template"] = {**data["template"], **value}
        else:
            data[key] = value
    return SuitePreset.model_validate(data)


def generate_preset_suite(preset: SuitePreset) -> list[SimulatedExperiment]:
    return generate_suite(preset.n_experiments, preset.template, preset.effects, seed=preset.seed)
