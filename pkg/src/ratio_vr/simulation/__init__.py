"""Synthetic A/A and A/B retention experiments for desk-scale validation."""

from ratio_vr.simulation.generator import generate_experiment, generate_suite
from ratio_vr.simulation.presets import SUITE_PRESETS, generate_preset_suite, resolve_suite
from ratio_vr.simulation.schemas import (
    CONTROL,
    TREATMENT,
    EffectDistribution,
    ManifestEntry,
    SimConfig,
    SimulatedExperiment,
    SuiteManifest,
    SuitePreset,
)

__all__ = [
    "CONTROL",
    "TREATMENT",
    "SimConfig",
    "EffectDistribution",
    "SimulatedExperiment",
    "ManifestEntry",
    "SuiteManifest",
    "SuitePreset",
    "SUITE_PRESETS",
    "generate_experiment",
    "generate_suite",
    "generate_preset_suite",
    "resolve_suite",
]
