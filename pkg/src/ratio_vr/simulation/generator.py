"""Synthetic retention experiments with correlated pre/post behaviour.

Per user:
  1. Draw a latent propensity z and a pre-period latent correlated with it.
  2. Simulate daily activity as a two-state chain: an active user returns
     the next day with the retention probability, an inactive one with
     ``return_rate`` times it.  The experiment window uses the treatment-
     shifted probability, clamped to [0.01, 0.99].
  3. Reduce activity to one-day retention components for both periods
     (the pre-period series extended by ``pre_overlap_days`` experiment
     days); users with no eligible experiment day are dropped.
  4. Derive pre-experiment features from z (signal) and pure noise.
Assignment is a seeded random permutation of an equal control/treatment
split, drawn independently of every latent.
"""

from __future__ import annotations

import logging

import numpy as np
from scipy import special

from ratio_vr.io.table import UnitTable
from ratio_vr.ratio.retention import retention_counts
from ratio_vr.simulation.schemas import (
    CONTROL,
    TREATMENT,
    EffectDistribution,
    SimConfig,
    SimulatedExperiment,
)

logger = logging.getLogger(__name__)

_PROB_FLOOR = 0.01
_PROB_CEIL = 0.99


def _simulate_activity(
    rng: np.random.Generator,
    p_first: np.ndarray,
    p_retain: np.ndarray,
    return_rate: float,
    days: int,
) -> np.ndarray:
    n = p_first.shape[0]
    active = np.empty((n, days), dtype=bool)
    active[:, 0] = rng.random(n) < p_first
    p_return = return_rate * p_retain
    for d in range(1, days):
        prob = np.where(active[:, d - 1], p_retain, p_return)
        active[:, d] = rng.random(n) < prob
    return active


def _signal_feature(j: int, z: np.ndarray) -> np.ndarray:
    """The j-th monotone (non-decreasing) transform of the latent."""
    kind = j % 4
    shift = 0.5 * (j // 4)
    if kind == 0:
        return np.tanh(z - shift)
    if kind == 1:
        return (z > 0.5 - shift).astype(float)
    if kind == 2:
        return np.exp(0.5 * (z - shift))
    return np.logaddexp(0.0, 2.0 * (z - shift))


def _features(rng: np.random.Generator, z: np.ndarray, config: SimConfig) -> np.ndarray:
    n = z.shape[0]
    n_signal = int(round(config.feature_signal_fraction * config.n_features))
    columns = []
    for j in range(config.n_features):
        if j < n_signal:
            columns.append(_signal_feature(j, z) + config.feature_noise * rng.standard_normal(n))
        else:
            columns.append(rng.standard_normal(n))
    return np.column_stack(columns) if columns else np.zeros((n, 0))


def generate_experiment(config: SimConfig, experiment_id: str = "exp_0000") -> SimulatedExperiment:
    """Generate one experiment; identical output for identical *config*."""
    rng = np.random.default_rng(config.seed)
    n = 2 * config.n_users
    rho = config.pre_post_correlation
    het = config.user_heterogeneity

    z = rng.standard_normal(n)
    z_pre = rho * z + np.sqrt(1.0 - rho * rho) * rng.standard_normal(n)
    variants = rng.permutation(np.repeat(np.array([CONTROL, TREATMENT]), config.n_users))
    treated = variants == TREATMENT

    logit_retention = special.logit(config.base_retention)
    logit_activity = special.logit(config.base_activity)

    p_pre = np.clip(special.expit(logit_retention + het * z_pre), _PROB_FLOOR, _PROB_CEIL)
    active_pre = _simulate_activity(
        rng,
        special.expit(logit_activity + het * z_pre),
        p_pre,
        config.return_rate,
        config.pre_days,
    )

    p_exp = special.expit(logit_retention + het * z) + config.effect * treated
    clamped = int(np.count_nonzero((p_exp < _PROB_FLOOR) | (p_exp > _PROB_CEIL)))
    if clamped:
        logger.warning(
            "%s: clamped %d of %d retention probabilities to [%.2f, %.2f]",
            experiment_id, clamped, n, _PROB_FLOOR, _PROB_CEIL,
        )
    p_exp = np.clip(p_exp, _PROB_FLOOR, _PROB_CEIL)
    active = _simulate_activity(
        rng,
        special.expit(logit_activity + het * z),
        p_exp,
        config.return_rate,
        config.window_days,
    )
    num, den = retention_counts(active)
    if config.pre_overlap_days:
        active_pre = np.concatenate([active_pre, active[:, : config.pre_overlap_days]], axis=1)
    pre_num, pre_den = retention_counts(active_pre)

    features = _features(rng, z, config)
    new_user = rng.random(n) < config.new_user_fraction

    keep = den > 0
    pre_num_f = np.where(new_user, np.nan, pre_num.astype(float))
    pre_den_f = np.where(new_user, np.nan, pre_den.astype(float))
    units = UnitTable.from_columns(
        unit_ids=np.array([f"u{i:07d}" for i in range(n)])[keep],
        variants=variants[keep],
        numerator=num[keep].astype(float),
        denominator=den[keep].astype(float),
        pre_numerator=pre_num_f[keep],
        pre_denominator=pre_den_f[keep],
        features=features[keep],
    )
    logger.debug("%s: %d of %d users active in the window", experiment_id, len(units), n)
    return SimulatedExperiment(
        experiment_id=experiment_id,
        units=units,
        effect=config.effect,
        seed=config.seed,
        clamped=clamped,
        config=config,
    )


def generate_suite(
    n_experiments: int,
    template: SimConfig,
    effects: EffectDistribution | None = None,
    seed: int = 0,
) -> list[SimulatedExperiment]:
    """Independent experiments with seeds and effects derived from *seed*.

    Raises:
        ValueError: If ``n_experiments < 1`` or a drawn effect makes the
            config invalid.
    """
    if n_experiments < 1:
        raise ValueError(f"n_experiments must be >= 1, got {n_experiments}")
    dist = effects or EffectDistribution()
    children = np.random.SeedSequence(seed).spawn(n_experiments + 1)
    drawn = dist.draw(np.random.default_rng(children[0]), n_experiments)
    suite = []
    for i in range(n_experiments):
        experiment_seed = int(children[i + 1].generate_state(1)[0])
        config = SimConfig.model_validate(
            {**template.model_dump(), "effect": float(drawn[i]), "seed": experiment_seed}
        )
        suite.append(generate_experiment(config, experiment_id=f"exp_{i:04d}"))
    return suite
