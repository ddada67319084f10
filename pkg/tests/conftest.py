"""Shared fixtures: seeded generators and small simulated experiments."""

import numpy as np
import pytest

from ratio_vr.simulation.generator import generate_experiment
from ratio_vr.simulation.schemas import SimConfig


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240501)


@pytest.fixture(scope="session")
def small_config() -> SimConfig:
    return SimConfig(n_users=2_000, n_features=4, seed=11)


@pytest.fixture(scope="session")
def aa_experiment(small_config):
    return generate_experiment(small_config, experiment_id="exp_aa")


@pytest.fixture(scope="session")
def ab_experiment(small_config):
    config = SimConfig.model_validate({**small_config.model_dump(), "effect": 0.1, "seed": 12})
    return generate_experiment(config, experiment_id="exp_ab")
