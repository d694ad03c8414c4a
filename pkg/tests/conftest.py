"""Shared fixtures: seeded generators and random model factories."""
import numpy as np
import pytest

from app.domain.entities import FiniteMDP, SCMDPSpec


def make_random_mdp(rng: np.random.Generator, horizon: int, num_states: int, num_actions: int) -> FiniteMDP:
    transitions = rng.dirichlet(np.ones(num_states), size=(horizon, num_states, num_actions))
    rewards = rng.uniform(0.0, 1.0, size=(horizon, num_states, num_actions))
    return FiniteMDP(transitions, rewards)


def make_random_spec(
    rng: np.random.Generator, horizon: int, num_states: int, num_actions: int, confounder_size: int
) -> SCMDPSpec:
    kernels = rng.dirichlet(np.ones(num_states), size=(horizon, num_states, num_actions, confounder_size))
    confounder = rng.dirichlet(np.ones(confounder_size), size=horizon)
    rewards = rng.uniform(0.0, 1.0, size=(horizon, num_states, num_actions))
    return SCMDPSpec(kernels, confounder, rewards)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.Generator(np.random.Philox(20240601))


@pytest.fixture
def random_mdp(rng):
    def factory(horizon=4, num_states=3, num_actions=2):
        return make_random_mdp(rng, horizon, num_states, num_actions)

    return factory


@pytest.fixture
def random_spec(rng):
    def factory(horizon=3, num_states=3, num_actions=2, confounder_size=3):
        return make_random_spec(rng, horizon, num_states, num_actions, confounder_size)

    return factory


def tiny_train_document(**overrides) -> dict:
    """A train section small enough to finish in about a second."""
    document = {
        "env": {"env_name": "toy_lift", "horizon": 10},
        "total_steps": 60,
        "batch_size": 16,
        "beta": 50.0,
        "scm": {"position_dim": 2, "feature_dim": 3, "encoder_hidden": [4], "decoder_hidden": [4]},
        "sac": {"hidden": [8]},
        "buffer_capacity": 100,
        "start_steps": 20,
        "update_every": 10,
        "gradient_steps": 2,
        "eval_every": 30,
        "eval_episodes": 2,
    }
    document.update(overrides)
    return document


@pytest.fixture
def tiny_train():
    return tiny_train_document
