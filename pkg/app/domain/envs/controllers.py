"""
Reference policies and episode rollouts for the toy environments.
"""
from typing import Callable, Optional

import numpy as np

from app.domain.envs.toy_env import ACTION_DIM, ToyEnv, ToyEnvConfig, target_of

Policy = Callable[[np.ndarray], np.ndarray]


class ScriptedController:
    """Moves straight at the reward-relevant target at full speed."""

    def __init__(self, config: ToyEnvConfig):
        self.config = config

    def __call__(self, observation: np.ndarray) -> np.ndarray:
        gap = target_of(self.config, observation) - observation[:2]
        return np.clip(gap / self.config.speed, -1.0, 1.0)


class RandomPolicy:
    """Uniform actions in [-1, 1]^2."""

    def __init__(self, rng: np.random.Generator):
        self.rng = rng

    def __call__(self, observation: np.ndarray) -> np.ndarray:
        return self.rng.uniform(-1.0, 1.0, size=ACTION_DIM)


def run_episode(env: ToyEnv, policy: Policy, rng: np.random.Generator, horizon: Optional[int] = None) -> float:
    """Undiscounted return of one episode."""
    observation = env.reset(rng)
    total = 0.0
    for _ in range(horizon or env.config.horizon):
        result = env.step(policy(observation))
        total += result.reward
        observation = result.observation
        if result.done:
            break
    return total


def episode_returns(config: ToyEnvConfig, policy: Policy, episodes: int, rng: np.random.Generator) -> np.ndarray:
    env = ToyEnv(config)
    return np.array([run_episode(env, policy, rng) for _ in range(episodes)])
