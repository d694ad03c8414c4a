"""Toy spurious-correlation environments."""

from app.domain.envs.toy_env import (
    ACTION_DIM,
    OBSERVATION_DIM,
    EnvStep,
    ToyEnv,
    ToyEnvConfig,
    reset,
    step,
    target_of,
)
from app.domain.envs.controllers import RandomPolicy, ScriptedController, episode_returns, run_episode

__all__ = [
    "ACTION_DIM",
    "OBSERVATION_DIM",
    "EnvStep",
    "ToyEnv",
    "ToyEnvConfig",
    "reset",
    "step",
    "target_of",
    "RandomPolicy",
    "ScriptedController",
    "episode_returns",
    "run_episode",
]
