"""
Point-mass environments with a hidden confounder.

Observation layout (both families): (px, py, gx, gy, z)

- toy_lift: z = d in {-1, +1} is a flag that never moves and never enters the
  reward. Under the nominal variant the flag is tied to the goal side.
- toy_compose: z = h in {-0.5, +0.5} shifts the target height, so the target
  is (gx, gy + h). Under the nominal variant h is tied to the goal side.

The variant only changes which value the coupled coin assigns to z; dynamics
and reward are shared code.
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from app.domain.enums import EnvName, EnvVariant
from app.domain.exceptions import InvalidHorizonError, InvalidParameterError, ShapeMismatchError

logger = logging.getLogger(__name__)

OBSERVATION_DIM = 5
ACTION_DIM = 2
POSITION_BOUND = 1.0
GOAL_BOUND = 0.8
COMPOSE_GOAL_HEIGHT = 0.4
COMPOSE_OFFSET = 0.5


@dataclass(frozen=True)
class ToyEnvConfig:
    """
    Environment selection and parameters.

    speed: displacement per unit action; reward_radius: distance at which the
    reward reaches zero.
    """

    env_name: EnvName = EnvName.TOY_LIFT
    variant: EnvVariant = EnvVariant.NOMINAL
    horizon: int = 50
    seed: int = 0
    correlation_strength: float = 1.0
    speed: float = 0.25
    reward_radius: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "env_name", EnvName(self.env_name))
        object.__setattr__(self, "variant", EnvVariant(self.variant))
        if self.horizon < 1:
            raise InvalidHorizonError(self.horizon, 1)
        if not 0.0 <= self.correlation_strength <= 1.0:
            raise InvalidParameterError("correlation_strength", self.correlation_strength, "must lie in [0, 1]")
        if not self.speed > 0.0:
            raise InvalidParameterError("speed", self.speed, "must be > 0")
        if not self.reward_radius > 0.0:
            raise InvalidParameterError("reward_radius", self.reward_radius, "must be > 0")

    def with_variant(self, variant: EnvVariant) -> "ToyEnvConfig":
        return ToyEnvConfig(
            self.env_name, variant, self.horizon, self.seed, self.correlation_strength, self.speed, self.reward_radius
        )


@dataclass(frozen=True)
class EnvStep:
    observation: np.ndarray
    reward: float
    done: bool


def target_of(config: ToyEnvConfig, state: np.ndarray) -> np.ndarray:
    """Reward-relevant target position encoded in an observation."""
    target = state[2:4].copy()
    if config.env_name is EnvName.TOY_COMPOSE:
        target[1] += state[4]
    return target


def reset(config: ToyEnvConfig, rng: np.random.Generator) -> np.ndarray:
    """
    Sample an initial observation.

    Draw order is fixed (position, goal, coupling coin, fair coin) and shared by
    both variants, so matched seeds give matched positions and goals.
    """
    position = rng.uniform(-POSITION_BOUND, POSITION_BOUND, size=2)
    goal_height = COMPOSE_GOAL_HEIGHT if config.env_name is EnvName.TOY_COMPOSE else GOAL_BOUND
    goal = np.array([rng.uniform(-GOAL_BOUND, GOAL_BOUND), rng.uniform(-goal_height, goal_height)])
    coupled = rng.uniform() < config.correlation_strength
    fair = 1.0 if rng.uniform() < 0.5 else -1.0

    if coupled:
        left = goal[0] < 0.0
        positive = left if config.variant is EnvVariant.NOMINAL else not left
        sign = 1.0 if positive else -1.0
    else:
        sign = fair
    magnitude = COMPOSE_OFFSET if config.env_name is EnvName.TOY_COMPOSE else 1.0
    return np.concatenate([position, goal, [sign * magnitude]])


def step(config: ToyEnvConfig, state: np.ndarray, action: np.ndarray) -> EnvStep:
    """
    Deterministic transition; out-of-range actions are clipped.

    The returned done flag is always False; ToyEnv applies the horizon.
    """
    state = np.asarray(state, dtype=np.float64)
    if state.shape != (OBSERVATION_DIM,):
        raise ShapeMismatchError("toy state", (OBSERVATION_DIM,), state.shape)
    action = np.clip(np.asarray(action, dtype=np.float64).reshape(ACTION_DIM), -1.0, 1.0)
    following = state.copy()
    following[:2] = np.clip(state[:2] + config.speed * action, -POSITION_BOUND, POSITION_BOUND)
    distance = float(np.linalg.norm(following[:2] - target_of(config, following)))
    reward = float(np.clip(1.0 - distance / config.reward_radius, 0.0, 1.0))
    return EnvStep(following, reward, False)


class ToyEnv:
    """
    Episodic wrapper with a horizon.

    Rules:
    - step() before reset() is rejected
    - the episode ends after exactly `horizon` steps
    """

    observation_dim = OBSERVATION_DIM
    action_dim = ACTION_DIM

    def __init__(self, config: ToyEnvConfig):
        self.config = config
        self._state: Optional[np.ndarray] = None
        self._t = 0

    def reset(self, rng: np.random.Generator) -> np.ndarray:
        self._state = reset(self.config, rng)
        self._t = 0
        return self._state.copy()

    def step(self, action: np.ndarray) -> EnvStep:
        if self._state is None:
            raise InvalidParameterError("state", None, "call reset() before step()")
        result = step(self.config, self._state, action)
        self._t += 1
        done = self._t >= self.config.horizon
        self._state = None if done else result.observation
        return EnvStep(result.observation.copy(), result.reward, done)
