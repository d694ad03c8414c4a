"""
RSC training loop.

Per environment step: act, step the environment, append to the buffer. Every
`update_every` steps (after `start_steps`) run `gradient_steps` updates:

1. sample a batch from the buffer
2. perturb beta% of it (SCM regeneration, additive noise, or nothing)
3. fit the SCM on the untouched rows' true targets
4. update the soft actor-critic on the mixed batch

During the first `warmup_fraction` of updates no perturbation is applied and,
when an SCM is being learned, only the SCM trains.
"""
import logging
import math
import time
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, Iterable, List, Optional, Sequence

import numpy as np

from app.domain.entities import TransitionRecord
from app.domain.enums import AugmenterKind, EnvVariant, LearnerKind
from app.domain.envs import ToyEnv, ToyEnvConfig, episode_returns
from app.domain.envs.controllers import Policy, RandomPolicy
from app.domain.exceptions import (
    InvalidParameterError,
    NonFiniteValueError,
    TrainingDivergedError,
)
from app.domain.learning.augmentation import build_augmenter
from app.domain.learning.replay_buffer import ReplayBuffer
from app.domain.learning.sac_agent import SACAgent, SACConfig
from app.domain.learning.scm_model import SCMConfig, SCMModel, extract_graph
from app.domain.learning.tiny_nn import Tensor2

logger = logging.getLogger(__name__)

STREAMS = ("env", "policy", "augment", "scm", "eval", "baseline")


def spawn_streams(seed: int) -> Dict[str, np.random.Generator]:
    """Independent counter-based generators per concern."""
    children = np.random.SeedSequence(seed).spawn(len(STREAMS))
    return {name: np.random.Generator(np.random.Philox(child)) for name, child in zip(STREAMS, children)}


def stream_generator(seed: int, name: str = "eval") -> np.random.Generator:
    """Fresh generator for one named stream; evaluation uses it so every evaluation point replays the same episodes."""
    child = np.random.SeedSequence(seed).spawn(len(STREAMS))[STREAMS.index(name)]
    return np.random.Generator(np.random.Philox(child))


@dataclass(frozen=True)
class TrainConfig:
    """
    One training run.

    scm and sac default to the desk-scale settings sized for the environment.
    noise_scale is the std (gaussian) or half-width (uniform) of the baselines.
    """

    env: ToyEnvConfig = field(default_factory=ToyEnvConfig)
    total_steps: int = 20_000
    batch_size: int = 128
    beta: float = 50.0
    learner: LearnerKind = LearnerKind.SAC_SMALL
    augmenter: AugmenterKind = AugmenterKind.RSC
    noise_scale: float = 0.1
    scm: Optional[SCMConfig] = None
    sac: Optional[SACConfig] = None
    buffer_capacity: int = 100_000
    n_step: int = 4
    start_steps: int = 500
    update_every: int = 10
    gradient_steps: int = 10
    warmup_fraction: float = 0.1
    eval_every: int = 2_000
    eval_episodes: int = 10
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "learner", LearnerKind(self.learner))
        object.__setattr__(self, "augmenter", AugmenterKind(self.augmenter))
        if not 0.0 <= self.beta <= 100.0:
            raise InvalidParameterError("beta", self.beta, "augmentation ratio must lie in [0, 100]")
        for name in ("total_steps", "batch_size", "buffer_capacity", "n_step", "update_every", "eval_every", "eval_episodes"):
            if getattr(self, name) < 1:
                raise InvalidParameterError(name, getattr(self, name), "must be >= 1")
        if self.start_steps < 0 or self.gradient_steps < 0:
            raise InvalidParameterError("start_steps", self.start_steps, "step counts must be >= 0")
        if not 0.0 <= self.warmup_fraction < 1.0:
            raise InvalidParameterError("warmup_fraction", self.warmup_fraction, "must lie in [0, 1)")
        if self.noise_scale < 0.0:
            raise InvalidParameterError("noise_scale", self.noise_scale, "must be >= 0")

    def scm_config(self) -> SCMConfig:
        return self.scm or SCMConfig(state_dim=ToyEnv.observation_dim, action_dim=ToyEnv.action_dim)

    def sac_config(self) -> SACConfig:
        return self.sac or SACConfig(state_dim=ToyEnv.observation_dim, action_dim=ToyEnv.action_dim)

    def planned_updates(self) -> int:
        """Total gradient updates the schedule will run."""
        first = max(self.start_steps, 1)
        rounds = self.total_steps // self.update_every - (first - 1) // self.update_every
        return max(rounds, 0) * self.gradient_steps


@dataclass(frozen=True)
class EvalPoint:
    """Frozen-policy returns at one step, plus SCM diagnostics since the previous point."""

    step: int
    nominal_return: float
    shifted_return: float
    scm_loss: float
    graph_density: float

    def to_row(self) -> Dict:
        return {
            "step": self.step,
            "nominal_return": self.nominal_return,
            "shifted_return": self.shifted_return,
            "scm_loss": self.scm_loss,
            "graph_density": self.graph_density,
        }


@dataclass
class TrainMetrics:
    eval_points: List[EvalPoint] = field(default_factory=list)
    updates: int = 0
    wall_clock: float = field(default=0.0, compare=False)

    @property
    def final(self) -> Optional[EvalPoint]:
        return self.eval_points[-1] if self.eval_points else None


@dataclass(frozen=True)
class EvaluationResult:
    mean: float
    std: float
    episodes: int
    normalized_mean: Optional[float] = None
    normalized_std: Optional[float] = None

    def to_dict(self) -> Dict:
        return {
            "mean": self.mean,
            "std": self.std,
            "episodes": self.episodes,
            "normalized_mean": self.normalized_mean,
            "normalized_std": self.normalized_std,
        }


def evaluate_returns(
    policy: Policy,
    env_config: ToyEnvConfig,
    episodes: int,
    rng: np.random.Generator,
    reference: Optional[float] = None,
) -> EvaluationResult:
    """
    Mean and std of episode returns; normalized by reference when given.

    Raises:
        InvalidParameterError: If episodes < 1 or reference <= 0
    """
    if episodes < 1:
        raise InvalidParameterError("episodes", episodes, "must be >= 1")
    if reference is not None and not reference > 0.0:
        raise InvalidParameterError("reference", reference, "normalizing return must be > 0")
    returns = episode_returns(env_config, policy, episodes, rng)
    mean, std = float(returns.mean()), float(returns.std())
    if reference is None:
        return EvaluationResult(mean, std, episodes)
    return EvaluationResult(mean, std, episodes, mean / reference, std / reference)


DivergenceHook = Callable[["RSCTrainer", int], Optional[str]]


class RSCTrainer:
    """
    Owns the environment, buffer, SCM and learner of one run.

    Rules:
    - Deterministic given TrainConfig (streams are spawned from config.seed)
    - The SCM only ever sees environment-generated targets
    - No SCM exists unless the augmenter is rsc
    """

    def __init__(self, config: TrainConfig, on_divergence: Optional[DivergenceHook] = None):
        self.config = config
        self.streams = spawn_streams(config.seed)
        self.env = ToyEnv(config.env.with_variant(EnvVariant.NOMINAL))
        sac = config.sac_config()
        self.buffer = ReplayBuffer(config.buffer_capacity, ToyEnv.observation_dim, ToyEnv.action_dim, config.n_step, sac.gamma)
        self.agent: Optional[SACAgent] = (
            SACAgent(sac, self.streams["policy"]) if config.learner is LearnerKind.SAC_SMALL else None
        )
        self.scm: Optional[SCMModel] = (
            SCMModel(config.scm_config(), self.streams["scm"]) if config.augmenter is AugmenterKind.RSC else None
        )
        self.augmenter = build_augmenter(config.augmenter, config.beta, config.noise_scale)
        self.warmup_updates = int(math.floor(config.warmup_fraction * config.planned_updates()))
        self.on_divergence = on_divergence
        self.updates = 0
        self.step = 0
        self._scm_losses: List[float] = []

    # ==================== Policies ====================

    def policy(self) -> Policy:
        """Frozen evaluation policy (deterministic actor, or uniform random without a learner)."""
        if self.agent is None:
            return RandomPolicy(stream_generator(self.config.seed, "baseline"))
        agent = self.agent
        return lambda observation: agent.act(observation, deterministic=True)

    def _explore(self, observation: np.ndarray) -> np.ndarray:
        rng = self.streams["policy"]
        if self.agent is None or self.step <= self.config.start_steps:
            return rng.uniform(-1.0, 1.0, size=ToyEnv.action_dim)
        return self.agent.act(observation, rng)

    # ==================== Updates ====================

    def _update(self) -> None:
        c = self.config
        batch = self.buffer.sample(c.batch_size, self.streams["policy"])
        warmed_up = self.updates >= self.warmup_updates
        if warmed_up:
            augmented = self.augmenter.apply(batch, self.streams["augment"], self.scm)
        else:
            augmented = build_augmenter(AugmenterKind.NONE, 0.0).apply(batch, self.streams["augment"])

        if self.scm is not None:
            untouched = augmented.untouched
            clean = batch.subset(untouched) if len(untouched) else batch
            loss = self.scm.fit_batch(clean, self.streams["scm"])
            self._scm_losses.append(loss.total)

        if self.agent is not None and (warmed_up or self.scm is None):
            self.agent.update(augmented.batch, self.streams["policy"])
        self.updates += 1

    def _evaluate(self) -> EvalPoint:
        c = self.config
        policy = self.policy()
        nominal = evaluate_returns(policy, c.env.with_variant(EnvVariant.NOMINAL), c.eval_episodes, stream_generator(c.seed))
        policy = self.policy()
        shifted = evaluate_returns(policy, c.env.with_variant(EnvVariant.SHIFTED), c.eval_episodes, stream_generator(c.seed))
        scm_loss = float(np.mean(self._scm_losses)) if self._scm_losses else float("nan")
        density = float(extract_graph(self.scm).mean()) if self.scm is not None else float("nan")
        self._scm_losses = []
        point = EvalPoint(self.step, nominal.mean, shifted.mean, scm_loss, density)
        logger.info("Evaluation", extra={"extra": point.to_row()})
        return point

    def named_parameters(self) -> Dict[str, Tensor2]:
        params: Dict[str, Tensor2] = {}
        if self.agent is not None:
            params.update(self.agent.named_parameters())
        if self.scm is not None:
            params.update({f"scm.{name}": tensor for name, tensor in self.scm.named_parameters().items()})
        return params

    # ==================== Loop ====================

    def train(self) -> TrainMetrics:
        """
        Run the full schedule.

        Raises:
            TrainingDivergedError: If a loss or network output becomes non-finite
        """
        c = self.config
        started = time.perf_counter()
        metrics = TrainMetrics()
        logger.info(
            "Training started",
            extra={"extra": {"augmenter": str(c.augmenter), "beta": c.beta, "env": str(c.env.env_name), "seed": c.seed}},
        )
        observation = self.env.reset(self.streams["env"])
        for self.step in range(1, c.total_steps + 1):
            action = self._explore(observation)
            result = self.env.step(action)
            self.buffer.add(TransitionRecord(observation, action, result.reward, result.observation, result.done))
            observation = self.env.reset(self.streams["env"]) if result.done else result.observation

            if self.step >= c.start_steps and self.step % c.update_every == 0:
                try:
                    for _ in range(c.gradient_steps):
                        self._update()
                except NonFiniteValueError as error:
                    checkpoint = self.on_divergence(self, self.step) if self.on_divergence else None
                    logger.error(
                        "Training diverged",
                        extra={"extra": {"step": self.step, "where": error.where, "checkpoint": checkpoint}},
                    )
                    raise TrainingDivergedError(self.step, error.where, checkpoint) from error

            if self.step % c.eval_every == 0 or self.step == c.total_steps:
                metrics.eval_points.append(self._evaluate())

        metrics.updates = self.updates
        metrics.wall_clock = time.perf_counter() - started
        logger.info("Training finished", extra={"extra": {"updates": self.updates, "seconds": metrics.wall_clock}})
        return metrics


def train(config: TrainConfig, on_divergence: Optional[DivergenceHook] = None) -> TrainMetrics:
    return RSCTrainer(config, on_divergence).train()


@dataclass(frozen=True)
class BetaSweepRow:
    beta: float
    nominal_return: float
    shifted_return: float
    nominal_std: float
    shifted_std: float
    seeds: int

    def to_dict(self) -> Dict:
        return {
            "beta": self.beta,
            "nominal_return": self.nominal_return,
            "shifted_return": self.shifted_return,
            "nominal_std": self.nominal_std,
            "shifted_std": self.shifted_std,
            "seeds": self.seeds,
        }


def final_returns(metrics: TrainMetrics) -> Sequence[float]:
    point = metrics.final
    return (point.nominal_return, point.shifted_return) if point else (float("nan"), float("nan"))


def sweep_beta(
    config: TrainConfig,
    betas: Iterable[float],
    seeds: Sequence[int] = (0,),
    runner: Optional[Callable[[Callable, List[TrainConfig]], Iterable[TrainMetrics]]] = None,
) -> List[BetaSweepRow]:
    """
    Train once per (beta, seed) and aggregate final returns per beta.

    runner maps train over a list of configs (e.g. a process pool's map);
    the default runs sequentially.
    """
    betas = [float(b) for b in betas]
    jobs = [replace(config, beta=beta, seed=seed) for beta in betas for seed in seeds]
    mapper = runner or (lambda fn, items: map(fn, items))
    results = list(mapper(train, jobs))
    rows = []
    for index, beta in enumerate(betas):
        chunk = results[index * len(seeds):(index + 1) * len(seeds)]
        finals = np.array([final_returns(m) for m in chunk])
        rows.append(
            BetaSweepRow(
                beta=beta,
                nominal_return=float(finals[:, 0].mean()),
                shifted_return=float(finals[:, 1].mean()),
                nominal_std=float(finals[:, 0].std()),
                shifted_std=float(finals[:, 1].std()),
                seeds=len(seeds),
            )
        )
        logger.info("Sweep point", extra={"extra": rows[-1].to_dict()})
    return rows
