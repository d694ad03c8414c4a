"""
Experiment configuration documents.

Format validation only: pydantic checks types, ranges and unknown keys before
any work starts. Each section converts into its frozen domain config through
to_domain(), so the domain layer never sees pydantic.
"""
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from app.domain.enums import Activation, AugmenterKind, EnvName, EnvVariant, LearnerKind, RobustMode
from app.domain.envs import ToyEnv, ToyEnvConfig
from app.domain.exceptions import ConfigurationError
from app.domain.learning import SACConfig, SCMConfig, TrainConfig


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class SolverSection(_Section):
    """Quick solve of a tabular model file."""
    model_path: str = Field(..., description="FiniteMDP or SC-MDP JSON document")
    sigma: float = Field(..., ge=0.0, le=1.0, description="Uncertainty radius")
    robust: RobustMode = Field(RobustMode.RSC, description="Backup to run")
    state: int = Field(0, ge=0, description="Initial state index reported in the summary line")


class Theorem2Section(_Section):
    """Separation check on the hard instance."""
    horizon: int = Field(10, ge=2)
    sigma1: float = Field(0.3, ge=0.0, le=1.0)
    sigma2: float = Field(1.0, gt=0.5, le=1.0)
    grid: bool = False
    horizons: List[int] = Field(default_factory=list, description="Extra horizons swept with grid")

    @field_validator("horizons")
    @classmethod
    def _horizons_at_least_two(cls, value: List[int]) -> List[int]:
        if any(h < 2 for h in value):
            raise ValueError("every horizon must be >= 2")
        return value


class EnvSection(_Section):
    env_name: EnvName = Field(..., description="toy_lift or toy_compose")
    variant: EnvVariant = EnvVariant.NOMINAL
    horizon: int = Field(50, ge=1)
    correlation_strength: float = Field(1.0, ge=0.0, le=1.0)
    speed: float = Field(0.25, gt=0.0)
    reward_radius: float = Field(0.5, gt=0.0)

    def to_domain(self, seed: int = 0) -> ToyEnvConfig:
        return ToyEnvConfig(
            env_name=self.env_name,
            variant=self.variant,
            horizon=self.horizon,
            seed=seed,
            correlation_strength=self.correlation_strength,
            speed=self.speed,
            reward_radius=self.reward_radius,
        )


class SCMSection(_Section):
    position_dim: int = Field(8, ge=1)
    feature_dim: int = Field(16, ge=1)
    encoder_hidden: List[int] = Field(default_factory=lambda: [64, 64])
    decoder_hidden: List[int] = Field(default_factory=lambda: [64, 64])
    sparsity_weight: float = Field(0.01, ge=0.0)
    norm_exponent: float = Field(0.1, gt=0.0, le=2.0)
    smoothing: float = Field(1e-6, ge=0.0)
    temperature: float = Field(1.0, gt=0.0)
    min_temperature: float = Field(0.1, gt=0.0)
    temperature_decay: float = Field(1.0, gt=0.0, le=1.0)
    initial_logit: float = 1.0
    threshold: float = Field(0.5, gt=0.0, lt=1.0)
    learning_rate: float = Field(1e-3, gt=0.0)
    hidden_activation: Activation = Activation.RELU

    def to_domain(self, state_dim: int, action_dim: int) -> SCMConfig:
        return SCMConfig(state_dim=state_dim, action_dim=action_dim, **self.model_dump())


class SACSection(_Section):
    hidden: List[int] = Field(default_factory=lambda: [64, 64])
    gamma: float = Field(0.99, gt=0.0, lt=1.0)
    tau: float = Field(0.005, gt=0.0, le=1.0)
    alpha: float = Field(0.1, ge=0.0)
    actor_lr: float = Field(3e-4, gt=0.0)
    critic_lr: float = Field(3e-4, gt=0.0)
    log_std_min: float = -5.0
    log_std_max: float = 2.0
    hidden_activation: Activation = Activation.RELU

    def to_domain(self, state_dim: int, action_dim: int) -> SACConfig:
        return SACConfig(state_dim=state_dim, action_dim=action_dim, **self.model_dump())


class TrainSection(_Section):
    """One training run; the seed comes from the experiment."""
    env: EnvSection
    total_steps: int = Field(20_000, ge=1)
    batch_size: int = Field(128, ge=1)
    beta: float = Field(50.0, ge=0.0, le=100.0, description="Percentage of each batch augmented")
    learner: LearnerKind = LearnerKind.SAC_SMALL
    augmenter: AugmenterKind = AugmenterKind.RSC
    noise_scale: float = Field(0.1, ge=0.0)
    scm: SCMSection = Field(default_factory=SCMSection)
    sac: SACSection = Field(default_factory=SACSection)
    buffer_capacity: int = Field(100_000, ge=1)
    n_step: int = Field(4, ge=1)
    start_steps: int = Field(500, ge=0)
    update_every: int = Field(10, ge=1)
    gradient_steps: int = Field(10, ge=0)
    warmup_fraction: float = Field(0.1, ge=0.0, lt=1.0)
    eval_every: int = Field(2_000, ge=1)
    eval_episodes: int = Field(10, ge=1)

    def to_domain(self, seed: int) -> TrainConfig:
        state_dim, action_dim = ToyEnv.observation_dim, ToyEnv.action_dim
        return TrainConfig(
            env=self.env.to_domain(seed),
            total_steps=self.total_steps,
            batch_size=self.batch_size,
            beta=self.beta,
            learner=self.learner,
            augmenter=self.augmenter,
            noise_scale=self.noise_scale,
            scm=self.scm.to_domain(state_dim, action_dim),
            sac=self.sac.to_domain(state_dim, action_dim),
            buffer_capacity=self.buffer_capacity,
            n_step=self.n_step,
            start_steps=self.start_steps,
            update_every=self.update_every,
            gradient_steps=self.gradient_steps,
            warmup_fraction=self.warmup_fraction,
            eval_every=self.eval_every,
            eval_episodes=self.eval_episodes,
            seed=seed,
        )


class SweepSection(_Section):
    """
    Seeds are offsets added to the experiment seed, so overriding the global
    seed shifts every run of a sweep together.
    """
    betas: List[float] = Field(default_factory=lambda: [1.0, 20.0, 50.0, 70.0, 95.0])
    seeds: List[int] = Field(default_factory=lambda: [0, 1, 2, 3, 4], min_length=1)
    augmenters: List[AugmenterKind] = Field(
        default_factory=lambda: [AugmenterKind.NONE, AugmenterKind.GAUSSIAN, AugmenterKind.UNIFORM, AugmenterKind.RSC]
    )
    workers: Optional[int] = Field(None, ge=1, description="Process count; falls back to RSC_WORKERS")

    @field_validator("betas")
    @classmethod
    def _betas_in_range(cls, value: List[float]) -> List[float]:
        if not value:
            raise ValueError("at least one beta is required")
        if any(not 0.0 <= beta <= 100.0 for beta in value):
            raise ValueError("every beta must lie in [0, 100]")
        return value

    @field_validator("seeds")
    @classmethod
    def _seeds_non_negative(cls, value: List[int]) -> List[int]:
        if any(seed < 0 for seed in value):
            raise ValueError("seeds must be >= 0")
        return value


class ExperimentConfig(_Section):
    """Top-level experiment document."""
    seed: int = Field(0, ge=0)
    output_dir: str = "runs"
    solver: Optional[SolverSection] = None
    theorem2: Optional[Theorem2Section] = None
    train: Optional[TrainSection] = None
    sweep: Optional[SweepSection] = None

    def require(self, section: str):
        """
        Return a section that the command needs.

        Raises:
            ConfigurationError: If the section is absent
        """
        value = getattr(self, section)
        if value is None:
            raise ConfigurationError(section, "section is required for this command")
        return value

    def with_overrides(self, seed: Optional[int] = None, output_dir: Optional[str] = None) -> "ExperimentConfig":
        update = {}
        if seed is not None:
            update["seed"] = seed
        if output_dir is not None:
            update["output_dir"] = output_dir
        return self.model_copy(update=update) if update else self

    def run_seeds(self) -> List[int]:
        offsets = self.sweep.seeds if self.sweep else [0]
        return [self.seed + offset for offset in offsets]
