"""
Learning pipeline: causal transition model, augmentation, replay and the
soft actor-critic training loop. numpy only.
"""

from app.domain.learning.scm_model import SCMConfig, SCMLoss, SCMModel, extract_graph, scm_forward, scm_loss
from app.domain.learning.augmentation import (
    AugmentedBatch,
    Augmenter,
    GaussianAugmenter,
    NoAugmenter,
    Permutation,
    RSCAugmenter,
    UniformAugmenter,
    augment_batch,
    build_augmenter,
    permute_dimension,
    permute_states,
    select_records,
)
from app.domain.learning.replay_buffer import ReplayBuffer
from app.domain.learning.sac_agent import SACAgent, SACConfig, SACLosses
from app.domain.learning.rsc_trainer import (
    BetaSweepRow,
    EvalPoint,
    EvaluationResult,
    RSCTrainer,
    TrainConfig,
    TrainMetrics,
    evaluate_returns,
    spawn_streams,
    stream_generator,
    sweep_beta,
    train,
)

__all__ = [
    "SCMConfig",
    "SCMLoss",
    "SCMModel",
    "extract_graph",
    "scm_forward",
    "scm_loss",
    "AugmentedBatch",
    "Augmenter",
    "GaussianAugmenter",
    "NoAugmenter",
    "Permutation",
    "RSCAugmenter",
    "UniformAugmenter",
    "augment_batch",
    "build_augmenter",
    "permute_dimension",
    "permute_states",
    "select_records",
    "ReplayBuffer",
    "SACAgent",
    "SACConfig",
    "SACLosses",
    "BetaSweepRow",
    "EvalPoint",
    "EvaluationResult",
    "RSCTrainer",
    "TrainConfig",
    "TrainMetrics",
    "evaluate_returns",
    "spawn_streams",
    "stream_generator",
    "sweep_beta",
    "train",
]
