"""
Augmenter enumeration for the training loop.
"""
from enum import Enum


class AugmenterKind(str, Enum):
    """How a sampled batch is perturbed before the policy update."""

    NONE = "none"
    RSC = "rsc"            # dimension permutation + SCM regeneration
    GAUSSIAN = "gaussian"  # additive Gaussian noise on s_t
    UNIFORM = "uniform"    # additive uniform noise on s_t

    def __str__(self) -> str:
        return self.value


class LearnerKind(str, Enum):
    """Policy learner used by the training loop."""

    SAC_SMALL = "sac_small"
    NONE = "none"

    def __str__(self) -> str:
        return self.value
