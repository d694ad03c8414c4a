"""Domain enums - framework-independent enumerations."""

from app.domain.enums.activation import Activation
from app.domain.enums.robust_mode import RobustMode
from app.domain.enums.augmenter_kind import AugmenterKind, LearnerKind
from app.domain.enums.environment import EnvName, EnvVariant

__all__ = [
    "Activation",
    "RobustMode",
    "AugmenterKind",
    "LearnerKind",
    "EnvName",
    "EnvVariant",
]
