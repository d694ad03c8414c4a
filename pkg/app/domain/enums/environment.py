"""
Toy environment enumerations.

EnvName picks the spurious-correlation category, EnvVariant the confounder
conditional (training vs shifted test distribution).
"""
from enum import Enum


class EnvName(str, Enum):
    """Toy environment family."""

    TOY_LIFT = "toy_lift"        # distraction: irrelevant flag tied to goal side
    TOY_COMPOSE = "toy_compose"  # composition: two reward-relevant parts tied together

    def __str__(self) -> str:
        return self.value


class EnvVariant(str, Enum):
    """Confounder conditional in force."""

    NOMINAL = "nominal"
    SHIFTED = "shifted"

    def __str__(self) -> str:
        return self.value
