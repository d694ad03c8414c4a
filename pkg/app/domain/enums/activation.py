"""
Activation enumeration for dense network layers.
"""
from enum import Enum


class Activation(str, Enum):
    """Elementwise activation applied after a dense layer."""

    RELU = "relu"
    TANH = "tanh"
    IDENTITY = "identity"

    def __str__(self) -> str:
        return self.value
