"""
Binary Gumbel-Softmax edges.

Each edge is a two-class Gumbel-Softmax (present / absent). With two classes
the relaxed sample reduces to sigmoid((phi + L) / tau) where L is standard
logistic noise (the difference of two Gumbel draws). Hard samples binarize
the relaxed value at 1/2 and pass the relaxed gradient straight through.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from app.domain.exceptions import InvalidParameterError, ShapeMismatchError
from app.domain.learning.tiny_nn.tensor import Tensor2


def sigmoid(x: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + np.tanh(0.5 * x))


class EdgeLogits:
    """Per-edge logits phi of shape (inputs, outputs) plus the relaxation temperature."""

    def __init__(self, logits: Tensor2, temperature: float = 1.0):
        self.logits = logits
        self.temperature = temperature

    @classmethod
    def constant(cls, rows: int, cols: int, value: float = 0.0, temperature: float = 1.0) -> "EdgeLogits":
        return cls(Tensor2(np.full((rows, cols), value), name="edges.logits"), temperature)

    @property
    def temperature(self) -> float:
        return self._temperature

    @temperature.setter
    def temperature(self, value: float) -> None:
        if not value > 0.0:
            raise InvalidParameterError("temperature", value, "Gumbel-Softmax temperature must be > 0")
        self._temperature = float(value)

    @property
    def shape(self):
        return self.logits.shape

    def probabilities(self) -> np.ndarray:
        """Noise-free edge probabilities sigmoid(phi)."""
        return sigmoid(self.logits.data)


@dataclass(frozen=True)
class EdgeSample:
    """One draw of the edge matrix and what backward() needs."""

    values: np.ndarray    # edges used in the forward pass (soft or binary)
    relaxed: np.ndarray   # sigmoid((phi + noise) / tau)
    temperature: float


def logistic_noise(shape, rng: np.random.Generator) -> np.ndarray:
    """Standard logistic draws log(u) - log(1 - u) with u in the open unit interval."""
    u = rng.uniform(np.finfo(np.float64).tiny, 1.0, size=shape)
    return np.log(u) - np.log1p(-u)


def gumbel_softmax_edge(
    edges: EdgeLogits,
    rng: Optional[np.random.Generator],
    hard: bool = False,
    noise: Optional[np.ndarray] = None,
) -> EdgeSample:
    """
    Sample a relaxed (hard=False) or straight-through binary (hard=True) edge matrix.

    Args:
        edges: logits and temperature
        rng: generator for the logistic noise (unused when noise is given)
        hard: binarize at 1/2 in the forward pass
        noise: optional fixed logistic noise of the logits' shape
    """
    phi = edges.logits.data
    if noise is None:
        noise = logistic_noise(phi.shape, rng)
    elif noise.shape != phi.shape:
        raise ShapeMismatchError("edge noise", phi.shape, noise.shape)
    relaxed = sigmoid((phi + noise) / edges.temperature)
    values = (relaxed > 0.5).astype(np.float64) if hard else relaxed
    return EdgeSample(values=values, relaxed=relaxed, temperature=edges.temperature)


def edge_backward(edges: EdgeLogits, sample: EdgeSample, grad_values: np.ndarray) -> None:
    """Accumulate d loss / d phi through the relaxed sample (straight-through for hard samples)."""
    if grad_values.shape != sample.relaxed.shape:
        raise ShapeMismatchError("edge gradient", sample.relaxed.shape, grad_values.shape)
    local = sample.relaxed * (1.0 - sample.relaxed) / sample.temperature
    edges.logits.accumulate(grad_values * local)
