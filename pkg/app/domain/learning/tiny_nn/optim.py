"""
First-order optimizers over Tensor2 parameters.
"""
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from app.domain.exceptions import InvalidParameterError
from app.domain.learning.tiny_nn.tensor import Tensor2
from app.domain.validators import DistributionValidator


@dataclass
class AdamState:
    """First and second moment estimates for one parameter array."""

    m: np.ndarray
    v: np.ndarray
    step: int = 0

    @classmethod
    def zeros_like(cls, params: np.ndarray) -> "AdamState":
        return cls(np.zeros_like(params), np.zeros_like(params), 0)


def adam_step(
    params: np.ndarray,
    grads: np.ndarray,
    state: AdamState,
    lr: float,
    betas: Tuple[float, float] = (0.9, 0.999),
    eps: float = 1e-8,
) -> np.ndarray:
    """
    One bias-corrected Adam update. Returns new parameters; state is advanced in place.

    Raises:
        NonFiniteValueError: If the gradient contains NaN/Inf
    """
    DistributionValidator.ensure_finite(grads, "adam gradient")
    beta1, beta2 = betas
    state.step += 1
    state.m = beta1 * state.m + (1.0 - beta1) * grads
    state.v = beta2 * state.v + (1.0 - beta2) * grads * grads
    m_hat = state.m / (1.0 - beta1 ** state.step)
    v_hat = state.v / (1.0 - beta2 ** state.step)
    return params - lr * m_hat / (np.sqrt(v_hat) + eps)


def _check_rate(lr: float) -> float:
    if not lr >= 0.0:
        raise InvalidParameterError("lr", lr, "learning rate must be >= 0")
    return float(lr)


class Adam:
    """Adam over a fixed list of parameters; gradients are read from Tensor2.grad."""

    def __init__(
        self,
        parameters: Sequence[Tensor2],
        lr: float = 3e-4,
        betas: Tuple[float, float] = (0.9, 0.999),
        eps: float = 1e-8,
    ):
        self.parameters: List[Tensor2] = list(parameters)
        self.lr = _check_rate(lr)
        self.betas = betas
        self.eps = eps
        self.states = [AdamState.zeros_like(p.data) for p in self.parameters]

    def step(self) -> None:
        for param, state in zip(self.parameters, self.states):
            param.data[...] = adam_step(param.data, param.grad, state, self.lr, self.betas, self.eps)

    def zero_grad(self) -> None:
        for param in self.parameters:
            param.zero_grad()
