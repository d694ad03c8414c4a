"""
Dense layers and feed-forward networks with hand-written reverse mode.

A layer caches its last input and pre-activation during forward(); backward()
consumes the cache, accumulates parameter gradients and returns the gradient
with respect to the layer input.
"""
from typing import Dict, List, Optional, Sequence

import numpy as np

from app.domain.enums import Activation
from app.domain.exceptions import BackwardBeforeForwardError, ShapeMismatchError
from app.domain.learning.tiny_nn.tensor import Tensor2
from app.domain.validators import DistributionValidator


def _activate(kind: Activation, z: np.ndarray) -> np.ndarray:
    if kind is Activation.RELU:
        return np.maximum(z, 0.0)
    if kind is Activation.TANH:
        return np.tanh(z)
    return z


def _activation_grad(kind: Activation, z: np.ndarray, out: np.ndarray) -> np.ndarray:
    if kind is Activation.RELU:
        return (z > 0.0).astype(np.float64)
    if kind is Activation.TANH:
        return 1.0 - out * out
    return np.ones_like(z)


class DenseLayer:
    """y = act(x W + b) with W of shape (in, out) and b of shape (1, out)."""

    def __init__(self, weight: Tensor2, bias: Tensor2, activation: Activation = Activation.IDENTITY):
        if bias.shape != (1, weight.cols):
            raise ShapeMismatchError("bias", (1, weight.cols), bias.shape)
        self.weight = weight
        self.bias = bias
        self.activation = Activation(activation)
        self._inputs: Optional[np.ndarray] = None
        self._pre: Optional[np.ndarray] = None
        self._out: Optional[np.ndarray] = None

    @classmethod
    def glorot(cls, fan_in: int, fan_out: int, activation: Activation, rng: np.random.Generator, name: str) -> "DenseLayer":
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        weight = Tensor2(rng.uniform(-limit, limit, size=(fan_in, fan_out)), name=f"{name}.weight")
        bias = Tensor2(np.zeros((1, fan_out)), name=f"{name}.bias")
        return cls(weight, bias, activation)

    @property
    def in_features(self) -> int:
        return self.weight.rows

    @property
    def out_features(self) -> int:
        return self.weight.cols

    def forward(self, inputs: np.ndarray) -> np.ndarray:
        if inputs.ndim != 2 or inputs.shape[1] != self.in_features:
            raise ShapeMismatchError("layer input", f"(batch, {self.in_features})", inputs.shape)
        pre = inputs @ self.weight.data + self.bias.data
        out = _activate(self.activation, pre)
        self._inputs, self._pre, self._out = inputs, pre, out
        return out

    def backward(self, grad_out: np.ndarray) -> np.ndarray:
        if self._inputs is None:
            raise BackwardBeforeForwardError(self.weight.name)
        if grad_out.shape != self._out.shape:
            raise ShapeMismatchError("layer output gradient", self._out.shape, grad_out.shape)
        grad_pre = grad_out * _activation_grad(self.activation, self._pre, self._out)
        self.weight.accumulate(self._inputs.T @ grad_pre)
        self.bias.accumulate(grad_pre.sum(axis=0, keepdims=True))
        return grad_pre @ self.weight.data.T

    def parameters(self) -> List[Tensor2]:
        return [self.weight, self.bias]


class DenseNet:
    """
    Ordered stack of dense layers.

    Rules:
    - Consecutive layer shapes compose
    - Forward output is checked for NaN/Inf
    - A single instance is single-writer; use copy() for independent replicas
    """

    def __init__(self, layers: Sequence[DenseLayer], name: str = "net"):
        if not layers:
            raise ShapeMismatchError(name, "at least one layer", 0)
        for previous, current in zip(layers[:-1], layers[1:]):
            if previous.out_features != current.in_features:
                raise ShapeMismatchError(f"{name} layers", previous.out_features, current.in_features)
        self.layers = list(layers)
        self.name = name

    @classmethod
    def build(
        cls,
        sizes: Sequence[int],
        rng: np.random.Generator,
        hidden_activation: Activation = Activation.RELU,
        output_activation: Activation = Activation.IDENTITY,
        name: str = "net",
    ) -> "DenseNet":
        """Glorot-initialized MLP with layer widths sizes[0] -> ... -> sizes[-1]."""
        if len(sizes) < 2 or min(sizes) < 1:
            raise ShapeMismatchError(name, "two or more positive widths", tuple(sizes))
        layers = []
        for index, (fan_in, fan_out) in enumerate(zip(sizes[:-1], sizes[1:])):
            last = index == len(sizes) - 2
            layers.append(
                DenseLayer.glorot(
                    fan_in, fan_out, output_activation if last else hidden_activation, rng, f"{name}.{index}"
                )
            )
        return cls(layers, name)

    @property
    def in_features(self) -> int:
        return self.layers[0].in_features

    @property
    def out_features(self) -> int:
        return self.layers[-1].out_features

    def forward(self, inputs) -> np.ndarray:
        x = np.asarray(inputs, dtype=np.float64)
        for layer in self.layers:
            x = layer.forward(x)
        DistributionValidator.ensure_finite(x, f"{self.name} output")
        return x

    def backward(self, grad_out: np.ndarray) -> np.ndarray:
        """Accumulate parameter gradients and return d loss / d input."""
        grad = np.asarray(grad_out, dtype=np.float64)
        for layer in reversed(self.layers):
            grad = layer.backward(grad)
        DistributionValidator.ensure_finite(grad, f"{self.name} input gradient")
        return grad

    def parameters(self) -> List[Tensor2]:
        return [p for layer in self.layers for p in layer.parameters()]

    def named_parameters(self) -> Dict[str, Tensor2]:
        return {p.name: p for p in self.parameters()}

    def zero_grad(self) -> None:
        for p in self.parameters():
            p.zero_grad()

    def copy(self) -> "DenseNet":
        layers = [DenseLayer(l.weight.copy(), l.bias.copy(), l.activation) for l in self.layers]
        return DenseNet(layers, self.name)

    def soft_update(self, source: "DenseNet", tau: float) -> None:
        """Polyak averaging: theta <- tau * source + (1 - tau) * theta."""
        for target, origin in zip(self.parameters(), source.parameters()):
            target.data *= 1.0 - tau
            target.data += tau * origin.data


def forward(net: DenseNet, inputs: Tensor2) -> Tensor2:
    """Run a network on a Tensor2 and wrap the result."""
    return Tensor2(net.forward(inputs.data), requires_grad=False, name=f"{net.name}.output")


def backward(net: DenseNet, grad_out: Tensor2) -> Tensor2:
    """Backpropagate a Tensor2 output gradient; returns the input gradient."""
    return Tensor2(net.backward(grad_out.data), requires_grad=False, name=f"{net.name}.input_grad")
