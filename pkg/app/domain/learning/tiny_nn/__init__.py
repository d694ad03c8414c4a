"""Minimal differentiable core: dense nets, Gumbel-Softmax edges, optimizers."""

from app.domain.learning.tiny_nn.tensor import Tensor2, pack, unpack
from app.domain.learning.tiny_nn.dense_net import DenseLayer, DenseNet, backward, forward
from app.domain.learning.tiny_nn.gumbel import (
    EdgeLogits,
    EdgeSample,
    edge_backward,
    gumbel_softmax_edge,
    logistic_noise,
    sigmoid,
)
from app.domain.learning.tiny_nn.optim import Adam, AdamState, adam_step

__all__ = [
    "Tensor2",
    "pack",
    "unpack",
    "DenseLayer",
    "DenseNet",
    "forward",
    "backward",
    "EdgeLogits",
    "EdgeSample",
    "edge_backward",
    "gumbel_softmax_edge",
    "logistic_noise",
    "sigmoid",
    "Adam",
    "AdamState",
    "adam_step",
]
