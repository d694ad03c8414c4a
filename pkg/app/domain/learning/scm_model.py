"""
Structural causal transition model.

Every input dimension u_j of (s_t, a_t) is encoded by one shared encoder from
[u_j, pos_j] into a feature row f_e[j]. A sampled binary graph G mixes the
rows into output features f_d = f_e^T G, one column per output (n next-state
dimensions plus the reward). One shared decoder maps [f_d[:, k], pos_k] to
the scalar prediction for output k.

Training minimizes mean(||s' - s_hat||^2 + (r - r_hat)^2) plus a smoothed
quasi-norm penalty lambda * sum (g^2 + eps)^(p/2) on the edge probabilities
g = sigmoid(phi).
"""
import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from app.domain.entities import TransitionBatch
from app.domain.enums import Activation
from app.domain.exceptions import (
    BackwardBeforeForwardError,
    EmptyBatchError,
    InvalidParameterError,
    ShapeMismatchError,
)
from app.domain.learning.tiny_nn import (
    Adam,
    DenseNet,
    EdgeLogits,
    EdgeSample,
    Tensor2,
    edge_backward,
    gumbel_softmax_edge,
)
from app.domain.validators import DistributionValidator

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SCMConfig:
    """
    Hyperparameters of the causal transition model.

    temperature_decay multiplies the Gumbel temperature after every update
    until min_temperature is reached; 1.0 keeps it fixed.
    """

    state_dim: int
    action_dim: int
    position_dim: int = 8
    feature_dim: int = 16
    encoder_hidden: Tuple[int, ...] = (64, 64)
    decoder_hidden: Tuple[int, ...] = (64, 64)
    sparsity_weight: float = 0.01
    norm_exponent: float = 0.1
    smoothing: float = 1e-6
    temperature: float = 1.0
    min_temperature: float = 0.1
    temperature_decay: float = 1.0
    initial_logit: float = 1.0
    threshold: float = 0.5
    learning_rate: float = 1e-3
    hidden_activation: Activation = Activation.RELU

    def __post_init__(self):
        object.__setattr__(self, "hidden_activation", Activation(self.hidden_activation))
        object.__setattr__(self, "encoder_hidden", tuple(self.encoder_hidden))
        object.__setattr__(self, "decoder_hidden", tuple(self.decoder_hidden))
        for name in ("state_dim", "action_dim", "position_dim", "feature_dim"):
            if getattr(self, name) < 1:
                raise InvalidParameterError(name, getattr(self, name), "dimensions must be positive")
        if self.sparsity_weight < 0.0:
            raise InvalidParameterError("sparsity_weight", self.sparsity_weight, "lambda must be >= 0")
        if not 0.0 < self.norm_exponent <= 2.0:
            raise InvalidParameterError("norm_exponent", self.norm_exponent, "p must lie in (0, 2]")
        if self.smoothing < 0.0:
            raise InvalidParameterError("smoothing", self.smoothing, "epsilon_p must be >= 0")
        if not 0.0 < self.min_temperature <= self.temperature:
            raise InvalidParameterError("min_temperature", self.min_temperature, "need 0 < min_temperature <= temperature")
        if not 0.0 < self.temperature_decay <= 1.0:
            raise InvalidParameterError("temperature_decay", self.temperature_decay, "must lie in (0, 1]")
        if not 0.0 < self.threshold < 1.0:
            raise InvalidParameterError("threshold", self.threshold, "must lie in (0, 1)")
        if self.learning_rate <= 0.0:
            raise InvalidParameterError("learning_rate", self.learning_rate, "must be > 0")

    @property
    def num_inputs(self) -> int:
        return self.state_dim + self.action_dim

    @property
    def num_outputs(self) -> int:
        return self.state_dim + 1

    def input_labels(self) -> List[str]:
        return [f"s{i + 1}" for i in range(self.state_dim)] + [f"a{i + 1}" for i in range(self.action_dim)]

    def output_labels(self) -> List[str]:
        return [f"s'{i + 1}" for i in range(self.state_dim)] + ["r"]


@dataclass(frozen=True)
class SCMLoss:
    total: float
    data: float
    penalty: float


@dataclass
class _ForwardCache:
    features: np.ndarray   # f_e, (B, m, d_f)
    mixed: np.ndarray      # f_d, (B, d_f, n + 1)
    graph: np.ndarray      # G actually used, (m, n + 1)
    sample: Optional[EdgeSample]


class SCMModel:
    """
    Shared encoder/decoder with learnable position embeddings and edge logits.

    Rules:
    - The encoder and decoder are shared across dimensions
    - One graph is sampled per forward call and used for the whole batch
    - Single-writer during training; a frozen model can generate in parallel
    """

    def __init__(self, config: SCMConfig, rng: np.random.Generator):
        self.config = config
        c = config
        self.encoder = DenseNet.build(
            [1 + c.position_dim, *c.encoder_hidden, c.feature_dim], rng, c.hidden_activation, Activation.IDENTITY, "encoder"
        )
        self.decoder = DenseNet.build(
            [c.feature_dim + c.position_dim, *c.decoder_hidden, 1], rng, c.hidden_activation, Activation.IDENTITY, "decoder"
        )
        self.input_positions = Tensor2(rng.normal(0.0, 1.0, (c.num_inputs, c.position_dim)), name="positions.in")
        self.output_positions = Tensor2(rng.normal(0.0, 1.0, (c.num_outputs, c.position_dim)), name="positions.out")
        self.edges = EdgeLogits.constant(c.num_inputs, c.num_outputs, c.initial_logit, c.temperature)
        self.optimizer = Adam(self.parameters(), lr=c.learning_rate)
        self.updates = 0
        self._cache: Optional[_ForwardCache] = None

    # ==================== Parameters ====================

    def parameters(self) -> List[Tensor2]:
        return [
            *self.encoder.parameters(),
            *self.decoder.parameters(),
            self.input_positions,
            self.output_positions,
            self.edges.logits,
        ]

    def named_parameters(self) -> Dict[str, Tensor2]:
        return {p.name: p for p in self.parameters()}

    def zero_grad(self) -> None:
        for p in self.parameters():
            p.zero_grad()

    # ==================== Forward / backward ====================

    def encode(self, inputs: np.ndarray, positions: Optional[np.ndarray] = None) -> np.ndarray:
        """Per-dimension features f_e of shape (B, n + d_A, d_f) for inputs (B, n + d_A)."""
        c = self.config
        positions = self.input_positions.data if positions is None else positions
        batch, width = inputs.shape
        encoder_in = np.concatenate([inputs[:, :, None], np.broadcast_to(positions, (batch, *positions.shape))], axis=2)
        return self.encoder.forward(encoder_in.reshape(batch * width, -1)).reshape(batch, width, c.feature_dim)

    def forward(
        self,
        states: np.ndarray,
        actions: np.ndarray,
        rng: Optional[np.random.Generator],
        hard: bool = False,
        graph: Optional[np.ndarray] = None,
        noise: Optional[np.ndarray] = None,
    ) -> np.ndarray:
        """
        Batched prediction of [s_hat_{t+1}, r_hat], shape (B, n + 1).

        Args:
            graph: forced edge matrix; no sampling happens and phi gets no gradient
            noise: fixed logistic noise for the edge sample
        """
        c = self.config
        states = np.atleast_2d(np.asarray(states, dtype=np.float64))
        actions = np.atleast_2d(np.asarray(actions, dtype=np.float64))
        if states.shape[1] != c.state_dim or actions.shape[1] != c.action_dim or len(states) != len(actions):
            raise ShapeMismatchError("scm input", f"(B, {c.state_dim}) and (B, {c.action_dim})", (states.shape, actions.shape))
        batch = states.shape[0]
        inputs = np.concatenate([states, actions], axis=1)  # (B, m)

        features = self.encode(inputs)

        if graph is not None:
            used = np.asarray(graph, dtype=np.float64)
            DistributionValidator.expect_shape(used, self.edges.shape, "forced graph")
            sample = None
        else:
            sample = gumbel_softmax_edge(self.edges, rng, hard=hard, noise=noise)
            used = sample.values
        mixed = np.einsum("bjf,jk->bfk", features, used)

        decoder_in = np.concatenate(
            [mixed.transpose(0, 2, 1), np.broadcast_to(self.output_positions.data, (batch, *self.output_positions.shape))],
            axis=2,
        )
        outputs = self.decoder.forward(decoder_in.reshape(batch * c.num_outputs, -1)).reshape(batch, c.num_outputs)
        self._cache = _ForwardCache(features, mixed, used, sample)
        return outputs

    def backward(self, grad_outputs: np.ndarray) -> None:
        """Accumulate gradients of the last forward() into all parameters."""
        if self._cache is None:
            raise BackwardBeforeForwardError("SCMModel")
        c = self.config
        cache = self._cache
        batch = cache.features.shape[0]

        grad_decoder_in = self.decoder.backward(grad_outputs.reshape(batch * c.num_outputs, 1))
        grad_decoder_in = grad_decoder_in.reshape(batch, c.num_outputs, c.feature_dim + c.position_dim)
        grad_mixed = grad_decoder_in[:, :, :c.feature_dim].transpose(0, 2, 1)  # (B, d_f, n + 1)
        self.output_positions.accumulate(grad_decoder_in[:, :, c.feature_dim:].sum(axis=0))

        grad_features = np.einsum("bfk,jk->bjf", grad_mixed, cache.graph)
        if cache.sample is not None:
            edge_backward(self.edges, cache.sample, np.einsum("bjf,bfk->jk", cache.features, grad_mixed))

        grad_encoder_in = self.encoder.backward(grad_features.reshape(batch * c.num_inputs, c.feature_dim))
        grad_encoder_in = grad_encoder_in.reshape(batch, c.num_inputs, 1 + c.position_dim)
        self.input_positions.accumulate(grad_encoder_in[:, :, 1:].sum(axis=0))

    # ==================== Sparsity ====================

    def edge_probabilities(self) -> np.ndarray:
        return self.edges.probabilities()

    def penalty(self) -> float:
        c = self.config
        g = self.edge_probabilities()
        return float(c.sparsity_weight * np.sum((g * g + c.smoothing) ** (c.norm_exponent / 2.0)))

    def penalty_backward(self) -> None:
        c = self.config
        if c.sparsity_weight == 0.0:
            return
        g = self.edge_probabilities()
        d_g = c.sparsity_weight * c.norm_exponent * g * (g * g + c.smoothing) ** (c.norm_exponent / 2.0 - 1.0)
        self.edges.logits.accumulate(d_g * g * (1.0 - g))

    # ==================== Training ====================

    def fit_batch(self, batch: TransitionBatch, rng: np.random.Generator) -> SCMLoss:
        """One Adam step on scm_loss, then anneal the temperature."""
        self.zero_grad()
        loss = scm_loss(self, batch, rng)
        self.optimizer.step()
        self.updates += 1
        c = self.config
        if c.temperature_decay < 1.0:
            self.edges.temperature = max(c.min_temperature, self.edges.temperature * c.temperature_decay)
        return loss

    def predict(
        self,
        states: np.ndarray,
        actions: np.ndarray,
        rng: Optional[np.random.Generator],
        hard: bool = True,
        graph: Optional[np.ndarray] = None,
    ) -> Tuple[np.ndarray, np.ndarray]:
        """Generate (next_states, rewards) for a batch without touching gradients."""
        outputs = self.forward(states, actions, rng, hard=hard, graph=graph)
        self._cache = None
        return outputs[:, :self.config.state_dim], outputs[:, self.config.state_dim]


def scm_forward(
    model: SCMModel,
    state: np.ndarray,
    action: np.ndarray,
    rng: Optional[np.random.Generator],
    hard: bool = True,
    graph: Optional[np.ndarray] = None,
) -> Tuple[np.ndarray, float]:
    """Single-transition prediction (s_hat_{t+1}, r_hat)."""
    next_states, rewards = model.predict(np.asarray(state)[None, :], np.asarray(action)[None, :], rng, hard, graph)
    return next_states[0], float(rewards[0])


def scm_loss(
    model: SCMModel,
    batch: TransitionBatch,
    rng: Optional[np.random.Generator],
    noise: Optional[np.ndarray] = None,
) -> SCMLoss:
    """
    Data term on soft edges plus the sparsity penalty; gradients are accumulated
    into the model parameters (callers zero them first).

    Raises:
        EmptyBatchError: If the batch is empty
    """
    if len(batch) == 0:
        raise EmptyBatchError("scm_loss", 0)
    outputs = model.forward(batch.states, batch.actions, rng, hard=False, noise=noise)
    targets = np.concatenate([batch.next_states, batch.rewards[:, None]], axis=1)
    residual = outputs - targets
    data = float(np.mean(np.sum(residual * residual, axis=1)))
    model.backward(2.0 * residual / len(batch))
    penalty = model.penalty()
    model.penalty_backward()
    total = data + penalty
    if not math.isfinite(total):
        DistributionValidator.ensure_finite(np.array([data, penalty]), "scm loss")
    return SCMLoss(total=total, data=data, penalty=penalty)


def extract_graph(model: SCMModel, threshold: Optional[float] = None) -> np.ndarray:
    """Binary (n + d_A) x (n + 1) adjacency: 1 iff sigmoid(phi) >= threshold."""
    cut = model.config.threshold if threshold is None else threshold
    return (model.edge_probabilities() >= cut).astype(np.int64)
