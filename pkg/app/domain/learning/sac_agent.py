"""
Small soft actor-critic learner.

Tanh-squashed Gaussian actor, twin critics with min-backup and Polyak-averaged
targets, fixed entropy weight alpha. Targets use the batch's n-step fields:

    y = R + gamma^m * 1[m > 0] * (min_i Q_i'(s_m, a') - alpha * log pi(a' | s_m))
"""
import logging
import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from app.domain.entities import TransitionBatch
from app.domain.enums import Activation
from app.domain.exceptions import InvalidParameterError
from app.domain.learning.tiny_nn import Adam, DenseNet, Tensor2

logger = logging.getLogger(__name__)

LOG_2PI = math.log(2.0 * math.pi)
SQUASH_GUARD = 1e-6


@dataclass(frozen=True)
class SACConfig:
    state_dim: int
    action_dim: int
    hidden: Tuple[int, ...] = (64, 64)
    gamma: float = 0.99
    tau: float = 0.005
    alpha: float = 0.1
    actor_lr: float = 3e-4
    critic_lr: float = 3e-4
    log_std_min: float = -5.0
    log_std_max: float = 2.0
    hidden_activation: Activation = Activation.RELU

    def __post_init__(self):
        object.__setattr__(self, "hidden_activation", Activation(self.hidden_activation))
        object.__setattr__(self, "hidden", tuple(self.hidden))
        if self.state_dim < 1 or self.action_dim < 1:
            raise InvalidParameterError("dims", (self.state_dim, self.action_dim), "dimensions must be positive")
        if not 0.0 < self.gamma < 1.0:
            raise InvalidParameterError("gamma", self.gamma, "discount must lie in (0, 1)")
        if not 0.0 < self.tau <= 1.0:
            raise InvalidParameterError("tau", self.tau, "soft update weight must lie in (0, 1]")
        if self.alpha < 0.0:
            raise InvalidParameterError("alpha", self.alpha, "entropy weight must be >= 0")
        for name in ("actor_lr", "critic_lr"):
            if not getattr(self, name) > 0.0:
                raise InvalidParameterError(name, getattr(self, name), "learning rates must be > 0")
        if self.log_std_min >= self.log_std_max:
            raise InvalidParameterError("log_std_min", self.log_std_min, "must be below log_std_max")


@dataclass(frozen=True)
class SACLosses:
    critic: float
    actor: float


@dataclass
class _PolicySample:
    actions: np.ndarray
    log_prob: np.ndarray
    pre_tanh: np.ndarray
    std: np.ndarray
    noise: np.ndarray
    clip_mask: np.ndarray


class SACAgent:
    """
    Actor, twin critics and their targets.

    Rules:
    - Actions lie in the open box (-1, 1)^d_A
    - Target networks only move through soft_update()
    - One writer per agent; act() on a frozen agent is read-only
    """

    def __init__(self, config: SACConfig, rng: np.random.Generator):
        self.config = config
        n, d = config.state_dim, config.action_dim
        self.actor = DenseNet.build([n, *config.hidden, 2 * d], rng, config.hidden_activation, Activation.IDENTITY, "actor")
        self.critic1 = DenseNet.build([n + d, *config.hidden, 1], rng, config.hidden_activation, Activation.IDENTITY, "critic1")
        self.critic2 = DenseNet.build([n + d, *config.hidden, 1], rng, config.hidden_activation, Activation.IDENTITY, "critic2")
        self.target1 = self._renamed(self.critic1.copy(), "target1")
        self.target2 = self._renamed(self.critic2.copy(), "target2")
        self.actor_optimizer = Adam(self.actor.parameters(), lr=config.actor_lr)
        self.critic_optimizer = Adam(
            [*self.critic1.parameters(), *self.critic2.parameters()], lr=config.critic_lr
        )
        self.updates = 0

    @staticmethod
    def _renamed(net: DenseNet, name: str) -> DenseNet:
        net.name = name
        for index, layer in enumerate(net.layers):
            layer.weight.name = f"{name}.{index}.weight"
            layer.bias.name = f"{name}.{index}.bias"
        return net

    def named_parameters(self) -> Dict[str, Tensor2]:
        params: Dict[str, Tensor2] = {}
        for net in (self.actor, self.critic1, self.critic2, self.target1, self.target2):
            params.update(net.named_parameters())
        return params

    # ==================== Policy ====================

    def _sample(self, states: np.ndarray, noise: np.ndarray) -> _PolicySample:
        d = self.config.action_dim
        out = self.actor.forward(states)
        mean, raw_log_std = out[:, :d], out[:, d:]
        log_std = np.clip(raw_log_std, self.config.log_std_min, self.config.log_std_max)
        clip_mask = (raw_log_std > self.config.log_std_min) & (raw_log_std < self.config.log_std_max)
        std = np.exp(log_std)
        pre_tanh = mean + std * noise
        actions = np.tanh(pre_tanh)
        log_prob = np.sum(-0.5 * noise * noise - 0.5 * LOG_2PI - log_std, axis=1) - np.sum(
            np.log(1.0 - actions * actions + SQUASH_GUARD), axis=1
        )
        return _PolicySample(actions, log_prob, pre_tanh, std, noise, clip_mask.astype(np.float64))

    def act(self, state: np.ndarray, rng: Optional[np.random.Generator] = None, deterministic: bool = False) -> np.ndarray:
        """Action for one observation; deterministic uses tanh(mean)."""
        states = np.asarray(state, dtype=np.float64)[None, :]
        if deterministic:
            mean = self.actor.forward(states)[:, :self.config.action_dim]
            return np.tanh(mean)[0]
        noise = rng.normal(size=(1, self.config.action_dim))
        return self._sample(states, noise).actions[0]

    # ==================== Critics ====================

    @staticmethod
    def _q(net: DenseNet, states: np.ndarray, actions: np.ndarray) -> np.ndarray:
        return net.forward(np.concatenate([states, actions], axis=1))[:, 0]

    def critic_targets(self, batch: TransitionBatch, noise: np.ndarray) -> np.ndarray:
        c = self.config
        nxt = self._sample(batch.bootstrap_states, noise)
        q_next = np.minimum(
            self._q(self.target1, batch.bootstrap_states, nxt.actions),
            self._q(self.target2, batch.bootstrap_states, nxt.actions),
        )
        steps = batch.bootstrap_steps
        scale = np.where(steps > 0, c.gamma ** steps, 0.0)
        return batch.returns + scale * (q_next - c.alpha * nxt.log_prob)

    def update_critics(self, batch: TransitionBatch, rng: np.random.Generator) -> float:
        targets = self.critic_targets(batch, rng.normal(size=(len(batch), self.config.action_dim)))
        self.critic_optimizer.zero_grad()
        loss = 0.0
        for net in (self.critic1, self.critic2):
            residual = self._q(net, batch.states, batch.actions) - targets
            loss += float(np.mean(residual * residual))
            net.backward((2.0 * residual / len(batch))[:, None])
        self.critic_optimizer.step()
        return loss

    # ==================== Actor ====================

    def actor_objective(self, states: np.ndarray, noise: np.ndarray) -> float:
        """J = mean(alpha * log pi(a|s) - min_i Q_i(s, a)) with reparameterised a."""
        sample = self._sample(states, noise)
        q_min = np.minimum(self._q(self.critic1, states, sample.actions), self._q(self.critic2, states, sample.actions))
        return float(np.mean(self.config.alpha * sample.log_prob - q_min))

    def actor_backward(self, states: np.ndarray, noise: np.ndarray) -> float:
        """Accumulate dJ/dtheta into the actor's gradients and return J."""
        c = self.config
        batch = states.shape[0]
        sample = self._sample(states, noise)
        a = sample.actions
        q1 = self._q(self.critic1, states, a)
        q2 = self._q(self.critic2, states, a)
        use_first = q1 <= q2
        objective = float(np.mean(c.alpha * sample.log_prob - np.minimum(q1, q2)))

        grad_q = np.zeros_like(a)
        for net, mask in ((self.critic1, use_first), (self.critic2, ~use_first)):
            grad_q += net.backward(mask.astype(np.float64)[:, None])[:, c.state_dim:]
        for net in (self.critic1, self.critic2):
            net.zero_grad()

        squash = 1.0 - a * a
        h = 2.0 * a * squash / (squash + SQUASH_GUARD)
        scaled_noise = sample.std * sample.noise
        grad_mean = (c.alpha * h - grad_q * squash) / batch
        grad_log_std = (c.alpha * (-1.0 + h * scaled_noise) - grad_q * squash * scaled_noise) / batch
        grad_log_std *= sample.clip_mask

        self.actor.backward(np.concatenate([grad_mean, grad_log_std], axis=1))
        return objective

    def update_actor(self, states: np.ndarray, rng: np.random.Generator) -> float:
        self.actor_optimizer.zero_grad()
        objective = self.actor_backward(states, rng.normal(size=(states.shape[0], self.config.action_dim)))
        self.actor_optimizer.step()
        return objective

    # ==================== Update ====================

    def update(self, batch: TransitionBatch, rng: np.random.Generator) -> SACLosses:
        """One critic step, one actor step, then Polyak targets."""
        batch = batch.with_targets()
        critic = self.update_critics(batch, rng)
        actor = self.update_actor(batch.states, rng)
        self.target1.soft_update(self.critic1, self.config.tau)
        self.target2.soft_update(self.critic2, self.config.tau)
        self.updates += 1
        return SACLosses(critic=critic, actor=actor)
