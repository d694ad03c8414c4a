"""
Transition entities for the learning pipeline.

TransitionRecord is one (s, a, r, s', done) tuple. TransitionBatch is the
array form used by the learners; it also carries the n-step targets the
replay buffer computes for real transitions.
"""
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence

import numpy as np

from app.domain.exceptions import EmptyBatchError, ShapeMismatchError
from app.domain.validators import DistributionValidator


@dataclass(frozen=True)
class TransitionRecord:
    """One environment transition."""

    state: np.ndarray
    action: np.ndarray
    reward: float
    next_state: np.ndarray
    done: bool = False

    def __post_init__(self):
        object.__setattr__(self, "state", np.asarray(self.state, dtype=np.float64))
        object.__setattr__(self, "action", np.asarray(self.action, dtype=np.float64))
        object.__setattr__(self, "next_state", np.asarray(self.next_state, dtype=np.float64))
        object.__setattr__(self, "reward", float(self.reward))
        object.__setattr__(self, "done", bool(self.done))
        if self.state.shape != self.next_state.shape:
            raise ShapeMismatchError("next_state", self.state.shape, self.next_state.shape)
        DistributionValidator.ensure_finite(self.state, "record.state")
        DistributionValidator.ensure_finite(self.action, "record.action")
        DistributionValidator.ensure_finite(self.next_state, "record.next_state")
        DistributionValidator.ensure_finite(np.asarray(self.reward), "record.reward")


@dataclass
class TransitionBatch:
    """
    Column-major batch of transitions.

    n-step fields are optional. When absent a record is its own one-step target:
    returns = rewards, bootstrap_states = next_states and bootstrap_steps = 1
    (0 after a terminal transition).
    """

    states: np.ndarray
    actions: np.ndarray
    rewards: np.ndarray
    next_states: np.ndarray
    dones: np.ndarray
    returns: Optional[np.ndarray] = None
    bootstrap_states: Optional[np.ndarray] = None
    bootstrap_steps: Optional[np.ndarray] = None

    def __post_init__(self):
        size = self.states.shape[0]
        for name in ("actions", "rewards", "next_states", "dones"):
            if getattr(self, name).shape[0] != size:
                raise ShapeMismatchError(f"batch.{name}", size, getattr(self, name).shape[0])

    def __len__(self) -> int:
        return int(self.states.shape[0])

    @classmethod
    def from_records(cls, records: Sequence[TransitionRecord]) -> "TransitionBatch":
        if not records:
            raise EmptyBatchError("TransitionBatch", 0)
        return cls(
            states=np.stack([r.state for r in records]),
            actions=np.stack([r.action for r in records]),
            rewards=np.array([r.reward for r in records]),
            next_states=np.stack([r.next_state for r in records]),
            dones=np.array([r.done for r in records], dtype=bool),
        )

    def to_records(self) -> List[TransitionRecord]:
        return [
            TransitionRecord(self.states[i], self.actions[i], self.rewards[i], self.next_states[i], self.dones[i])
            for i in range(len(self))
        ]

    def copy(self) -> "TransitionBatch":
        return replace(
            self,
            **{
                name: (None if getattr(self, name) is None else getattr(self, name).copy())
                for name in (
                    "states", "actions", "rewards", "next_states", "dones",
                    "returns", "bootstrap_states", "bootstrap_steps",
                )
            },
        )

    def with_targets(self) -> "TransitionBatch":
        """Copy whose n-step fields are filled, using one-step targets where absent."""
        batch = self.copy()
        if batch.returns is None:
            batch.returns = batch.rewards.copy()
        if batch.bootstrap_states is None:
            batch.bootstrap_states = batch.next_states.copy()
        if batch.bootstrap_steps is None:
            batch.bootstrap_steps = np.where(batch.dones, 0, 1).astype(np.int64)
        return batch

    def subset(self, indices: np.ndarray) -> "TransitionBatch":
        def take(values):
            return None if values is None else values[indices]

        return TransitionBatch(
            states=self.states[indices],
            actions=self.actions[indices],
            rewards=self.rewards[indices],
            next_states=self.next_states[indices],
            dones=self.dones[indices],
            returns=take(self.returns),
            bootstrap_states=take(self.bootstrap_states),
            bootstrap_steps=take(self.bootstrap_steps),
        )
