"""
Fixed-capacity FIFO replay buffer with n-step return targets.
"""
import logging

import numpy as np

from app.domain.entities import TransitionBatch, TransitionRecord
from app.domain.exceptions import EmptyBatchError, InvalidParameterError, ShapeMismatchError

logger = logging.getLogger(__name__)


class ReplayBuffer:
    """
    Ring buffer of transitions stored column-wise.

    Rules:
    - size <= capacity; the oldest record is evicted first
    - every record keeps its insertion id, so an n-step window is only
      followed while ids are consecutive (no wrap into evicted data)
    - a window stops at the first terminal record
    """

    def __init__(self, capacity: int, state_dim: int, action_dim: int, n_step: int = 4, gamma: float = 0.99):
        if capacity < 1:
            raise InvalidParameterError("capacity", capacity, "must be >= 1")
        if n_step < 1:
            raise InvalidParameterError("n_step", n_step, "must be >= 1")
        if not 0.0 < gamma < 1.0:
            raise InvalidParameterError("gamma", gamma, "discount must lie in (0, 1)")
        self.capacity = capacity
        self.state_dim = state_dim
        self.action_dim = action_dim
        self.n_step = n_step
        self.gamma = gamma
        self.states = np.zeros((capacity, state_dim))
        self.actions = np.zeros((capacity, action_dim))
        self.rewards = np.zeros(capacity)
        self.next_states = np.zeros((capacity, state_dim))
        self.dones = np.zeros(capacity, dtype=bool)
        self.ids = np.full(capacity, -1, dtype=np.int64)
        self.inserted = 0

    def __len__(self) -> int:
        return min(self.inserted, self.capacity)

    def add(self, record: TransitionRecord) -> None:
        if record.state.shape != (self.state_dim,) or record.action.shape != (self.action_dim,):
            raise ShapeMismatchError(
                "buffer record", ((self.state_dim,), (self.action_dim,)), (record.state.shape, record.action.shape)
            )
        slot = self.inserted % self.capacity
        self.states[slot] = record.state
        self.actions[slot] = record.action
        self.rewards[slot] = record.reward
        self.next_states[slot] = record.next_state
        self.dones[slot] = record.done
        self.ids[slot] = self.inserted
        self.inserted += 1

    def sample(self, batch_size: int, rng: np.random.Generator) -> TransitionBatch:
        """Uniform sample with replacement, n-step targets attached."""
        if len(self) == 0:
            raise EmptyBatchError("replay buffer", 0)
        slots = rng.integers(0, len(self), size=batch_size)
        return self.gather(slots)

    def gather(self, slots: np.ndarray) -> TransitionBatch:
        slots = np.asarray(slots, dtype=np.int64)
        returns = np.zeros(len(slots))
        bootstrap_states = self.next_states[slots].copy()
        bootstrap_steps = np.zeros(len(slots), dtype=np.int64)
        for row, slot in enumerate(slots):
            returns[row], bootstrap_states[row], bootstrap_steps[row] = self._window(int(slot))
        return TransitionBatch(
            states=self.states[slots].copy(),
            actions=self.actions[slots].copy(),
            rewards=self.rewards[slots].copy(),
            next_states=self.next_states[slots].copy(),
            dones=self.dones[slots].copy(),
            returns=returns,
            bootstrap_states=bootstrap_states,
            bootstrap_steps=bootstrap_steps,
        )

    def _window(self, slot: int):
        """Discounted reward sum, bootstrap state and step count (0 after a terminal)."""
        total = 0.0
        start = self.ids[slot]
        current = slot
        for k in range(self.n_step):
            current = (slot + k) % self.capacity
            if self.ids[current] != start + k:
                return total, self.next_states[(slot + k - 1) % self.capacity], k
            total += self.gamma ** k * self.rewards[current]
            if self.dones[current]:
                return total, self.next_states[current], 0
        return total, self.next_states[current], self.n_step
