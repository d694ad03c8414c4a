"""
Finite-horizon tabular MDP entities.

FiniteMDP, StochasticPolicy and ValueTables are immutable containers over
numpy arrays. Time indices exposed by accessors are 1-based: t = 1..T, and
V_{T+1} is stored explicitly as zeros.
Pure computation - no I/O, no frameworks.
"""
from typing import Optional, Sequence

import numpy as np

from app.domain.exceptions import InvalidParameterError, ShapeMismatchError
from app.domain.validators import DistributionValidator


def _frozen(values: np.ndarray) -> np.ndarray:
    values.setflags(write=False)
    return values


def _check_time(t: int, horizon: int, last: int) -> int:
    if not 1 <= t <= last:
        raise InvalidParameterError("t", t, f"time index must lie in 1..{last} (horizon {horizon})")
    return t - 1


class FiniteMDP:
    """
    Finite-horizon tabular MDP.

    Holds per-step transition tensors P_t[s, a, s'] and reward tables r_t[s, a]
    for t = 1..T. State labels are optional integer vectors (e.g. [0, 1]) used
    by dimension-structured instances.

    Rules:
    - Every transition row is a probability vector (renormalized only within 1e-9)
    - Every reward lies in [0, 1]
    - Arrays are read-only after construction
    """

    def __init__(
        self,
        transitions,
        rewards,
        state_labels: Optional[Sequence[Sequence[int]]] = None,
    ):
        """
        Initialize a FiniteMDP.

        Args:
            transitions: array-like of shape (T, S, A, S)
            rewards: array-like of shape (T, S, A), entries in [0, 1]
            state_labels: optional per-state integer vectors, one per state

        Raises:
            ShapeMismatchError: If shapes do not compose
            InvalidDistributionError: If a transition row is not a distribution
            InvalidParameterError: If a reward is outside [0, 1]
        """
        probs = np.asarray(transitions, dtype=np.float64)
        if probs.ndim != 4 or probs.shape[1] != probs.shape[3]:
            raise ShapeMismatchError("transitions", "(T, S, A, S)", probs.shape)
        horizon, num_states, num_actions, _ = probs.shape
        if horizon < 1 or num_states < 1 or num_actions < 1:
            raise ShapeMismatchError("transitions", "positive T, S, A", probs.shape)

        reward_table = np.array(rewards, dtype=np.float64, copy=True)
        DistributionValidator.expect_shape(reward_table, (horizon, num_states, num_actions), "rewards")
        DistributionValidator.ensure_finite(reward_table, "rewards")
        if reward_table.min() < 0.0 or reward_table.max() > 1.0:
            raise InvalidParameterError(
                "rewards", (float(reward_table.min()), float(reward_table.max())), "rewards must lie in [0, 1]"
            )

        self._transitions = _frozen(DistributionValidator.validate_rows(probs, "transitions"))
        self._rewards = _frozen(reward_table)
        self._state_labels = _validate_labels(state_labels, num_states)

    # ==================== Properties ====================

    @property
    def num_states(self) -> int:
        return self._transitions.shape[1]

    @property
    def num_actions(self) -> int:
        return self._transitions.shape[2]

    @property
    def horizon(self) -> int:
        return self._transitions.shape[0]

    @property
    def transitions(self) -> np.ndarray:
        """Read-only (T, S, A, S) array; index 0 is time step 1."""
        return self._transitions

    @property
    def rewards(self) -> np.ndarray:
        """Read-only (T, S, A) array; index 0 is time step 1."""
        return self._rewards

    @property
    def state_labels(self) -> Optional[np.ndarray]:
        return self._state_labels

    # ==================== Accessors ====================

    def transition(self, t: int) -> np.ndarray:
        """P_t as an (S, A, S) array, t = 1..T."""
        return self._transitions[_check_time(t, self.horizon, self.horizon)]

    def reward(self, t: int) -> np.ndarray:
        """r_t as an (S, A) array, t = 1..T."""
        return self._rewards[_check_time(t, self.horizon, self.horizon)]

    def state_index(self, label: Sequence[int]) -> int:
        """Index of the state carrying the given label."""
        return _label_index(self._state_labels, label)

    def __repr__(self) -> str:
        return (
            f"FiniteMDP(num_states={self.num_states}, num_actions={self.num_actions}, "
            f"horizon={self.horizon})"
        )


class StochasticPolicy:
    """
    Non-stationary stochastic policy pi_t(a | s), stored as a (T, S, A) table.
    """

    def __init__(self, probabilities):
        table = np.asarray(probabilities, dtype=np.float64)
        if table.ndim != 3:
            raise ShapeMismatchError("policy", "(T, S, A)", table.shape)
        self._probabilities = _frozen(DistributionValidator.validate_rows(table, "policy"))

    # ==================== Constructors ====================

    @classmethod
    def deterministic(cls, actions, num_actions: int) -> "StochasticPolicy":
        """Build a policy from a (T, S) integer table of chosen actions."""
        chosen = np.asarray(actions, dtype=np.int64)
        if chosen.ndim != 2:
            raise ShapeMismatchError("actions", "(T, S)", chosen.shape)
        if chosen.size and (chosen.min() < 0 or chosen.max() >= num_actions):
            raise InvalidParameterError("actions", chosen.max(), f"actions must lie in 0..{num_actions - 1}")
        return cls(np.eye(num_actions)[chosen])

    @classmethod
    def uniform(cls, horizon: int, num_states: int, num_actions: int) -> "StochasticPolicy":
        return cls(np.full((horizon, num_states, num_actions), 1.0 / num_actions))

    @classmethod
    def random(cls, horizon: int, num_states: int, num_actions: int, rng: np.random.Generator) -> "StochasticPolicy":
        """Policy with every row drawn from a flat Dirichlet."""
        return cls(rng.dirichlet(np.ones(num_actions), size=(horizon, num_states)))

    @classmethod
    def mixture(cls, first: "StochasticPolicy", second: "StochasticPolicy", weight: float) -> "StochasticPolicy":
        """Per-step mixture weight * first + (1 - weight) * second."""
        if first.probabilities.shape != second.probabilities.shape:
            raise ShapeMismatchError("mixture", first.probabilities.shape, second.probabilities.shape)
        return cls(weight * first.probabilities + (1.0 - weight) * second.probabilities)

    # ==================== Properties ====================

    @property
    def probabilities(self) -> np.ndarray:
        return self._probabilities

    @property
    def horizon(self) -> int:
        return self._probabilities.shape[0]

    @property
    def num_states(self) -> int:
        return self._probabilities.shape[1]

    @property
    def num_actions(self) -> int:
        return self._probabilities.shape[2]

    @property
    def is_deterministic(self) -> bool:
        return bool(np.all((self._probabilities == 0.0) | (self._probabilities == 1.0)))

    def at(self, t: int) -> np.ndarray:
        """pi_t as an (S, A) array, t = 1..T."""
        return self._probabilities[_check_time(t, self.horizon, self.horizon)]

    def greedy_actions(self) -> np.ndarray:
        """(T, S) table of most likely actions (lowest index on ties)."""
        return np.argmax(self._probabilities, axis=-1)

    def check_compatible(self, horizon: int, num_states: int, num_actions: int) -> None:
        """Raise ShapeMismatchError unless the policy fits a (T, S, A) model."""
        expected = (horizon, num_states, num_actions)
        if self._probabilities.shape != expected:
            raise ShapeMismatchError("policy", expected, self._probabilities.shape)


class ValueTables:
    """
    Value and action-value tables V_t(s), Q_t(s, a) for t = 1..T+1.

    V_{T+1} and Q_{T+1} are stored as zeros.
    """

    def __init__(self, values, q_values):
        v = np.asarray(values, dtype=np.float64)
        q = np.asarray(q_values, dtype=np.float64)
        if v.ndim != 2 or q.ndim != 3 or q.shape[:2] != v.shape:
            raise ShapeMismatchError("value tables", "V (T+1, S) and Q (T+1, S, A)", (v.shape, q.shape))
        DistributionValidator.ensure_finite(v, "value table")
        DistributionValidator.ensure_finite(q, "action-value table")
        self._values = _frozen(v.copy())
        self._q_values = _frozen(q.copy())

    @property
    def horizon(self) -> int:
        return self._values.shape[0] - 1

    @property
    def values(self) -> np.ndarray:
        """(T+1, S) array; row t-1 holds V_t."""
        return self._values

    @property
    def q_values(self) -> np.ndarray:
        """(T+1, S, A) array; row t-1 holds Q_t."""
        return self._q_values

    def v(self, t: int) -> np.ndarray:
        return self._values[_check_time(t, self.horizon, self.horizon + 1)]

    def q(self, t: int) -> np.ndarray:
        return self._q_values[_check_time(t, self.horizon, self.horizon + 1)]

    def at_distribution(self, t: int, distribution) -> float:
        """phi . V_t for an initial-state distribution phi."""
        phi = DistributionValidator.validate_vector(distribution, "initial distribution")
        DistributionValidator.expect_shape(phi, self._values.shape[1:], "initial distribution")
        return float(phi @ self.v(t))

    def within_bounds(self, tolerance: float = 1e-9) -> bool:
        """True when 0 <= V_t(s) <= T - t + 1 for every (t, s)."""
        caps = (self.horizon - np.arange(self.horizon + 1))[:, None]
        return bool(np.all(self._values >= -tolerance) and np.all(self._values <= caps + tolerance))

    def __repr__(self) -> str:
        return f"ValueTables(horizon={self.horizon}, num_states={self._values.shape[1]})"


def _validate_labels(state_labels, num_states: int) -> Optional[np.ndarray]:
    if state_labels is None:
        return None
    labels = np.asarray(state_labels, dtype=np.int64)
    if labels.ndim != 2 or labels.shape[0] != num_states:
        raise ShapeMismatchError("state_labels", f"({num_states}, n)", labels.shape)
    return _frozen(labels)


def _label_index(labels: Optional[np.ndarray], label: Sequence[int]) -> int:
    if labels is None:
        raise InvalidParameterError("state_labels", None, "model has no state labels")
    matches = np.flatnonzero(np.all(labels == np.asarray(label, dtype=np.int64), axis=1))
    if matches.size == 0:
        raise InvalidParameterError("label", list(label), "no state carries this label")
    return int(matches[0])
