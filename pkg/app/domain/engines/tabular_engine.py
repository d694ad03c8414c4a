"""Tabular engine: finite-horizon policy evaluation and backward induction.

Non-robust baseline semantics for FiniteMDP.
Pure computation - no I/O, no external state.
"""
import logging
from typing import Tuple

import numpy as np

from app.domain.entities import FiniteMDP, StochasticPolicy, ValueTables

logger = logging.getLogger(__name__)


class TabularEngine:
    """
    Backward-induction engine for finite-horizon tabular MDPs.

    Responsibilities:
    - Evaluate a non-stationary stochastic policy
    - Compute an optimal deterministic policy
    - Provide the shared backup primitives the robust engines reuse

    Requirements:
    - Deterministic (same inputs -> bitwise same tables)
    - Ties broken by lowest action index within TIE_TOLERANCE
    - Safe to call from multiple threads (no shared mutable state)
    """

    TIE_TOLERANCE = 1e-12

    @staticmethod
    def backup(rows: np.ndarray, rewards: np.ndarray, next_values: np.ndarray) -> np.ndarray:
        """
        One-step backup Q(s, a) = r(s, a) + rows[s, a] . V_{t+1}.

        Every engine computes its expectations through this function so that a
        degenerate (sigma = 0) robust solve reproduces the nominal tables bitwise.

        Args:
            rows: (S, A, S) transition rows (nominal or worst-case)
            rewards: (S, A)
            next_values: (S,)
        """
        return rewards + rows @ next_values

    @staticmethod
    def greedy(q_values: np.ndarray) -> np.ndarray:
        """
        Greedy action per state, lowest index among near-ties.

        Args:
            q_values: (S, A)

        Returns:
            (S,) integer array of chosen actions
        """
        best = q_values.max(axis=1, keepdims=True)
        return np.argmax(q_values >= best - TabularEngine.TIE_TOLERANCE, axis=1)

    @staticmethod
    def evaluate_policy(mdp: FiniteMDP, policy: StochasticPolicy) -> ValueTables:
        """
        Evaluate a policy by backward recursion.

        V_t(s) = sum_a pi_t(a|s) [r_t(s,a) + P_t(.|s,a) . V_{t+1}],  V_{T+1} = 0.

        Raises:
            ShapeMismatchError: If the policy does not fit the MDP
        """
        policy.check_compatible(mdp.horizon, mdp.num_states, mdp.num_actions)
        horizon = mdp.horizon
        values = np.zeros((horizon + 1, mdp.num_states))
        q_values = np.zeros((horizon + 1, mdp.num_states, mdp.num_actions))

        for t in range(horizon, 0, -1):
            q_t = TabularEngine.backup(mdp.transition(t), mdp.reward(t), values[t])
            q_values[t - 1] = q_t
            values[t - 1] = np.sum(policy.at(t) * q_t, axis=1)

        return ValueTables(values, q_values)

    @staticmethod
    def optimal_policy(mdp: FiniteMDP) -> Tuple[StochasticPolicy, ValueTables]:
        """
        Optimal deterministic policy by backward induction.

        V*_t(s) is Q*_t(s, chosen action), so evaluating the returned policy
        reproduces the reported values.

        Returns:
            (deterministic policy, optimal value tables)
        """
        horizon = mdp.horizon
        values = np.zeros((horizon + 1, mdp.num_states))
        q_values = np.zeros((horizon + 1, mdp.num_states, mdp.num_actions))
        actions = np.zeros((horizon, mdp.num_states), dtype=np.int64)

        for t in range(horizon, 0, -1):
            q_t = TabularEngine.backup(mdp.transition(t), mdp.reward(t), values[t])
            chosen = TabularEngine.greedy(q_t)
            q_values[t - 1] = q_t
            actions[t - 1] = chosen
            values[t - 1] = q_t[np.arange(mdp.num_states), chosen]

        logger.debug("Backward induction finished", extra={"extra": {"horizon": horizon}})
        return StochasticPolicy.deterministic(actions, mdp.num_actions), ValueTables(values, q_values)
