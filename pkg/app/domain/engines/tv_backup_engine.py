"""Total-variation backup engine for (s,a)-rectangular robust MDPs.

Closed-form worst case over a TV ball and robust value iteration built on it.
Pure computation - no I/O, no external state.
"""
import logging
from typing import Tuple

import numpy as np

from app.domain.engines.tabular_engine import TabularEngine
from app.domain.entities import FiniteMDP, RobustSolveReport, StochasticPolicy, ValueTables
from app.domain.exceptions import ShapeMismatchError
from app.domain.validators import DistributionValidator

logger = logging.getLogger(__name__)


class TVBackupEngine:
    """
    Robust backup engine over total-variation balls.

    Responsibilities:
    - Solve min_{P in TVBall(p0, sigma)} P . v in closed form
    - Run robust backward induction with one ball per (t, s, a)

    Greedy mass transport:
    - Walk the support in decreasing v (lowest index first among equal values)
    - Move up to sigma total mass from each entry onto the lowest-index argmin of v
    - Entries already at the minimum value are never drained
    """

    @staticmethod
    def worst_case_expectation(p0, v, sigma: float) -> Tuple[float, np.ndarray]:
        """
        Minimize P . v over the TV ball of radius sigma around p0.

        Args:
            p0: probability vector (the ball center)
            v: value vector of the same length
            sigma: radius in [0, 1]

        Returns:
            (minimum value, minimizing distribution)

        Raises:
            InvalidRadiusError: If sigma is outside [0, 1]
            InvalidDistributionError: If p0 is not a distribution (or empty)
            ShapeMismatchError: If v and p0 differ in length
        """
        radius = DistributionValidator.validate_radius(sigma)
        center = DistributionValidator.validate_vector(p0, "p0")
        values = np.asarray(v, dtype=np.float64)
        if values.shape != center.shape:
            raise ShapeMismatchError("value vector", center.shape, values.shape)
        DistributionValidator.ensure_finite(values, "value vector")
        worst = TVBackupEngine.transport(center, values, radius)
        return float(worst @ values), worst

    @staticmethod
    def transport(center: np.ndarray, values: np.ndarray, radius: float) -> np.ndarray:
        """Greedy mass transport on already validated inputs; returns the worst distribution."""
        worst = center.copy()
        if radius == 0.0:
            return worst
        target = int(np.argmin(values))
        floor = values[target]
        budget = radius
        # stable sort on -v keeps lower indices first among equal values
        for i in np.argsort(-values, kind="stable"):
            if budget <= 0.0 or values[i] <= floor:
                break
            moved = min(worst[i], budget)
            if moved > 0.0:
                worst[i] -= moved
                worst[target] += moved
                budget -= moved
        return worst

    @staticmethod
    def robust_value_iteration(mdp: FiniteMDP, sigma: float) -> RobustSolveReport:
        """
        Robust backward induction over (s,a)-rectangular TV balls.

        Q_t(s, a) = r_t(s, a) + min_{P in TVBall(P_t(.|s,a), sigma)} P . V_{t+1}
        V_t(s) = Q_t(s, pi_t(s)) with pi_t greedy (lowest index on ties).

        With sigma = 0 the worst-case rows equal the nominal rows, so the output
        equals TabularEngine.optimal_policy bitwise.

        Raises:
            InvalidRadiusError: If sigma is outside [0, 1]
        """
        radius = DistributionValidator.validate_radius(sigma)
        horizon, num_states, num_actions = mdp.horizon, mdp.num_states, mdp.num_actions
        values = np.zeros((horizon + 1, num_states))
        q_values = np.zeros((horizon + 1, num_states, num_actions))
        worst_rows = np.zeros((horizon, num_states, num_actions, num_states))
        actions = np.zeros((horizon, num_states), dtype=np.int64)

        for t in range(horizon, 0, -1):
            nominal = mdp.transition(t)
            next_values = values[t]
            rows = worst_rows[t - 1]
            for s in range(num_states):
                for a in range(num_actions):
                    rows[s, a] = TVBackupEngine.transport(nominal[s, a], next_values, radius)
            q_t = TabularEngine.backup(rows, mdp.reward(t), next_values)
            chosen = TabularEngine.greedy(q_t)
            q_values[t - 1] = q_t
            actions[t - 1] = chosen
            values[t - 1] = q_t[np.arange(num_states), chosen]

        logger.debug(
            "Robust value iteration finished",
            extra={"extra": {"horizon": horizon, "sigma": radius}},
        )
        return RobustSolveReport(
            values=ValueTables(values, q_values),
            policy=StochasticPolicy.deterministic(actions, num_actions),
            worst_case_rows=worst_rows,
            sigma=radius,
        )
