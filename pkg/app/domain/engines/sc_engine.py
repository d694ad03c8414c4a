"""
SC engine: state-confounded MDP evaluation and robust SC solving.

Confounder uncertainty is a TV ball around the nominal P^c_t, applied per
(t, s) inside the backward recursion. The max-min over the action simplex and
the confounder ball is solved exactly by double oracle.
Pure computation - no I/O, no external state.
"""
import logging
from dataclasses import dataclass
from typing import List

import numpy as np

from app.domain.engines.linear_program import DenseSimplex, solve_matrix_game
from app.domain.engines.tabular_engine import TabularEngine
from app.domain.engines.tv_backup_engine import TVBackupEngine
from app.domain.entities import FiniteMDP, RobustSCReport, SCMDPSpec, StochasticPolicy, ValueTables
from app.domain.exceptions import ConvergenceError, InvalidParameterError
from app.domain.validators import DistributionValidator

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SaddlePoint:
    """Per-(t, s) solution of the robust SC max-min."""

    policy: np.ndarray        # (A,) action distribution
    confounder: np.ndarray    # (C,) worst-case confounder distribution
    value: float              # min over the ball of policy^T M P
    gap: float                # upper bound minus value at termination
    vertices: int             # confounder vertices generated


class SCEngine:
    """
    Engine for SC-MDPs and their robust (RSC) counterparts.

    Responsibilities:
    - Marginalize an SC-MDP into the equivalent standard MDP
    - Evaluate policies under the nominal confounder and under the worst case
    - Compute optimal robust SC policies (possibly stochastic)

    Requirements:
    - Deterministic: the double oracle, the LP and tie-breaking are all index-ordered
    - sigma is validated, never clamped
    - Never returns an unconverged saddle point; raises ConvergenceError instead
    """

    GAP_TOLERANCE = 1e-9
    MAX_VERTICES = 200

    def __init__(self, gap_tolerance: float = GAP_TOLERANCE, max_vertices: int = MAX_VERTICES):
        if gap_tolerance <= 0.0:
            raise InvalidParameterError("gap_tolerance", gap_tolerance, "must be positive")
        if max_vertices < 1:
            raise InvalidParameterError("max_vertices", max_vertices, "must be positive")
        self.gap_tolerance = gap_tolerance
        self.max_vertices = max_vertices
        self._simplex = DenseSimplex()

    # ==================== Nominal ====================

    @staticmethod
    def marginalize(spec: SCMDPSpec) -> FiniteMDP:
        """P_t(.|s,a) = sum_c P^c_t(c) P_t(.|s,a,c)."""
        transitions = np.einsum("tsacn,tc->tsan", spec.kernels, spec.nominal_confounder)
        return FiniteMDP(transitions, spec.rewards, spec.state_labels)

    @staticmethod
    def continuation(spec: SCMDPSpec, t: int, next_values: np.ndarray) -> np.ndarray:
        """(S, A, C) table r_t(s, a) + P_t(.|s,a,c) . V_{t+1}."""
        return spec.reward(t)[:, :, None] + spec.kernel(t) @ next_values

    @staticmethod
    def sc_policy_value(spec: SCMDPSpec, policy: StochasticPolicy) -> ValueTables:
        """
        SC-value of a policy under the nominal confounder distribution.

        Expectations go through the confounder, so the result equals
        evaluate_policy on the marginal MDP up to floating-point reassociation.
        """
        policy.check_compatible(spec.horizon, spec.num_states, spec.num_actions)
        horizon = spec.horizon
        values = np.zeros((horizon + 1, spec.num_states))
        q_values = np.zeros((horizon + 1, spec.num_states, spec.num_actions))
        for t in range(horizon, 0, -1):
            q_t = SCEngine.continuation(spec, t, values[t]) @ spec.confounder(t)
            q_values[t - 1] = q_t
            values[t - 1] = np.sum(policy.at(t) * q_t, axis=1)
        return ValueTables(values, q_values)

    # ==================== Robust evaluation ====================

    @staticmethod
    def robust_sc_policy_value(spec: SCMDPSpec, policy: StochasticPolicy, sigma: float) -> ValueTables:
        """
        Worst-case SC-value of a fixed policy.

        V_t(s) = min_{P in TVBall(P^c_t, sigma)} sum_c P(c) sum_a pi_t(a|s) M_t(s, a, c)
        where M_t(s, a, c) = r_t(s, a) + P_t(.|s,a,c) . V_{t+1}. Since the rewards do
        not depend on c, this is E_pi[r] plus the worst case of the action-averaged
        continuation. Q_t(s, a) holds the per-action robust backup.

        Raises:
            InvalidRadiusError: If sigma is outside [0, 1]
            ShapeMismatchError: If the policy does not fit the spec
        """
        radius = DistributionValidator.validate_radius(sigma)
        policy.check_compatible(spec.horizon, spec.num_states, spec.num_actions)
        horizon, num_states, num_actions = spec.horizon, spec.num_states, spec.num_actions
        values = np.zeros((horizon + 1, num_states))
        q_values = np.zeros((horizon + 1, num_states, num_actions))

        for t in range(horizon, 0, -1):
            center = spec.confounder(t)
            table = SCEngine.continuation(spec, t, values[t])
            pi_t = policy.at(t)
            for s in range(num_states):
                mixed = pi_t[s] @ table[s]
                worst = TVBackupEngine.transport(center, mixed, radius)
                values[t - 1, s] = worst @ mixed
                for a in range(num_actions):
                    row = TVBackupEngine.transport(center, table[s, a], radius)
                    q_values[t - 1, s, a] = row @ table[s, a]
        return ValueTables(values, q_values)

    # ==================== Robust optimization ====================

    def robust_sc_value_iteration(self, spec: SCMDPSpec, sigma: float) -> RobustSCReport:
        """
        Optimal robust SC policy by backward induction with a double-oracle max-min per (t, s).

        Raises:
            InvalidRadiusError: If sigma is outside [0, 1]
            ConvergenceError: If a saddle point is not reached within max_vertices
        """
        radius = DistributionValidator.validate_radius(sigma)
        horizon, num_states, num_actions = spec.horizon, spec.num_states, spec.num_actions
        values = np.zeros((horizon + 1, num_states))
        q_values = np.zeros((horizon + 1, num_states, num_actions))
        policy = np.zeros((horizon, num_states, num_actions))
        confounders = np.zeros((horizon, num_states, spec.confounder_size))
        gaps = np.zeros((horizon, num_states))
        iterations = np.zeros((horizon, num_states), dtype=np.int64)

        for t in range(horizon, 0, -1):
            center = spec.confounder(t)
            table = SCEngine.continuation(spec, t, values[t])
            for s in range(num_states):
                try:
                    saddle = self.solve_saddle(table[s], center, radius)
                except ConvergenceError:
                    logger.error(
                        "Double oracle failed",
                        extra={"extra": {"t": t, "state": s, "sigma": radius}},
                    )
                    raise
                policy[t - 1, s] = saddle.policy
                confounders[t - 1, s] = saddle.confounder
                values[t - 1, s] = saddle.value
                gaps[t - 1, s] = saddle.gap
                iterations[t - 1, s] = saddle.vertices
                for a in range(num_actions):
                    row = TVBackupEngine.transport(center, table[s, a], radius)
                    q_values[t - 1, s, a] = row @ table[s, a]
            logger.debug(
                "Robust SC step solved",
                extra={"extra": {"t": t, "max_gap": float(gaps[t - 1].max()), "max_vertices": int(iterations[t - 1].max())}},
            )

        return RobustSCReport(
            values=ValueTables(values, q_values),
            policy=StochasticPolicy(policy),
            worst_confounders=confounders,
            saddle_gaps=gaps,
            oracle_iterations=iterations,
            sigma=radius,
        )

    def solve_saddle(self, payoff: np.ndarray, center: np.ndarray, radius: float) -> SaddlePoint:
        """
        Solve max_{pi in simplex} min_{P in TVBall(center, radius)} pi^T payoff P.

        Args:
            payoff: (A, C) matrix M[a, c]
            center: nominal confounder distribution (C,)
            radius: validated sigma

        The confounder side only ever needs ball vertices: the best response
        to a fixed pi is the greedy transport. The action side is the matrix
        game restricted to the vertices found so far. The seed vertex is the
        nominal center.
        """
        vertices: List[np.ndarray] = [center.copy()]
        while True:
            restricted = payoff @ np.array(vertices).T  # (A, J)
            game = solve_matrix_game(restricted, self._simplex)
            pi = game.row_strategy
            mixed = pi @ payoff
            response = TVBackupEngine.transport(center, mixed, radius)
            lower = float(response @ mixed)
            gap = max(game.value - lower, 0.0)
            if gap <= self.gap_tolerance:
                break
            if any(np.array_equal(response, vertex) for vertex in vertices):
                raise ConvergenceError(
                    "double oracle", len(vertices), gap, "best response repeats an existing vertex"
                )
            if len(vertices) >= self.max_vertices:
                raise ConvergenceError("double oracle", len(vertices), gap, "vertex cap reached")
            vertices.append(response)

        # the minimizer's equilibrium mix stays a saddle partner for a purified policy
        confounder = game.column_strategy @ np.array(vertices)
        pure = self._pure_action(payoff, center, radius, lower)
        if pure is not None:
            action, value = pure
            return SaddlePoint(np.eye(payoff.shape[0])[action], confounder, value, gap, len(vertices))
        return SaddlePoint(pi, confounder, lower, gap, len(vertices))

    @staticmethod
    def _pure_action(payoff: np.ndarray, center: np.ndarray, radius: float, value: float):
        """Lowest-index pure action whose robust value reaches the mixed value, if any."""
        pure_values = np.array([
            TVBackupEngine.transport(center, row, radius) @ row for row in payoff
        ])
        action = int(TabularEngine.greedy(pure_values[None, :])[0])
        if pure_values[action] >= value - TabularEngine.TIE_TOLERANCE:
            return action, float(pure_values[action])
        return None
