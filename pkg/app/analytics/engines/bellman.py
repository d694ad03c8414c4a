"""
Bellman residuals of solver reports, recomputed through the TV oracle.

A residual of zero means every reported value satisfies its robust Bellman
equation exactly; solver tests compare the maxima against 1e-9.
"""
from dataclasses import dataclass

import numpy as np

from app.analytics.engines.tv_oracle import TVOracle
from app.domain.entities import FiniteMDP, RobustSCReport, RobustSolveReport, SCMDPSpec, TVBall


def robust_bellman_residual(mdp: FiniteMDP, sigma: float, report: RobustSolveReport, oracle: TVOracle = None) -> float:
    """max |Q_t(s,a) - r_t(s,a) - inf_P P.V_{t+1}| and max |V_t(s) - max_a Q_t(s,a)|."""
    oracle = oracle or TVOracle()
    values, q_values = report.values.values, report.values.q_values
    worst = 0.0
    for t in range(1, mdp.horizon + 1):
        rows, rewards = mdp.transition(t), mdp.reward(t)
        for s in range(mdp.num_states):
            for a in range(mdp.num_actions):
                backup = rewards[s, a] + oracle.worst_case(rows[s, a], values[t], sigma)
                worst = max(worst, abs(q_values[t - 1, s, a] - backup))
            worst = max(worst, abs(values[t - 1, s] - q_values[t - 1, s].max()))
    return worst


@dataclass(frozen=True)
class SCResidual:
    """
    - policy: |V - worst case of the reported policy against the ball|
    - confounder: |V - best pure response to the reported confounder|
    - q_values: |Q - per-action robust backup|
    - membership: 0 if every reported confounder lies in its ball, else 1
    """

    policy: float
    confounder: float
    q_values: float
    membership: float

    @property
    def worst(self) -> float:
        return max(self.policy, self.confounder, self.q_values, self.membership)


def sc_bellman_residual(spec: SCMDPSpec, sigma: float, report: RobustSCReport, oracle: TVOracle = None) -> SCResidual:
    """Check the robust SC Bellman equations as a saddle certificate at every (t, s)."""
    oracle = oracle or TVOracle()
    values, q_values = report.values.values, report.values.q_values
    policy_residual = confounder_residual = q_residual = membership = 0.0
    for t in range(1, spec.horizon + 1):
        center = spec.confounder(t)
        payoff_all = spec.reward(t)[:, :, None] + np.einsum("sacn,n->sac", spec.kernel(t), values[t])
        pi_t = report.policy.at(t)
        for s in range(spec.num_states):
            payoff = payoff_all[s]
            guarantee = oracle.worst_case(center, pi_t[s] @ payoff, sigma)
            policy_residual = max(policy_residual, abs(values[t - 1, s] - guarantee))
            confounder = report.worst_confounders[t - 1, s]
            response = float((payoff @ confounder).max())
            confounder_residual = max(confounder_residual, abs(values[t - 1, s] - response))
            if not TVBall(center, sigma).contains(confounder):
                membership = 1.0
            for a in range(spec.num_actions):
                backup = oracle.worst_case(center, payoff[a], sigma)
                q_residual = max(q_residual, abs(q_values[t - 1, s, a] - backup))
    return SCResidual(policy_residual, confounder_residual, q_residual, membership)
