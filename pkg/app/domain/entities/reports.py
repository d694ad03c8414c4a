"""
Solver report entities.

Immutable results returned by the robust solvers and the separation verifier.
Each report knows how to render itself as a JSON-ready dict.
"""
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from app.domain.entities.finite_mdp import StochasticPolicy, ValueTables


@dataclass(frozen=True)
class RobustSolveReport:
    """
    Result of robust value iteration over (s,a)-rectangular TV balls.

    worst_case_rows[t-1, s, a] is the transition row attaining the infimum in
    the backup of Q_t(s, a).
    """

    values: ValueTables
    policy: StochasticPolicy
    worst_case_rows: np.ndarray
    sigma: float

    def to_dict(self) -> Dict:
        return {
            "kind": "rmdp",
            "sigma": self.sigma,
            "horizon": self.values.horizon,
            "values": self.values.values.tolist(),
            "q_values": self.values.q_values.tolist(),
            "policy": self.policy.greedy_actions().tolist(),
            "worst_case_rows": self.worst_case_rows.tolist(),
        }


@dataclass(frozen=True)
class RobustSCReport:
    """
    Result of robust SC value iteration.

    - values: optimal robust SC-values (Q holds the per-action robust backups)
    - policy: optimal policy, possibly strictly stochastic
    - worst_confounders[t-1, s]: worst-case confounder distribution at the saddle point
    - saddle_gaps[t-1, s]: achieved best-response gap
    - oracle_iterations[t-1, s]: number of double-oracle vertices used
    """

    values: ValueTables
    policy: StochasticPolicy
    worst_confounders: np.ndarray
    saddle_gaps: np.ndarray
    oracle_iterations: np.ndarray
    sigma: float

    @property
    def max_saddle_gap(self) -> float:
        return float(self.saddle_gaps.max()) if self.saddle_gaps.size else 0.0

    def to_dict(self) -> Dict:
        return {
            "kind": "rsc",
            "sigma": self.sigma,
            "horizon": self.values.horizon,
            "values": self.values.values.tolist(),
            "q_values": self.values.q_values.tolist(),
            "policy": self.policy.probabilities.tolist(),
            "worst_confounders": self.worst_confounders.tolist(),
            "saddle_gaps": self.saddle_gaps.tolist(),
            "max_saddle_gap": self.max_saddle_gap,
            "oracle_iterations": self.oracle_iterations.tolist(),
        }


@dataclass(frozen=True)
class Theorem2Report:
    """
    Separation between the RSC-optimal policy and the RMDP-optimal policy,
    both evaluated under the confounder uncertainty set at radius sigma2.

    The initial distribution is the point mass on state [0, 0].
    """

    horizon: int
    sigma1: float
    sigma2: float
    v_rsc_star: float
    v_rmdp_policy: float
    rmdp_first_step_actions: list = field(default_factory=list)
    rsc_first_step_policy: Optional[list] = None

    @property
    def gap(self) -> float:
        return self.v_rsc_star - self.v_rmdp_policy

    @property
    def bound(self) -> float:
        return self.horizon / 8.0

    @property
    def holds(self) -> bool:
        return self.gap >= self.bound

    def to_dict(self) -> Dict:
        return {
            "T": self.horizon,
            "sigma1": self.sigma1,
            "sigma2": self.sigma2,
            "initial_state": [0, 0],
            "V_rsc_star": self.v_rsc_star,
            "V_rmdp_policy": self.v_rmdp_policy,
            "gap": self.gap,
            "bound": self.bound,
            "holds": self.holds,
            "rmdp_first_step_actions": self.rmdp_first_step_actions,
            "rsc_first_step_policy": self.rsc_first_step_policy,
        }

    def summary_line(self) -> str:
        verdict = "holds" if self.holds else "FAILS"
        return (
            f"T={self.horizon} sigma1={self.sigma1:g} sigma2={self.sigma2:g}: "
            f"V_rsc*={self.v_rsc_star:.10g} V_rmdp={self.v_rmdp_policy:.10g} "
            f"gap={self.gap:.10g} bound=T/8={self.bound:g} -> {verdict}"
        )
