"""Domain entities - core model objects."""

from app.domain.entities.finite_mdp import FiniteMDP, StochasticPolicy, ValueTables
from app.domain.entities.sc_mdp_spec import SCMDPSpec
from app.domain.entities.tv_ball import TVBall
from app.domain.entities.reports import RobustSolveReport, RobustSCReport, Theorem2Report
from app.domain.entities.transition import TransitionRecord, TransitionBatch

__all__ = [
    "FiniteMDP",
    "StochasticPolicy",
    "ValueTables",
    "SCMDPSpec",
    "TVBall",
    "RobustSolveReport",
    "RobustSCReport",
    "Theorem2Report",
    "TransitionRecord",
    "TransitionBatch",
]
