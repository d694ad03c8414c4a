"""Reference oracles used to cross-check the solvers and the learning pipeline."""

from app.analytics.engines.tv_oracle import TVOracle
from app.analytics.engines.piecewise_oracle import OneDimensionalOptimum, PiecewiseOracle, crossing_points
from app.analytics.engines.rollout_oracle import simulate_returns
from app.analytics.engines.information import discretize, mutual_information
from app.analytics.engines.graph_metrics import GraphScore, score_edges
from app.analytics.engines.bellman import SCResidual, robust_bellman_residual, sc_bellman_residual

__all__ = [
    "TVOracle",
    "OneDimensionalOptimum",
    "PiecewiseOracle",
    "crossing_points",
    "simulate_returns",
    "discretize",
    "mutual_information",
    "GraphScore",
    "score_edges",
    "SCResidual",
    "robust_bellman_residual",
    "sc_bellman_residual",
]
