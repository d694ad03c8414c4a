"""
Exact max-min for two-action saddle problems.

For pi = (1 - x, x) the robust value f(x) = min_{P in ball} P . w(x) with
w(x) = (1 - x) M[0] + x M[1]. The minimizing P depends only on the order of
the entries of w(x), so f is affine between the points where two entries
cross. Its maximum over [0, 1] is therefore attained at 0, 1 or a crossing,
and evaluating the TV oracle at each of them is exact.
"""
from dataclasses import dataclass
from typing import List

import numpy as np

from app.analytics.engines.tv_oracle import TVOracle
from app.domain.entities import TVBall
from app.domain.exceptions import ShapeMismatchError


@dataclass(frozen=True)
class OneDimensionalOptimum:
    weight: float  # probability of action 1
    value: float


def crossing_points(payoff: np.ndarray) -> List[float]:
    """0, 1 and every x in (0, 1) where two entries of w(x) are equal."""
    slope = payoff[1] - payoff[0]
    points = {0.0, 1.0}
    for i in range(payoff.shape[1]):
        for j in range(i + 1, payoff.shape[1]):
            gap = slope[i] - slope[j]
            if gap == 0.0:
                continue
            x = (payoff[0, j] - payoff[0, i]) / gap
            if 0.0 < x < 1.0:
                points.add(float(x))
    return sorted(points)


class PiecewiseOracle:
    """Maximizes the concave robust value of a two-action mixture."""

    def __init__(self, oracle: TVOracle = None):
        self.oracle = oracle or TVOracle()

    def robust_value(self, payoff: np.ndarray, ball: TVBall, weight: float) -> float:
        mixed = (1.0 - weight) * payoff[0] + weight * payoff[1]
        return self.oracle.min_expectation(ball, mixed)

    def maximize(self, payoff: np.ndarray, center: np.ndarray, radius: float) -> OneDimensionalOptimum:
        payoff = np.asarray(payoff, dtype=np.float64)
        if payoff.ndim != 2 or payoff.shape[0] != 2:
            raise ShapeMismatchError("payoff rows", 2, payoff.shape[0] if payoff.ndim else 0)
        ball = TVBall(center, radius)
        candidates = [(x, self.robust_value(payoff, ball, x)) for x in crossing_points(payoff)]
        weight, value = max(candidates, key=lambda item: item[1])
        return OneDimensionalOptimum(weight, value)
