"""
Reference worst cases over total-variation balls.

Neither formulation shares code with the solvers: one goes through the dual of
the linear program, the other through exhaustive search on a lattice.
"""
from itertools import product

import numpy as np

from app.domain.entities import TVBall
from app.domain.exceptions import ShapeMismatchError


class TVOracle:
    """
    min_{p in simplex, 1/2 ||p - p0||_1 <= sigma} p . v, computed without transport.

    The LP dual is a one-dimensional concave program in a clipping level alpha:

        max_{alpha in [min v, max v]}  p0 . min(v, alpha) - sigma * (alpha - min v)

    It is piecewise linear with breakpoints at the entries of v, so evaluating
    every entry and keeping the largest value solves it exactly.
    """

    def min_expectation(self, ball: TVBall, v) -> float:
        v = np.asarray(v, dtype=np.float64)
        if v.shape != ball.center.shape:
            raise ShapeMismatchError("value vector", ball.center.shape, v.shape)
        floor = float(v.min())
        return max(
            float(ball.center @ np.minimum(v, level)) - ball.radius * (float(level) - floor)
            for level in np.unique(v)
        )

    def worst_case(self, p0, v, sigma: float) -> float:
        return self.min_expectation(TVBall(p0, sigma), v)

    @staticmethod
    def grid_worst_case(p0, v, sigma: float, resolution: int = 200) -> float:
        """
        Exhaustive search over the lattice {k / resolution} of the simplex.

        Only practical for up to three or four outcomes; the lattice value is
        an upper bound that tightens as resolution grows.
        """
        p0 = np.asarray(p0, dtype=np.float64)
        v = np.asarray(v, dtype=np.float64)
        best = np.inf
        for head in product(range(resolution + 1), repeat=p0.size - 1):
            rest = resolution - sum(head)
            if rest < 0:
                continue
            point = np.array([*head, rest], dtype=np.float64) / resolution
            if 0.5 * np.abs(point - p0).sum() <= sigma + 1e-12:
                best = min(best, float(point @ v))
        return best
