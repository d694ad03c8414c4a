"""Dense linear programming: tableau simplex with Bland's rule, and matrix games on top of it.

Pure computation - no I/O, no external state.
"""
import logging
from dataclasses import dataclass

import numpy as np

from app.domain.exceptions import (
    ConvergenceError,
    InvalidParameterError,
    LPUnboundedError,
    ShapeMismatchError,
)
from app.domain.validators import DistributionValidator

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LPSolution:
    """Optimal primal point, constraint duals and objective of max c.x s.t. Ax <= b, x >= 0."""

    x: np.ndarray
    duals: np.ndarray
    objective: float
    iterations: int


@dataclass(frozen=True)
class GameSolution:
    """
    Mixed equilibrium of a zero-sum matrix game.

    row_strategy maximizes, column_strategy minimizes, value = row^T G column.
    """

    row_strategy: np.ndarray
    column_strategy: np.ndarray
    value: float


class DenseSimplex:
    """
    Exact tableau simplex for max c.x subject to Ax <= b, x >= 0 with b >= 0.

    The origin is feasible, so no phase one is needed. Bland's rule picks both
    the entering column (smallest index with negative reduced cost) and the
    leaving row (minimum ratio, smallest basic variable on ties), which rules
    out cycling and makes every run deterministic.
    """

    PIVOT_TOLERANCE = 1e-12
    MAX_ITERATIONS = 10_000

    def __init__(self, max_iterations: int = MAX_ITERATIONS):
        if max_iterations < 1:
            raise InvalidParameterError("max_iterations", max_iterations, "must be positive")
        self.max_iterations = max_iterations

    def solve(self, c, A, b) -> LPSolution:
        """
        Solve the LP.

        Raises:
            ShapeMismatchError: If c, A, b do not compose
            InvalidParameterError: If some b_i < 0 (origin infeasible)
            LPUnboundedError: If the objective is unbounded
            ConvergenceError: If the iteration cap is reached
        """
        objective = np.asarray(c, dtype=np.float64)
        matrix = np.asarray(A, dtype=np.float64)
        bounds = np.asarray(b, dtype=np.float64)
        if matrix.ndim != 2 or objective.shape != (matrix.shape[1],) or bounds.shape != (matrix.shape[0],):
            raise ShapeMismatchError("linear program", "c (n,), A (m, n), b (m,)", (objective.shape, matrix.shape, bounds.shape))
        for name, values in (("c", objective), ("A", matrix), ("b", bounds)):
            DistributionValidator.ensure_finite(values, f"linear program {name}")
        if bounds.size and bounds.min() < 0.0:
            raise InvalidParameterError("b", float(bounds.min()), "right-hand side must be non-negative")

        m, n = matrix.shape
        tableau = np.zeros((m + 1, n + m + 1))
        tableau[:m, :n] = matrix
        tableau[:m, n:n + m] = np.eye(m)
        tableau[:m, -1] = bounds
        tableau[m, :n] = -objective
        basis = np.arange(n, n + m)

        tol = self.PIVOT_TOLERANCE
        for iteration in range(self.max_iterations):
            reduced = tableau[m, :-1]
            candidates = np.flatnonzero(reduced < -tol)
            if candidates.size == 0:
                x = np.zeros(n + m)
                x[basis] = tableau[:m, -1]
                return LPSolution(
                    x=x[:n],
                    duals=tableau[m, n:n + m].copy(),
                    objective=float(tableau[m, -1]),
                    iterations=iteration,
                )
            entering = int(candidates[0])
            column = tableau[:m, entering]
            rows = np.flatnonzero(column > tol)
            if rows.size == 0:
                raise LPUnboundedError(entering)
            ratios = tableau[rows, -1] / column[rows]
            best = ratios.min()
            tied = rows[ratios <= best + tol * max(1.0, abs(best))]
            leaving = int(tied[np.argmin(basis[tied])])
            self._pivot(tableau, leaving, entering)
            basis[leaving] = entering

        raise ConvergenceError("DenseSimplex", self.max_iterations, float("nan"), "iteration cap reached")

    @staticmethod
    def _pivot(tableau: np.ndarray, row: int, column: int) -> None:
        tableau[row] /= tableau[row, column]
        factors = tableau[:, column].copy()
        factors[row] = 0.0
        tableau -= np.outer(factors, tableau[row])


def solve_matrix_game(payoff, simplex: DenseSimplex = None) -> GameSolution:
    """
    Solve max_p min_q p^T G q for a payoff matrix G (rows maximize).

    Shifts G so every entry is at least 1, then solves the column player's LP
    max sum(y) s.t. G' y <= 1, y >= 0. The column strategy is y / sum(y) and
    the row strategy comes from the optimal duals.

    Raises:
        ShapeMismatchError: If G is not a non-empty 2-D array
    """
    game = np.asarray(payoff, dtype=np.float64)
    if game.ndim != 2 or game.size == 0:
        raise ShapeMismatchError("payoff matrix", "non-empty (rows, columns)", game.shape)
    DistributionValidator.ensure_finite(game, "payoff matrix")

    shift = 1.0 - float(game.min())
    shifted = game + shift
    solution = (simplex or DenseSimplex()).solve(
        np.ones(game.shape[1]), shifted, np.ones(game.shape[0])
    )
    total = solution.x.sum()
    shifted_value = 1.0 / total
    column = np.clip(solution.x, 0.0, None)
    row = np.clip(solution.duals, 0.0, None)
    return GameSolution(
        row_strategy=row / row.sum(),
        column_strategy=column / column.sum(),
        value=shifted_value - shift,
    )
