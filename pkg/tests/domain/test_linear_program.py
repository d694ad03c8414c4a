"""
Unit tests for the dense simplex and the matrix-game reduction.
"""
import numpy as np
import pytest
from scipy.optimize import linprog

from app.domain.engines import DenseSimplex, solve_matrix_game
from app.domain.exceptions import InvalidParameterError, LPUnboundedError, ShapeMismatchError


class TestDenseSimplex:
    """Test the tableau simplex with Bland's rule."""

    def test_small_program(self):
        """max 3x + 2y, x + y <= 4, x + 3y <= 9, x <= 3 -> (3, 1), objective 11."""
        solution = DenseSimplex().solve([3.0, 2.0], [[1.0, 1.0], [1.0, 3.0], [1.0, 0.0]], [4.0, 9.0, 3.0])
        np.testing.assert_allclose(solution.x, [3.0, 1.0], atol=1e-12)
        assert solution.objective == pytest.approx(11.0, abs=1e-12)
        np.testing.assert_allclose(solution.duals, [2.0, 0.0, 1.0], atol=1e-12)

    def test_zero_objective_stops_at_origin(self):
        """Nothing to improve: zero iterations."""
        solution = DenseSimplex().solve([0.0, 0.0], [[1.0, 1.0]], [1.0])
        assert solution.iterations == 0
        np.testing.assert_array_equal(solution.x, [0.0, 0.0])

    def test_unbounded_detected(self):
        """max x s.t. -x <= 1 is unbounded."""
        with pytest.raises(LPUnboundedError):
            DenseSimplex().solve([1.0], [[-1.0]], [1.0])

    def test_negative_rhs_rejected(self):
        """The origin must be feasible."""
        with pytest.raises(InvalidParameterError):
            DenseSimplex().solve([1.0], [[1.0]], [-1.0])

    def test_shape_mismatch_rejected(self):
        """c, A and b must compose."""
        with pytest.raises(ShapeMismatchError):
            DenseSimplex().solve([1.0, 2.0], [[1.0]], [1.0])

    def test_matches_reference_solver(self, rng):
        """Objective agrees with scipy's HiGHS on random feasible programs."""
        for _ in range(30):
            m, n = rng.integers(2, 6, size=2)
            A = rng.uniform(0.1, 2.0, size=(m, n))
            b = rng.uniform(0.5, 3.0, size=m)
            c = rng.uniform(-1.0, 2.0, size=n)
            ours = DenseSimplex().solve(c, A, b)
            reference = linprog(-c, A_ub=A, b_ub=b, bounds=[(0, None)] * n, method="highs")
            assert ours.objective == pytest.approx(-reference.fun, abs=1e-9)


class TestMatrixGame:
    """Test zero-sum matrix games solved through the simplex."""

    def test_matching_pennies(self):
        """Uniform strategies, value 0."""
        game = solve_matrix_game([[1.0, -1.0], [-1.0, 1.0]])
        np.testing.assert_allclose(game.row_strategy, [0.5, 0.5], atol=1e-12)
        np.testing.assert_allclose(game.column_strategy, [0.5, 0.5], atol=1e-12)
        assert game.value == pytest.approx(0.0, abs=1e-12)

    def test_rock_paper_scissors(self):
        """Uniform equilibrium with value 0."""
        payoff = np.array([[0.0, -1.0, 1.0], [1.0, 0.0, -1.0], [-1.0, 1.0, 0.0]])
        game = solve_matrix_game(payoff)
        np.testing.assert_allclose(game.row_strategy, np.full(3, 1 / 3), atol=1e-12)
        assert game.value == pytest.approx(0.0, abs=1e-12)

    def test_dominant_row(self):
        """A dominating row is played with probability one."""
        game = solve_matrix_game([[2.0, 3.0], [1.0, 1.5]])
        np.testing.assert_allclose(game.row_strategy, [1.0, 0.0], atol=1e-12)
        assert game.value == pytest.approx(2.0, abs=1e-12)

    def test_equilibrium_guarantees(self, rng):
        """Row strategy secures the value; column strategy caps it."""
        for _ in range(30):
            payoff = rng.normal(size=tuple(rng.integers(2, 6, size=2)))
            game = solve_matrix_game(payoff)
            assert np.min(game.row_strategy @ payoff) >= game.value - 1e-9
            assert np.max(payoff @ game.column_strategy) <= game.value + 1e-9

    def test_empty_payoff_rejected(self):
        """A game needs at least one entry."""
        with pytest.raises(ShapeMismatchError):
            solve_matrix_game(np.zeros((0, 2)))
