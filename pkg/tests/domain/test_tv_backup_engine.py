"""
Unit tests for the total-variation worst case and robust value iteration.
"""
import numpy as np
import pytest

from app.domain.engines import HardInstance, TabularEngine, TVBackupEngine
from app.domain.entities import TVBall
from app.domain.exceptions import InvalidDistributionError, InvalidRadiusError, ShapeMismatchError


class TestWorstCaseExpectation:
    """Test the greedy mass-transport worst case."""

    def test_zero_radius_returns_center(self):
        """sigma = 0 leaves p0 untouched."""
        p0 = np.array([0.2, 0.3, 0.5])
        v = np.array([3.0, -1.0, 2.0])
        value, worst = TVBackupEngine.worst_case_expectation(p0, v, 0.0)
        assert value == pytest.approx(p0 @ v, abs=1e-15)
        np.testing.assert_array_equal(worst, p0)

    def test_two_point_example(self):
        """p0 = [0.5, 0.5], v = [0, 1], sigma = 0.2 gives 0.3 at [0.7, 0.3]."""
        value, worst = TVBackupEngine.worst_case_expectation([0.5, 0.5], [0.0, 1.0], 0.2)
        assert value == pytest.approx(0.3, abs=1e-12)
        np.testing.assert_allclose(worst, [0.7, 0.3], atol=1e-12)

    @pytest.mark.parametrize("sigma", [0.1, 0.4, 0.9])
    def test_point_mass_center(self, sigma):
        """Point mass on x moves sigma onto min(v): (1 - sigma) x + sigma min(v)."""
        v = np.array([0.3, 2.0, 0.7, 1.1])
        p0 = np.eye(4)[1]
        value, _ = TVBackupEngine.worst_case_expectation(p0, v, sigma)
        assert value == pytest.approx((1 - sigma) * 2.0 + sigma * 0.3, abs=1e-12)

    def test_unit_radius_reaches_minimum(self, rng):
        """sigma = 1 covers the simplex, so the value is min(v)."""
        p0 = rng.dirichlet(np.ones(5))
        v = rng.normal(size=5)
        value, _ = TVBackupEngine.worst_case_expectation(p0, v, 1.0)
        assert value == pytest.approx(v.min(), abs=1e-12)

    def test_mass_goes_to_lowest_index_argmin(self):
        """With two minimal entries the lowest index receives the mass."""
        _, worst = TVBackupEngine.worst_case_expectation([0.0, 0.0, 1.0], [1.0, 1.0, 5.0], 0.5)
        np.testing.assert_allclose(worst, [0.5, 0.0, 0.5])

    def test_worst_row_in_ball(self, rng):
        """The returned distribution is a member of the ball."""
        for _ in range(50):
            p0 = rng.dirichlet(np.ones(6))
            sigma = rng.uniform()
            _, worst = TVBackupEngine.worst_case_expectation(p0, rng.normal(size=6), sigma)
            assert TVBall(p0, sigma).contains(worst)

    def test_worst_row_on_boundary_when_mass_available(self, rng):
        """The moved mass is min(sigma, mass outside the minimizing entries)."""
        for _ in range(50):
            p0 = rng.dirichlet(np.ones(4))
            v = rng.normal(size=4)
            sigma = rng.uniform(0.01, 1.0)
            _, worst = TVBackupEngine.worst_case_expectation(p0, v, sigma)
            movable = p0[v > v.min()].sum()
            assert TVBall(p0, sigma).distance(worst) == pytest.approx(min(sigma, movable), abs=1e-12)

    @pytest.mark.parametrize("sigma", [-0.01, 1.01, float("nan")])
    def test_radius_out_of_range_rejected(self, sigma):
        """Radii are validated, never clamped."""
        with pytest.raises(InvalidRadiusError):
            TVBackupEngine.worst_case_expectation([0.5, 0.5], [0.0, 1.0], sigma)

    def test_empty_support_rejected(self):
        """An empty center is not a distribution."""
        with pytest.raises(InvalidDistributionError):
            TVBackupEngine.worst_case_expectation([], [], 0.1)

    def test_length_mismatch_rejected(self):
        """v must match p0 in length."""
        with pytest.raises(ShapeMismatchError):
            TVBackupEngine.worst_case_expectation([0.5, 0.5], [0.0, 1.0, 2.0], 0.1)


class TestRobustValueIteration:
    """Test robust backward induction over (s,a)-rectangular balls."""

    def test_zero_radius_matches_optimal_policy_bitwise(self, random_mdp):
        """sigma = 0 reproduces the nominal solution exactly."""
        mdp = random_mdp(horizon=5, num_states=4, num_actions=3)
        policy, optimal = TabularEngine.optimal_policy(mdp)
        report = TVBackupEngine.robust_value_iteration(mdp, 0.0)
        np.testing.assert_array_equal(report.values.values, optimal.values)
        np.testing.assert_array_equal(report.values.q_values, optimal.q_values)
        np.testing.assert_array_equal(report.policy.probabilities, policy.probabilities)

    def test_monotone_in_radius(self, random_mdp):
        """Larger radius never increases the robust value."""
        mdp = random_mdp(horizon=4, num_states=4, num_actions=2)
        previous = None
        for sigma in (0.0, 0.1, 0.3, 0.6, 1.0):
            values = TVBackupEngine.robust_value_iteration(mdp, sigma).values.values
            if previous is not None:
                assert np.all(values <= previous + 1e-12)
            previous = values

    def test_worst_rows_inside_their_balls(self, random_mdp):
        """Every attained worst-case row lies in its ball."""
        mdp = random_mdp(horizon=3, num_states=3, num_actions=2)
        report = TVBackupEngine.robust_value_iteration(mdp, 0.35)
        for t in range(3):
            for s in range(3):
                for a in range(2):
                    ball = TVBall(mdp.transitions[t, s, a], 0.35)
                    assert ball.contains(report.worst_case_rows[t, s, a])

    @pytest.mark.parametrize("sigma", [0.0, 0.25, 0.5, 0.75, 1.0])
    def test_hard_instance_prefers_staying(self, sigma):
        """Action 0 is robust-optimal at every state at t = 1."""
        report = TVBackupEngine.robust_value_iteration(HardInstance.build_standard_mdp(10), sigma)
        assert np.all(report.policy.greedy_actions()[0] == 0)

    @pytest.mark.parametrize("sigma", [0.0, 0.25, 0.5, 0.75, 1.0])
    def test_hard_instance_geometric_values(self, sigma):
        """V_t([0,0]) = sum_{k=t}^{T} (1 - sigma)^(k - t)."""
        horizon = 10
        mdp = HardInstance.build_standard_mdp(horizon)
        report = TVBackupEngine.robust_value_iteration(mdp, sigma)
        origin = mdp.state_index([0, 0])
        for t in range(1, horizon + 1):
            expected = sum((1 - sigma) ** (k - t) for k in range(t, horizon + 1))
            assert report.values.v(t)[origin] == pytest.approx(expected, abs=1e-9)

    def test_half_radius_second_step_value(self):
        """sigma = 0.5, T = 10: V_2([0,0]) = 1.99609375."""
        report = TVBackupEngine.robust_value_iteration(HardInstance.build_standard_mdp(10), 0.5)
        assert report.values.v(2)[0] == pytest.approx(1.99609375, abs=1e-12)

    def test_report_serializes(self, random_mdp):
        """to_dict exposes the solve in JSON-ready form."""
        report = TVBackupEngine.robust_value_iteration(random_mdp(horizon=2), 0.2)
        document = report.to_dict()
        assert document["kind"] == "rmdp"
        assert len(document["values"]) == 3
