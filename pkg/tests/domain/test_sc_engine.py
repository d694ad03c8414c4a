"""
Unit tests for SC-MDP marginalization, evaluation and robust SC solving.
"""
import numpy as np
import pytest

from app.domain.engines import HardInstance, SCEngine, TabularEngine
from app.domain.entities import SCMDPSpec, StochasticPolicy, TVBall
from app.domain.exceptions import ConvergenceError, InvalidRadiusError, ShapeMismatchError


def _half_and_half(horizon: int) -> StochasticPolicy:
    table = np.zeros((horizon, 4, 2))
    table[:, :, 0] = 1.0
    table[0, 0] = [0.5, 0.5]
    return StochasticPolicy(table)


class TestSCMDPSpec:
    """Test SC-MDP construction."""

    def test_factored_constructor_builds_product_kernel(self, rng):
        """The joint kernel is the product of the dimension kernels."""
        labels = [(0, 0), (0, 1), (1, 0), (1, 1)]
        first = rng.dirichlet(np.ones(2), size=(2, 4, 2, 3))
        second = rng.dirichlet(np.ones(2), size=(2, 4, 2, 3))
        spec = SCMDPSpec.from_factored([first, second], np.full((2, 3), 1 / 3), np.zeros((2, 4, 2)), labels)
        assert spec.is_factorized()
        np.testing.assert_allclose(spec.dimension_marginals(0), first, atol=1e-12)
        assert spec.kernel(1)[0, 1, 2, 3] == pytest.approx(first[0, 0, 1, 2, 1] * second[0, 0, 1, 2, 1])

    def test_confounder_shape_checked(self):
        """P^c must be (T, C)."""
        with pytest.raises(ShapeMismatchError):
            SCMDPSpec(np.ones((1, 1, 1, 2, 1)), np.array([[1.0]]), np.zeros((1, 1, 1)))


class TestMarginalize:
    """Test the SC-MDP to standard MDP reduction."""

    def test_point_mass_confounder_selects_kernel(self, rng):
        """P^c = delta_0 gives P_t(.|s,a) = P_t(.|s,a,0)."""
        kernels = rng.dirichlet(np.ones(3), size=(2, 3, 2, 2))
        confounder = np.tile([1.0, 0.0], (2, 1))
        spec = SCMDPSpec(kernels, confounder, np.zeros((2, 3, 2)))
        np.testing.assert_array_equal(SCEngine.marginalize(spec).transitions, kernels[:, :, :, 0])

    def test_policy_values_agree(self, random_spec, rng):
        """evaluate_policy on the marginal equals sc_policy_value for random policies."""
        spec = random_spec(horizon=4, num_states=4, num_actions=3, confounder_size=3)
        marginal = SCEngine.marginalize(spec)
        for _ in range(50):
            policy = StochasticPolicy.random(4, 4, 3, rng)
            np.testing.assert_allclose(
                TabularEngine.evaluate_policy(marginal, policy).values,
                SCEngine.sc_policy_value(spec, policy).values,
                atol=1e-12,
            )


class TestSCPolicyValue:
    """Test nominal and robust SC evaluation."""

    def test_zero_rewards_give_zero_values(self, rng):
        """All-zero rewards give identically zero SC-values."""
        kernels = rng.dirichlet(np.ones(3), size=(3, 3, 2, 2))
        spec = SCMDPSpec(kernels, np.full((3, 2), 0.5), np.zeros((3, 3, 2)))
        values = SCEngine.sc_policy_value(spec, StochasticPolicy.uniform(3, 3, 2))
        assert np.all(values.values == 0.0)

    def test_hard_instance_nominal_stay(self):
        """Staying at [0,0] collects T = 10."""
        spec = HardInstance.build_rsc_mdp(10)
        policy = StochasticPolicy.deterministic(np.zeros((10, 4), dtype=int), 2)
        assert SCEngine.sc_policy_value(spec, policy).v(1)[0] == 10.0

    def test_robust_half_policy_at_full_radius(self):
        """pi_1(0|[0,0]) = 1/2, sigma = 1, T = 10 gives 5.5."""
        spec = HardInstance.build_rsc_mdp(10)
        values = SCEngine.robust_sc_policy_value(spec, _half_and_half(10), 1.0)
        assert values.v(1)[0] == pytest.approx(5.5, abs=1e-12)

    def test_robust_stay_policy_at_full_radius(self):
        """pi_1(0|[0,0]) = 1, sigma = 1, T = 10 gives 1.0."""
        spec = HardInstance.build_rsc_mdp(10)
        policy = StochasticPolicy.deterministic(np.zeros((10, 4), dtype=int), 2)
        values = SCEngine.robust_sc_policy_value(spec, policy, 1.0)
        assert values.v(1)[0] == pytest.approx(1.0, abs=1e-12)

    def test_zero_radius_matches_nominal(self, random_spec, rng):
        """sigma = 0 equals sc_policy_value for random policies."""
        spec = random_spec(horizon=3, num_states=3, num_actions=2, confounder_size=3)
        for _ in range(50):
            policy = StochasticPolicy.random(3, 3, 2, rng)
            np.testing.assert_allclose(
                SCEngine.robust_sc_policy_value(spec, policy, 0.0).values,
                SCEngine.sc_policy_value(spec, policy).values,
                atol=1e-12,
            )

    def test_radius_validated(self, random_spec):
        """sigma outside [0, 1] is rejected."""
        spec = random_spec()
        with pytest.raises(InvalidRadiusError):
            SCEngine.robust_sc_policy_value(spec, StochasticPolicy.uniform(3, 3, 2), 1.5)


class TestRobustSCValueIteration:
    """Test the double-oracle robust SC solver."""

    def test_hard_instance_full_radius(self):
        """sigma = 1, T = 10: V*_1([0,0]) = 5.5 with pi*_1(0|[0,0]) = 1/2."""
        report = SCEngine().robust_sc_value_iteration(HardInstance.build_rsc_mdp(10), 1.0)
        assert report.values.v(1)[0] == pytest.approx(5.5, abs=1e-9)
        assert report.policy.at(1)[0, 0] == pytest.approx(0.5, abs=1e-9)

    def test_zero_radius_matches_marginal_optimum(self, random_spec):
        """sigma = 0 yields a deterministic policy equal to optimal_policy on the marginal."""
        spec = random_spec(horizon=3, num_states=4, num_actions=3, confounder_size=2)
        report = SCEngine().robust_sc_value_iteration(spec, 0.0)
        policy, optimal = TabularEngine.optimal_policy(SCEngine.marginalize(spec))
        assert report.policy.is_deterministic
        np.testing.assert_array_equal(report.policy.greedy_actions(), policy.greedy_actions())
        np.testing.assert_allclose(report.values.values, optimal.values, atol=1e-12)

    def test_saddle_gaps_within_tolerance(self, random_spec):
        """Every per-(t, s) saddle gap is at most 1e-9."""
        report = SCEngine().robust_sc_value_iteration(random_spec(), 0.4)
        assert report.max_saddle_gap <= 1e-9

    def test_worst_confounders_inside_ball(self, random_spec):
        """Equilibrium confounder mixes stay in the TV ball."""
        spec = random_spec()
        report = SCEngine().robust_sc_value_iteration(spec, 0.3)
        for t in range(spec.horizon):
            ball = TVBall(spec.nominal_confounder[t], 0.3)
            for s in range(spec.num_states):
                assert ball.contains(report.worst_confounders[t, s])

    def test_saddle_point_is_unimprovable(self, random_spec):
        """Neither side gains more than 1e-9 by a unilateral best response."""
        spec = random_spec(horizon=2, num_states=3, num_actions=3, confounder_size=3)
        engine = SCEngine()
        report = engine.robust_sc_value_iteration(spec, 0.5)
        for t in range(1, spec.horizon + 1):
            table = SCEngine.continuation(spec, t, report.values.v(t + 1))
            for s in range(spec.num_states):
                pi = report.policy.at(t)[s]
                confounder = report.worst_confounders[t - 1, s]
                value = report.values.v(t)[s]
                assert np.max(table[s] @ confounder) <= value + 1e-9
                saddle = engine.solve_saddle(table[s], spec.confounder(t), 0.5)
                assert saddle.value == pytest.approx(value, abs=1e-12)
                assert float(pi @ table[s] @ confounder) >= value - 1e-9

    def test_no_random_policy_beats_optimum(self, random_spec, rng):
        """Random stochastic policies never exceed V* by more than 1e-8."""
        for _ in range(5):
            spec = random_spec(horizon=3, num_states=3, num_actions=3, confounder_size=3)
            sigma = float(rng.uniform())
            optimum = SCEngine().robust_sc_value_iteration(spec, sigma).values.values
            for _ in range(100):
                policy = StochasticPolicy.random(3, 3, 3, rng)
                values = SCEngine.robust_sc_policy_value(spec, policy, sigma).values
                assert np.all(values <= optimum + 1e-8)

    @pytest.mark.slow
    def test_no_random_policy_beats_optimum_full_grid(self, random_spec, rng):
        """50 specs x 1000 random policies, sizes up to |S| = 4, |A| = 3, |C| = 3, T = 4."""
        for _ in range(50):
            spec = random_spec(
                horizon=int(rng.integers(1, 5)),
                num_states=int(rng.integers(1, 5)),
                num_actions=int(rng.integers(1, 4)),
                confounder_size=int(rng.integers(1, 4)),
            )
            sigma = float(rng.uniform())
            optimum = SCEngine().robust_sc_value_iteration(spec, sigma).values.values
            for _ in range(1000):
                policy = StochasticPolicy.random(spec.horizon, spec.num_states, spec.num_actions, rng)
                values = SCEngine.robust_sc_policy_value(spec, policy, sigma).values
                assert np.all(values <= optimum + 1e-8)

    def test_monotone_in_radius(self, random_spec):
        """Larger confounder radius never increases V*."""
        spec = random_spec()
        engine = SCEngine()
        previous = None
        for sigma in (0.0, 0.2, 0.5, 1.0):
            values = engine.robust_sc_value_iteration(spec, sigma).values.values
            if previous is not None:
                assert np.all(values <= previous + 1e-8)
            previous = values

    def test_vertex_cap_enforced(self):
        """A cap of one vertex cannot close a gap that needs two."""
        with pytest.raises(ConvergenceError):
            SCEngine(max_vertices=1).robust_sc_value_iteration(HardInstance.build_rsc_mdp(3), 1.0)
