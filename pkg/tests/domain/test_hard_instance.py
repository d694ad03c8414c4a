"""
Unit tests for the separation instance and its verifier.
"""
import numpy as np
import pytest

from app.domain.engines import HardInstance, SCEngine
from app.domain.exceptions import InvalidHorizonError, InvalidRadiusError


class TestBuildStandardMDP:
    """Test the four-state standard MDP."""

    def test_move_action_reaches_zero_one(self):
        """T = 2: action 1 at t = 1 from [0,0] leads to [0,1] surely."""
        mdp = HardInstance.build_standard_mdp(2)
        origin, target = mdp.state_index([0, 0]), mdp.state_index([0, 1])
        assert mdp.transition(1)[origin, 1, target] == 1.0

    def test_other_states_absorbing(self):
        """Every state except [0,0] keeps itself at t = 1."""
        mdp = HardInstance.build_standard_mdp(5)
        for label in ([0, 1], [1, 0], [1, 1]):
            s = mdp.state_index(label)
            for a in range(2):
                assert mdp.transition(1)[s, a, s] == 1.0

    def test_later_steps_identity(self):
        """All kernels after t = 1 are the identity."""
        mdp = HardInstance.build_standard_mdp(4)
        for t in range(2, 5):
            for a in range(2):
                np.testing.assert_array_equal(mdp.transition(t)[:, a, :], np.eye(4))

    def test_rewards(self):
        """Reward 1 at [0,0] and [1,1], zero at [1,0] and [0,1]."""
        mdp = HardInstance.build_standard_mdp(3)
        assert np.all(mdp.reward(1)[mdp.state_index([1, 0])] == 0.0)
        assert np.all(mdp.reward(2)[mdp.state_index([0, 1])] == 0.0)
        assert np.all(mdp.reward(3)[mdp.state_index([1, 1])] == 1.0)

    @pytest.mark.parametrize("horizon", [0, 1])
    def test_short_horizon_rejected(self, horizon):
        """T < 2 is rejected."""
        with pytest.raises(InvalidHorizonError):
            HardInstance.build_standard_mdp(horizon)


class TestBuildRSCMDP:
    """Test the equivalent SC-MDP."""

    @pytest.mark.parametrize("horizon", [2, 5, 10])
    def test_marginal_equals_standard_exactly(self, horizon):
        """Marginalizing over the nominal confounder gives the standard MDP entrywise."""
        marginal = SCEngine.marginalize(HardInstance.build_rsc_mdp(horizon))
        standard = HardInstance.build_standard_mdp(horizon)
        np.testing.assert_array_equal(marginal.transitions, standard.transitions)
        np.testing.assert_array_equal(marginal.rewards, standard.rewards)

    def test_perturbed_move_reaches_one_one(self):
        """With c = 1, action 1 from [0,0] reaches [1,1]."""
        spec = HardInstance.build_rsc_mdp(3)
        assert spec.kernel(1)[spec.state_index([0, 0]), 1, 1, spec.state_index([1, 1])] == 1.0

    def test_later_steps_keep_state(self):
        """P_t(s|s,a,c) = 1 for t >= 2."""
        spec = HardInstance.build_rsc_mdp(4)
        for t in range(2, 5):
            for s in range(4):
                assert np.all(spec.kernel(t)[s, :, :, s] == 1.0)

    def test_nominal_confounder_is_point_mass(self):
        """P^c_t puts all mass on c = 0."""
        spec = HardInstance.build_rsc_mdp(3)
        np.testing.assert_array_equal(spec.nominal_confounder, np.tile([1.0, 0.0], (3, 1)))

    def test_policy_values_agree(self, rng):
        """Values under both representations agree for random policies."""
        from app.domain.engines import TabularEngine
        from app.domain.entities import StochasticPolicy

        spec = HardInstance.build_rsc_mdp(6)
        standard = HardInstance.build_standard_mdp(6)
        for _ in range(50):
            policy = StochasticPolicy.random(6, 4, 2, rng)
            np.testing.assert_allclose(
                TabularEngine.evaluate_policy(standard, policy).values,
                SCEngine.sc_policy_value(spec, policy).values,
                atol=1e-12,
            )


class TestVerifyTheorem2:
    """Test the separation verifier."""

    def test_reference_point(self):
        """T = 10, sigma1 = 0.3, sigma2 = 1 gives 5.5 vs 1.0."""
        report = HardInstance.verify_theorem2(10, 0.3, 1.0)
        assert report.v_rsc_star == pytest.approx(5.5, abs=1e-9)
        assert report.v_rmdp_policy == pytest.approx(1.0, abs=1e-9)
        assert report.gap == pytest.approx(4.5, abs=1e-9)
        assert report.bound == 1.25
        assert report.holds

    def test_three_quarter_radius(self):
        """T = 10, sigma1 = 1, sigma2 = 0.75 gives gap 2.25."""
        report = HardInstance.verify_theorem2(10, 1.0, 0.75)
        assert report.gap == pytest.approx(2.25, abs=1e-9)
        assert report.holds

    def test_shortest_horizon(self):
        """T = 2, sigma2 = 1: V_rsc_star = 1.5 and gap 0.5 >= 0.25."""
        report = HardInstance.verify_theorem2(2, 0.5, 1.0)
        assert report.v_rsc_star == pytest.approx(1.5, abs=1e-9)
        assert report.gap == pytest.approx(0.5, abs=1e-9)
        assert report.holds

    @pytest.mark.parametrize("horizon", [2, 5, 10, 50])
    @pytest.mark.parametrize("sigma2", [0.75, 1.0])
    def test_exact_gap(self, horizon, sigma2):
        """gap = (T - 1)(sigma2 - 1/2) and the T/8 bound holds."""
        report = HardInstance.verify_theorem2(horizon, 0.3, sigma2)
        assert report.gap == pytest.approx((horizon - 1) * (sigma2 - 0.5), abs=1e-9)
        assert report.holds

    @pytest.mark.parametrize("sigma2", [0.55, 0.6, 0.7, 0.85, 0.95])
    def test_rsc_value_constant_in_radius(self, sigma2):
        """V_rsc_star = 1 + (T - 1)/2 across (1/2, 1]."""
        report = HardInstance.verify_theorem2(10, 0.5, sigma2)
        assert report.v_rsc_star == pytest.approx(5.5, abs=1e-9)
        assert report.v_rsc_star >= report.v_rmdp_policy

    def test_bound_fails_near_half(self):
        """Near sigma2 = 1/2 the exact gap falls below T/8 and is reported as such."""
        report = HardInstance.verify_theorem2(10, 0.5, 0.55)
        assert report.gap == pytest.approx(0.45, abs=1e-9)
        assert not report.holds

    @pytest.mark.parametrize("sigma1", [0.0, 0.25, 0.5, 0.75, 1.0])
    def test_rmdp_policy_stays(self, sigma1):
        """The RMDP-optimal policy takes action 0 everywhere at t = 1."""
        report = HardInstance.verify_theorem2(10, sigma1, 1.0)
        assert report.rmdp_first_step_actions == [0, 0, 0, 0]

    @pytest.mark.parametrize("sigma2", [0.5, 0.2, 1.2])
    def test_sigma2_outside_half_open_interval_rejected(self, sigma2):
        """sigma2 must lie in (1/2, 1]."""
        with pytest.raises(InvalidRadiusError):
            HardInstance.verify_theorem2(10, 0.3, sigma2)

    def test_report_dict(self):
        """to_dict carries the documented keys."""
        document = HardInstance.verify_theorem2(4, 0.3, 1.0).to_dict()
        assert {"T", "sigma1", "sigma2", "V_rsc_star", "V_rmdp_policy", "gap", "bound", "holds"} <= set(document)
