"""
Unit tests for the soft actor-critic learner.
"""
import numpy as np
import pytest

from app.domain.entities import TransitionBatch
from app.domain.enums import Activation
from app.domain.exceptions import InvalidParameterError
from app.domain.learning import SACAgent, SACConfig

from tests.domain.test_tiny_nn import assert_gradients_close, numeric_gradient


def small_agent(rng, **overrides) -> SACAgent:
    values = dict(state_dim=3, action_dim=2, hidden=(6,), hidden_activation=Activation.TANH)
    values.update(overrides)
    return SACAgent(SACConfig(**values), rng)


def make_batch(rng, size=8, steps=1) -> TransitionBatch:
    next_states = rng.normal(size=(size, 3))
    return TransitionBatch(
        states=rng.normal(size=(size, 3)),
        actions=rng.uniform(-1, 1, size=(size, 2)),
        rewards=rng.uniform(size=size),
        next_states=next_states,
        dones=np.zeros(size, dtype=bool),
        returns=rng.uniform(size=size),
        bootstrap_states=next_states,
        bootstrap_steps=np.full(size, steps, dtype=np.int64),
    )


class TestSACConfig:
    """Test hyperparameter validation."""

    @pytest.mark.parametrize("field, value", [
        ("gamma", 1.0),
        ("tau", 0.0),
        ("alpha", -0.1),
        ("actor_lr", 0.0),
        ("log_std_min", 3.0),
    ])
    def test_invalid_values_rejected(self, field, value):
        """Out-of-range hyperparameters raise InvalidParameterError."""
        with pytest.raises(InvalidParameterError):
            SACConfig(state_dim=3, action_dim=2, **{field: value})


class TestPolicy:
    """Test action sampling."""

    def test_actions_in_open_box(self, rng):
        """Squashed actions lie strictly inside (-1, 1)."""
        agent = small_agent(rng)
        actions = np.stack([agent.act(rng.normal(size=3), rng) for _ in range(50)])
        assert actions.shape == (50, 2)
        assert np.all(np.abs(actions) < 1.0)

    def test_deterministic_action_repeatable(self, rng):
        """deterministic=True ignores the generator."""
        agent = small_agent(rng)
        state = rng.normal(size=3)
        np.testing.assert_array_equal(agent.act(state, deterministic=True), agent.act(state, deterministic=True))


class TestCriticTargets:
    """Test the n-step soft target."""

    def test_terminal_target_is_return(self, rng):
        """m = 0 drops the bootstrap term."""
        agent = small_agent(rng)
        batch = make_batch(rng, steps=0)
        targets = agent.critic_targets(batch, rng.normal(size=(8, 2)))
        np.testing.assert_allclose(targets, batch.returns)

    def test_discount_power_follows_steps(self, rng):
        """The bootstrap term at m = 2 is gamma times the one at m = 1."""
        agent = small_agent(rng, gamma=0.9)
        batch = make_batch(rng, steps=1)
        noise = rng.normal(size=(8, 2))
        one = agent.critic_targets(batch, noise) - batch.returns
        batch.bootstrap_steps = np.full(8, 2, dtype=np.int64)
        two = agent.critic_targets(batch, noise) - batch.returns
        np.testing.assert_allclose(two, 0.9 * one, rtol=1e-12, atol=1e-12)


class TestActorGradient:
    """Test the analytic reparameterised actor gradient."""

    def test_matches_finite_differences(self, rng):
        """dJ/dtheta agrees with central differences at fixed noise."""
        agent = small_agent(rng, alpha=0.3)
        states = rng.normal(size=(5, 3))
        noise = rng.normal(size=(5, 2))

        agent.actor.zero_grad()
        agent.actor_backward(states, noise)
        analytic = {name: p.grad.copy() for name, p in agent.actor.named_parameters().items()}

        for name, param in agent.actor.named_parameters().items():
            numeric = numeric_gradient(lambda: agent.actor_objective(states, noise), param)
            assert_gradients_close(analytic[name], numeric)

    def test_critics_untouched_by_actor_step(self, rng):
        """The actor step leaves critic gradients at zero."""
        agent = small_agent(rng)
        agent.actor_backward(rng.normal(size=(4, 3)), rng.normal(size=(4, 2)))
        for net in (agent.critic1, agent.critic2):
            for param in net.parameters():
                assert not np.any(param.grad)


class TestUpdate:
    """Test the combined update step."""

    def test_targets_move_by_tau(self, rng):
        """Target weights become tau * critic + (1 - tau) * old target."""
        agent = small_agent(rng, tau=0.25)
        before = agent.target1.layers[0].weight.data.copy()
        agent.update(make_batch(rng), rng)
        expected = 0.25 * agent.critic1.layers[0].weight.data + 0.75 * before
        np.testing.assert_allclose(agent.target1.layers[0].weight.data, expected, atol=1e-12)

    def test_critic_loss_decreases_on_fixed_batch(self, rng):
        """Repeated updates fit the critics to a fixed terminal batch."""
        agent = small_agent(rng, critic_lr=1e-2)
        batch = make_batch(rng, size=32, steps=0)
        first = agent.update(batch, rng).critic
        for _ in range(300):
            last = agent.update(batch, rng).critic
        assert last < 0.5 * first

    def test_one_step_batch_accepted(self, rng):
        """Batches without n-step fields fall back to one-step targets."""
        agent = small_agent(rng)
        batch = TransitionBatch(
            rng.normal(size=(4, 3)), rng.uniform(-1, 1, size=(4, 2)), rng.uniform(size=4),
            rng.normal(size=(4, 3)), np.array([False, True, False, False]),
        )
        losses = agent.update(batch, rng)
        assert np.isfinite(losses.critic) and np.isfinite(losses.actor)
        assert agent.updates == 1
