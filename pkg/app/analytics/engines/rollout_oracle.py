"""
Monte Carlo evaluation of SC-MDP policies.

Samples c_t from a given confounder distribution, the next state from the
per-confounder kernel and the action from the policy; no backward induction.
"""
from typing import Optional

import numpy as np

from app.domain.entities import SCMDPSpec, StochasticPolicy


def simulate_returns(
    spec: SCMDPSpec,
    policy: StochasticPolicy,
    initial_state: int,
    episodes: int,
    rng: np.random.Generator,
    confounders: Optional[np.ndarray] = None,
) -> np.ndarray:
    """
    Undiscounted returns of `episodes` trajectories from initial_state.

    Args:
        confounders: (T, C) distributions to sample c_t from; defaults to the
            spec's nominal ones
    """
    confounders = spec.nominal_confounder if confounders is None else np.asarray(confounders)
    returns = np.zeros(episodes)
    states = np.full(episodes, initial_state)
    for t in range(1, spec.horizon + 1):
        pi_t = policy.at(t)
        actions = np.array([rng.choice(spec.num_actions, p=pi_t[s]) for s in states])
        returns += spec.reward(t)[states, actions]
        hidden = rng.choice(spec.confounder_size, size=episodes, p=confounders[t - 1])
        kernel = spec.kernel(t)
        states = np.array([
            rng.choice(spec.num_states, p=kernel[s, a, c]) for s, a, c in zip(states, actions, hidden)
        ])
    return returns
