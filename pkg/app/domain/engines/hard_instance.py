"""
Hard-instance family separating RSC-optimal from RMDP-optimal policies.

Four states labeled [0,0], [0,1], [1,0], [1,1] and two actions. Only the
first step from [0,0] is informative; every later step keeps the state.
Rewards are 1 at [0,0] and [1,1] and 0 elsewhere, for every step.

Pure computation - no I/O, no external state.
"""
import logging

import numpy as np

from app.domain.engines.sc_engine import SCEngine
from app.domain.engines.tv_backup_engine import TVBackupEngine
from app.domain.entities import FiniteMDP, SCMDPSpec, Theorem2Report
from app.domain.exceptions import InvalidHorizonError, InvalidRadiusError
from app.domain.validators import DistributionValidator

logger = logging.getLogger(__name__)

STATE_LABELS = ((0, 0), (0, 1), (1, 0), (1, 1))
ORIGIN = 0          # [0,0]
NUM_ACTIONS = 2
MIN_HORIZON = 2


def _check_horizon(horizon: int) -> int:
    if int(horizon) != horizon or horizon < MIN_HORIZON:
        raise InvalidHorizonError(horizon, MIN_HORIZON)
    return int(horizon)


def _rewards(horizon: int) -> np.ndarray:
    rewards = np.zeros((horizon, 4, NUM_ACTIONS))
    rewards[:, 0, :] = 1.0  # [0,0]
    rewards[:, 3, :] = 1.0  # [1,1]
    return rewards


def _identity_kernel(horizon: int) -> np.ndarray:
    """(T, S, A, S) array keeping every state."""
    return np.broadcast_to(np.eye(4)[:, None, :], (horizon, 4, NUM_ACTIONS, 4)).copy()


class HardInstance:
    """
    Builder and verifier for the separation instance.

    Nominal first step from [0,0]: action 0 stays at [0,0], action 1 moves to
    [0,1]. Under the perturbed confounder (c = 1) action 0 moves to [1,0] and
    action 1 to [1,1]. The nominal confounder is the point mass on c = 0, so
    marginalizing the SC-MDP recovers the standard MDP exactly.
    """

    @staticmethod
    def build_standard_mdp(horizon: int) -> FiniteMDP:
        """
        Raises:
            InvalidHorizonError: If horizon < 2
        """
        horizon = _check_horizon(horizon)
        transitions = _identity_kernel(horizon)
        transitions[0, ORIGIN, 0] = np.eye(4)[0]  # -> [0,0]
        transitions[0, ORIGIN, 1] = np.eye(4)[1]  # -> [0,1]
        return FiniteMDP(transitions, _rewards(horizon), STATE_LABELS)

    @staticmethod
    def build_rsc_mdp(horizon: int) -> SCMDPSpec:
        """
        SC-MDP with two confounder values whose nominal marginal is the standard MDP.

        Raises:
            InvalidHorizonError: If horizon < 2
        """
        horizon = _check_horizon(horizon)
        nominal = HardInstance.build_standard_mdp(horizon).transitions
        kernels = np.repeat(nominal[:, :, :, None, :], 2, axis=3)
        kernels[0, ORIGIN, 0, 1] = np.eye(4)[2]  # c = 1: -> [1,0]
        kernels[0, ORIGIN, 1, 1] = np.eye(4)[3]  # c = 1: -> [1,1]
        confounder = np.zeros((horizon, 2))
        confounder[:, 0] = 1.0
        return SCMDPSpec(kernels, confounder, _rewards(horizon), STATE_LABELS)

    @staticmethod
    def verify_theorem2(
        horizon: int, sigma1: float, sigma2: float, engine: SCEngine = None
    ) -> Theorem2Report:
        """
        Compare the RSC-optimal policy with the RMDP-optimal policy, both scored
        by their worst-case SC-value at radius sigma2 from [0,0].

        Args:
            horizon: T >= 2
            sigma1: RMDP radius in [0, 1]
            sigma2: confounder radius in (1/2, 1]

        Raises:
            InvalidHorizonError: If horizon < 2
            InvalidRadiusError: If a radius is outside its admissible range
        """
        horizon = _check_horizon(horizon)
        sigma1 = DistributionValidator.validate_radius(sigma1)
        sigma2 = DistributionValidator.validate_radius(sigma2)
        if sigma2 <= 0.5:
            raise InvalidRadiusError(sigma2, "(0.5, 1]")
        engine = engine or SCEngine()

        standard = HardInstance.build_standard_mdp(horizon)
        confounded = HardInstance.build_rsc_mdp(horizon)
        rmdp = TVBackupEngine.robust_value_iteration(standard, sigma1)
        rsc = engine.robust_sc_value_iteration(confounded, sigma2)
        rmdp_under_rsc = SCEngine.robust_sc_policy_value(confounded, rmdp.policy, sigma2)

        phi = np.eye(4)[ORIGIN]
        report = Theorem2Report(
            horizon=horizon,
            sigma1=sigma1,
            sigma2=sigma2,
            v_rsc_star=rsc.values.at_distribution(1, phi),
            v_rmdp_policy=rmdp_under_rsc.at_distribution(1, phi),
            rmdp_first_step_actions=rmdp.policy.greedy_actions()[0].tolist(),
            rsc_first_step_policy=rsc.policy.at(1)[ORIGIN].tolist(),
        )
        logger.info(
            "Separation verified",
            extra={"extra": {"T": horizon, "sigma1": sigma1, "sigma2": sigma2, "gap": report.gap, "holds": report.holds}},
        )
        return report
