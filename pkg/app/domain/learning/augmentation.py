"""
Confounder-perturbation augmentation.

A selected record has one state dimension i overwritten with the value of the
batch member that differs most from it in dimension i while agreeing most in
the remaining dimensions:

    k = argmax_k |s^i - s_k^i|^2 / (sum_{j != i} |s^j - s_k^j|^2 + eps)

The permuted state is then pushed through a frozen SCM to regenerate
(s_hat_{t+1}, r_hat). Candidates are always the batch as sampled, never
records already modified in the same pass.
"""
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

import numpy as np

from app.domain.entities import TransitionBatch
from app.domain.enums import AugmenterKind
from app.domain.exceptions import EmptyBatchError, InvalidParameterError
from app.domain.learning.scm_model import SCMModel

logger = logging.getLogger(__name__)

DENOMINATOR_GUARD = 1e-8


class Permutation(NamedTuple):
    """Result of one permutation: the new state, dimension i and partner k (0-based)."""

    state: np.ndarray
    dimension: int
    partner: int


def permute_dimension(
    states: np.ndarray,
    target_index: int,
    rng: np.random.Generator,
    dimension: Optional[int] = None,
    epsilon: float = DENOMINATOR_GUARD,
) -> Permutation:
    """
    Overwrite one dimension of states[target_index] with its most different partner.

    Args:
        states: K x n candidate pool (the sampled batch)
        target_index: row to modify
        rng: draws the dimension when none is forced
        dimension: optional fixed dimension
        epsilon: denominator guard

    Raises:
        EmptyBatchError: If K < 2
        InvalidParameterError: If target_index or dimension is out of range
    """
    states = np.asarray(states, dtype=np.float64)
    if states.ndim != 2 or states.shape[0] < 2:
        raise EmptyBatchError("permute_dimension candidates", states.shape[0] if states.ndim else 0, 2)
    count, width = states.shape
    if not 0 <= target_index < count:
        raise InvalidParameterError("target_index", target_index, f"must lie in [0, {count})")
    if dimension is None:
        dimension = int(rng.integers(width))
    elif not 0 <= dimension < width:
        raise InvalidParameterError("dimension", dimension, f"must lie in [0, {width})")

    squared = (states - states[target_index]) ** 2
    numerator = squared[:, dimension]
    denominator = np.delete(squared, dimension, axis=1).sum(axis=1) + epsilon
    ratio = numerator / denominator
    ratio[target_index] = -np.inf
    partner = int(np.argmax(ratio))

    state = states[target_index].copy()
    state[dimension] = states[partner, dimension]
    return Permutation(state, dimension, partner)


def permute_states(
    states: np.ndarray,
    indices: np.ndarray,
    rng: np.random.Generator,
    epsilon: float = DENOMINATOR_GUARD,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Apply permute_dimension to every listed row against the unmodified pool.

    Returns:
        (permuted states, chosen dimensions, chosen partners)
    """
    original = np.asarray(states, dtype=np.float64)
    permuted = original.copy()
    dimensions = np.zeros(len(indices), dtype=np.int64)
    partners = np.zeros(len(indices), dtype=np.int64)
    for slot, index in enumerate(indices):
        result = permute_dimension(original, int(index), rng, epsilon=epsilon)
        permuted[index] = result.state
        dimensions[slot] = result.dimension
        partners[slot] = result.partner
    return permuted, dimensions, partners


def selection_size(size: int, beta: float) -> int:
    """floor(beta% of size); beta is a percentage in [0, 100]."""
    if not 0.0 <= beta <= 100.0:
        raise InvalidParameterError("beta", beta, "augmentation ratio must lie in [0, 100]")
    return int(np.floor(beta * size / 100.0 + 1e-9))


def select_records(size: int, beta: float, rng: np.random.Generator) -> np.ndarray:
    """Uniform selection without replacement; no draws when nothing is selected."""
    count = selection_size(size, beta)
    if count == 0:
        return np.zeros(0, dtype=np.int64)
    return np.sort(rng.choice(size, size=count, replace=False)).astype(np.int64)


def regenerate(
    batch: TransitionBatch,
    indices: np.ndarray,
    states: np.ndarray,
    scm: SCMModel,
    rng: np.random.Generator,
) -> TransitionBatch:
    """
    Replace the selected records with (s_tilde, a, s_hat', r_hat) from the SCM.

    Regenerated records carry one-step targets; the rest keep theirs.
    """
    result = batch.with_targets()
    if len(indices) == 0:
        return result
    next_states, rewards = scm.predict(states[indices], batch.actions[indices], rng, hard=True)
    result.states[indices] = states[indices]
    result.next_states[indices] = next_states
    result.rewards[indices] = rewards
    result.returns[indices] = rewards
    result.bootstrap_states[indices] = next_states
    result.bootstrap_steps[indices] = np.where(batch.dones[indices], 0, 1)
    return result


def augment_batch(
    batch: TransitionBatch,
    beta: float,
    scm: SCMModel,
    rng: np.random.Generator,
    epsilon: float = DENOMINATOR_GUARD,
) -> TransitionBatch:
    """
    Permute beta% of the batch and regenerate their successors through the SCM.

    Raises:
        InvalidParameterError: If beta lies outside [0, 100]
    """
    return RSCAugmenter(beta, epsilon).apply(batch, rng, scm).batch


@dataclass(frozen=True)
class AugmentedBatch:
    """Augmented batch plus the row indices that were modified."""

    batch: TransitionBatch
    selected: np.ndarray

    @property
    def untouched(self) -> np.ndarray:
        mask = np.ones(len(self.batch), dtype=bool)
        mask[self.selected] = False
        return np.flatnonzero(mask)


class Augmenter(ABC):
    """Perturbs a sampled batch before the policy update."""

    kind: AugmenterKind
    needs_scm: bool = False

    def __init__(self, beta: float = 0.0):
        selection_size(0, beta)
        self.beta = float(beta)

    @abstractmethod
    def apply(
        self, batch: TransitionBatch, rng: np.random.Generator, scm: Optional[SCMModel] = None
    ) -> AugmentedBatch:
        ...


class NoAugmenter(Augmenter):
    """Identity."""

    kind = AugmenterKind.NONE

    def apply(self, batch, rng, scm=None) -> AugmentedBatch:
        return AugmentedBatch(batch, np.zeros(0, dtype=np.int64))


class RSCAugmenter(Augmenter):
    """Dimension permutation followed by SCM regeneration."""

    kind = AugmenterKind.RSC
    needs_scm = True

    def __init__(self, beta: float = 50.0, epsilon: float = DENOMINATOR_GUARD):
        super().__init__(beta)
        self.epsilon = epsilon

    def apply(self, batch, rng, scm=None) -> AugmentedBatch:
        selected = select_records(len(batch), self.beta, rng)
        if len(selected) == 0:
            return AugmentedBatch(batch.copy(), selected)
        if len(batch) < 2:
            raise EmptyBatchError("rsc augmentation", len(batch), 2)
        if scm is None:
            raise InvalidParameterError("scm", None, "rsc augmentation needs a trained SCM")
        permuted, dimensions, _ = permute_states(batch.states, selected, rng, self.epsilon)
        logger.debug(
            "Permuted batch",
            extra={"extra": {"selected": int(len(selected)), "dimensions": np.bincount(dimensions).tolist()}},
        )
        return AugmentedBatch(regenerate(batch, selected, permuted, scm, rng), selected)


class _NoiseAugmenter(Augmenter):
    """Additive noise on s_t of the selected records; s_{t+1} and r_t stay as observed."""

    def __init__(self, beta: float, scale: float):
        super().__init__(beta)
        if not scale >= 0.0:
            raise InvalidParameterError("scale", scale, "noise scale must be >= 0")
        self.scale = float(scale)

    @abstractmethod
    def _noise(self, shape, rng: np.random.Generator) -> np.ndarray:
        ...

    def apply(self, batch, rng, scm=None) -> AugmentedBatch:
        result = batch.copy()
        selected = select_records(len(batch), self.beta, rng)
        if len(selected):
            result.states[selected] += self._noise((len(selected), batch.states.shape[1]), rng)
        return AugmentedBatch(result, selected)


class GaussianAugmenter(_NoiseAugmenter):
    kind = AugmenterKind.GAUSSIAN

    def __init__(self, beta: float = 50.0, std: float = 0.1):
        super().__init__(beta, std)

    def _noise(self, shape, rng):
        return rng.normal(0.0, self.scale, size=shape)


class UniformAugmenter(_NoiseAugmenter):
    kind = AugmenterKind.UNIFORM

    def __init__(self, beta: float = 50.0, halfwidth: float = 0.1):
        super().__init__(beta, halfwidth)

    def _noise(self, shape, rng):
        return rng.uniform(-self.scale, self.scale, size=shape)


def build_augmenter(kind: AugmenterKind, beta: float, noise_scale: float = 0.1) -> Augmenter:
    """Factory used by the training loop."""
    kind = AugmenterKind(kind)
    if kind is AugmenterKind.RSC:
        return RSCAugmenter(beta)
    if kind is AugmenterKind.GAUSSIAN:
        return GaussianAugmenter(beta, noise_scale)
    if kind is AugmenterKind.UNIFORM:
        return UniformAugmenter(beta, noise_scale)
    return NoAugmenter(0.0)
