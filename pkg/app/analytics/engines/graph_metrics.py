"""
Edge-recovery scores for estimated causal graphs.
"""
from dataclasses import dataclass

import numpy as np

from app.domain.exceptions import ShapeMismatchError


@dataclass(frozen=True)
class GraphScore:
    true_positives: int
    false_positives: int
    false_negatives: int

    @property
    def precision(self) -> float:
        found = self.true_positives + self.false_positives
        return self.true_positives / found if found else 1.0

    @property
    def recall(self) -> float:
        actual = self.true_positives + self.false_negatives
        return self.true_positives / actual if actual else 1.0

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if p + r else 0.0


def score_edges(estimated, truth) -> GraphScore:
    estimated = np.asarray(estimated).astype(bool)
    truth = np.asarray(truth).astype(bool)
    if estimated.shape != truth.shape:
        raise ShapeMismatchError("graph", truth.shape, estimated.shape)
    return GraphScore(
        true_positives=int(np.sum(estimated & truth)),
        false_positives=int(np.sum(estimated & ~truth)),
        false_negatives=int(np.sum(~estimated & truth)),
    )
