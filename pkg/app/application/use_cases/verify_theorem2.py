"""Separation check between RSC-optimal and RMDP-optimal policies on the hard instance."""
import logging
from typing import Iterable, List, Optional, Sequence

from app.domain.engines import HardInstance, SCEngine
from app.domain.entities.reports import Theorem2Report

logger = logging.getLogger(__name__)

SIGMA2_GRID = tuple(round(0.55 + 0.05 * k, 2) for k in range(10))


class VerifyTheorem2UseCase:
    """
    Thin wrapper over HardInstance.verify_theorem2.

    Grid rows whose gap falls below T/8 are returned with holds = False,
    never dropped.
    """

    def __init__(self, engine: Optional[SCEngine] = None):
        self.engine = engine or SCEngine()

    def execute(self, horizon: int, sigma1: float, sigma2: float) -> Theorem2Report:
        return HardInstance.verify_theorem2(horizon, sigma1, sigma2, self.engine)

    def execute_grid(
        self, horizons: Iterable[int], sigma1: float, sigma2_values: Sequence[float] = SIGMA2_GRID
    ) -> List[Theorem2Report]:
        reports = [self.execute(horizon, sigma1, sigma2) for horizon in horizons for sigma2 in sigma2_values]
        failing = sum(not report.holds for report in reports)
        logger.info("Separation grid finished", extra={"extra": {"points": len(reports), "failing": failing}})
        return reports
