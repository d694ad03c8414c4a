"""Train every augmenter on the same seeds and compare nominal and shifted returns."""
import logging
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np

from app.application.schemas import TrainSection
from app.application.use_cases.parallel import run_jobs
from app.domain.enums import AugmenterKind
from app.domain.learning import train
from app.domain.learning.rsc_trainer import final_returns
from app.infrastructure.serialization import MetricsWriter
from app.infrastructure.versioning import version_stamp

logger = logging.getLogger(__name__)

COMPARISON_COLUMNS = (
    "augmenter",
    "nominal_return",
    "shifted_return",
    "nominal_std",
    "shifted_std",
    "normalized_nominal",
    "normalized_shifted",
    "seeds",
)


@dataclass(frozen=True)
class AugmenterComparisonRow:
    """normalized_* divide by the no-augmentation nominal mean; None without that baseline."""

    augmenter: AugmenterKind
    nominal_return: float
    shifted_return: float
    nominal_std: float
    shifted_std: float
    seeds: int
    normalized_nominal: Optional[float] = None
    normalized_shifted: Optional[float] = None

    def to_dict(self) -> Dict:
        return {
            "augmenter": str(self.augmenter),
            "nominal_return": self.nominal_return,
            "shifted_return": self.shifted_return,
            "nominal_std": self.nominal_std,
            "shifted_std": self.shifted_std,
            "normalized_nominal": self.normalized_nominal,
            "normalized_shifted": self.normalized_shifted,
            "seeds": self.seeds,
        }


class CompareAugmentersUseCase:
    """
    Paired-seed comparison of augmentation strategies.

    Rules:
    - Every augmenter sees exactly the same seeds
    - Returns are normalized by the no-augmentation nominal return when it is
      part of the comparison and positive
    """

    def __init__(self, workers: int = 1):
        self.workers = workers

    def execute(
        self,
        section: TrainSection,
        augmenters: Sequence[AugmenterKind],
        seeds: Sequence[int],
        output_dir: Union[str, Path],
    ) -> List[AugmenterComparisonRow]:
        kinds = [AugmenterKind(kind) for kind in augmenters]
        base = section.to_domain(seeds[0])
        jobs = [replace(base, augmenter=kind, seed=seed) for kind in kinds for seed in seeds]
        results = run_jobs(train, jobs, self.workers)

        raw = {}
        for index, kind in enumerate(kinds):
            chunk = results[index * len(seeds):(index + 1) * len(seeds)]
            raw[kind] = np.array([final_returns(metrics) for metrics in chunk])

        reference = None
        if AugmenterKind.NONE in raw:
            baseline = float(raw[AugmenterKind.NONE][:, 0].mean())
            reference = baseline if baseline > 0.0 else None

        rows = []
        for kind, finals in raw.items():
            nominal, shifted = float(finals[:, 0].mean()), float(finals[:, 1].mean())
            rows.append(
                AugmenterComparisonRow(
                    augmenter=kind,
                    nominal_return=nominal,
                    shifted_return=shifted,
                    nominal_std=float(finals[:, 0].std()),
                    shifted_std=float(finals[:, 1].std()),
                    seeds=len(seeds),
                    normalized_nominal=nominal / reference if reference else None,
                    normalized_shifted=shifted / reference if reference else None,
                )
            )

        run_dir = Path(output_dir) / f"compare-augmenters-{section.env.env_name}"
        writer = MetricsWriter(run_dir)
        writer.write_table("comparison.csv", (row.to_dict() for row in rows), COMPARISON_COLUMNS)
        writer.write_summary({
            "config": {"train": section.model_dump(mode="json"), "augmenters": [str(k) for k in kinds], "seeds": list(seeds)},
            "version": version_stamp(),
            "rows": [row.to_dict() for row in rows],
        })
        logger.info("Comparison written", extra={"extra": {"run_dir": str(run_dir), "augmenters": len(rows)}})
        return rows
