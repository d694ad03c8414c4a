"""Augmentation-ratio sweep: train per (beta, seed) and tabulate final returns."""
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Sequence, Union

from app.application.schemas import TrainSection
from app.application.use_cases.parallel import process_runner
from app.domain.learning import BetaSweepRow, sweep_beta
from app.infrastructure.serialization import MetricsWriter
from app.infrastructure.versioning import version_stamp

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ("beta", "nominal_return", "shifted_return", "nominal_std", "shifted_std", "seeds")


@dataclass(frozen=True)
class SweepOutcome:
    run_dir: Path
    rows: List[BetaSweepRow]


class SweepBetaUseCase:
    """Workers only return metrics; the parent process writes every file."""

    def __init__(self, workers: int = 1):
        self.workers = workers

    def execute(
        self, section: TrainSection, betas: Sequence[float], seeds: Sequence[int], output_dir: Union[str, Path]
    ) -> SweepOutcome:
        config = section.to_domain(seeds[0])
        rows = sweep_beta(config, betas, seeds=tuple(seeds), runner=process_runner(self.workers))

        run_dir = Path(output_dir) / f"sweep-beta-{section.env.env_name}-{section.augmenter}"
        writer = MetricsWriter(run_dir)
        writer.write_table("sweep.csv", (row.to_dict() for row in rows), SWEEP_COLUMNS)
        writer.write_summary({
            "config": {"train": section.model_dump(mode="json"), "betas": list(betas), "seeds": list(seeds)},
            "version": version_stamp(),
            "rows": [row.to_dict() for row in rows],
        })
        logger.info("Sweep written", extra={"extra": {"run_dir": str(run_dir), "points": len(rows)}})
        return SweepOutcome(run_dir, rows)
