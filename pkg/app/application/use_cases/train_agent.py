"""Train one agent and write its run directory.

Run directory layout:
    metrics.csv        one row per evaluation point
    summary.json       resolved config, version stamp, final returns
    graph.json         learned causal graph (rsc augmenter only)
    checkpoint/        parameter blob + manifest
    diverged/          parameters at the failing step, only after a divergence
"""
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional, Union

from app.application.schemas import TrainSection
from app.domain.learning import RSCTrainer, TrainMetrics, extract_graph
from app.infrastructure.serialization import CheckpointStore, MetricsWriter
from app.infrastructure.versioning import version_stamp

logger = logging.getLogger(__name__)

CHECKPOINT_DIR = "checkpoint"
DIVERGED_DIR = "diverged"


def run_name(section: TrainSection, seed: int) -> str:
    return f"{section.env.env_name}-{section.augmenter}-beta{section.beta:g}-seed{seed}"


def resolved_config(section: TrainSection, seed: int) -> Dict:
    """What a checkpoint needs to rebuild its trainer."""
    return {"seed": seed, "train": section.model_dump(mode="json")}


@dataclass(frozen=True)
class TrainOutcome:
    run_dir: Path
    checkpoint_dir: Path
    metrics: TrainMetrics
    summary: Dict


class TrainAgentUseCase:
    """
    Train use case.

    Responsibilities:
    - Convert the validated section into a TrainConfig
    - Run the trainer with a divergence hook that dumps parameters
    - Persist checkpoint, metrics, summary and graph
    """

    def __init__(self, store: Optional[CheckpointStore] = None):
        self.store = store or CheckpointStore()

    def execute(self, section: TrainSection, seed: int, output_dir: Union[str, Path]) -> TrainOutcome:
        """
        Raises:
            TrainingDivergedError: If training produced non-finite values
        """
        run_dir = Path(output_dir) / run_name(section, seed)
        resolved = resolved_config(section, seed)
        version = version_stamp()

        def dump_on_divergence(trainer: RSCTrainer, step: int) -> str:
            metadata = dict(resolved, step=step)
            return str(self.store.save(run_dir / DIVERGED_DIR, trainer.named_parameters(), metadata))

        trainer = RSCTrainer(section.to_domain(seed), on_divergence=dump_on_divergence)
        metrics = trainer.train()

        checkpoint_dir = self.store.save(run_dir / CHECKPOINT_DIR, trainer.named_parameters(), resolved)
        writer = MetricsWriter(run_dir)
        writer.write_metrics(metrics.eval_points)
        if trainer.scm is not None:
            scm_config = trainer.scm.config
            writer.write_graph(
                extract_graph(trainer.scm), scm_config.input_labels(), scm_config.output_labels(), scm_config.threshold
            )
        summary = {
            "config": resolved,
            "version": version,
            "updates": metrics.updates,
            "wall_clock": metrics.wall_clock,
            "final": metrics.final.to_row() if metrics.final else None,
        }
        writer.write_summary(summary)
        logger.info("Run written", extra={"extra": {"run_dir": str(run_dir), "updates": metrics.updates}})
        return TrainOutcome(run_dir, checkpoint_dir, metrics, summary)
