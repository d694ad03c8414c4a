"""Evaluate a saved policy on the nominal and shifted environment variants."""
import logging
from pathlib import Path
from typing import Dict, Iterable, Optional, Union

from pydantic import ValidationError

from app.application.schemas import TrainSection
from app.domain.enums import EnvVariant
from app.domain.exceptions import ModelFormatError
from app.domain.learning import EvaluationResult, RSCTrainer, evaluate_returns, stream_generator
from app.infrastructure.serialization import CheckpointStore

logger = logging.getLogger(__name__)


class EvaluateAgentUseCase:
    """
    Rebuilds the trainer recorded in the checkpoint manifest, restores its
    parameters and runs the frozen policy.

    Same checkpoint and seed give the same output.
    """

    def __init__(self, store: Optional[CheckpointStore] = None):
        self.store = store or CheckpointStore()

    def execute(
        self,
        checkpoint_dir: Union[str, Path],
        episodes: int,
        seed: int,
        variants: Iterable[EnvVariant] = (EnvVariant.NOMINAL, EnvVariant.SHIFTED),
        reference: Optional[float] = None,
    ) -> Dict[str, EvaluationResult]:
        """
        Raises:
            CheckpointNotFoundError: If the checkpoint is missing
            ModelFormatError: If the manifest carries no usable run config
            InvalidParameterError: If episodes < 1 or reference <= 0
        """
        checkpoint = self.store.load(checkpoint_dir)
        try:
            section = TrainSection.model_validate(checkpoint.metadata["train"])
            train_seed = int(checkpoint.metadata["seed"])
        except (KeyError, TypeError, ValueError, ValidationError) as error:
            raise ModelFormatError(str(checkpoint.directory), f"manifest has no usable run config ({error})") from error

        trainer = RSCTrainer(section.to_domain(train_seed))
        checkpoint.restore_into(trainer.named_parameters())

        results = {}
        for variant in variants:
            variant = EnvVariant(variant)
            env_config = trainer.config.env.with_variant(variant)
            results[str(variant)] = evaluate_returns(
                trainer.policy(), env_config, episodes, stream_generator(seed), reference
            )
            logger.info("Evaluated", extra={"extra": dict(results[str(variant)].to_dict(), variant=str(variant))})
        return results
