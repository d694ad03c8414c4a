"""Write the separation instance as a model document."""
import logging
from pathlib import Path
from typing import Union

from app.application.schemas import document_for
from app.domain.engines import HardInstance
from app.domain.exceptions import InvalidParameterError
from app.infrastructure.serialization import write_json_document

logger = logging.getLogger(__name__)

FORMS = ("mdp", "scmdp")


class GenerateHardInstanceUseCase:
    """mdp writes the nominal standard MDP; scmdp writes the two-confounder SC-MDP."""

    def execute(self, horizon: int, path: Union[str, Path], form: str = "scmdp") -> Path:
        """
        Raises:
            InvalidHorizonError: If horizon < 2
            InvalidParameterError: If form is unknown
        """
        if form not in FORMS:
            raise InvalidParameterError("form", form, f"must be one of {FORMS}")
        model = HardInstance.build_rsc_mdp(horizon) if form == "scmdp" else HardInstance.build_standard_mdp(horizon)
        written = write_json_document(document_for(model).model_dump(), path)
        logger.info("Hard instance written", extra={"extra": {"path": str(written), "T": horizon, "form": form}})
        return written
