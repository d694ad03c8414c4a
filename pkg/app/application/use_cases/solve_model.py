"""Solve a tabular model file with the requested robust backup.

Application layer - loads the document, dispatches to a domain engine and
shapes the report for output.
"""
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Mapping, Optional, Union

from pydantic import ValidationError

from app.application.schemas import parse_model_document
from app.domain.engines import SCEngine, TVBackupEngine
from app.domain.entities import FiniteMDP, SCMDPSpec
from app.domain.entities.reports import RobustSCReport, RobustSolveReport
from app.domain.enums import RobustMode
from app.domain.exceptions import ConfigurationError, InvalidParameterError, ModelFormatError
from app.domain.validators import DistributionValidator
from app.infrastructure.serialization import read_json_document

logger = logging.getLogger(__name__)

TabularModel = Union[FiniteMDP, SCMDPSpec]


def _describe(error: ValidationError) -> str:
    first = error.errors()[0]
    location = ".".join(str(part) for part in first.get("loc", ())) or "document"
    return f"{location}: {first.get('msg', 'invalid')}"


def load_model(path: Union[str, Path]) -> TabularModel:
    """
    Read a FiniteMDP or SC-MDP document.

    Raises:
        ModelFormatError: If the file is missing, malformed or has the wrong layout
        InvalidDistributionError: If a probability row is not a distribution
    """
    data = read_json_document(path)
    if not isinstance(data, Mapping):
        raise ModelFormatError(str(path), "top-level value must be an object")
    try:
        document = parse_model_document(data)
    except ValidationError as error:
        raise ModelFormatError(str(path), _describe(error)) from error
    return document.to_domain()


@dataclass(frozen=True)
class SolveOutcome:
    report: Union[RobustSolveReport, RobustSCReport]
    mode: RobustMode
    state: int
    state_label: Optional[list] = None

    @property
    def initial_value(self) -> float:
        return float(self.report.values.values[0, self.state])

    def summary_line(self) -> str:
        where = self.state_label if self.state_label is not None else self.state
        return f"{self.mode} sigma={self.report.sigma:g}: V*_1[{where}] = {self.initial_value:.10g}"

    def to_dict(self) -> Dict:
        data = self.report.to_dict()
        data.update({"mode": str(self.mode), "state": self.state, "state_label": self.state_label, "initial_value": self.initial_value})
        return data


class SolveModelUseCase:
    """
    Robust solve of one tabular model.

    Responsibilities:
    - none: non-robust backward induction (the sigma = 0 robust backup)
    - rmdp: (s,a)-rectangular TV backup; SC-MDPs are marginalized first
    - rsc: confounder TV backup; requires an SC-MDP document
    """

    def __init__(self, engine: Optional[SCEngine] = None):
        self.engine = engine or SCEngine()

    def execute(self, model: TabularModel, sigma: float, mode: RobustMode = RobustMode.RSC, state: int = 0) -> SolveOutcome:
        """
        Raises:
            InvalidRadiusError: If sigma is outside [0, 1]
            ConfigurationError: If rsc is requested for a plain MDP
            InvalidParameterError: If state is not a state index
        """
        mode = RobustMode(mode)
        sigma = DistributionValidator.validate_radius(sigma)
        if not 0 <= state < model.num_states:
            raise InvalidParameterError("state", state, f"must lie in [0, {model.num_states})")
        logger.info("Solve started", extra={"extra": {"mode": str(mode), "sigma": sigma, "horizon": model.horizon}})

        if mode is RobustMode.RSC:
            if not isinstance(model, SCMDPSpec):
                raise ConfigurationError("solver", "the rsc backup needs an SC-MDP document (with kernels)")
            report = self.engine.robust_sc_value_iteration(model, sigma)
        else:
            mdp = SCEngine.marginalize(model) if isinstance(model, SCMDPSpec) else model
            report = TVBackupEngine.robust_value_iteration(mdp, sigma if mode is RobustMode.RMDP else 0.0)

        labels = model.state_labels
        outcome = SolveOutcome(report, mode, state, labels[state].tolist() if labels is not None else None)
        logger.info("Solve finished", extra={"extra": {"mode": str(mode), "initial_value": outcome.initial_value}})
        return outcome
