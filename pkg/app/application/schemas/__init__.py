"""Pydantic documents for experiment files and tabular model files."""

from app.application.schemas.experiment import (
    EnvSection,
    ExperimentConfig,
    SACSection,
    SCMSection,
    SolverSection,
    SweepSection,
    Theorem2Section,
    TrainSection,
)
from app.application.schemas.model_document import (
    FiniteMDPDocument,
    ModelDocument,
    SCMDPDocument,
    document_for,
    parse_model_document,
)

__all__ = [
    "EnvSection",
    "ExperimentConfig",
    "SACSection",
    "SCMSection",
    "SolverSection",
    "SweepSection",
    "Theorem2Section",
    "TrainSection",
    "FiniteMDPDocument",
    "ModelDocument",
    "SCMDPDocument",
    "document_for",
    "parse_model_document",
]
