"""File formats: JSON documents, checkpoints and run outputs."""

from app.infrastructure.serialization.model_codec import read_json_document, to_jsonable, write_json_document
from app.infrastructure.serialization.checkpoint_store import Checkpoint, CheckpointStore
from app.infrastructure.serialization.metrics_writer import METRICS_COLUMNS, MetricsWriter

__all__ = [
    "read_json_document",
    "to_jsonable",
    "write_json_document",
    "Checkpoint",
    "CheckpointStore",
    "METRICS_COLUMNS",
    "MetricsWriter",
]
