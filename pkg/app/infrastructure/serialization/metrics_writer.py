"""
Run outputs: metrics CSV, summary JSON and learned-graph JSON.

The CSV column order is part of the public contract (see README).
"""
import csv
from pathlib import Path
from typing import Dict, Iterable, Sequence, Union

import numpy as np

from app.domain.learning import EvalPoint
from app.infrastructure.serialization.model_codec import write_json_document

METRICS_COLUMNS = ("step", "nominal_return", "shifted_return", "scm_loss", "graph_density")
METRICS_FILE = "metrics.csv"
SUMMARY_FILE = "summary.json"
GRAPH_FILE = "graph.json"


class MetricsWriter:
    """Writes the files of one run directory."""

    def __init__(self, run_dir: Union[str, Path]):
        self.run_dir = Path(run_dir)

    def write_table(self, name: str, rows: Iterable[Dict], columns: Sequence[str]) -> Path:
        self.run_dir.mkdir(parents=True, exist_ok=True)
        path = self.run_dir / name
        with path.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.DictWriter(handle, fieldnames=list(columns), extrasaction="ignore")
            writer.writeheader()
            for row in rows:
                writer.writerow(row)
        return path

    def write_metrics(self, points: Iterable[EvalPoint]) -> Path:
        return self.write_table(METRICS_FILE, (point.to_row() for point in points), METRICS_COLUMNS)

    def write_summary(self, summary: Dict) -> Path:
        return write_json_document(summary, self.run_dir / SUMMARY_FILE)

    def write_graph(
        self, adjacency: np.ndarray, input_labels: Sequence[str], output_labels: Sequence[str], threshold: float
    ) -> Path:
        """Rows are parents (s1..sn, a1..adA), columns are children (s'1..s'n, r)."""
        document = {
            "rows": list(input_labels),
            "columns": list(output_labels),
            "adjacency": np.asarray(adjacency, dtype=np.int64),
            "threshold": threshold,
            "density": float(np.mean(adjacency)) if np.size(adjacency) else 0.0,
        }
        return write_json_document(document, self.run_dir / GRAPH_FILE)
