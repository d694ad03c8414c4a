"""
Unit tests for JSON documents, checkpoints and run outputs.
"""
import csv
import json

import numpy as np
import pytest

from app.domain.enums import EnvName
from app.domain.exceptions import CheckpointNotFoundError, ModelFormatError, ShapeMismatchError
from app.domain.learning import EvalPoint
from app.domain.learning.tiny_nn import Tensor2
from app.infrastructure.serialization import (
    METRICS_COLUMNS,
    CheckpointStore,
    MetricsWriter,
    read_json_document,
    to_jsonable,
    write_json_document,
)
from app.infrastructure.versioning import version_stamp


def params(rng) -> dict:
    return {
        "net.0.weight": Tensor2(rng.normal(size=(3, 2)), name="net.0.weight"),
        "net.0.bias": Tensor2(rng.normal(size=(1, 2)), name="net.0.bias"),
    }


class TestJSONDocuments:
    """Test reading and writing JSON files."""

    def test_decode_error_position(self, tmp_path):
        """Malformed files report line and column."""
        path = tmp_path / "bad.json"
        path.write_text('{\n  "a": 1,\n}')
        with pytest.raises(ModelFormatError) as info:
            read_json_document(path)
        assert (info.value.line, info.value.column) == (3, 1)
        assert f"{path}:3:1" in str(info.value)

    def test_jsonable_conversions(self):
        """numpy values, enums and non-finite floats become plain JSON."""
        data = to_jsonable({"a": np.int64(3), "b": np.array([1.0, np.nan]), "c": EnvName.TOY_LIFT, "d": float("inf")})
        assert data == {"a": 3, "b": [1.0, None], "c": "toy_lift", "d": None}

    def test_written_documents_are_sorted(self, tmp_path):
        """Keys are sorted and the file ends with a newline."""
        path = write_json_document({"b": 1, "a": 2}, tmp_path / "out" / "doc.json")
        text = path.read_text()
        assert text.endswith("\n")
        assert text.index('"a"') < text.index('"b"')


class TestCheckpointStore:
    """Test the flat blob + manifest format."""

    def test_restore_exact(self, tmp_path, rng):
        """Loaded values equal the saved ones bit for bit."""
        saved = params(rng)
        CheckpointStore().save(tmp_path / "ckpt", saved, {"seed": 1})
        fresh = {name: Tensor2(np.zeros_like(t.data), name=name) for name, t in saved.items()}
        checkpoint = CheckpointStore().load(tmp_path / "ckpt")
        checkpoint.restore_into(fresh)
        for name in saved:
            np.testing.assert_array_equal(fresh[name].data, saved[name].data)
        assert checkpoint.metadata == {"seed": 1}

    def test_manifest_layout(self, tmp_path, rng):
        """Entries list name, shape and offset in blob order."""
        CheckpointStore().save(tmp_path / "ckpt", params(rng), {})
        manifest = json.loads((tmp_path / "ckpt" / "manifest.json").read_text())
        assert manifest["size"] == 8
        assert manifest["entries"] == [
            {"name": "net.0.weight", "shape": [3, 2], "offset": 0},
            {"name": "net.0.bias", "shape": [1, 2], "offset": 6},
        ]
        assert (tmp_path / "ckpt" / "params.bin").stat().st_size == 8 * 8

    def test_missing(self, tmp_path):
        """Missing directories raise CheckpointNotFoundError."""
        with pytest.raises(CheckpointNotFoundError):
            CheckpointStore().load(tmp_path / "none")

    def test_truncated_blob(self, tmp_path, rng):
        """A blob shorter than the manifest declares is a format error."""
        CheckpointStore().save(tmp_path / "ckpt", params(rng), {})
        blob = tmp_path / "ckpt" / "params.bin"
        blob.write_bytes(blob.read_bytes()[:-8])
        with pytest.raises(ModelFormatError):
            CheckpointStore().load(tmp_path / "ckpt")

    def test_shape_mismatch_on_restore(self, tmp_path, rng):
        """Restoring into differently shaped parameters is rejected."""
        CheckpointStore().save(tmp_path / "ckpt", params(rng), {})
        other = params(rng)
        other["net.0.bias"] = Tensor2(np.zeros((1, 3)), name="net.0.bias")
        with pytest.raises(ShapeMismatchError):
            CheckpointStore().load(tmp_path / "ckpt").restore_into(other)


class TestMetricsWriter:
    """Test run output files."""

    def test_metrics_columns(self, tmp_path):
        """The CSV header is the frozen column list."""
        path = MetricsWriter(tmp_path).write_metrics([EvalPoint(10, 1.0, 0.5, float("nan"), 0.25)])
        with path.open() as handle:
            reader = csv.reader(handle)
            assert tuple(next(reader)) == METRICS_COLUMNS
            assert next(reader)[:3] == ["10", "1.0", "0.5"]

    def test_graph_document(self, tmp_path):
        """Graph JSON carries labels, adjacency, threshold and density."""
        adjacency = np.array([[1, 0], [0, 0]])
        path = MetricsWriter(tmp_path).write_graph(adjacency, ["s1", "a1"], ["s'1", "r"], 0.5)
        data = json.loads(path.read_text())
        assert data["adjacency"] == [[1, 0], [0, 0]]
        assert (data["threshold"], data["density"]) == (0.5, 0.25)
        assert data["rows"] == ["s1", "a1"]


class TestVersioning:
    """Test the version stamp."""

    def test_non_empty(self):
        """A stamp is always available, with or without git."""
        assert version_stamp()
