"""
Checkpoints: one flat little-endian float64 blob plus a JSON manifest.

The manifest lists every parameter tensor in blob order with its shape and
offset, and carries free-form metadata (the resolved run config).
"""
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Mapping, Union

import numpy as np

from app.domain.exceptions import CheckpointNotFoundError, ModelFormatError, ShapeMismatchError
from app.domain.learning.tiny_nn import Tensor2, pack
from app.infrastructure.serialization.model_codec import read_json_document, write_json_document
from app.infrastructure.versioning import version_stamp

logger = logging.getLogger(__name__)

BLOB_NAME = "params.bin"
MANIFEST_NAME = "manifest.json"
BLOB_DTYPE = "<f8"
FORMAT_VERSION = 1


@dataclass
class Checkpoint:
    directory: Path
    arrays: Dict[str, np.ndarray]
    metadata: Dict = field(default_factory=dict)

    def restore_into(self, params: Mapping[str, Tensor2]) -> None:
        """
        Copy stored values into live parameters.

        Raises:
            ShapeMismatchError: If the parameter names or shapes differ
        """
        if set(params) != set(self.arrays):
            raise ShapeMismatchError("checkpoint parameters", sorted(params), sorted(self.arrays))
        for name, tensor in params.items():
            stored = self.arrays[name]
            if stored.shape != tensor.data.shape:
                raise ShapeMismatchError(f"checkpoint '{name}'", tensor.data.shape, stored.shape)
            tensor.data[...] = stored


class CheckpointStore:
    """
    Reads and writes checkpoint directories.

    Rules:
    - Tensors are written in the iteration order of the mapping given to save
    - Loading validates the blob size against the manifest
    """

    def save(self, directory: Union[str, Path], params: Mapping[str, Tensor2], metadata: Dict) -> Path:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        names = list(params)
        tensors = [params[name] for name in names]
        flat = pack(tensors)
        (directory / BLOB_NAME).write_bytes(flat.astype(BLOB_DTYPE).tobytes())

        entries, offset = [], 0
        for name, tensor in zip(names, tensors):
            entries.append({"name": name, "shape": list(tensor.data.shape), "offset": offset})
            offset += tensor.data.size
        manifest = {
            "format": FORMAT_VERSION,
            "dtype": BLOB_DTYPE,
            "size": int(flat.size),
            "entries": entries,
            "metadata": metadata,
            "version": version_stamp(),
        }
        write_json_document(manifest, directory / MANIFEST_NAME)
        logger.info("Checkpoint saved", extra={"extra": {"directory": str(directory), "parameters": int(flat.size)}})
        return directory

    def load(self, directory: Union[str, Path]) -> Checkpoint:
        """
        Raises:
            CheckpointNotFoundError: If the directory, manifest or blob is missing
            ModelFormatError: If the manifest and blob disagree
        """
        directory = Path(directory)
        manifest_path, blob_path = directory / MANIFEST_NAME, directory / BLOB_NAME
        for path in (directory, manifest_path, blob_path):
            if not path.exists():
                raise CheckpointNotFoundError(str(path))

        manifest = read_json_document(manifest_path)
        flat = np.frombuffer(blob_path.read_bytes(), dtype=BLOB_DTYPE).astype(np.float64)
        if flat.size != manifest.get("size"):
            raise ModelFormatError(str(blob_path), f"blob holds {flat.size} values, manifest declares {manifest.get('size')}")

        arrays = {}
        for entry in manifest.get("entries", []):
            shape = tuple(entry["shape"])
            start = entry["offset"]
            count = int(np.prod(shape)) if shape else 1
            if start + count > flat.size:
                raise ModelFormatError(str(manifest_path), f"entry '{entry['name']}' runs past the blob")
            arrays[entry["name"]] = flat[start:start + count].reshape(shape).copy()
        return Checkpoint(directory, arrays, manifest.get("metadata") or {})
