"""
JSON documents on disk.

Reading reports malformed files with their line and column; writing produces
strict JSON (non-finite floats become null) with sorted keys.
"""
import json
import math
from enum import Enum
from pathlib import Path
from typing import Any, Union

import numpy as np

from app.domain.exceptions import ModelFormatError

PathLike = Union[str, Path]


def read_json_document(path: PathLike) -> Any:
    """
    Raises:
        ModelFormatError: If the file is missing or not valid JSON
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ModelFormatError(str(path), "file not found")
    except OSError as error:
        raise ModelFormatError(str(path), str(error))
    try:
        return json.loads(text)
    except json.JSONDecodeError as error:
        raise ModelFormatError(str(path), error.msg, error.lineno, error.colno) from error


def to_jsonable(value: Any) -> Any:
    """Convert numpy values, enums and paths; NaN and infinities become None."""
    if isinstance(value, dict):
        return {str(key): to_jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(item) for item in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def write_json_document(data: Any, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(to_jsonable(data), indent=2, sort_keys=True, allow_nan=False) + "\n", encoding="utf-8")
    return path
