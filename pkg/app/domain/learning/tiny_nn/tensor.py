"""
Tensor2: a 2-D float64 array with an optional gradient buffer.

Parameters of every network are Tensor2 instances so optimizers and the
checkpoint store can treat them uniformly.
"""
from typing import Iterable, List, Optional

import numpy as np

from app.domain.exceptions import ShapeMismatchError
from app.domain.validators import DistributionValidator


class Tensor2:
    """
    Row-major real matrix plus gradient accumulator.

    Rules:
    - data is always 2-D and finite
    - grad, when present, has the same shape as data
    """

    def __init__(self, data, requires_grad: bool = True, name: str = "tensor"):
        values = np.array(data, dtype=np.float64, copy=True)
        if values.ndim != 2:
            raise ShapeMismatchError(name, "(rows, cols)", values.shape)
        DistributionValidator.ensure_finite(values, name)
        self.data = values
        self.name = name
        self.grad: Optional[np.ndarray] = np.zeros_like(values) if requires_grad else None

    @property
    def shape(self):
        return self.data.shape

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def zero_grad(self) -> None:
        if self.grad is not None:
            self.grad.fill(0.0)

    def accumulate(self, gradient: np.ndarray) -> None:
        """Add gradient into the buffer (shape-checked)."""
        if self.grad is None:
            return
        if gradient.shape != self.data.shape:
            raise ShapeMismatchError(f"{self.name}.grad", self.data.shape, gradient.shape)
        self.grad += gradient

    def check_finite(self, where: Optional[str] = None) -> None:
        DistributionValidator.ensure_finite(self.data, where or self.name)
        if self.grad is not None:
            DistributionValidator.ensure_finite(self.grad, f"{where or self.name}.grad")

    def copy(self) -> "Tensor2":
        clone = Tensor2(self.data, requires_grad=self.grad is not None, name=self.name)
        return clone

    def __repr__(self) -> str:
        return f"Tensor2(name={self.name!r}, shape={self.data.shape})"


def pack(tensors: Iterable[Tensor2]) -> np.ndarray:
    """Concatenate parameter data into one flat float64 vector."""
    parts = [t.data.ravel() for t in tensors]
    return np.concatenate(parts) if parts else np.zeros(0)


def unpack(tensors: List[Tensor2], flat: np.ndarray) -> None:
    """Write a flat vector back into the tensors, in order."""
    flat = np.asarray(flat, dtype=np.float64)
    expected = sum(t.data.size for t in tensors)
    if flat.shape != (expected,):
        raise ShapeMismatchError("flat parameters", (expected,), flat.shape)
    offset = 0
    for tensor in tensors:
        size = tensor.data.size
        tensor.data[...] = flat[offset:offset + size].reshape(tensor.data.shape)
        offset += size
