"""
Plug-in mutual information on discretized samples.
"""
from typing import Optional

import numpy as np


def discretize(values, bins: int, bounds: Optional[tuple] = None) -> np.ndarray:
    """Equal-width bin indices in 0..bins-1."""
    values = np.asarray(values, dtype=np.float64)
    low, high = bounds if bounds is not None else (values.min(), values.max())
    if high <= low:
        return np.zeros(values.shape, dtype=np.int64)
    edges = np.linspace(low, high, bins + 1)[1:-1]
    return np.digitize(values, edges).astype(np.int64)


def mutual_information(x, y) -> float:
    """I(X; Y) in bits from the empirical joint of two label arrays."""
    x = np.asarray(x)
    y = np.asarray(y)
    _, x_codes = np.unique(x, return_inverse=True)
    _, y_codes = np.unique(y, return_inverse=True)
    joint = np.zeros((x_codes.max() + 1, y_codes.max() + 1))
    np.add.at(joint, (x_codes, y_codes), 1.0)
    joint /= joint.sum()
    px = joint.sum(axis=1, keepdims=True)
    py = joint.sum(axis=0, keepdims=True)
    mask = joint > 0
    return float(np.sum(joint[mask] * np.log2(joint[mask] / (px @ py)[mask])))
