"""
Distribution validator for probability tables and uncertainty radii.

Pure numerical checks - no I/O, no frameworks.
Deterministic validation rules shared by every model entity.
"""
from typing import Tuple

import numpy as np

from app.domain.exceptions import (
    InvalidDistributionError,
    InvalidRadiusError,
    NonFiniteValueError,
    ShapeMismatchError,
)


class DistributionValidator:
    """
    Validator for probability vectors stored along the last axis of an array.

    Enforces:
    - Non-negative entries (entries above -NEGATIVE_SLACK are zeroed)
    - Rows sum to one within EXACT_TOLERANCE
    - Rows within RENORMALIZE_TOLERANCE of one are rescaled, anything further is rejected
    - Radii inside [0, 1]
    """

    EXACT_TOLERANCE = 1e-12
    RENORMALIZE_TOLERANCE = 1e-9
    NEGATIVE_SLACK = 1e-12

    @classmethod
    def validate_rows(cls, table, field: str) -> np.ndarray:
        """
        Validate and return a float copy of a table of probability rows.

        Args:
            table: array-like whose last axis holds distributions
            field: name used in error messages (e.g. "transitions")

        Returns:
            New float64 array, renormalized where allowed

        Raises:
            InvalidDistributionError: If a row is negative, empty or does not sum to one
        """
        rows = np.array(table, dtype=np.float64, copy=True)
        if rows.ndim == 0 or rows.shape[-1] == 0:
            raise InvalidDistributionError(field, "empty support")
        cls.ensure_finite(rows, field)

        negative = rows < -cls.NEGATIVE_SLACK
        if negative.any():
            location = np.argwhere(negative)[0]
            raise InvalidDistributionError(
                field, f"negative entry {rows[tuple(location)]!r}", location[:-1]
            )
        rows[rows < 0.0] = 0.0

        sums = rows.sum(axis=-1)
        deviation = np.abs(sums - 1.0)
        bad = deviation > cls.RENORMALIZE_TOLERANCE
        if bad.any():
            location = np.argwhere(bad)[0] if sums.ndim else ()
            total = sums[tuple(location)] if sums.ndim else float(sums)
            raise InvalidDistributionError(field, f"row sums to {total!r}", location)

        fix = deviation > cls.EXACT_TOLERANCE
        if sums.ndim == 0:
            return rows / sums if fix else rows
        if fix.any():
            rows[fix] = rows[fix] / sums[fix][:, None]
        return rows

    @classmethod
    def validate_vector(cls, vector, field: str) -> np.ndarray:
        """Validate a single probability vector (1-D)."""
        values = np.asarray(vector, dtype=np.float64)
        if values.ndim != 1:
            raise ShapeMismatchError(field, "1-D vector", values.shape)
        return cls.validate_rows(values, field)

    @classmethod
    def validate_radius(cls, sigma: float) -> float:
        """
        Validate an uncertainty radius.

        Out-of-range values are errors; nothing is clamped.

        Raises:
            InvalidRadiusError: If sigma is not a finite number in [0, 1]
        """
        value = float(sigma)
        if not np.isfinite(value) or value < 0.0 or value > 1.0:
            raise InvalidRadiusError(sigma)
        return value

    @staticmethod
    def ensure_finite(values: np.ndarray, where: str) -> None:
        """Raise NonFiniteValueError if values contain NaN or Inf."""
        if not np.all(np.isfinite(values)):
            raise NonFiniteValueError(
                where,
                int(np.isnan(values).sum()),
                int(np.isinf(values).sum()),
                np.shape(values),
            )

    @staticmethod
    def expect_shape(values: np.ndarray, shape: Tuple[int, ...], what: str) -> None:
        """Raise ShapeMismatchError unless values.shape == shape."""
        if tuple(values.shape) != tuple(shape):
            raise ShapeMismatchError(what, tuple(shape), tuple(values.shape))
