"""
Domain validators for model integrity.

These validators enforce probability and range constraints.
They are framework-independent and deterministic.
"""
from .distribution_validator import DistributionValidator

__all__ = ["DistributionValidator"]
