"""
Robust solve mode enumeration.

Selects which uncertainty model the solve command applies.
"""
from enum import Enum


class RobustMode(str, Enum):
    """Uncertainty model - string-based enum for CLI and JSON."""

    NONE = "none"  # non-robust backward induction
    RMDP = "rmdp"  # (s,a)-rectangular TV ball on the transition kernel
    RSC = "rsc"    # TV ball on the confounder distribution

    def __str__(self) -> str:
        return self.value
