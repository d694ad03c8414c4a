"""TVBall entity: a total-variation uncertainty set around a center distribution."""
import numpy as np

from app.domain.validators import DistributionValidator


class TVBall:
    """
    Total-variation ball {P in simplex : 1/2 * ||P - center||_1 <= radius}.

    Pure data structure plus membership test.
    """

    MEMBERSHIP_TOLERANCE = 1e-10

    def __init__(self, center, radius: float):
        """
        Args:
            center: probability vector
            radius: sigma in [0, 1]

        Raises:
            InvalidDistributionError: If center is not a distribution
            InvalidRadiusError: If radius is outside [0, 1]
        """
        self.center = DistributionValidator.validate_vector(center, "TVBall center")
        self.center.setflags(write=False)
        self.radius = DistributionValidator.validate_radius(radius)

    @property
    def dimension(self) -> int:
        return self.center.shape[0]

    def distance(self, distribution) -> float:
        """Total-variation distance from the center."""
        return 0.5 * float(np.abs(np.asarray(distribution, dtype=np.float64) - self.center).sum())

    def contains(self, distribution, tolerance: float = MEMBERSHIP_TOLERANCE) -> bool:
        """True when distribution is in the simplex and within radius + tolerance of the center."""
        p = np.asarray(distribution, dtype=np.float64)
        if p.shape != self.center.shape or p.min() < -tolerance or abs(p.sum() - 1.0) > tolerance:
            return False
        return self.distance(p) <= self.radius + tolerance

    def __repr__(self) -> str:
        return f"TVBall(dimension={self.dimension}, radius={self.radius})"
