"""
Domain-specific exceptions.

These exceptions represent violations raised by the solver and learning layers.
They are framework-independent and carry structured fields for diagnostics.

Two families:
- ValidationFailure: the input was wrong (CLI exit code 1)
- NumericalFailure: the computation itself failed (CLI exit code 2)
"""
from typing import Optional, Sequence


class DomainException(Exception):
    """Base exception for all domain logic violations."""
    pass


class ValidationFailure(DomainException):
    """Base class for rejected inputs."""
    pass


class NumericalFailure(DomainException):
    """Base class for failures of the computation itself."""
    pass


# ==================== Validation ====================


class InvalidDistributionError(ValidationFailure):
    """
    Raised when a vector that must be a probability distribution is not one.

    Example:
        - transition row sums to 0.97
        - negative entry in a policy row
        - empty support
    """

    def __init__(self, field: str, reason: str, location: Optional[Sequence[int]] = None):
        msg = f"Invalid probability vector in {field}"
        if location is not None:
            msg += f" at {tuple(int(i) for i in location)}"
        msg += f": {reason}"
        super().__init__(msg)
        self.field = field
        self.reason = reason
        self.location = tuple(location) if location is not None else None


class InvalidRadiusError(ValidationFailure):
    """Raised when an uncertainty radius lies outside its admissible range."""

    def __init__(self, value: float, admissible: str = "[0, 1]"):
        msg = f"Uncertainty radius {value!r} outside admissible range {admissible}"
        super().__init__(msg)
        self.value = value
        self.admissible = admissible


class ShapeMismatchError(ValidationFailure):
    """
    Raised when two objects that must agree on dimensions do not.

    Example:
        - policy horizon 4 evaluated on a horizon-5 MDP
        - network input with 3 columns fed to a layer expecting 4
    """

    def __init__(self, what: str, expected, actual):
        msg = f"Shape mismatch for {what}: expected {expected}, got {actual}"
        super().__init__(msg)
        self.what = what
        self.expected = expected
        self.actual = actual


class InvalidHorizonError(ValidationFailure):
    """Raised when a horizon is below the minimum an operation requires."""

    def __init__(self, horizon: int, minimum: int):
        msg = f"Horizon T={horizon} rejected: requires T >= {minimum}"
        super().__init__(msg)
        self.horizon = horizon
        self.minimum = minimum


class InvalidParameterError(ValidationFailure):
    """Raised when a scalar parameter violates its documented range."""

    def __init__(self, name: str, value, reason: str):
        msg = f"Invalid parameter {name} = {value!r}. {reason}"
        super().__init__(msg)
        self.name = name
        self.value = value
        self.reason = reason


class EmptyBatchError(ValidationFailure):
    """Raised when an operation needs at least one (or K) records and got fewer."""

    def __init__(self, what: str, size: int, minimum: int = 1):
        msg = f"{what} needs at least {minimum} records, got {size}"
        super().__init__(msg)
        self.what = what
        self.size = size
        self.minimum = minimum


class ModelFormatError(ValidationFailure):
    """
    Raised when a model or config document cannot be parsed.

    Carries line/column when the JSON itself is malformed.
    """

    def __init__(self, path: str, reason: str, line: Optional[int] = None, column: Optional[int] = None):
        location = f"{path}"
        if line is not None:
            location += f":{line}:{column}"
        msg = f"Cannot read {location}: {reason}"
        super().__init__(msg)
        self.path = path
        self.reason = reason
        self.line = line
        self.column = column


class CheckpointNotFoundError(ValidationFailure):
    """Raised when a checkpoint directory or one of its files is missing."""

    def __init__(self, path: str):
        msg = f"Checkpoint not found: {path}"
        super().__init__(msg)
        self.path = path


class ConfigurationError(ValidationFailure):
    """Raised when an experiment configuration is incomplete for the requested command."""

    def __init__(self, section: str, reason: str):
        msg = f"Configuration section '{section}' invalid: {reason}"
        super().__init__(msg)
        self.section = section
        self.reason = reason


# ==================== Numerical ====================


class NonFiniteValueError(NumericalFailure):
    """
    Raised when NaN or Inf appears in an intermediate result.

    The message names where it happened and how many entries are affected.
    """

    def __init__(self, where: str, nan_count: int, inf_count: int, shape):
        msg = (
            f"Non-finite values in {where}: {nan_count} NaN, {inf_count} Inf "
            f"(shape {tuple(shape)})"
        )
        super().__init__(msg)
        self.where = where
        self.nan_count = nan_count
        self.inf_count = inf_count
        self.shape = tuple(shape)


class ConvergenceError(NumericalFailure):
    """Raised when an iterative solver stops before meeting its tolerance."""

    def __init__(self, solver: str, iterations: int, gap: float, detail: str = ""):
        msg = f"{solver} did not converge after {iterations} iterations (gap {gap:.3e})"
        if detail:
            msg += f". {detail}"
        super().__init__(msg)
        self.solver = solver
        self.iterations = iterations
        self.gap = gap
        self.detail = detail


class LPUnboundedError(NumericalFailure):
    """Raised when the simplex method detects an unbounded objective."""

    def __init__(self, entering: int):
        msg = f"Linear program unbounded (entering column {entering} has no positive pivot)"
        super().__init__(msg)
        self.entering = entering


class BackwardBeforeForwardError(NumericalFailure):
    """Raised when gradients are requested from a network with no cached forward pass."""

    def __init__(self, component: str):
        msg = f"backward() called on {component} before forward()"
        super().__init__(msg)
        self.component = component


class TrainingDivergedError(NumericalFailure):
    """Raised when a training loss becomes non-finite; a checkpoint is dumped first."""

    def __init__(self, step: int, loss_name: str, checkpoint_dir: Optional[str] = None):
        msg = f"Training diverged at env step {step}: {loss_name} is not finite"
        if checkpoint_dir:
            msg += f". Checkpoint written to {checkpoint_dir}"
        super().__init__(msg)
        self.step = step
        self.loss_name = loss_name
        self.checkpoint_dir = checkpoint_dir
