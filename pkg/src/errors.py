"""Exception hierarchy shared by all lab modules.

Each error carries the process exit code the CLI maps it to.
"""

from typing import Any, Dict, Optional


class LabError(Exception):
    """Base class for all lab errors."""

    exit_code = 1

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.details: Dict[str, Any] = details


class ParameterError(LabError, ValueError):
    """Non-finite or out-of-range input parameter."""

    exit_code = 2


class PreconditionError(ParameterError):
    """An operation precondition (for example r < delta/2) does not hold at run time."""

    exit_code = 3


class ConfigError(ParameterError):
    """Invalid experiment document; ``key`` names the offending entry."""

    def __init__(self, message: str, key: Optional[str] = None, **details: Any):
        super().__init__(message, key=key, **details)
        self.key = key


class DomainError(LabError):
    """Point outside the source domain of a conformal map."""

    exit_code = 3


class EvaluationError(LabError):
    """Numerical blow-up while composing maps; ``step`` is the offending index."""

    exit_code = 3

    def __init__(self, message: str, step: Optional[int] = None, **details: Any):
        super().__init__(message, step=step, **details)
        self.step = step


class GeometryError(LabError):
    """Non-simple curve or degenerate bad set."""

    exit_code = 3


class NumericError(LabError):
    """Iteration failed to converge."""

    exit_code = 3


class ResourceError(LabError):
    """Requested size exceeds the memory or square budget."""

    exit_code = 3


class BudgetExceeded(LabError):
    """Run budget (traces, squares or seconds) exhausted."""

    exit_code = 4
