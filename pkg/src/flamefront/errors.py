"""Exception types shared across the package."""

from __future__ import annotations

__all__ = [
    "FlameFrontError",
    "InvalidGridError",
    "DegenerateFrontError",
    "ContractViolationError",
    "RootBracketError",
    "InternalConsistencyError",
    "ConvergenceError",
    "SingularSystemError",
    "BranchStartError",
    "UnsupportedModelError",
    "BlowUpError",
]


class FlameFrontError(Exception):
    """Base class for all package-specific failures."""


class InvalidGridError(FlameFrontError):
    """Grid size is odd, too small, or otherwise unusable."""


class DegenerateFrontError(FlameFrontError):
    """The length functional is undefined: integral of cos(theta) is not positive."""


class ContractViolationError(FlameFrontError):
    """Caller passed data that violates a documented precondition."""


class RootBracketError(FlameFrontError):
    """A bracketing interval does not enclose a sign change."""


class InternalConsistencyError(FlameFrontError):
    """Two independent evaluations of the same quantity disagree."""


class ConvergenceError(FlameFrontError):
    """Quasi-Newton iteration exhausted its budget without meeting tolerance.

    Carries the last iterate and the residual-norm history for diagnosis.
    """

    def __init__(self, message, last_iterate=None, residual_history=None):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.residual_history = list(residual_history or [])


class SingularSystemError(FlameFrontError):
    """LU factorization of the Newton system hit a negligible pivot."""


class BranchStartError(FlameFrontError):
    """The very first solve of a continuation run failed."""


class UnsupportedModelError(FlameFrontError):
    """The requested closure is not available for this operation."""


class BlowUpError(FlameFrontError):
    """Time integration left the trusted range of the formulation."""

    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time
