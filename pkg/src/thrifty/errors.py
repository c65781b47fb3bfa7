"""Exception types raised across the package."""


class ThriftyError(Exception):
    """Base class for all package errors."""


class ContractViolation(ThriftyError, ValueError):
    """Input violates an operation's precondition."""


class ParameterError(ThriftyError, ValueError):
    """Bad user-facing parameter (dimension, degree, kind, ...)."""


class InfeasibleLP(ThriftyError):
    """The linear program has no feasible point.

    Distinct from numeric failure; callers such as the gauge treat it as
    an infinite value.
    """


class NumericFailure(ThriftyError, ArithmeticError):
    """A numeric routine broke down (singular pivot, cycling, overflow)."""


class ConvergenceError(ThriftyError, RuntimeError):
    """An iterative method did not reach its target accuracy."""

    def __init__(self, message, residual=None, stage=None):
        super().__init__(message)
        self.residual = residual
        self.stage = stage


class ResourceError(ThriftyError, RuntimeError):
    """The requested run exceeds a configured size cap."""


class CertificationError(ThriftyError, RuntimeError):
    """The approximation factor cannot be certified (gauge undefined)."""
