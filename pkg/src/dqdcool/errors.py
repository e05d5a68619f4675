"""Exception hierarchy shared by all modules."""


class DQDCoolError(Exception):
    """Base class for library errors."""


class ValidationError(DQDCoolError, ValueError):
    """Invalid input parameter (bad unit vector, negative rate, unknown key, ...)."""


class DomainError(DQDCoolError, ValueError):
    """Input outside the mathematical domain of an operation (e.g. T <= 0)."""


class DegenerateExchangeError(DomainError):
    """J = |D| = 0, so no rotation angle is defined."""


class InstabilityError(DQDCoolError, ArithmeticError):
    """Linear drag is non-positive: the cavity runs away (gain)."""


class SolverError(DQDCoolError, RuntimeError):
    """An iterative solver failed to converge.

    Attributes
    ----------
    diagnostics : dict
        Solver state at failure (iterations, last residual, ...).
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class CutoffError(SolverError):
    """Fock cutoff ceiling reached before the observable converged."""
