"""Exception hierarchy shared by the library and the command line."""


class GGDError(Exception):
    """Base class for all errors raised by this package."""


class GraphFormatError(GGDError, ValueError):
    """Malformed graph input: bad file contents or violated graph invariants."""


class NumericalError(GGDError, ArithmeticError):
    """A factorization or eigensolver failed (non-SPD input, no convergence)."""


class InfeasibleError(GGDError, ValueError):
    """The request cannot be satisfied for this input (disconnected, size)."""
