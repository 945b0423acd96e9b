"""Exception hierarchy shared by every lindfrag package.

Verdict-style checks (model validation, oracle verification) return report
dataclasses instead of raising; these exceptions are for inputs that cannot be
processed at all.
"""


class LindfragError(Exception):
    """Base class for all lindfrag errors."""


class ModelError(LindfragError, ValueError):
    """Invalid model, malformed Pauli text, or wrong model kind for an operation."""


class DimensionError(LindfragError, ValueError):
    """Size mismatch or a configured dense/oracle cap exceeded."""


class NumericalError(LindfragError, ArithmeticError):
    """Non-convergence, residual above tolerance, or non-finite propagation."""


class ExceptionalPointError(NumericalError):
    """Input sits on an exceptional point where the requested quantity is undefined."""
