"""Exception hierarchy.

Errors fall into three families, which the CLI maps onto exit codes:
invalid input (2), infeasible problem (3) and oversized oracle runs (4).
"""


class MTypeError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInput(MTypeError, ValueError):
    pass


class EmptyInput(InvalidInput):
    pass


class NegativeEntry(InvalidInput):
    pass


class NotNormalized(InvalidInput):
    pass


class ZeroSum(InvalidInput):
    pass


class DimensionMismatch(InvalidInput):
    pass


class NonFiniteDelta(InvalidInput):
    """A per-step increment evaluated to NaN."""


class NotIrreducible(InvalidInput):
    pass


class SupportMismatch(InvalidInput):
    pass


class SupportViolation(InvalidInput):
    pass


class Infeasible(MTypeError, ValueError):
    pass


class InfeasiblePrealloc(Infeasible):
    pass


class InfeasibleSupport(Infeasible):
    pass


class EmptySimplex(Infeasible):
    """M is below the support size, so no distribution has all masses >= 1/M."""


class ZeroTargetEntry(Infeasible):
    pass


class TooLarge(MTypeError):
    pass


class InternalInvariantViolation(MTypeError, RuntimeError):
    pass


class NumericalError(MTypeError, ArithmeticError):
    pass
