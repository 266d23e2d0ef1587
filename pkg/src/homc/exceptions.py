"""Exception hierarchy.

Input problems (bad shapes, non-stochastic data) derive from ``InputError``;
problems that arise from the chain itself (non-ergodic, no convergence)
derive from ``DomainError``. The CLI maps these to exit codes 2 and 1.
"""


class HomcError(Exception):
    """Base class for all errors raised by this package."""


class InputError(HomcError, ValueError):
    pass


class DomainError(HomcError, ArithmeticError):
    pass


class ShapeMismatch(InputError):
    pass


class GuardExceeded(InputError):
    """Dense storage for the requested shape would exceed the entry guard."""


class OutOfRange(InputError, IndexError):
    pass


class WrongOrder(InputError):
    pass


class NotStochastic(InputError):
    pass


class NonErgodicChain(DomainError):
    pass


class NotConverged(DomainError):
    pass


class NoNonnegativeVectorFound(DomainError):
    pass


class InconsistentRelation(DomainError):
    pass
