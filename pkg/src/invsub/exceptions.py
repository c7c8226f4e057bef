"""Exception hierarchy shared by all modules."""


class InvsubError(Exception):
    """Base class for errors raised by this package."""


class ParameterError(InvsubError, ValueError):
    pass


class IndexOutOfRange(ParameterError):
    pass


class SkewOutOfRange(ParameterError):
    pass


class NonpositiveScale(ParameterError):
    pass


class DegenerateGrid(ParameterError):
    pass


class QueryBeyondRange(InvsubError, ValueError):
    pass


class DomainError(InvsubError, ValueError):
    pass


class DegenerateRe(DomainError):
    pass


class NoConvergence(InvsubError, ArithmeticError):
    pass


class EmptySample(InvsubError, ValueError):
    pass


class InsufficientSamples(InvsubError, ValueError):
    pass
