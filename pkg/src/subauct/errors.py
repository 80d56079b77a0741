"""Exception hierarchy shared by every module of the package."""


class SubauctError(Exception):
    """Base class for all errors raised by subauct."""


class ValuationError(SubauctError, ValueError):
    """A valuation could not be constructed from the given parameters."""


class MonotonicityViolation(ValuationError):
    def __init__(self, smaller, larger, message=None):
        self.smaller = smaller
        self.larger = larger
        super().__init__(message or f"v({smaller}) > v({larger}) although {smaller} is a subset")


class NormalizationViolation(ValuationError):
    pass


class NegativeValue(ValuationError):
    pass


class UniverseMismatch(SubauctError, ValueError):
    pass


class UniverseTooLarge(SubauctError):
    pass


class UniverseTooSmall(SubauctError, ValueError):
    pass


class NotSubmodular(SubauctError, ValueError):
    pass


class NotSymmetric(SubauctError, ValueError):
    pass


class UnboundedComplementarity(SubauctError):
    """No finite ``a`` makes the valuation a-submodular."""

    def __init__(self, witness, message=None):
        self.witness = witness
        super().__init__(message or f"unbounded complementarity, witness {witness}")


class PerturbationTooLarge(SubauctError, ValueError):
    pass


class InstanceTooLarge(SubauctError):
    pass


class NonTermination(SubauctError):
    pass


class NotOxsExpression(SubauctError, ValueError):
    pass


class DimensionMismatch(SubauctError, ValueError):
    pass


class ParseError(SubauctError):
    pass


class SchemaError(SubauctError):
    pass
