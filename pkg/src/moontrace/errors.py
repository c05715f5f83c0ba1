"""Exception hierarchy shared by all moontrace modules."""


class MoontraceError(Exception):
    pass


class ZeroLeadingCoefficient(MoontraceError, ZeroDivisionError):
    pass


class NonIntegralGrid(MoontraceError, ValueError):
    pass


class InsufficientTruncation(MoontraceError, ValueError):
    pass


class UnsupportedLevel(MoontraceError, ValueError):
    pass


class BadDiscriminant(MoontraceError, ValueError):
    pass


class BadResidue(MoontraceError, ValueError):
    pass


class NotDivisible(MoontraceError, ValueError):
    pass


class NotUpperHalfPlane(MoontraceError, ValueError):
    pass


class ReconstructionFailure(MoontraceError, ArithmeticError):
    """A numerically summed trace is not close to a small-denominator rational."""

    def __init__(self, message, value=None, d=None):
        super().__init__(message)
        self.value = value
        self.d = d


class InsufficientTable(MoontraceError, ValueError):
    pass


class ResidualNonzero(MoontraceError, ArithmeticError):
    pass
