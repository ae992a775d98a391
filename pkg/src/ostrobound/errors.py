"""Exception hierarchy shared by every module."""


class OstrowskiError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(OstrowskiError, ValueError):
    """A parameter lies outside the domain it feeds (x outside [a, b], s outside (0, 1], ...)."""


class NonPositiveValue(OstrowskiError, ValueError):
    """A log-convexity definition was applied to a function that is not strictly positive."""


class EmptyLattice(OstrowskiError, ValueError):
    pass


class InvalidTau(DomainError):
    pass


class ZeroEndpointDerivative(OstrowskiError, ValueError):
    """|f'| vanishes at an endpoint, so the ratio tau is undefined."""


class ZeroDenominator(ZeroEndpointDerivative):
    pass


class ZeroNumerator(ZeroEndpointDerivative):
    pass


class ZeroEndpointDensity(ZeroEndpointDerivative):
    pass


class UnsupportedBranch(OstrowskiError):
    """tau > 1 (or M > 1): no bound is available without reflecting the problem."""


class NearSingular(OstrowskiError, ArithmeticError):
    pass


class OracleFailure(OstrowskiError, ArithmeticError):
    pass


class ToleranceNotReached(OracleFailure):
    pass


class NegativeKernel(OstrowskiError, ArithmeticError):
    """A bound kernel evaluated below zero; always a bug, never a valid bound."""
