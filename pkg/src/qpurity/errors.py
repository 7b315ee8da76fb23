"""
Exceptions raised by qpurity.

Every exception carries the exit code used by the command line.
"""


class QpurityError(Exception):
    """Base class of every qpurity error."""

    exit_code = 1


class ConfigError(QpurityError, ValueError):
    """The run configuration is invalid."""

    exit_code = 2


class NumericRegimeError(QpurityError, ArithmeticError):
    """The requested computation is outside of its numerical regime."""

    exit_code = 3


class SampleFormatError(QpurityError, ValueError):
    """A sample file holds a malformed row."""

    exit_code = 4


class TailNotNegligible(NumericRegimeError):
    """A quadrature truncation leaves a non-negligible tail."""


class Divergent(NumericRegimeError):
    """A weighted integral does not converge."""


class MassDeficit(NumericRegimeError):
    """A numerically inverted density does not integrate to one."""


class NegativeDensity(NumericRegimeError):
    """A numerically inverted density is negative beyond quadrature ripple."""


class TooFewSamples(NumericRegimeError):
    """The estimator needs at least two observations."""


class TooManySamples(NumericRegimeError):
    """The quadratic-cost oracle refuses large samples."""


class UnstableKernel(NumericRegimeError):
    """The kernel weight e^{aT²} overflows the working precision."""


class SampleTooSmall(NumericRegimeError):
    """The sample size is too small for the bandwidth rule."""


class IterateCollapse(NumericRegimeError):
    """An iterated bandwidth became undefined."""


class DegenerateBoundary(NumericRegimeError):
    """(1-η)/(2η) equals 2α: neither regime applies."""


class NonIntegrable(NumericRegimeError):
    """The asymptotic variance integrand is not integrable."""


class NegativeVariance(NumericRegimeError):
    """A variance quadrature came out negative."""


class InsufficientPoints(NumericRegimeError):
    """Not enough points for a regression."""
