"""Exception hierarchy shared by the library and the CLI."""

from __future__ import annotations


class ToeplitzDeltaError(Exception):
    """Base class for every error raised by toeplitz_delta."""


class NumericError(ToeplitzDeltaError):
    """A computation could not be completed to the requested accuracy.

    The CLI maps these to exit code 3.
    """


class EvaluationError(NumericError):
    """A symbol returned non-finite values on the sampling grid."""


class UnresolvedSeries(NumericError):
    """Laurent coefficients did not decay below the tail tolerance before the K cap."""


class NonIntegerWinding(NumericError):
    """The measured winding number is too far from an integer."""


class ZeroOnCircle(NumericError):
    """The symbol vanishes (numerically) on the unit circle."""


class NonzeroWinding(NumericError):
    """A factorization was requested for a symbol with nonzero winding number."""


class CoefficientRangeExceeded(NumericError):
    """A matrix or band determinant needs coefficients outside the resolved window."""


class SingularMatrix(NumericError):
    """LU factorization hit a pivot below the singularity tolerance."""


class ZeroBandDeterminant(NumericError):
    """The band determinant vanishes, so its ratios are undefined."""


class ConditionViolated(NumericError):
    """The band-determinant ratio test does not decay across the n-sweep."""


class InsufficientData(NumericError):
    """Too few usable points for a least-squares decay fit."""


class ParameterError(ToeplitzDeltaError, ValueError):
    """A physical or numerical parameter is outside its allowed range."""


class ConfigError(ToeplitzDeltaError):
    """Config file or command-line values are malformed.

    The CLI maps these (and ParameterError) to exit code 2.
    """
