"""
Errors - Exception hierarchy for the sum-capacity toolkit
"""


class SumCapError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameterError(SumCapError, ValueError):
    """Non-positive power or non-finite channel input."""


class UnsupportedConfigurationError(SumCapError, ValueError):
    """Operation defined only for a narrower class of channels (e.g. symmetric)."""


class PreconditionError(SumCapError, ValueError):
    """A documented precondition of the operation does not hold."""


class NoBoundaryError(PreconditionError):
    """The useful-region boundary has no point at the requested angle."""


class DegenerateLineError(SumCapError, ArithmeticError):
    """The two points defining a line coincide."""


class DegenerateObservationError(SumCapError, ArithmeticError):
    """Observation covariance is singular or too ill-conditioned to evaluate."""


class InvalidCertificateError(SumCapError, ValueError):
    """The genie does not satisfy the hypothesis under which the bound is proven."""


class InternalConsistencyError(SumCapError, RuntimeError):
    """An assembled covariance failed its symmetry / PSD self-check."""


class EmptyBatchError(SumCapError, ValueError):
    """A sample batch was requested with no rows."""


class DegenerateBatchError(SumCapError, ArithmeticError):
    """Empirical covariance of a batch is singular."""
