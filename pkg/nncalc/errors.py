"""Error Module"""


class NNCalcError(Exception):
    """Base error for every failure raised by nncalc"""


class DimensionMismatch(NNCalcError, ValueError):
    """Raised when a dimension chain is broken or a shape does not match"""


class OutputActivationError(NNCalcError, ValueError):
    """Raised when the final layer of a network carries a non-identity activation"""


class ActivationFamilyMismatch(NNCalcError, ValueError):
    """Raised when networks with different hidden activations are combined"""


class SpectralNormError(NNCalcError, ArithmeticError):
    """Raised when the spectral norm could not be computed"""


class ApproximationDomainError(NNCalcError, ValueError):
    """Raised when builder parameters fall outside their admissible range"""


class ScheduleError(NNCalcError, ValueError):
    """Raised when an inversion network cannot be built within the configured limits"""


class DimensionCapExceeded(ScheduleError):
    """Raised when the matrix dimension exceeds the configured inversion cap"""


class NotSPDError(NNCalcError, ValueError):
    """Raised when a matrix is expected to be symmetric positive definite and is not"""


class DivergentSeriesError(NNCalcError, ValueError):
    """Raised when a Neumann series is requested for ||I - alpha B||_2 >= 1"""


class DomainViolation(NNCalcError, ValueError):
    """Raised when an argument lies outside the domain of a function"""


class NetworkFormatError(NNCalcError, ValueError):
    """Raised when a serialized network document is malformed"""


class VerificationFailure(NNCalcError):
    """Raised when a measured error exceeds its claimed bound"""


class ErrorSequenceFormatError(NNCalcError, ValueError):
    """Raised when an error sequence file holds a value that is not a number"""
