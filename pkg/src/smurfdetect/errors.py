"""Exception hierarchy. The CLI maps these onto exit codes."""


class SmurfDetectError(Exception):
    pass


class InputFileError(SmurfDetectError):
    """Unreadable or malformed input file (CLI exit code 2)."""


class PreconditionError(SmurfDetectError, ValueError):
    """Input violates a documented precondition (CLI exit code 3)."""


class DomainError(PreconditionError):
    """Amount or threshold outside the domain of the log transform."""


class InsufficientDataError(PreconditionError):
    pass


class DegenerateSampleError(PreconditionError):
    """Zero spread: skewness, bin width or range undefined."""


class WindowError(PreconditionError):
    """Manipulation window inconsistent with the histogram or fit degree."""


class NumericalError(SmurfDetectError, ArithmeticError):
    """Least-squares system singular or too many failed bootstrap replicates (exit code 4)."""
