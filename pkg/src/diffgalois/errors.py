"""Exception hierarchy shared by every stage of the library."""


class DiffGaloisError(Exception):
    """Base class; ``exit_code`` is used by the command line driver."""

    exit_code = 1


class ParseError(DiffGaloisError, ValueError):
    exit_code = 2


class PoleError(DiffGaloisError, ZeroDivisionError):
    """Evaluation of a rational function at one of its poles."""

    def __init__(self, point, message=None):
        self.point = point
        super().__init__(message or f"pole at x = {point}")


class UnsupportedClassError(DiffGaloisError):
    """An ideal falls outside the classes handled by decomposition or radical certification."""

    exit_code = 3


class ExtensionNeeded(DiffGaloisError):
    """Completing the computation would need constants outside Q."""

    exit_code = 4

    def __init__(self, message, polynomials=()):
        self.polynomials = tuple(polynomials)
        super().__init__(message)


class SliceNotStable(DiffGaloisError):
    """The degree-filtered quotient slice is not mapped into itself by the shift."""


class CostExceeded(DiffGaloisError):
    """A requested computation is larger than the configured limit."""


class StageError(DiffGaloisError):
    """Failure inside a pipeline stage; carries the partial transcript."""

    def __init__(self, stage, cause, transcript=None):
        self.stage = stage
        self.cause = cause
        self.transcript = transcript or []
        self.exit_code = getattr(cause, "exit_code", 1)
        super().__init__(f"stage '{stage}' failed: {cause}")
