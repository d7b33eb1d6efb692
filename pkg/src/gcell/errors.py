"""Exception taxonomy shared by the whole package."""


class GcellError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(GcellError):
    """A vertex or set argument lies outside the expected universe."""


class RangeError(GcellError):
    """An index argument (level, depth, parameter) is out of range."""


class UsageError(GcellError):
    """An operation was called with inconsistent arguments."""


class ParameterError(GcellError):
    """A construction parameter is invalid (e.g. odd grid denominator)."""


class ResourceBudgetError(GcellError):
    """A combinatorial budget was exhausted before the operation finished."""

    def __init__(self, message, count=None, progress=None):
        super().__init__(message)
        self.count = count
        self.progress = progress


class CertificateFailure(GcellError):
    """A machine check that a theorem guarantees to pass did not pass."""
