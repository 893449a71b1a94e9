"""Exception hierarchy shared by every module."""


class InvRankError(Exception):
    """Base class for all package errors."""


class DimensionError(InvRankError, ValueError):
    """Operands have incompatible shapes."""


class NotSymmetricError(InvRankError, ValueError):
    """A symmetric matrix was required."""


class LimitExceeded(InvRankError):
    """The instance is too large for the requested exact engine."""


class LemmaViolation(InvRankError):
    """A block-matrix instance satisfies none of the staircase disjuncts.

    Never expected; raising it would falsify the staircase lemma.
    """


class CertificateError(InvRankError):
    """An internally produced certificate failed re-verification (a bug)."""


class FormatError(InvRankError, ValueError):
    """Malformed text input. ``lineno`` is 1-based when known."""

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno
