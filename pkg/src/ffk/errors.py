"""Exception types shared by the library and mapped to CLI exit codes."""


class FFKError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class ParseError(FFKError, ValueError):
    """Input text does not match the expression grammar."""

    exit_code = 2


class PreconditionError(FFKError, ValueError):
    """A mathematical precondition of an operation is violated."""

    exit_code = 3


class UnsupportedError(FFKError, ValueError):
    """Parameters outside the supported range (e.g. l not dividing q - 1)."""

    exit_code = 4


class PrecisionError(PreconditionError):
    """A truncated series ran out of retained terms."""
