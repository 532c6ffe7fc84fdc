"""Exception hierarchy shared by the library and the command line."""


class BisdError(Exception):
    """Base class for all errors raised by bisd."""


class InvalidInputError(BisdError, ValueError):
    """Raised when an argument violates an operation's precondition."""


class FrameMismatchError(InvalidInputError):
    """Raised when two distributions were not mapped through the same frame."""


class ParseError(InvalidInputError):
    """Raised when an input file cannot be parsed.

    ``line`` is the 1-based line number of the offending row, if known.
    """

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
