"""Exception hierarchy shared by every module."""


class CecError(Exception):
    """Base class for all errors raised by cecedge."""


class InvalidArgumentError(CecError, ValueError):
    pass


class NumericError(CecError, ArithmeticError):
    pass


class ParseError(CecError, ValueError):
    """Malformed input file.

    Exactly one of ``offset`` (byte offset, binary formats) or ``line``
    (1-based line number, text formats) is usually set.
    """

    def __init__(self, message: str, *, offset: int | None = None, line: int | None = None):
        self.reason = message
        self.offset = offset
        self.line = line
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        elif line is not None:
            message = f"{message} at line {line}"
        super().__init__(message)
