"""Exception hierarchy shared by every part of the engine."""

from __future__ import annotations


class PKNError(Exception):
    """Base class for all errors raised by this package."""


class InvalidStatement(PKNError, ValueError):
    pass


class UnindexablePattern(PKNError, ValueError):
    """Raised when a pattern has no concrete index key; callers must enumerate."""


class LexError(PKNError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class ParseError(PKNError):
    def __init__(self, message: str, line: int, column: int, expected=()):
        self.message = message
        self.line = line
        self.column = column
        self.expected = tuple(expected)
        text = f"{line}:{column}: {message}"
        if self.expected and not message.startswith("expected"):
            text += f" (expected {', '.join(self.expected)})"
        super().__init__(text)


class MissingFromClause(ParseError):
    pass


class FuzzyError(PKNError, ValueError):
    pass


class MissingTermBounds(FuzzyError):
    pass


class NonContiguousRange(FuzzyError):
    pass


class OutOfRange(FuzzyError):
    pass


class DegenerateVector(FuzzyError):
    pass


class UnknownTerm(FuzzyError):
    pass


class EmptyReferenceClass(PKNError, ValueError):
    pass


class UnboundComparison(PKNError, ValueError):
    pass
