"""Exception types raised across the package."""

__all__ = [
    "DQError",
    "InsufficientDepth",
    "ZeroSymbol",
    "NotInvertible",
    "NonReducible",
    "OrderTooHigh",
    "MissingValue",
    "RankMismatch",
    "DimensionMismatch",
    "SpaceMismatch",
    "ParseError",
    "BadIndex",
    "NegativePower",
]


class DQError(Exception):
    """Base class for all mathematical errors raised by dqcalc."""


class InsufficientDepth(DQError):
    pass


class ZeroSymbol(DQError):
    pass


class NotInvertible(DQError):
    pass


class NonReducible(DQError):
    pass


class OrderTooHigh(DQError):
    pass


class MissingValue(DQError):
    pass


class RankMismatch(DQError):
    pass


class DimensionMismatch(DQError):
    pass


class SpaceMismatch(DQError):
    pass


class ParseError(DQError):
    """Malformed expression text; ``offset`` is the byte offset of the fault."""

    def __init__(self, message, offset=None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at offset {offset})"
        super().__init__(message)


class BadIndex(ParseError):
    pass


class NegativePower(ParseError):
    pass
