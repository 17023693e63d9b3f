"""Exception hierarchy shared by every netconn module."""

from __future__ import annotations


class NetworkError(ValueError):
    """Base class for all netconn errors."""


class FormatError(NetworkError):
    """Malformed edge-list input."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyNetworkError(NetworkError):
    """A network must hold at least one segment."""


class MappingError(NetworkError):
    """An index lies outside the domain of an IndexMapping."""


class PreconditionError(NetworkError):
    """An operation was called on input that violates its precondition."""


class InvariantError(NetworkError):
    """An internal consistency check failed (signals an upstream bug)."""


class FeasibilityError(NetworkError):
    """A generator or sweep configuration cannot be realised."""


class InsufficientDataError(NetworkError):
    """Too few points for a requested fit."""
