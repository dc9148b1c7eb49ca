"""Exception hierarchy shared by the library, CLI, and service."""

from __future__ import annotations


class DivkitError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(DivkitError, ValueError):
    """A well-formed input that violates an operation's contract (CLI exit 1)."""


class SchemaError(DivkitError, ValueError):
    """Malformed or schema-violating input data (CLI exit 2)."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class EnumerationLimitError(DomainError):
    """Path enumeration refused because the exact count exceeds the limit."""

    def __init__(self, count: int, limit: int):
        super().__init__(f"path count {count} exceeds enumeration limit {limit}")
        self.count = count
        self.limit = limit
