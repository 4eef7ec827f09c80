from __future__ import annotations


class MapfError(Exception):
    """Base class for package errors."""


class ParseError(MapfError):
    """Malformed input file. Carries the 1-based line number."""

    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


class PreconditionError(MapfError):
    """An operation was called outside its contract."""


class ResourceLimitError(MapfError):
    """A search or computation exceeded its configured guard."""
