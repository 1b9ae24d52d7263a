"""Shared exception types."""

from __future__ import annotations


class EbsedpError(Exception):
    """Base class for all library errors."""


class CapExceeded(EbsedpError):
    """A configured resource cap (clauses, nodes, enumeration count) was hit.

    The exception reports what would have been needed so callers can decide
    whether to retry with a larger cap.
    """

    def __init__(self, what: str, needed: int, cap: int):
        super().__init__(f"{what}: needs {needed}, cap is {cap}")
        self.what = what
        self.needed = needed
        self.cap = cap


class ParseError(EbsedpError):
    """Lexical or syntactic error in the .fol text format, with position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class RepairInternalError(EbsedpError):
    """Internal consistency failure in the model-repair algorithm.

    Raised when a truth-assignment conflict arises between instances of
    different clauses: the classification guarantees this cannot happen, so
    it signals a bug and must abort loudly rather than be papered over.
    """
