"""Exception classes shared across the package.

The CLI maps each class to its own exit status, so raise the most specific one.
"""

from __future__ import annotations


class InvographError(Exception):
    """Base class for all errors raised by invograph."""


class ParseError(InvographError, ValueError):
    """Malformed input file or value."""

    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class PreconditionError(InvographError, ValueError):
    """Inputs are well-formed but violate an operation's precondition."""


class DegenerateDataError(InvographError, ValueError):
    """The data leaves a statistic undefined (empty baseline, too few points, ...)."""
