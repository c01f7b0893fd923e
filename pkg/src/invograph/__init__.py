"""Invocation graphs on web domains embedded in a data-induced political spectrum."""

from .errors import DegenerateDataError, InvographError, ParseError, PreconditionError

__version__ = "0.1.0"

__all__ = ["DegenerateDataError", "InvographError", "ParseError", "PreconditionError", "__version__"]
