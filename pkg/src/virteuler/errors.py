"""Exception hierarchy shared by every module."""

from __future__ import annotations


class VirtEulerError(Exception):
    """Base class for all library errors."""


class ArgumentError(VirtEulerError, ValueError):
    """An argument is outside the documented domain of an operation."""


class DomainError(ArgumentError):
    """Requested (g, s) or (g, n) pair is unstable or otherwise not defined."""


class ResidueError(VirtEulerError, ArithmeticError):
    """A simple-pole term blocks antidifferentiation or path integration."""


class VerificationError(VirtEulerError, AssertionError):
    """A cross-check between two independent routes failed."""

    def __init__(self, message: str, where=None):
        super().__init__(message if where is None else f"{message} at {where}")
        self.where = where


class SequencingError(VirtEulerError, RuntimeError):
    """A table row was requested before the rows it depends on exist."""


class ExpansionDepthError(VirtEulerError, ArithmeticError):
    """Local expansions were truncated too early to decide a residue."""


class ExtractionError(VirtEulerError, ArithmeticError):
    """Large-N genus extraction did not stabilise on held-out samples."""

    def __init__(self, message: str, residuals=None):
        super().__init__(message)
        self.residuals = residuals or []


class PrecisionError(VirtEulerError, ArithmeticError):
    """Working precision is too low to resolve the requested bound."""


class ResourceError(VirtEulerError, RuntimeError):
    """A configured size cap would be exceeded."""
