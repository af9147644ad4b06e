"""Exceptions and line/column diagnostics shared by every layer."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class Diagnostic:
    """A located message, rendered as ``file:row:col: severity: message``.

    ``row`` and ``col`` are 1-based; 0 means the location is unknown.
    """

    message: str
    row: int = 0
    col: int = 0
    path: str = "<input>"
    severity: Severity = Severity.ERROR

    def __str__(self) -> str:
        return f"{self.path}:{self.row}:{self.col}: {self.severity.value}: {self.message}"


class QuectError(Exception):
    """Base class. Carries an optional source location."""

    def __init__(self, message: str, *, row: int = 0, col: int = 0, path: str | None = None):
        super().__init__(message)
        self.message = message
        self.row = row
        self.col = col
        self.path = path

    def diagnostics(self, path: str | None = None) -> list[Diagnostic]:
        return [Diagnostic(self.message, self.row, self.col, self.path or path or "<input>")]


class ChunkSyntaxError(QuectError):
    """Raised by the parser; may bundle several diagnostics from one chunk."""

    def __init__(self, message: str, *, row: int = 0, col: int = 0, path: str | None = None,
                 diagnostics: list[Diagnostic] | None = None):
        super().__init__(message, row=row, col=col, path=path)
        self._diagnostics = list(diagnostics or [])

    def diagnostics(self, path: str | None = None) -> list[Diagnostic]:
        if self._diagnostics:
            return list(self._diagnostics)
        return super().diagnostics(path)

    def __str__(self) -> str:
        if len(self._diagnostics) > 1:
            return "\n".join(str(d) for d in self._diagnostics)
        return self.message


class BindingError(QuectError):
    """Unknown gate identifier or unresolved repeat variable."""


class DimensionError(QuectError, ValueError):
    """Sizes of a gate, target list, or register do not agree."""


class DomainError(QuectError, ValueError):
    """A value lies outside the domain an operation accepts."""


class CapacityError(QuectError, ValueError):
    """Request exceeds the desk-scale size caps (12 qubits and friends)."""


class UsageError(QuectError):
    """An API was called in a state or with arguments it does not accept."""


class ConvergenceError(QuectError, RuntimeError):
    """An iterative procedure hit its iteration cap."""


class InvariantError(QuectError, RuntimeError):
    """An internal invariant was found broken. Indicates a bug."""
