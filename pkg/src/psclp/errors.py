"""Exception hierarchy shared by the solver, the parsers and the CLI."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class SourceSpan:
    """Location of a token or construct; lines and columns are 1-based."""

    line: int
    column: int
    start: int
    end: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


@dataclass(frozen=True)
class ParseDiagnostic:
    severity: str  # "error" | "warning"
    message: str
    span: Optional[SourceSpan] = None

    def __str__(self) -> str:
        where = f"{self.span}: " if self.span is not None else ""
        return f"{where}{self.severity}: {self.message}"


class PscError(Exception):
    """Base class for every error raised by psclp."""


class ParseError(PscError):
    def __init__(self, message: str, diagnostics: tuple[ParseDiagnostic, ...] = ()):
        super().__init__(message)
        self.diagnostics = tuple(diagnostics)


class SemanticError(PscError, ValueError):
    """A well-formed text or value that violates a program invariant."""

    def __init__(self, message: str, diagnostics: tuple[ParseDiagnostic, ...] = ()):
        super().__init__(message)
        self.diagnostics = tuple(diagnostics)


class StrongNegationInGenError(SemanticError):
    pass


class MixedInfinityError(SemanticError):
    pass


class WidthExceededError(SemanticError):
    pass


class PivotNotInGraphError(SemanticError):
    pass


class ModeMismatchError(SemanticError):
    pass


class NotAModelError(SemanticError):
    pass


class OrderDomainError(SemanticError):
    pass


class CapExceededError(PscError):
    def __init__(self, size: int, cap: int, what: str = "search space"):
        super().__init__(f"{what} has {size} atoms, cap is {cap}")
        self.size = size
        self.cap = cap
