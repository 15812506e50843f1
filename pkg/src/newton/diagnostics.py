"""Source positions, diagnostics and the exception hierarchy."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SourceSpan:
    """A 1-based, end-inclusive region of a source file."""

    file: str
    line_start: int
    col_start: int
    line_end: int
    col_end: int

    def __post_init__(self):
        if min(self.line_start, self.col_start, self.line_end, self.col_end) < 1:
            raise ValueError(f"span positions are 1-based: {self!r}")
        if (self.line_end, self.col_end) < (self.line_start, self.col_start):
            raise ValueError(f"span ends before it starts: {self!r}")

    def __str__(self) -> str:
        return f"{self.file}:{self.line_start}:{self.col_start}"

    def to(self, other: SourceSpan) -> SourceSpan:
        """Span covering ``self`` through ``other``."""
        return SourceSpan(self.file, self.line_start, self.col_start, other.line_end, other.col_end)


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    span: SourceSpan | None = None
    severity: str = "error"

    def format(self) -> str:
        where = str(self.span) if self.span is not None else "<unknown>:1:1"
        return f"{where}: {self.severity}: {self.code}: {self.message}"

    def __str__(self) -> str:
        return self.format()


class NewtonError(Exception):
    """Base class for every error raised by this package."""


class CompileError(NewtonError):
    """Carries one or more diagnostics produced while compiling a specification."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(d.format() for d in self.diagnostics))

    @property
    def codes(self) -> list[str]:
        return [d.code for d in self.diagnostics]


class LexError(CompileError):
    def __init__(self, message: str, span: SourceSpan):
        self.span = span
        super().__init__([Diagnostic("LexError", message, span)])


class ParseError(CompileError):
    pass


class SemanticError(CompileError):
    pass


class LoadError(NewtonError):
    """An IR document failed validation; ``path`` is a JSON path like ``$.invariants[0]``."""

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")


class UnknownInvariant(NewtonError, KeyError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"no invariant named {name!r}")

    def __str__(self) -> str:
        return self.args[0]


class EvalError(NewtonError):
    code = "EvalError"


class UnboundIdentifier(EvalError):
    code = "UnboundIdentifier"


class DomainError(EvalError):
    code = "DomainError"
