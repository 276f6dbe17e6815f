"""Exception types shared across the toolkit."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class SourceSpan:
    """Half-open byte range [start, end) into a source text."""

    start: int
    end: int

    def __post_init__(self) -> None:
        if self.start < 0 or self.end < self.start:
            raise ValueError(f"invalid span ({self.start}, {self.end})")

    def __str__(self) -> str:
        return f"{self.start}..{self.end}"


class TracedocError(Exception):
    """Base class for all toolkit errors."""


class ParseError(TracedocError):
    """Lexing or parsing failure, pointing at the first offending span."""

    def __init__(self, message: str, span: SourceSpan, expected: list[str] | None = None):
        if not message:
            raise ValueError("ParseError requires a message")
        self.message = message
        self.span = span
        self.expected = expected or []
        detail = f" (expected {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"parse error at {span}: {message}{detail}")


class EvalError(TracedocError):
    """Runtime failure during expression evaluation."""

    KINDS = frozenset({
        "UnboundVariable", "TypeMismatch", "NoMatchingClause", "KeyNotFound",
        "UserError", "DivisionByZero", "NotCoercible",
    })

    def __init__(self, kind: str, message: str, span: SourceSpan | None = None):
        assert kind in self.KINDS, kind
        self.kind = kind
        self.message = message
        self.span = span or SourceSpan(0, 0)
        super().__init__(f"{kind} at {self.span}: {message}")


class DatasetError(TracedocError):
    """Rejected dataset shape (ragged rows, non-scalar cells)."""


class DocumentError(TracedocError):
    """Invalid document operation (bad span, malformed tag, hole overlap)."""

    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        super().__init__(message if offset is None else f"{message} (offset {offset})")


class GatewayError(TracedocError):
    """Transport-level completion failure; retryable, distinct from validation."""


class WorkflowError(TracedocError):
    """Event rejected in the current session state; the session is unchanged."""


class ProjectError(TracedocError):
    """Project or suite file failed to load or validate."""


@dataclass
class SynthesisFailure:
    """Validation failure inside one synthesis attempt, fed back to the model."""

    stage: str  # parse | eval | coerce | mismatch
    message: str
    raw_response: str = field(repr=False, default="")
