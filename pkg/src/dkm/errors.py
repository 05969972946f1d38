from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

# Error codes, grouped by the stage that raises them.
PARSE = "PARSE"
SCOPE = "SCOPE"
NONLINEAR_PATTERN = "NONLINEAR_PATTERN"
HIGHER_ORDER_PATTERN = "HIGHER_ORDER_PATTERN"
NO_HEAD_CONSTANT = "NO_HEAD_CONSTANT"
FUEL_EXHAUSTED = "FUEL_EXHAUSTED"
UNBOUND = "UNBOUND"
NOT_A_FUNCTION = "NOT_A_FUNCTION"
SORT_ERROR = "SORT_ERROR"
CONV_FAIL = "CONV_FAIL"
DUPLICATE_NAME = "DUPLICATE_NAME"
RULE_CONTEXT_INFERENCE_FAIL = "RULE_CONTEXT_INFERENCE_FAIL"
RULE_ILL_TYPED = "RULE_ILL_TYPED"
UNKNOWN_THEORY = "UNKNOWN_THEORY"
ILL_TYPED_SUBJECT = "ILL_TYPED_SUBJECT"
NOT_IN_S = "NOT_IN_S"
TRANSLATION_UNSOUND = "TRANSLATION_UNSOUND"

ALL_CODES = (
    PARSE, SCOPE, NONLINEAR_PATTERN, HIGHER_ORDER_PATTERN, NO_HEAD_CONSTANT,
    FUEL_EXHAUSTED, UNBOUND, NOT_A_FUNCTION, SORT_ERROR, CONV_FAIL,
    DUPLICATE_NAME, RULE_CONTEXT_INFERENCE_FAIL, RULE_ILL_TYPED,
    UNKNOWN_THEORY, ILL_TYPED_SUBJECT, NOT_IN_S, TRANSLATION_UNSOUND,
)


@dataclass(frozen=True)
class SourceSpan:
    file: str
    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def to_json(self) -> dict:
        return {"file": self.file, "startLine": self.start_line,
                "startCol": self.start_col, "endLine": self.end_line,
                "endCol": self.end_col}


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    span: Optional[SourceSpan] = None
    severity: str = "error"

    def format(self) -> str:
        if self.span is None:
            return f"<unknown>: {self.code}: {self.message}"
        s = self.span
        return f"{s.file}:{s.start_line}:{s.start_col}: {self.code}: {self.message}"

    def to_json(self) -> dict:
        return {"code": self.code, "message": self.message,
                "severity": self.severity,
                "span": self.span.to_json() if self.span else None}


class DkmError(Exception):
    """A kernel failure carrying a machine-readable :class:`Diagnostic`."""

    def __init__(self, code: str, message: str, span: Optional[SourceSpan] = None,
                 payload: Any = None):
        super().__init__(f"{code}: {message}")
        self.diagnostic = Diagnostic(code, message, span)
        self.payload = payload

    @property
    def code(self) -> str:
        return self.diagnostic.code

    @property
    def span(self) -> Optional[SourceSpan]:
        return self.diagnostic.span

    def with_span(self, span: Optional[SourceSpan]) -> "DkmError":
        if self.diagnostic.span is not None or span is None:
            return self
        err = DkmError(self.code, self.diagnostic.message, span, self.payload)
        err.__cause__ = self.__cause__
        return err
