"""
Diagnostic models
"""
from enum import Enum
from typing import Optional, Tuple

from pydantic import BaseModel, Field


class Severity(str, Enum):
    """Diagnostic severities"""
    ERROR = "error"
    WARNING = "warning"


class DiagnosticCode(str, Enum):
    """Stable diagnostic identifiers"""
    LEX_ERROR = "lex-error"
    SYNTAX_ERROR = "syntax-error"
    UNBOUND_NAME = "unbound-name"
    DUPLICATE_NAME = "duplicate-name"
    DUPLICATE_LABEL = "duplicate-label"
    MISSING_FUNCTION_TYPE = "missing-function-type"
    ARITY_MISMATCH = "arity-mismatch"
    BAD_RESULT_TYPE = "bad-result-type"
    SELF_IN_TELESCOPE = "self-in-telescope"
    MISSING_CASE = "missing-case"
    DUPLICATE_CASE = "duplicate-case"
    UNKNOWN_CASE = "unknown-case"
    CONVERSION_FAILURE = "conversion-failure"
    CONVERSION_UNDECIDED = "conversion-undecided"
    SCRUTINEE_MISMATCH = "scrutinee-mismatch"
    CASE_REACHABLE = "case-reachable"
    CASE_UNREACHABLE = "case-unreachable"
    COVERAGE_UNDECIDED = "coverage-undecided"
    CANNOT_INFER = "cannot-infer"
    MATCH_ON_CODATA = "match-on-codata"
    COMATCH_NOT_CODATA = "comatch-not-codata"
    NOT_A_TYPE = "not-a-type"
    OPEN_TERM = "open-term"


class Diagnostic(BaseModel):
    """A message about a source location"""
    code: DiagnosticCode = Field(..., description="Stable short identifier")
    severity: Severity = Field(Severity.ERROR, description="Diagnostic severity")
    message: str = Field(..., description="Human readable message")
    start: int = Field(0, description="Start byte offset")
    end: int = Field(0, description="End byte offset")
    file: Optional[str] = Field(None, description="Source file path")

    @property
    def span(self) -> Tuple[int, int]:
        return (self.start, self.end)

    def to_json_line(self) -> str:
        return self.model_dump_json()

    def render(self) -> str:
        where = f"{self.file}:" if self.file else ""
        return f"{where}{self.start}-{self.end}: {self.severity.value}[{self.code.value}]: {self.message}"


def make_diagnostic(
    code: DiagnosticCode,
    message: str,
    span: Optional[Tuple[int, int]] = None,
    file: Optional[str] = None,
) -> Diagnostic:
    start, end = span or (0, 0)
    return Diagnostic(code=code, message=message, start=start, end=end, file=file)
