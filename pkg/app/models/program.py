"""
Program request and result models
"""
from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field

from app.models.diagnostic import Diagnostic


class ProgramRequest(BaseModel):
    """Request model carrying a source program"""
    source: str = Field(..., description="Program source text")
    file: Optional[str] = Field(None, description="File name used in diagnostics")
    prelude: bool = Field(True, description="Prepend the bundled prelude")
    fuel: Optional[int] = Field(None, description="Normalization or evaluation step budget")


class RunRequest(ProgramRequest):
    """Request model for evaluating an expression in a program"""
    expr: str = Field(..., description="Closed expression to evaluate")


class XfuncRequest(ProgramRequest):
    """Request model for transposing a type"""
    type_name: str = Field(..., description="Name of the data or codata type to transform")


class CheckResult(BaseModel):
    """Result of typechecking a program"""
    ok: bool = Field(..., description="True if the program typechecks")
    declarations: int = Field(0, description="Number of declarations after lifting")
    generated: List[str] = Field(default_factory=list, description="Labels of lifted declarations")
    diagnostics: List[Diagnostic] = Field(default_factory=list, description="Diagnostics, empty on success")


class RunStatus(str, Enum):
    """Evaluation outcomes"""
    VALUE = "value"
    BUDGET_EXHAUSTED = "budget-exhausted"
    STUCK = "stuck"


class RunResult(BaseModel):
    """Result of evaluating an expression"""
    status: RunStatus = Field(..., description="Evaluation outcome")
    value: Optional[str] = Field(None, description="Printed value when evaluation finished")
    term: Optional[str] = Field(None, description="Printed term where evaluation stopped")
    steps: int = Field(0, description="Number of steps taken")
    reason: Optional[str] = Field(None, description="Why evaluation got stuck")


class XfuncDirection(str, Enum):
    """Transposition directions"""
    DEFUNCTIONALIZE = "defunctionalize"
    REFUNCTIONALIZE = "refunctionalize"


class XfuncReport(BaseModel):
    """Summary of one transposition"""
    direction: XfuncDirection = Field(..., description="Direction chosen from the type's kind")
    type_name: str = Field(..., description="Transformed type")
    producers: int = Field(..., description="Constructors or codefinitions moved")
    consumers: int = Field(..., description="Definitions or destructors moved")
    cells: int = Field(..., description="Clause bodies moved")


class XfuncResult(BaseModel):
    """Result of a transposition"""
    source: str = Field(..., description="Printed transformed program")
    report: XfuncReport = Field(..., description="Transposition summary")


class SourceResult(BaseModel):
    """Printed program returned by lift and fmt"""
    source: str = Field(..., description="Printed program")


class CorpusEntryResult(BaseModel):
    """Outcome of one manifest line"""
    file: str = Field(..., description="Corpus file")
    expectation: str = Field(..., description="Expectation as written in the manifest")
    passed: bool = Field(..., description="True if the expectation held")
    detail: Optional[str] = Field(None, description="Failure explanation")


class CorpusReport(BaseModel):
    """Summary of a corpus run"""
    entries: List[CorpusEntryResult] = Field(default_factory=list, description="Per-entry results")
    passed: int = Field(0, description="Number of passing entries")
    failed: int = Field(0, description="Number of failing entries")

    @property
    def ok(self) -> bool:
        return self.failed == 0
