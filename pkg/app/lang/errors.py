"""
Exceptions raised by the language pipeline
"""
from typing import Any, List, Optional


class LangError(Exception):
    """Base class for toolchain errors"""


class ArityError(LangError):
    """An argument list does not match its telescope"""


class DiagnosticError(LangError):
    """One or more diagnostics make the program unusable"""

    def __init__(self, diagnostics: List[Any]):
        self.diagnostics = list(diagnostics)
        first = self.diagnostics[0].message if self.diagnostics else "no diagnostics"
        super().__init__(f"{len(self.diagnostics)} diagnostic(s): {first}")


class BudgetExhaustedError(LangError):
    """Normalization ran out of fuel"""

    def __init__(self, steps: int):
        self.steps = steps
        super().__init__(f"normalization budget exhausted after {steps} steps")


class TransformError(LangError):
    """A transposition precondition does not hold"""


class XfuncVerificationError(LangError):
    """A transposed program failed to typecheck"""

    def __init__(self, diagnostics: List[Any], report: Optional[Any] = None):
        self.diagnostics = list(diagnostics)
        self.report = report
        super().__init__(f"transposed program is ill-typed ({len(self.diagnostics)} diagnostic(s))")
