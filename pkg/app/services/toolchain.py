"""
Toolchain facade over the language pipeline
"""
import logging
from pathlib import Path
from typing import Optional, Tuple

from app.config import PRELUDE_PATH
from app.lang.checker import TypedProgram, check_program, infer_type
from app.lang.errors import DiagnosticError
from app.lang.evaluator import BudgetExhausted, Evaluated, EvalResult, Evaluator, Stuck, unfold_labels
from app.lang.lift import lift_program
from app.lang.parser import parse, parse_expression
from app.lang.printer import print_expr, print_program
from app.lang.syntax import Decl, Expr, Program, free_vars, is_core
from app.lang.xfunc import transpose
from app.models.diagnostic import DiagnosticCode, make_diagnostic
from app.models.program import CheckResult, RunResult, RunStatus, XfuncReport

logger = logging.getLogger(__name__)


class Toolchain:
    """Parses, lifts, checks, evaluates and transforms programs"""

    def __init__(self, prelude_path: Path = PRELUDE_PATH):
        self.prelude_path = Path(prelude_path)
        self._prelude: Optional[Tuple[Decl, ...]] = None

    def load_prelude(self) -> Tuple[Decl, ...]:
        """
        Parse and check the bundled prelude once.

        Returns:
            The prelude declarations

        Raises:
            DiagnosticError: if the prelude file itself is ill-formed
        """
        if self._prelude is not None:
            return self._prelude
        path = str(self.prelude_path)
        logger.info(f"Loading prelude from {path}")
        program = parse(self.prelude_path.read_text(encoding="utf-8"), path)
        check_program(program, path)
        self._prelude = program.decls
        return self._prelude

    def parse(self, source: str, file: Optional[str] = None, prelude: bool = True) -> Program:
        return parse(source, file, self.load_prelude() if prelude else ())

    def check(
        self,
        source: str,
        file: Optional[str] = None,
        prelude: bool = True,
        fuel: Optional[int] = None,
    ) -> TypedProgram:
        """
        Parse, lift and typecheck a source program.

        Args:
            source: Program text
            file: Path used in diagnostics
            prelude: Put the prelude in scope
            fuel: Normalization budget per conversion check

        Returns:
            The checked, lifted program

        Raises:
            DiagnosticError: on any lexical, syntax, scope or typing error
        """
        return check_program(self.parse(source, file, prelude), file, fuel)

    def check_result(
        self,
        source: str,
        file: Optional[str] = None,
        prelude: bool = True,
        fuel: Optional[int] = None,
    ) -> CheckResult:
        """Like check, but reports diagnostics as data."""
        try:
            typed = self.check(source, file, prelude, fuel)
        except DiagnosticError as e:
            return CheckResult(ok=False, diagnostics=e.diagnostics)
        generated = [label for labels in typed.generated.values() for label in labels]
        return CheckResult(ok=True, declarations=len(typed.program.decls), generated=generated)

    def expression(self, typed: TypedProgram, text: str) -> Expr:
        """
        Parse a closed expression in the scope of a checked program and
        check that it has a type.

        Raises:
            DiagnosticError: if the expression is malformed, open or ill-typed
        """
        e = parse_expression(text, typed.program)
        open_names = sorted(free_vars(e))
        if open_names:
            raise DiagnosticError([make_diagnostic(
                DiagnosticCode.OPEN_TERM, f"expression mentions unbound variables {', '.join(open_names)}"
            )])
        if not is_core(e):
            raise DiagnosticError([make_diagnostic(
                DiagnosticCode.CANNOT_INFER,
                "local match and comatch expressions cannot be typechecked outside a declaration; "
                "bind them with let first",
                e.span,
            )])
        infer_type(typed.program, e)
        return e

    def evaluate(self, typed: TypedProgram, text: str, fuel: Optional[int] = None) -> EvalResult:
        e = self.expression(typed, text)
        return Evaluator(typed.signatures, fuel).evaluate(e)

    def run(
        self,
        source: str,
        expr: str,
        file: Optional[str] = None,
        prelude: bool = True,
        fuel: Optional[int] = None,
    ) -> RunResult:
        """
        Evaluate `expr` against a checked program.

        Args:
            source: Program text
            expr: Closed expression in the program's scope
            file: Path used in diagnostics
            prelude: Put the prelude in scope
            fuel: Maximum number of evaluation steps

        Returns:
            RunResult with the printed value, or where evaluation stopped

        Raises:
            DiagnosticError: if the program or the expression is rejected
        """
        typed = self.check(source, file, prelude)
        result = self.evaluate(typed, expr, fuel)
        labels = [label for labels in typed.generated.values() for label in labels]
        match result:
            case Evaluated(value, steps):
                shown = unfold_labels(value, typed.signatures, labels)
                return RunResult(status=RunStatus.VALUE, value=print_expr(shown), steps=steps)
            case BudgetExhausted(steps, term):
                logger.warning(f"Evaluation of {expr} stopped after {steps} steps")
                return RunResult(status=RunStatus.BUDGET_EXHAUSTED, term=print_expr(term), steps=steps)
            case Stuck(reason, term):
                logger.warning(f"Evaluation of {expr} is stuck: {reason}")
                return RunResult(status=RunStatus.STUCK, term=print_expr(term), reason=reason)
        raise TypeError(f"unexpected evaluation result {result!r}")

    def lift(self, source: str, file: Optional[str] = None, prelude: bool = True) -> str:
        """Print the program with every local (co)match lifted to the top level."""
        return print_program(lift_program(self.parse(source, file, prelude), file))

    def xfunc(
        self,
        source: str,
        type_name: str,
        file: Optional[str] = None,
        prelude: bool = True,
        fuel: Optional[int] = None,
    ) -> Tuple[str, XfuncReport]:
        """
        De- or refunctionalize `type_name` and print the checked result.

        Raises:
            DiagnosticError: if the input program is rejected
            TransformError: if the type cannot be transformed
            XfuncVerificationError: if the output does not typecheck
        """
        typed = self.check(source, file, prelude, fuel)
        program, report = transpose(typed, type_name, fuel=fuel)
        return print_program(program), report

    def fmt(self, source: str, file: Optional[str] = None, prelude: bool = True) -> str:
        return print_program(self.parse(source, file, prelude))


toolchain = Toolchain()
