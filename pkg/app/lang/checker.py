"""
Bidirectional typechecker

Checking runs in two passes. The elaboration pass walks every declaration
that still contains local comatches or matches, computes their types and
lifts them to generated declarations; conversion failures are ignored there.
The second pass checks the resulting core program strictly.
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from app.config import CONVERSION_FUEL
from app.lang.errors import BudgetExhaustedError, DiagnosticError
from app.lang.lift import ClosureError, assign_labels, closure_of, decl_is_core, free_closure, program_is_core
from app.lang.normalize import Normalizer
from app.lang.printer import print_expr
from app.lang.signature import Signatures, check_coverage, validate_program
from app.lang.syntax import (
    Call,
    Case,
    CodataDecl,
    CodefDecl,
    Comatch,
    Ctor,
    DataDecl,
    Decl,
    DefDecl,
    DotCall,
    Dtor,
    Expr,
    LetDecl,
    Match,
    Param,
    Program,
    Telescope,
    TypCtor,
    Universe,
    Var,
    alpha_equal,
    free_vars,
    fresh_name,
    identity_substitution,
    is_core,
    rename,
    subst,
    substitute,
)
from app.lang.unify import Absurd, Undecided, Unifies, UnifyOutcome, is_unifier, unify
from app.models.diagnostic import Diagnostic, DiagnosticCode, make_diagnostic

logger = logging.getLogger(__name__)

Context = Tuple[Param, ...]


class _CheckError(Exception):
    def __init__(self, diagnostics: List[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__(diagnostics[0].message)


@dataclass
class TypedProgram:
    """A lifted program that passed every declaration rule."""
    program: Program
    signatures: Signatures
    generated: Dict[str, Tuple[str, ...]] = field(default_factory=dict)


def lookup(ctx: Context, name: str) -> Optional[Expr]:
    for param in reversed(ctx):
        if param.name == name:
            return param.type
    return None


def _names(ctx: Sequence[Param]) -> List[str]:
    return [p.name for p in ctx]


class Checker:
    """Typechecks declarations against a mutable signature table."""

    def __init__(self, program: Program, file: Optional[str] = None, fuel: Optional[int] = None):
        self.file = file
        self.fuel = fuel or CONVERSION_FUEL
        self.sigs = Signatures.from_program(program)
        self.diagnostics: List[Diagnostic] = []
        self.lenient = False
        self.rule = ""
        self.generated: List[Decl] = []

    # Diagnostics

    def error(self, code: DiagnosticCode, message: str, span=None) -> _CheckError:
        prefix = f"{self.rule}: " if self.rule else ""
        return _CheckError([make_diagnostic(code, prefix + message, span, self.file)])

    def record(self, err: _CheckError) -> None:
        self.diagnostics.extend(err.diagnostics)

    def _clauses(self, check: Callable[[Case], Case], clauses: Sequence[Case], rule: str) -> Tuple[Case, ...]:
        out = []
        outer, self.rule = self.rule, rule
        try:
            for clause in clauses:
                try:
                    out.append(check(clause))
                except _CheckError as err:
                    self.record(err)
                    out.append(clause)
        finally:
            self.rule = outer
        return tuple(out)

    # Normalization

    def normalizer(self) -> Normalizer:
        return Normalizer(self.sigs, self.fuel)

    def whnf(self, e: Expr, span=None) -> Expr:
        try:
            return self.normalizer().whnf(e)
        except BudgetExhaustedError as err:
            raise self.error(
                DiagnosticCode.CONVERSION_UNDECIDED,
                f"could not reduce '{print_expr(e)}' within {err.steps} steps",
                span,
            )

    def _normalize_args(self, args: Tuple[Expr, ...]) -> Tuple[Expr, ...]:
        try:
            normalizer = self.normalizer()
            return tuple(normalizer.normalize(a) for a in args)
        except BudgetExhaustedError:
            return args

    def convertible(self, e1: Expr, e2: Expr) -> Optional[bool]:
        """Normalize both sides and compare up to renaming; None if undecided."""
        try:
            normalizer = self.normalizer()
            return alpha_equal(normalizer.normalize(e1), normalizer.normalize(e2))
        except BudgetExhaustedError:
            return None

    def convert(self, actual: Expr, expected: Expr, span=None) -> None:
        if self.lenient:
            return
        verdict = self.convertible(actual, expected)
        if verdict is None:
            raise self.error(
                DiagnosticCode.CONVERSION_UNDECIDED,
                f"could not decide whether '{print_expr(actual)}' and '{print_expr(expected)}' are equal",
                span,
            )
        if not verdict:
            raise self.error(
                DiagnosticCode.CONVERSION_FAILURE,
                f"expected '{print_expr(expected)}', found '{print_expr(actual)}'",
                span,
            )

    def unify(self, flexible: Sequence[str], lhs: Sequence[Expr], rhs: Sequence[Expr]) -> UnifyOutcome:
        try:
            outcome = unify(flexible, lhs, rhs, self.normalizer())
        except BudgetExhaustedError:
            return Undecided(lhs[0], rhs[0])
        if isinstance(outcome, Unifies) and not self.lenient:
            assert is_unifier(outcome.theta, lhs, rhs, self.normalizer())
        return outcome

    # Expressions

    def infer(self, ctx: Context, e: Expr) -> Tuple[Expr, Expr]:
        """Elaborate `e` and synthesize its type."""
        match e:
            case Var(name):
                ty = lookup(ctx, name)
                if ty is None:
                    raise self.error(DiagnosticCode.OPEN_TERM, f"variable '{name}' is not in scope", e.span)
                return e, ty
            case Universe():
                return e, Universe()
            case TypCtor(name, args):
                decl = self.sigs.types.get(name)
                if decl is None:
                    raise self.error(DiagnosticCode.UNBOUND_NAME, f"unknown type '{name}'", e.span)
                args = self.check_substitution(ctx, args, decl.params, e.span, f"type '{name}'")
                return TypCtor(name, args, e.span), Universe()
            case Call(name, args):
                let = self.sigs.lets.get(name)
                if let is not None:
                    args = self.check_substitution(ctx, args, let.params, e.span, f"'{name}'")
                    return Call(name, args, e.span), substitute(let.type, args, let.params)
                sig = self.sigs.producers.get(name)
                if sig is None:
                    raise self.error(DiagnosticCode.UNBOUND_NAME, f"unknown producer '{name}'", e.span)
                args = self.check_substitution(ctx, args, sig.params, e.span, f"'{name}'")
                mapping = dict(zip(_names(sig.params), args))
                return Call(name, args, e.span), TypCtor(sig.type_name, tuple(subst(a, mapping) for a in sig.args))
            case DotCall(scrutinee, name, args):
                sig = self.sigs.consumers.get(name)
                if sig is None:
                    raise self.error(DiagnosticCode.UNBOUND_NAME, f"unknown consumer '{name}'", e.span)
                scrutinee, scrutinee_type = self.infer(ctx, scrutinee)
                head = self.whnf(scrutinee_type, e.span)
                if not isinstance(head, TypCtor) or head.name != sig.type_name:
                    raise self.error(
                        DiagnosticCode.SCRUTINEE_MISMATCH,
                        f"'{name}' expects a scrutinee of type '{sig.type_name}', found '{print_expr(head)}'",
                        e.span,
                    )
                args = self.check_substitution(ctx, args, sig.params, e.span, f"'{name}'")
                mapping = dict(zip(_names(sig.params), args))
                for actual, declared in zip(head.args, sig.self_args):
                    self.convert(actual, subst(declared, mapping), e.span)
                mapping[sig.self_name] = scrutinee
                return DotCall(scrutinee, name, args, e.span), subst(sig.ret, mapping)
            case Match(_, _, motive, _) if motive is not None:
                return self.lift_match(ctx, e, None)
            case Comatch() | Match():
                raise self.error(
                    DiagnosticCode.CANNOT_INFER,
                    "cannot infer the type of a local match or comatch here; annotate it or use it in a checked position",
                    e.span,
                )
        raise self.error(DiagnosticCode.NOT_A_TYPE, f"unexpected expression {e!r}")

    def check(self, ctx: Context, e: Expr, expected: Expr) -> Expr:
        """Elaborate `e` against `expected`."""
        if self.lenient and is_core(e):
            return e
        match e:
            case Comatch():
                return self.lift_comatch(ctx, e, expected)
            case Match():
                elaborated, _ = self.lift_match(ctx, e, expected)
                return elaborated
        elaborated, actual = self.infer(ctx, e)
        self.convert(actual, expected, e.span)
        return elaborated

    def check_type(self, ctx: Context, t: Expr) -> Expr:
        """Elaborate `t` and demand that it is a type."""
        if (self.lenient and is_core(t)) or isinstance(t, (Comatch, Match)):
            return self.check(ctx, t, Universe())
        elaborated, actual = self.infer(ctx, t)
        if not self.lenient and not isinstance(self.whnf(actual, t.span), Universe):
            raise self.error(DiagnosticCode.NOT_A_TYPE, f"'{print_expr(t)}' is not a type", t.span)
        return elaborated

    def check_substitution(
        self, ctx: Context, args: Sequence[Expr], params: Telescope, span=None, what: str = "telescope"
    ) -> Tuple[Expr, ...]:
        """Check `args` positionally against `params`, instantiating later types."""
        if len(args) != len(params):
            raise self.error(
                DiagnosticCode.ARITY_MISMATCH,
                f"{what} expects {len(params)} arguments, got {len(args)}",
                span,
            )
        mapping: Dict[str, Expr] = {}
        out = []
        for i, (arg, param) in enumerate(zip(args, params)):
            try:
                elaborated = self.check(ctx, arg, subst(param.type, mapping))
            except _CheckError as err:
                for d in err.diagnostics:
                    d.message = f"{d.message} (argument {i} of {what})"
                raise
            mapping[param.name] = elaborated
            out.append(elaborated)
        return tuple(out)

    def check_telescope(self, ctx: Context, params: Telescope) -> Tuple[Context, Telescope]:
        out = []
        for param in params:
            param = Param(param.name, self.check_type(ctx, param.type))
            out.append(param)
            ctx = ctx + (param,)
        return ctx, tuple(out)

    # Clauses

    def _freshen(self, names: Sequence[str], avoid: Sequence[str], body: Optional[Expr]) -> Tuple[Tuple[str, ...], Dict[str, str]]:
        taken = set(avoid) | set(names)
        if body is not None:
            taken |= free_vars(body)
        renaming: Dict[str, str] = {}
        out = []
        for name in names:
            if name in avoid:
                new = fresh_name(name, taken)
                taken.add(new)
                renaming[name] = new
                out.append(new)
            else:
                out.append(name)
        return tuple(out), renaming

    def _reorder(self, params: Sequence[Param]) -> Context:
        names = set(_names(params))
        pending = list(params)
        placed: set = set()
        out = []
        while pending:
            for i, param in enumerate(pending):
                if (free_vars(param.type) & names) - {param.name} <= placed:
                    out.append(param)
                    placed.add(param.name)
                    del pending[i]
                    break
            else:
                raise self.error(
                    DiagnosticCode.COVERAGE_UNDECIDED,
                    f"cannot order the refined context around '{pending[0].name}'",
                )
        return tuple(out)

    def _check_clause(
        self,
        clause: Case,
        outer: Context,
        inner: Telescope,
        rho1: Sequence[Expr],
        rho2: Sequence[Expr],
        ret: Expr,
        body: Optional[Expr],
    ) -> Optional[Expr]:
        joint = tuple(outer) + tuple(inner)
        if self.lenient and body is not None and is_core(body):
            return body
        outcome = self.unify(_names(joint), rho1, rho2)
        match outcome:
            case Unifies(theta):
                if body is None:
                    raise self.error(
                        DiagnosticCode.CASE_REACHABLE,
                        f"clause '{clause.name}' is reachable and cannot be absurd",
                        clause.span,
                    )
                refined = [Param(p.name, subst(p.type, theta)) for p in joint if p.name not in theta]
                ctx = self._reorder(refined)
                elaborated = self.check(ctx, subst(body, theta), subst(ret, theta))
                return body if is_core(body) else elaborated
            case Absurd(reason):
                if body is not None:
                    if self.lenient:
                        return self._elaborate_quietly(joint, body, ret)
                    raise self.error(
                        DiagnosticCode.CASE_UNREACHABLE,
                        f"clause '{clause.name}' is unreachable ({reason}) and must be marked absurd",
                        clause.span,
                    )
                return None
            case Undecided(left, right):
                if self.lenient and body is not None:
                    return self._elaborate_quietly(joint, body, ret)
                raise self.error(
                    DiagnosticCode.COVERAGE_UNDECIDED,
                    f"cannot decide whether clause '{clause.name}' is reachable: "
                    f"'{print_expr(left)}' against '{print_expr(right)}'",
                    clause.span,
                )
        raise AssertionError(outcome)

    def _elaborate_quietly(self, ctx: Context, body: Expr, ret: Expr) -> Expr:
        try:
            return self.check(ctx, body, ret)
        except _CheckError:
            return body

    def check_case(self, outer: Context, case: Case, self_name: str, self_type: TypCtor, ret: Expr) -> Case:
        """Check a definition clause for one constructor of `self_type`."""
        ctor = self.sigs.producers[case.name]
        params, renaming = self._freshen(case.params, _names(outer), case.body)
        body = rename(case.body, renaming) if case.body is not None else None
        to_case = {p.name: Var(n) for p, n in zip(ctor.params, params)}
        inner = tuple(Param(n, subst(p.type, to_case)) for n, p in zip(params, ctor.params))
        rho2 = tuple(subst(a, to_case) for a in ctor.args)
        expected = subst(ret, {self_name: Call(case.name, identity_substitution(params))})
        body = self._check_clause(case, outer, inner, self_type.args, rho2, expected, body)
        return Case(case.name, params, body, case.span)

    def check_cocase(self, outer: Context, cocase: Case, label: str, result: TypCtor) -> Case:
        """Check a codefinition cocase for one destructor of `result`."""
        dtor = self.sigs.consumers[cocase.name]
        params, renaming = self._freshen(cocase.params, _names(outer), cocase.body)
        body = rename(cocase.body, renaming) if cocase.body is not None else None
        to_case = {p.name: Var(n) for p, n in zip(dtor.params, params)}
        inner = tuple(Param(n, subst(p.type, to_case)) for n, p in zip(params, dtor.params))
        rho2 = tuple(subst(a, to_case) for a in dtor.self_args)
        expected = subst(dtor.ret, {**to_case, dtor.self_name: Call(label, identity_substitution(outer))})
        body = self._check_clause(cocase, outer, inner, result.args, rho2, expected, body)
        return Case(cocase.name, params, body, cocase.span)

    # Lifting

    def _closure(self, span, close: Callable[..., Telescope], *args) -> Telescope:
        try:
            return close(*args)
        except ClosureError as err:
            raise self.error(DiagnosticCode.OPEN_TERM, str(err), span)

    def _coverage(self, clauses: Tuple[Case, ...], expected: Dict[str, int], rule: str, owner: str, span) -> None:
        diagnostics = check_coverage(clauses, expected, rule, owner, span, self.file)
        if diagnostics:
            raise _CheckError(diagnostics)

    def lift_comatch(self, ctx: Context, e: Comatch, expected: Expr) -> Expr:
        """Lift `e` to a codefinition over its closure and return the call to it."""
        head = self.whnf(expected, e.span)
        if not (isinstance(head, TypCtor) and self.sigs.is_codata(head.name)):
            raise self.error(
                DiagnosticCode.COMATCH_NOT_CODATA,
                f"comatch '{e.label}' is expected to have type '{print_expr(head)}', which is not a codata type",
                e.span,
            )
        result = TypCtor(head.name, self._normalize_args(head.args))
        closure = self._closure(e.span, free_closure, e, ctx, (result,))
        self.sigs.replace(CodefDecl(e.label, closure, result, e.cocases, e.span))
        arities = {d.name: len(d.params) for d in self.sigs.dtors_of(head.name)}
        self._coverage(e.cocases, arities, "COCASE", head.name, e.span)
        cocases = self._clauses(lambda c: self.check_cocase(closure, c, e.label, result), e.cocases, "COCASE")
        codef = CodefDecl(e.label, closure, result, cocases, e.span)
        self.sigs.replace(codef)
        self.generated.append(codef)
        logger.debug(f"Lifted comatch {e.label} over {len(closure)} variables")
        return Call(e.label, identity_substitution(closure), e.span)

    def lift_match(self, ctx: Context, e: Match, expected: Optional[Expr]) -> Tuple[Expr, Expr]:
        """Lift `e` to a definition over its closure; returns the call and its type."""
        scrutinee, scrutinee_type = self.infer(ctx, e.scrutinee)
        head = self.whnf(scrutinee_type, e.span)
        if isinstance(head, TypCtor) and self.sigs.is_codata(head.name):
            raise self.error(
                DiagnosticCode.MATCH_ON_CODATA,
                f"cannot match on '{print_expr(e.scrutinee)}' of codata type '{head.name}'",
                e.span,
            )
        if not (isinstance(head, TypCtor) and self.sigs.is_data(head.name)):
            raise self.error(
                DiagnosticCode.SCRUTINEE_MISMATCH,
                f"cannot match on '{print_expr(e.scrutinee)}' of type '{print_expr(head)}'",
                e.span,
            )
        self_type = TypCtor(head.name, self._normalize_args(head.args))
        taken = set(_names(ctx))
        if e.motive is None:
            if expected is None:
                raise self.error(DiagnosticCode.CANNOT_INFER, f"match '{e.label}' needs a motive", e.span)
            binder = fresh_name("_0", taken | free_vars(expected))
            motive = expected
            result_type = expected
        else:
            binder = e.motive.binder
            motive = e.motive.type
            if binder in taken:
                new = fresh_name(binder, taken | free_vars(motive))
                motive, binder = rename(motive, {binder: new}), new
            motive = self.check_type(ctx + (Param(binder, self_type),), motive)
            result_type = subst(motive, {binder: scrutinee})
            if expected is not None:
                self.convert(result_type, expected, e.span)
        case_vars = frozenset().union(*(free_vars(c.body) - set(c.params) for c in e.cases if c.body is not None))
        names = case_vars | free_vars(self_type) | (free_vars(motive) - {binder})
        closure = self._closure(e.span, closure_of, names, ctx)
        self.sigs.replace(DefDecl(e.label, binder, self_type, closure, motive, e.cases, e.span))
        arities = {c.name: len(c.params) for c in self.sigs.ctors_of(head.name)}
        self._coverage(e.cases, arities, "CASE", head.name, e.span)
        cases = self._clauses(
            lambda c: self.check_case(closure, c, binder, self_type, motive), e.cases, "CASE"
        )
        definition = DefDecl(e.label, binder, self_type, closure, motive, cases, e.span)
        self.sigs.replace(definition)
        self.generated.append(definition)
        logger.debug(f"Lifted match {e.label} over {len(closure)} variables")
        return DotCall(scrutinee, e.label, identity_substitution(closure), e.span), result_type

    # Declarations

    def _self_args(self, ctx: Context, type_name: str, args, span) -> Tuple[Expr, ...]:
        decl = self.sigs.types[type_name]
        return self.check_substitution(ctx, args, decl.params, span, f"type '{type_name}'")

    def check_decl(self, decl: Decl) -> Decl:
        """Check one declaration and return it with local (co)matches lifted."""
        match decl:
            case DataDecl(name, params, ctors):
                self.rule = "DATA"
                _, params = self.check_telescope((), params)
                out = []
                for ctor in ctors:
                    try:
                        ctx, tel = self.check_telescope((), ctor.params)
                        args = self.check_substitution(ctx, ctor.args, params, ctor.span, f"type '{name}'")
                        out.append(Ctor(ctor.name, tel, args, ctor.span))
                    except _CheckError as err:
                        self.record(err)
                        out.append(ctor)
                return DataDecl(name, params, tuple(out), decl.span)
            case CodataDecl(name, params, dtors):
                self.rule = "CODATA"
                _, params = self.check_telescope((), params)
                out = []
                for dtor in dtors:
                    try:
                        ctx, tel = self.check_telescope((), dtor.params)
                        self_args = self.check_substitution(ctx, dtor.self_args, params, dtor.span, f"type '{name}'")
                        self_param = Param(dtor.self_name, TypCtor(name, self_args))
                        ret = self.check_type(ctx + (self_param,), dtor.ret)
                        out.append(Dtor(dtor.name, dtor.self_name, self_args, tel, ret, dtor.span))
                    except _CheckError as err:
                        self.record(err)
                        out.append(dtor)
                return CodataDecl(name, params, tuple(out), decl.span)
            case DefDecl(name, self_name, self_type, params, ret, cases):
                self.rule = "DEF"
                ctx, tel = self.check_telescope((), params)
                args = self._self_args(ctx, self_type.name, self_type.args, decl.span)
                self_type = TypCtor(self_type.name, args, self_type.span)
                ret = self.check_type(ctx + (Param(self_name, self_type),), ret)
                cases = self._clauses(lambda c: self.check_case(tel, c, self_name, self_type, ret), cases, "CASE")
                return DefDecl(name, self_name, self_type, tel, ret, cases, decl.span)
            case CodefDecl(name, params, result, cocases):
                self.rule = "CODEF"
                ctx, tel = self.check_telescope((), params)
                args = self._self_args(ctx, result.name, result.args, decl.span)
                result = TypCtor(result.name, args, result.span)
                cocases = self._clauses(lambda c: self.check_cocase(tel, c, name, result), cocases, "COCASE")
                return CodefDecl(name, tel, result, cocases, decl.span)
            case LetDecl(name, params, ty, body):
                self.rule = "LET"
                ctx, tel = self.check_telescope((), params)
                ty = self.check_type(ctx, ty)
                body = self.check(ctx, body, ty)
                return LetDecl(name, tel, ty, body, decl.span)
        raise TypeError(f"not a declaration: {decl!r}")

    def elaborate(self, program: Program) -> Tuple[Program, Dict[str, Tuple[str, ...]]]:
        """Lift every local (co)match; conversion errors are left to `check_all`."""
        self.lenient = True
        out: List[Decl] = []
        generated: Dict[str, Tuple[str, ...]] = {}
        try:
            for decl in program.decls:
                if decl_is_core(decl):
                    out.append(decl)
                    continue
                self.generated = []
                try:
                    elaborated = self.check_decl(decl)
                except _CheckError as err:
                    self.record(err)
                    elaborated = decl
                self.sigs.replace(elaborated)
                out.append(elaborated)
                out.extend(self.generated)
                generated[decl.name] = tuple(d.name for d in self.generated)
        finally:
            self.lenient = False
            self.rule = ""
        return program.with_decls(out), generated

    def check_all(self, program: Program) -> None:
        for decl in program.decls:
            try:
                self.check_decl(decl)
            except _CheckError as err:
                self.record(err)
            finally:
                self.rule = ""


def elaborate_program(
    program: Program, file: Optional[str] = None, fuel: Optional[int] = None
) -> Tuple[Program, List[Diagnostic]]:
    """Validate, label and lift a surface program; returns the program and diagnostics."""
    diagnostics = validate_program(program, file)
    if diagnostics:
        return program, diagnostics
    labelled, diagnostics = assign_labels(program, file)
    if diagnostics or program_is_core(labelled):
        return labelled, diagnostics
    checker = Checker(labelled, file, fuel)
    lifted, _ = checker.elaborate(labelled)
    return lifted, checker.diagnostics


def check_program(program: Program, file: Optional[str] = None, fuel: Optional[int] = None) -> TypedProgram:
    """
    Typecheck a program, lifting local (co)matches first.

    Args:
        program: A resolved program, surface or core
        file: Path used in diagnostics
        fuel: Normalization budget per conversion check

    Returns:
        The TypedProgram for the lifted program

    Raises:
        DiagnosticError: if any declaration rule fails
    """
    generated: Dict[str, Tuple[str, ...]] = {}
    diagnostics = validate_program(program, file)
    if not diagnostics:
        labelled, diagnostics = assign_labels(program, file)
    if diagnostics:
        raise DiagnosticError(diagnostics)
    lifted = labelled
    if not program_is_core(labelled):
        elaborator = Checker(labelled, file, fuel)
        lifted, generated = elaborator.elaborate(labelled)
        if elaborator.diagnostics:
            raise DiagnosticError(elaborator.diagnostics)
        diagnostics = validate_program(lifted, file)
        if diagnostics:
            raise DiagnosticError(diagnostics)
    checker = Checker(lifted, file, fuel)
    checker.check_all(lifted)
    if checker.diagnostics:
        raise DiagnosticError(checker.diagnostics)
    logger.info(f"Checked {len(lifted.decls)} declarations ({sum(map(len, generated.values()))} generated)")
    return TypedProgram(lifted, checker.sigs, generated)


def infer_type(program: Program, e: Expr, fuel: Optional[int] = None) -> Expr:
    """Infer the type of a closed core expression against a checked program."""
    checker = Checker(program, fuel=fuel)
    try:
        _, ty = checker.infer((), e)
    except _CheckError as err:
        raise DiagnosticError(err.diagnostics)
    return ty


def check_expression(program: Program, e: Expr, expected: Expr, fuel: Optional[int] = None) -> None:
    """Check a closed core expression against `expected`."""
    checker = Checker(program, fuel=fuel)
    try:
        checker.check((), e, expected)
    except _CheckError as err:
        raise DiagnosticError(err.diagnostics)


def types_convertible(program: Program, e1: Expr, e2: Expr, fuel: Optional[int] = None) -> Optional[bool]:
    return Checker(program, fuel=fuel).convertible(e1, e2)
