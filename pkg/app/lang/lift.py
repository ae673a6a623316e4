"""
Lifting of local comatches and matches to top-level declarations

Lifting runs interleaved with elaboration because an unannotated match takes
its motive from the expected type. This module holds the parts that do not
need typing: closure computation and the deterministic label pre-pass.
"""
import logging
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Set, Tuple

from app.lang.errors import DiagnosticError, LangError
from app.lang.syntax import (
    Arrow,
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
    Lambda,
    LetDecl,
    Match,
    Motive,
    Param,
    Program,
    Telescope,
    TypCtor,
    free_vars,
    is_core,
)
from app.models.diagnostic import Diagnostic, DiagnosticCode, make_diagnostic

logger = logging.getLogger(__name__)

ClosureSet = Telescope


class ClosureError(LangError):
    """A closure cannot be ordered so that every type precedes its uses"""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"cannot close over '{name}': its type depends on a later variable")


def closure_of(names: Iterable[str], ctx: Telescope) -> ClosureSet:
    """Dependency-closed, context-ordered subset of `ctx` covering `names`."""
    index = {p.name: i for i, p in enumerate(ctx)}
    wanted: Set[str] = set()
    stack = [n for n in names if n in index]
    while stack:
        name = stack.pop()
        if name in wanted:
            continue
        wanted.add(name)
        stack.extend(m for m in free_vars(ctx[index[name]].type) if m in index)
    closure = tuple(p for i, p in enumerate(ctx) if p.name in wanted and index[p.name] == i)
    seen: Set[str] = set()
    for param in closure:
        if not (free_vars(param.type) & wanted) <= seen:
            raise ClosureError(param.name)
        seen.add(param.name)
    return closure


def free_closure(e: Expr, ctx: Telescope, also: Iterable[Expr] = ()) -> ClosureSet:
    """The variables of `ctx` that `e` and `also` need, transitively through their types."""
    names = set(free_vars(e))
    for other in also:
        names |= free_vars(other)
    return closure_of(names, ctx)


# Traversal

def decl_expressions(decl: Decl) -> Iterator[Expr]:
    """Every expression of a declaration, in source order."""
    match decl:
        case DataDecl(_, params, ctors):
            yield from (p.type for p in params)
            for ctor in ctors:
                yield from (p.type for p in ctor.params)
                yield from ctor.args
        case CodataDecl(_, params, dtors):
            yield from (p.type for p in params)
            for dtor in dtors:
                yield from dtor.self_args
                yield from (p.type for p in dtor.params)
                yield dtor.ret
        case DefDecl(_, _, self_type, params, ret, cases):
            yield from self_type.args
            yield from (p.type for p in params)
            yield ret
            yield from (c.body for c in cases if c.body is not None)
        case CodefDecl(_, params, result, cocases):
            yield from (p.type for p in params)
            yield from result.args
            yield from (c.body for c in cocases if c.body is not None)
        case LetDecl(_, params, ty, body):
            yield from (p.type for p in params)
            yield ty
            yield body


def decl_is_core(decl: Decl) -> bool:
    return all(is_core(e) for e in decl_expressions(decl))


def program_is_core(program: Program) -> bool:
    return all(decl_is_core(d) for d in program.decls)


def _local_labels(e: Expr) -> Iterator[Tuple[str, Expr]]:
    match e:
        case TypCtor(_, args) | Call(_, args):
            for arg in args:
                yield from _local_labels(arg)
        case DotCall(scrutinee, _, args):
            yield from _local_labels(scrutinee)
            for arg in args:
                yield from _local_labels(arg)
        case Comatch(label, cocases):
            if label is not None:
                yield label, e
            for c in cocases:
                if c.body is not None:
                    yield from _local_labels(c.body)
        case Match(label, scrutinee, motive, cases):
            yield from _local_labels(scrutinee)
            if label is not None:
                yield label, e
            if motive is not None:
                yield from _local_labels(motive.type)
            for c in cases:
                if c.body is not None:
                    yield from _local_labels(c.body)


class LabelAssigner:
    """
    Gives every unlabeled local (co)match a label.

    Labels are `<decl>_comatch_<k>` and `<decl>_match_<k>`, with `k` counted
    per declaration and kind in source order and bumped past names that are
    already taken.
    """

    def __init__(self, taken: Iterable[str]):
        self.taken: Set[str] = set(taken)
        self.owner = ""
        self.counters: Dict[str, int] = {}

    def next_label(self, kind: str) -> str:
        k = self.counters.get(kind, 0)
        while True:
            k += 1
            label = f"{self.owner}_{kind}_{k}"
            if label not in self.taken:
                break
        self.counters[kind] = k
        self.taken.add(label)
        return label

    def expr(self, e: Expr) -> Expr:
        match e:
            case TypCtor(name, args):
                return TypCtor(name, self.args(args), e.span)
            case Call(name, args):
                return Call(name, self.args(args), e.span)
            case DotCall(scrutinee, name, args):
                scrutinee = self.expr(scrutinee)
                return DotCall(scrutinee, name, self.args(args), e.span)
            case Comatch(label, cocases):
                label = label or self.next_label("comatch")
                return Comatch(label, self.cases(cocases), e.span)
            case Match(label, scrutinee, motive, cases):
                scrutinee = self.expr(scrutinee)
                label = label or self.next_label("match")
                if motive is not None:
                    motive = Motive(motive.binder, self.expr(motive.type))
                return Match(label, scrutinee, motive, self.cases(cases), e.span)
            case Arrow() | Lambda():
                raise TypeError(f"unresolved syntax: {e!r}")
        return e

    def args(self, args: Tuple[Expr, ...]) -> Tuple[Expr, ...]:
        return tuple(self.expr(a) for a in args)

    def cases(self, cases: Tuple[Case, ...]) -> Tuple[Case, ...]:
        return tuple(
            c if c.body is None else Case(c.name, c.params, self.expr(c.body), c.span) for c in cases
        )

    def telescope(self, params: Telescope) -> Telescope:
        return tuple(Param(p.name, self.expr(p.type)) for p in params)

    def decl(self, decl: Decl) -> Decl:
        if decl_is_core(decl):
            return decl
        self.owner = decl.name
        self.counters = {}
        match decl:
            case DataDecl(name, params, ctors):
                params = self.telescope(params)
                ctors = tuple(
                    Ctor(c.name, self.telescope(c.params), self.args(c.args), c.span) for c in ctors
                )
                return DataDecl(name, params, ctors, decl.span)
            case CodataDecl(name, params, dtors):
                params = self.telescope(params)
                out = []
                for d in dtors:
                    self_args = self.args(d.self_args)
                    tel = self.telescope(d.params)
                    out.append(Dtor(d.name, d.self_name, self_args, tel, self.expr(d.ret), d.span))
                return CodataDecl(name, params, tuple(out), decl.span)
            case DefDecl(name, self_name, self_type, params, ret, cases):
                self_type = TypCtor(self_type.name, self.args(self_type.args), self_type.span)
                tel = self.telescope(params)
                ret = self.expr(ret)
                return DefDecl(name, self_name, self_type, tel, ret, self.cases(cases), decl.span)
            case CodefDecl(name, params, result, cocases):
                tel = self.telescope(params)
                result = TypCtor(result.name, self.args(result.args), result.span)
                return CodefDecl(name, tel, result, self.cases(cocases), decl.span)
            case LetDecl(name, params, ty, body):
                tel = self.telescope(params)
                ty = self.expr(ty)
                return LetDecl(name, tel, ty, self.expr(body), decl.span)
        raise TypeError(f"not a declaration: {decl!r}")


def _global_names(program: Program) -> FrozenSet[str]:
    names: Set[str] = set()
    for decl in program.all_decls():
        names.add(decl.name)
        if isinstance(decl, DataDecl):
            names.update(c.name for c in decl.ctors)
        elif isinstance(decl, CodataDecl):
            names.update(d.name for d in decl.dtors)
    return frozenset(names)


def assign_labels(program: Program, file: Optional[str] = None) -> Tuple[Program, List[Diagnostic]]:
    """
    Label every local (co)match and reject clashing user labels.

    Args:
        program: A resolved program
        file: Path used in diagnostics

    Returns:
        The labelled program and any duplicate-label diagnostics
    """
    globals_ = _global_names(program)
    diagnostics: List[Diagnostic] = []
    seen: Set[str] = set()
    for decl in program.decls:
        for e in decl_expressions(decl):
            for label, node in _local_labels(e):
                if label in seen or label in globals_:
                    diagnostics.append(make_diagnostic(
                        DiagnosticCode.DUPLICATE_LABEL,
                        f"label '{label}' is already in use",
                        node.span,
                        file,
                    ))
                seen.add(label)
    if diagnostics:
        return program, diagnostics
    assigner = LabelAssigner(globals_ | seen)
    return program.with_decls(assigner.decl(d) for d in program.decls), []


def lift_program(program: Program, file: Optional[str] = None, fuel: Optional[int] = None) -> Program:
    """
    Replace every local comatch and match by a call to a generated declaration.

    Generated declarations follow the declaration they were lifted from,
    innermost first. A core program is returned unchanged.

    Raises:
        DiagnosticError: if a local (co)match cannot be elaborated
    """
    from app.lang.checker import elaborate_program

    if program_is_core(program):
        return program
    lifted, diagnostics = elaborate_program(program, file, fuel)
    if diagnostics:
        raise DiagnosticError(diagnostics)
    logger.info(f"Lifted {len(lifted.decls) - len(program.decls)} local (co)matches")
    return lifted
