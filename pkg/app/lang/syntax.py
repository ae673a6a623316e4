"""
Abstract syntax of programs, declarations and expressions

Core expressions are Var, Universe, TypCtor, Call and DotCall. Comatch and
Match are surface forms that the lift pass turns into top-level
declarations. Arrow and Lambda only exist between parsing and name
resolution.
"""
import re
from dataclasses import dataclass, field, replace
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple, Union

from app.lang.errors import ArityError

Span = Optional[Tuple[int, int]]


def _span() -> Span:
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Var:
    name: str
    span: Span = _span()


@dataclass(frozen=True)
class Universe:
    span: Span = _span()


@dataclass(frozen=True)
class TypCtor:
    name: str
    args: Tuple["Expr", ...] = ()
    span: Span = _span()


@dataclass(frozen=True)
class Call:
    """Producer call: constructor, codefinition or let constant."""
    name: str
    args: Tuple["Expr", ...] = ()
    span: Span = _span()


@dataclass(frozen=True)
class DotCall:
    """Consumer call `scrutinee.name(args)`: destructor or definition."""
    scrutinee: "Expr"
    name: str
    args: Tuple["Expr", ...] = ()
    span: Span = _span()


@dataclass(frozen=True)
class Case:
    """A clause of a def or local match. A body of None marks it absurd."""
    name: str
    params: Tuple[str, ...]
    body: Optional["Expr"]
    span: Span = _span()

    @property
    def is_absurd(self) -> bool:
        return self.body is None


# Cocases have the same shape as cases; the name is the destructor.
Cocase = Case


@dataclass(frozen=True)
class Motive:
    binder: str
    type: "Expr"


@dataclass(frozen=True)
class Comatch:
    label: Optional[str]
    cocases: Tuple[Case, ...]
    span: Span = _span()


@dataclass(frozen=True)
class Match:
    label: Optional[str]
    scrutinee: "Expr"
    motive: Optional[Motive]
    cases: Tuple[Case, ...]
    span: Span = _span()


@dataclass(frozen=True)
class Arrow:
    dom: "Expr"
    cod: "Expr"
    span: Span = _span()


@dataclass(frozen=True)
class Lambda:
    binder: str
    body: "Expr"
    span: Span = _span()


Expr = Union[Var, Universe, TypCtor, Call, DotCall, Comatch, Match, Arrow, Lambda]


@dataclass(frozen=True)
class Param:
    name: str
    type: Expr


Telescope = Tuple[Param, ...]


@dataclass(frozen=True)
class Ctor:
    name: str
    params: Telescope
    args: Tuple[Expr, ...]
    span: Span = _span()


@dataclass(frozen=True)
class DataDecl:
    name: str
    params: Telescope
    ctors: Tuple[Ctor, ...]
    span: Span = _span()


@dataclass(frozen=True)
class Dtor:
    name: str
    self_name: str
    self_args: Tuple[Expr, ...]
    params: Telescope
    ret: Expr
    span: Span = _span()


@dataclass(frozen=True)
class CodataDecl:
    name: str
    params: Telescope
    dtors: Tuple[Dtor, ...]
    span: Span = _span()


@dataclass(frozen=True)
class DefDecl:
    name: str
    self_name: str
    self_type: TypCtor
    params: Telescope
    ret: Expr
    cases: Tuple[Case, ...]
    span: Span = _span()


@dataclass(frozen=True)
class CodefDecl:
    name: str
    params: Telescope
    result: TypCtor
    cocases: Tuple[Case, ...]
    span: Span = _span()


@dataclass(frozen=True)
class LetDecl:
    name: str
    params: Telescope
    type: Expr
    body: Expr
    span: Span = _span()


Decl = Union[DataDecl, CodataDecl, DefDecl, CodefDecl, LetDecl]


@dataclass(frozen=True)
class Program:
    """
    An ordered list of declarations.

    Prelude declarations are in scope for every declaration but are never
    printed or transformed.
    """
    decls: Tuple[Decl, ...] = ()
    prelude: Tuple[Decl, ...] = ()

    def all_decls(self) -> Tuple[Decl, ...]:
        return self.prelude + self.decls

    def find(self, name: str) -> Optional[Decl]:
        for decl in self.all_decls():
            if decl.name == name:
                return decl
        return None

    def with_decls(self, decls: Iterable[Decl]) -> "Program":
        return replace(self, decls=tuple(decls))


# Names

_AUTO = re.compile(r"^_\d*$")
_SUFFIX = re.compile(r"\d+$")


def is_wildcard(name: str) -> bool:
    """True for `_` and the auto-names the parser generates for it."""
    return bool(_AUTO.match(name))


def fresh_name(base: str, avoid: Iterable[str]) -> str:
    """Return `base` or a numbered variant of it that is not in `avoid`."""
    taken = set(avoid)
    if base not in taken:
        return base
    stem = _SUFFIX.sub("", base) or base
    i = 1
    while f"{stem}{i}" in taken:
        i += 1
    return f"{stem}{i}"


# Free variables

def free_vars(e: Expr) -> FrozenSet[str]:
    match e:
        case Var(name):
            return frozenset((name,))
        case Universe():
            return frozenset()
        case TypCtor(_, args) | Call(_, args):
            return _free_args(args)
        case DotCall(scrutinee, _, args):
            return free_vars(scrutinee) | _free_args(args)
        case Comatch(_, cocases):
            return _free_cases(cocases)
        case Match(_, scrutinee, motive, cases):
            out = free_vars(scrutinee) | _free_cases(cases)
            if motive is not None:
                out |= free_vars(motive.type) - {motive.binder}
            return out
        case Arrow(dom, cod):
            return free_vars(dom) | free_vars(cod)
        case Lambda(binder, body):
            return free_vars(body) - {binder}
    raise TypeError(f"not an expression: {e!r}")


def _free_args(args: Iterable[Expr]) -> FrozenSet[str]:
    out: FrozenSet[str] = frozenset()
    for arg in args:
        out |= free_vars(arg)
    return out


def _free_cases(cases: Iterable[Case]) -> FrozenSet[str]:
    out: FrozenSet[str] = frozenset()
    for case in cases:
        if case.body is not None:
            out |= free_vars(case.body) - set(case.params)
    return out


def is_core(e: Expr) -> bool:
    """True if no surface form occurs in `e`."""
    match e:
        case Var() | Universe():
            return True
        case TypCtor(_, args) | Call(_, args):
            return all(is_core(a) for a in args)
        case DotCall(scrutinee, _, args):
            return is_core(scrutinee) and all(is_core(a) for a in args)
    return False


# Substitution

def subst(e: Expr, mapping: Dict[str, Expr]) -> Expr:
    """Simultaneous capture-avoiding substitution of variables by terms."""
    if not mapping:
        return e
    match e:
        case Var(name):
            return mapping.get(name, e)
        case Universe():
            return e
        case TypCtor(name, args):
            return TypCtor(name, _subst_args(args, mapping), e.span)
        case Call(name, args):
            return Call(name, _subst_args(args, mapping), e.span)
        case DotCall(scrutinee, name, args):
            return DotCall(subst(scrutinee, mapping), name, _subst_args(args, mapping), e.span)
        case Comatch(label, cocases):
            return Comatch(label, tuple(subst_case(c, mapping) for c in cocases), e.span)
        case Match(label, scrutinee, motive, cases):
            if motive is not None:
                (binder,), body = _subst_binders((motive.binder,), motive.type, mapping)
                motive = Motive(binder, body)
            return Match(
                label,
                subst(scrutinee, mapping),
                motive,
                tuple(subst_case(c, mapping) for c in cases),
                e.span,
            )
        case Arrow(dom, cod):
            return Arrow(subst(dom, mapping), subst(cod, mapping), e.span)
        case Lambda(binder, body):
            (binder,), body = _subst_binders((binder,), body, mapping)
            return Lambda(binder, body, e.span)
    raise TypeError(f"not an expression: {e!r}")


def _subst_args(args: Tuple[Expr, ...], mapping: Dict[str, Expr]) -> Tuple[Expr, ...]:
    return tuple(subst(a, mapping) for a in args)


def subst_case(case: Case, mapping: Dict[str, Expr]) -> Case:
    if case.body is None:
        return case
    params, body = _subst_binders(case.params, case.body, mapping)
    return Case(case.name, params, body, case.span)


def _subst_binders(
    binders: Tuple[str, ...], body: Expr, mapping: Dict[str, Expr]
) -> Tuple[Tuple[str, ...], Expr]:
    """Push `mapping` under `binders`, renaming binders that would capture."""
    inner = {k: v for k, v in mapping.items() if k not in binders}
    if not inner:
        return binders, body
    body_fv = free_vars(body)
    inner = {k: v for k, v in inner.items() if k in body_fv}
    if not inner:
        return binders, body
    incoming: Set[str] = set()
    for value in inner.values():
        incoming |= free_vars(value)
    clash = [b for b in binders if b in incoming]
    if clash:
        avoid = incoming | body_fv | set(binders) | set(inner)
        renamed: List[str] = []
        for b in binders:
            if b in incoming:
                new = fresh_name(b, avoid)
                avoid.add(new)
                inner[b] = Var(new)
                renamed.append(new)
            else:
                renamed.append(b)
        binders = tuple(renamed)
    return binders, subst(body, inner)


def substitute(e: Expr, args: Sequence[Expr], params: Sequence[Union[Param, str]]) -> Expr:
    """Replace the binders of `params` positionally by `args` in `e`."""
    if len(args) != len(params):
        raise ArityError(f"expected {len(params)} arguments, got {len(args)}")
    names = [p.name if isinstance(p, Param) else p for p in params]
    return subst(e, dict(zip(names, args)))


def identity_substitution(params: Sequence[Union[Param, str]]) -> Tuple[Expr, ...]:
    return tuple(Var(p.name if isinstance(p, Param) else p) for p in params)


def rename(e: Expr, renaming: Dict[str, str]) -> Expr:
    return subst(e, {k: Var(v) for k, v in renaming.items() if k != v})


# Alpha-equivalence

class _Canon:
    """Renames every binder to `#n`, numbering them in traversal order."""

    def __init__(self) -> None:
        self.counter = 0

    def bind(self, names: Iterable[str], env: Dict[str, str]) -> Tuple[Tuple[str, ...], Dict[str, str]]:
        env = dict(env)
        out = []
        for name in names:
            canon = f"#{self.counter}"
            self.counter += 1
            env[name] = canon
            out.append(canon)
        return tuple(out), env

    def expr(self, e: Expr, env: Dict[str, str]) -> Expr:
        match e:
            case Var(name):
                return Var(env.get(name, name))
            case Universe():
                return Universe()
            case TypCtor(name, args):
                return TypCtor(name, self.args(args, env))
            case Call(name, args):
                return Call(name, self.args(args, env))
            case DotCall(scrutinee, name, args):
                return DotCall(self.expr(scrutinee, env), name, self.args(args, env))
            case Comatch(label, cocases):
                return Comatch(label, tuple(self.case(c, env) for c in cocases))
            case Match(label, scrutinee, motive, cases):
                scrutinee = self.expr(scrutinee, env)
                if motive is not None:
                    (binder,), inner = self.bind((motive.binder,), env)
                    motive = Motive(binder, self.expr(motive.type, inner))
                return Match(label, scrutinee, motive, tuple(self.case(c, env) for c in cases))
            case Arrow(dom, cod):
                return Arrow(self.expr(dom, env), self.expr(cod, env))
            case Lambda(binder, body):
                (binder,), inner = self.bind((binder,), env)
                return Lambda(binder, self.expr(body, inner))
        raise TypeError(f"not an expression: {e!r}")

    def args(self, args: Tuple[Expr, ...], env: Dict[str, str]) -> Tuple[Expr, ...]:
        return tuple(self.expr(a, env) for a in args)

    def case(self, case: Case, env: Dict[str, str]) -> Case:
        params, inner = self.bind(case.params, env)
        body = None if case.body is None else self.expr(case.body, inner)
        return Case(case.name, params, body)

    def telescope(self, params: Telescope, env: Dict[str, str]) -> Tuple[Telescope, Dict[str, str]]:
        out = []
        for param in params:
            ty = self.expr(param.type, env)
            (name,), env = self.bind((param.name,), env)
            out.append(Param(name, ty))
        return tuple(out), env

    def decl(self, decl: Decl, sort_clauses: bool) -> Decl:
        order = (lambda xs: tuple(sorted(xs, key=lambda x: x.name))) if sort_clauses else tuple
        match decl:
            case DataDecl(name, params, ctors):
                params, _ = self.telescope(params, {})
                out = []
                for ctor in order(ctors):
                    tel, env = self.telescope(ctor.params, {})
                    out.append(Ctor(ctor.name, tel, self.args(ctor.args, env)))
                return DataDecl(name, params, tuple(out))
            case CodataDecl(name, params, dtors):
                params, _ = self.telescope(params, {})
                out = []
                for dtor in order(dtors):
                    tel, env = self.telescope(dtor.params, {})
                    self_args = self.args(dtor.self_args, env)
                    (self_name,), env = self.bind((dtor.self_name,), env)
                    out.append(Dtor(dtor.name, self_name, self_args, tel, self.expr(dtor.ret, env)))
                return CodataDecl(name, params, tuple(out))
            case DefDecl(name, self_name, self_type, params, ret, cases):
                tel, env = self.telescope(params, {})
                self_type = self.expr(self_type, env)
                (self_name,), ret_env = self.bind((self_name,), env)
                ret = self.expr(ret, ret_env)
                cases = tuple(self.case(c, env) for c in order(cases))
                return DefDecl(name, self_name, self_type, tel, ret, cases)
            case CodefDecl(name, params, result, cocases):
                tel, env = self.telescope(params, {})
                result = self.expr(result, env)
                cocases = tuple(self.case(c, env) for c in order(cocases))
                return CodefDecl(name, tel, result, cocases)
            case LetDecl(name, params, ty, body):
                tel, env = self.telescope(params, {})
                return LetDecl(name, tel, self.expr(ty, env), self.expr(body, env))
        raise TypeError(f"not a declaration: {decl!r}")


def canonical(e: Expr) -> Expr:
    return _Canon().expr(e, {})


def alpha_equal(e1: Expr, e2: Expr) -> bool:
    """Structural equality up to renaming of bound variables."""
    if is_core(e1) and is_core(e2):
        return e1 == e2
    return canonical(e1) == canonical(e2)


def decl_alpha_equal(d1: Decl, d2: Decl, sort_clauses: bool = False) -> bool:
    return _Canon().decl(d1, sort_clauses) == _Canon().decl(d2, sort_clauses)


def program_equivalent(p1: Program, p2: Program) -> bool:
    """Alpha-equality ignoring declaration order and clause order."""
    if len(p1.decls) != len(p2.decls):
        return False
    left = sorted(p1.decls, key=lambda d: d.name)
    right = sorted(p2.decls, key=lambda d: d.name)
    return all(decl_alpha_equal(a, b, sort_clauses=True) for a, b in zip(left, right))
