"""
Pretty-printer producing re-parseable dualdata source
"""
from typing import Iterable, List, Sequence

from app.lang.syntax import (
    Arrow,
    Call,
    Case,
    CodataDecl,
    CodefDecl,
    Comatch,
    DataDecl,
    Decl,
    DefDecl,
    DotCall,
    Expr,
    Lambda,
    LetDecl,
    Match,
    Program,
    Telescope,
    TypCtor,
    Universe,
    Var,
    free_vars,
    is_wildcard,
)

WIDTH = 80
INDENT = "    "


def print_expr(e: Expr) -> str:
    match e:
        case Var(name):
            return name
        case Universe():
            return "Type"
        case TypCtor(name, args) | Call(name, args):
            return name + _args(args)
        case DotCall(scrutinee, name, args):
            return f"{_scrutinee(scrutinee)}.{name}{_args(args)}"
        case Comatch(label, cocases):
            head = f"comatch {label}" if label else "comatch"
            return f"{head} {_inline_block(_case(c) for c in cocases)}"
        case Match(label, scrutinee, motive, cases):
            head = f"{_scrutinee(scrutinee)}.match"
            if label:
                head += f" {label}"
            if motive is not None:
                head += f" as {motive.binder} => {print_expr(motive.type)}"
            return f"{head} {_inline_block(_case(c) for c in cases)}"
        case Arrow(dom, cod):
            left = print_expr(dom)
            if isinstance(dom, (Arrow, Lambda)):
                left = f"({left})"
            return f"{left} -> {print_expr(cod)}"
        case Lambda(binder, body):
            return f"\\{binder}. {print_expr(body)}"
    raise TypeError(f"not an expression: {e!r}")


def _scrutinee(e: Expr) -> str:
    text = print_expr(e)
    if isinstance(e, (Arrow, Lambda)):
        return f"({text})"
    return text


def _args(args: Sequence[Expr]) -> str:
    if not args:
        return ""
    return "(" + ", ".join(print_expr(a) for a in args) + ")"


def _inline_block(items: Iterable[str]) -> str:
    items = list(items)
    if not items:
        return "{}"
    return "{ " + ", ".join(items) + " }"


def _binder(name: str, body_fv) -> str:
    return "_" if is_wildcard(name) and name not in body_fv else name


def _case(case: Case) -> str:
    body_fv = free_vars(case.body) if case.body is not None else frozenset()
    head = case.name
    if case.params:
        head += "(" + ", ".join(_binder(p, body_fv) for p in case.params) + ")"
    if case.body is None:
        return f"{head} absurd"
    return f"{head} => {print_expr(case.body)}"


def print_telescope(params: Telescope) -> str:
    """Print `(a b: Type, x: a)`, grouping binders that share a type."""
    if not params:
        return ""
    groups: List[List] = []
    for param in params:
        if groups:
            names, ty = groups[-1]
            if ty == param.type and not (set(names) & free_vars(ty)):
                names.append(param.name)
                continue
        groups.append([[param.name], param.type])
    return "(" + ", ".join(f"{' '.join(names)}: {print_expr(ty)}" for names, ty in groups) + ")"


def _block(head: str, items: List[str]) -> str:
    one_line = f"{head} {_inline_block(items)}"
    if len(one_line) <= WIDTH and "\n" not in one_line:
        return one_line
    body = "".join(f"{INDENT}{item},\n" for item in items)
    return f"{head} {{\n{body}}}"


def _self_prefix(self_name: str, type_name: str, args: Sequence[Expr], has_params: bool) -> str:
    if not is_wildcard(self_name):
        return f"({self_name}: {type_name}{_args(args)})."
    if args or has_params:
        return f"{type_name}{_args(args)}."
    return ""


def print_decl(decl: Decl) -> str:
    match decl:
        case DataDecl(name, params, ctors):
            items = []
            for ctor in ctors:
                item = ctor.name + print_telescope(ctor.params)
                if ctor.args or params:
                    item += f": {name}{_args(ctor.args)}"
                items.append(item)
            return _block(f"data {name}{print_telescope(params)}", items)
        case CodataDecl(name, params, dtors):
            items = []
            for dtor in dtors:
                prefix = _self_prefix(dtor.self_name, name, dtor.self_args, bool(params))
                items.append(f"{prefix}{dtor.name}{print_telescope(dtor.params)}: {print_expr(dtor.ret)}")
            return _block(f"codata {name}{print_telescope(params)}", items)
        case DefDecl(name, self_name, self_type, params, ret, cases):
            prefix = _self_prefix(self_name, self_type.name, self_type.args, True)
            head = f"def {prefix}{name}{print_telescope(params)}: {print_expr(ret)}"
            return _block(head, [_case(c) for c in cases])
        case CodefDecl(name, params, result, cocases):
            head = f"codef {name}{print_telescope(params)}: {print_expr(result)}"
            return _block(head, [_case(c) for c in cocases])
        case LetDecl(name, params, ty, body):
            return f"let {name}{print_telescope(params)}: {print_expr(ty)} := {print_expr(body)};"
    raise TypeError(f"not a declaration: {decl!r}")


def print_program(program: Program) -> str:
    """Print the non-prelude declarations of a program."""
    if not program.decls:
        return ""
    return "\n\n".join(print_decl(d) for d in program.decls) + "\n"
