"""
Parser and name resolution for dualdata source text

Parsing produces raw syntax in which every bare identifier is a Var, every
applied identifier is a Call, and `->` / `\\x.` are kept as Arrow and
Lambda. The resolve pass then classifies identifiers against the three
global namespaces and desugars functions through the in-scope `Fun`.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from app.lang.errors import DiagnosticError
from app.lang.lexer import TOP_LEVEL, Token, tokenize
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
    Universe,
    Var,
    free_vars,
)
from app.models.diagnostic import Diagnostic, DiagnosticCode, make_diagnostic

logger = logging.getLogger(__name__)

FUNCTION_TYPE = "Fun"
FUNCTION_DTOR = "ap"


class _ParseError(Exception):
    def __init__(self, message: str, span: Tuple[int, int]):
        super().__init__(message)
        self.span = span


class Parser:
    """Recursive descent parser over a token list."""

    def __init__(self, tokens: List[Token], file: Optional[str] = None):
        self.tokens = tokens
        self.file = file
        self.pos = 0
        self.diagnostics: List[Diagnostic] = []
        self._auto = 0
        self._spelled = {t.text for t in tokens if t.kind == "ident" and t.text.startswith("_")}
        self._owner = ""

    # Token helpers

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.tok
        if tok.kind != "eof":
            self.pos += 1
        return tok

    @property
    def prev_end(self) -> int:
        return self.tokens[self.pos - 1].end if self.pos else 0

    def at(self, text: str) -> bool:
        return self.tok.is_(text)

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.advance()
            return True
        return False

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected '{text}'")
        return self.advance()

    def fail(self, message: str) -> None:
        found = self.tok.text or "end of input"
        raise _ParseError(f"{message}, found '{found}'", self.tok.span)

    def ident(self) -> str:
        if self.tok.kind != "ident":
            self.fail("expected an identifier")
        return self.advance().text

    def auto_name(self) -> str:
        # Never reuse an underscore name spelled out in the source.
        self._auto += 1
        while f"_{self._auto}" in self._spelled:
            self._auto += 1
        return f"_{self._auto}"

    def binder(self) -> str:
        if self.tok.kind == "wildcard":
            self.advance()
            return self.auto_name()
        return self.ident()

    # Declarations

    def parse_program(self) -> List[Decl]:
        decls: List[Decl] = []
        while self.tok.kind != "eof":
            try:
                decls.append(self.declaration())
            except _ParseError as e:
                self.diagnostics.append(
                    make_diagnostic(DiagnosticCode.SYNTAX_ERROR, str(e), e.span, self.file)
                )
                self.recover()
        return decls

    def recover(self) -> None:
        self.advance()
        while self.tok.kind != "eof" and not (self.tok.kind == "keyword" and self.tok.text in TOP_LEVEL):
            self.advance()

    def declaration(self) -> Decl:
        tok = self.tok
        if tok.is_("data"):
            return self.data_decl()
        if tok.is_("codata"):
            return self.codata_decl()
        if tok.is_("def"):
            return self.def_decl()
        if tok.is_("codef"):
            return self.codef_decl()
        if tok.is_("let"):
            return self.let_decl()
        self.fail("expected a declaration")
        raise AssertionError("unreachable")

    def data_decl(self) -> DataDecl:
        start = self.advance().start
        name = self.ident()
        params = self.opt_params()
        self._owner = name
        ctors = self.braced(self.ctor)
        return DataDecl(name, params, tuple(ctors), (start, self.prev_end))

    def ctor(self) -> Ctor:
        start = self.tok.start
        name = self.ident()
        params = self.opt_params()
        args: Tuple[Expr, ...] = ()
        if self.accept(":"):
            args = self.result_args()
        return Ctor(name, params, args, (start, self.prev_end))

    def result_args(self) -> Tuple[Expr, ...]:
        start = self.tok.start
        result = self.expr()
        span = (start, self.prev_end)
        match result:
            case Var(name) | Call(name):
                self.check_owner(name, span)
                return result.args if isinstance(result, Call) else ()
        raise _ParseError("expected a type constructor application", span)

    def check_owner(self, name: str, span: Tuple[int, int]) -> None:
        if name != self._owner:
            self.diagnostics.append(make_diagnostic(
                DiagnosticCode.BAD_RESULT_TYPE,
                f"expected type '{self._owner}', found '{name}'",
                span,
                self.file,
            ))

    def codata_decl(self) -> CodataDecl:
        start = self.advance().start
        name = self.ident()
        params = self.opt_params()
        self._owner = name
        dtors = self.braced(self.dtor)
        return CodataDecl(name, params, tuple(dtors), (start, self.prev_end))

    def dtor(self) -> Dtor:
        start = self.tok.start
        self_name, self_type = self.self_prefix(dtor=True)
        if self_type.name:
            self.check_owner(self_type.name, self_type.span)
        name = self.ident()
        params = self.opt_params()
        self.expect(":")
        ret = self.expr()
        return Dtor(name, self_name, self_type.args, params, ret, (start, self.prev_end))

    def self_prefix(self, dtor: bool) -> Tuple[str, TypCtor]:
        """Parse `(z: T(args)).`, `T(args).` or, for destructors, nothing."""
        if self.at("("):
            self.advance()
            self_name = self.binder()
            self.expect(":")
            self_type = self.self_type()
            self.expect(")")
            self.expect(".")
            return self_name, self_type
        if self.tok.kind == "ident" and (not dtor or self._prefix_follows()):
            self_type = self.self_type()
            self.expect(".")
            return self.auto_name(), self_type
        if not dtor:
            self.fail("expected a self type")
        return self.auto_name(), TypCtor("")

    def _prefix_follows(self) -> bool:
        # IDENT '.' or IDENT '(' ... ')' '.'
        nxt = self.peek()
        if nxt.is_("."):
            return True
        if not nxt.is_("("):
            return False
        depth = 0
        i = self.pos + 1
        while i < len(self.tokens):
            t = self.tokens[i]
            if t.is_("("):
                depth += 1
            elif t.is_(")"):
                depth -= 1
                if depth == 0:
                    return self.tokens[i + 1].is_(".") if i + 1 < len(self.tokens) else False
            elif t.kind == "eof":
                return False
            i += 1
        return False

    def self_type(self) -> TypCtor:
        start = self.tok.start
        name = self.ident()
        args = self.opt_args()
        return TypCtor(name, args, (start, self.prev_end))

    def def_decl(self) -> DefDecl:
        start = self.advance().start
        self_name, self_type = self.self_prefix(dtor=False)
        name = self.ident()
        params = self.opt_params()
        self.expect(":")
        ret = self.expr()
        cases = self.braced(self.case)
        return DefDecl(name, self_name, self_type, params, ret, tuple(cases), (start, self.prev_end))

    def codef_decl(self) -> CodefDecl:
        start = self.advance().start
        name = self.ident()
        params = self.opt_params()
        self.expect(":")
        rstart = self.tok.start
        type_name = self.ident()
        args = self.opt_args()
        result = TypCtor(type_name, args, (rstart, self.prev_end))
        cocases = self.braced(self.case)
        return CodefDecl(name, params, result, tuple(cocases), (start, self.prev_end))

    def let_decl(self) -> LetDecl:
        start = self.advance().start
        name = self.ident()
        params = self.opt_params()
        self.expect(":")
        ty = self.expr()
        self.expect(":=")
        body = self.expr()
        self.expect(";")
        return LetDecl(name, params, ty, body, (start, self.prev_end))

    # Lists

    def braced(self, item) -> list:
        self.expect("{")
        items = []
        while not self.at("}"):
            if self.tok.kind == "eof":
                self.fail("expected '}'")
            items.append(item())
            if not self.accept(","):
                continue
        self.expect("}")
        return items

    def opt_params(self) -> Telescope:
        if not self.at("("):
            return ()
        self.advance()
        params: List[Param] = []
        while not self.at(")"):
            names = [self.binder()]
            while not self.at(":"):
                names.append(self.binder())
            self.expect(":")
            ty = self.expr()
            params.extend(Param(n, ty) for n in names)
            if not self.accept(","):
                break
        self.expect(")")
        return tuple(params)

    def opt_args(self) -> Tuple[Expr, ...]:
        if not self.at("("):
            return ()
        self.advance()
        args: List[Expr] = []
        while not self.at(")"):
            args.append(self.expr())
            if not self.accept(","):
                break
        self.expect(")")
        return tuple(args)

    def case(self) -> Case:
        start = self.tok.start
        name = self.ident()
        params: List[str] = []
        if self.accept("("):
            while not self.at(")"):
                params.append(self.binder())
                if not self.accept(","):
                    break
            self.expect(")")
        if self.accept("absurd"):
            return Case(name, tuple(params), None, (start, self.prev_end))
        self.expect("=>")
        body = self.expr()
        return Case(name, tuple(params), body, (start, self.prev_end))

    # Expressions

    def expr(self) -> Expr:
        start = self.tok.start
        if self.accept("\\"):
            binder = self.binder()
            self.expect(".")
            body = self.expr()
            return Lambda(binder, body, (start, self.prev_end))
        dom = self.postfix()
        if self.accept("->"):
            cod = self.expr()
            return Arrow(dom, cod, (start, self.prev_end))
        return dom

    def postfix(self) -> Expr:
        start = self.tok.start
        e = self.atom()
        while self.at("."):
            self.advance()
            if self.accept("match"):
                label = self.opt_label()
                motive = None
                if self.accept("as"):
                    binder = self.binder()
                    self.expect("=>")
                    motive = Motive(binder, self.expr())
                cases = self.braced(self.case)
                e = Match(label, e, motive, tuple(cases), (start, self.prev_end))
            else:
                name = self.ident()
                args = self.opt_args()
                e = DotCall(e, name, args, (start, self.prev_end))
        return e

    def opt_label(self) -> Optional[str]:
        if self.tok.kind == "ident":
            return self.advance().text
        return None

    def atom(self) -> Expr:
        tok = self.tok
        if tok.is_("Type"):
            self.advance()
            return Universe(tok.span)
        if tok.kind == "ident":
            self.advance()
            if self.at("("):
                args = self.opt_args()
                return Call(tok.text, args, (tok.start, self.prev_end))
            return Var(tok.text, tok.span)
        if tok.is_("("):
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        if tok.is_("comatch"):
            self.advance()
            label = self.opt_label()
            cocases = self.braced(self.case)
            return Comatch(label, tuple(cocases), (tok.start, self.prev_end))
        if tok.is_("\\"):
            return self.expr()
        self.fail("expected an expression")
        raise AssertionError("unreachable")


def _new_parser(text: str, file: Optional[str]) -> Tuple[Parser, List[Diagnostic]]:
    tokens, lex_diagnostics = tokenize(text, file)
    parser = Parser(tokens, file)
    return parser, lex_diagnostics


# Name resolution

@dataclass
class Namespaces:
    """The three global namespaces of a program."""
    types: Dict[str, Decl] = field(default_factory=dict)
    producers: Dict[str, str] = field(default_factory=dict)
    consumers: Dict[str, str] = field(default_factory=dict)
    fun_arity: Optional[int] = None
    fun_ap_arity: Optional[int] = None

    @classmethod
    def collect(cls, decls: Sequence[Decl], file: Optional[str] = None,
                diagnostics: Optional[List[Diagnostic]] = None) -> "Namespaces":
        ns = cls()
        sink = diagnostics if diagnostics is not None else []

        def add(table: Dict, name: str, value, span) -> None:
            if name in table:
                sink.append(make_diagnostic(
                    DiagnosticCode.DUPLICATE_NAME, f"'{name}' is declared more than once", span, file
                ))
            table[name] = value

        for decl in decls:
            match decl:
                case DataDecl(name, _, ctors):
                    add(ns.types, name, decl, decl.span)
                    for ctor in ctors:
                        add(ns.producers, ctor.name, "ctor", ctor.span)
                case CodataDecl(name, params, dtors):
                    add(ns.types, name, decl, decl.span)
                    for dtor in dtors:
                        add(ns.consumers, dtor.name, "dtor", dtor.span)
                    if name == FUNCTION_TYPE:
                        ns.fun_arity = len(params)
                        for dtor in dtors:
                            if dtor.name == FUNCTION_DTOR:
                                ns.fun_ap_arity = len(dtor.params)
                case DefDecl(name):
                    add(ns.consumers, name, "def", decl.span)
                case CodefDecl(name):
                    add(ns.producers, name, "codef", decl.span)
                case LetDecl(name):
                    add(ns.producers, name, "let", decl.span)
        return ns


class Resolver:
    """Classifies identifiers and removes function sugar."""

    def __init__(self, ns: Namespaces, file: Optional[str] = None):
        self.ns = ns
        self.file = file
        self.diagnostics: List[Diagnostic] = []

    def error(self, code: DiagnosticCode, message: str, span) -> None:
        self.diagnostics.append(make_diagnostic(code, message, span, self.file))

    def expr(self, e: Expr, scope: FrozenSet[str]) -> Expr:
        match e:
            case Var(name):
                if name in scope:
                    return e
                if name in self.ns.producers:
                    return Call(name, (), e.span)
                if name in self.ns.types:
                    return TypCtor(name, (), e.span)
                self.error(DiagnosticCode.UNBOUND_NAME, f"unbound name '{name}'", e.span)
                return e
            case Universe():
                return e
            case Call(name, args) | TypCtor(name, args):
                args = tuple(self.expr(a, scope) for a in args)
                if name in self.ns.producers:
                    return Call(name, args, e.span)
                if name in self.ns.types:
                    return TypCtor(name, args, e.span)
                self.error(DiagnosticCode.UNBOUND_NAME, f"unbound name '{name}'", e.span)
                return Call(name, args, e.span)
            case DotCall(scrutinee, name, args):
                if name not in self.ns.consumers:
                    self.error(DiagnosticCode.UNBOUND_NAME, f"unbound consumer '{name}'", e.span)
                return DotCall(
                    self.expr(scrutinee, scope), name, tuple(self.expr(a, scope) for a in args), e.span
                )
            case Comatch(label, cocases):
                return Comatch(label, tuple(self.case(c, scope) for c in cocases), e.span)
            case Match(label, scrutinee, motive, cases):
                if motive is not None:
                    motive = Motive(motive.binder, self.expr(motive.type, scope | {motive.binder}))
                return Match(
                    label,
                    self.expr(scrutinee, scope),
                    motive,
                    tuple(self.case(c, scope) for c in cases),
                    e.span,
                )
            case Arrow(dom, cod):
                if self.ns.fun_arity != 2:
                    self.error(
                        DiagnosticCode.MISSING_FUNCTION_TYPE,
                        f"'->' needs a codata type {FUNCTION_TYPE} with two parameters",
                        e.span,
                    )
                return TypCtor(FUNCTION_TYPE, (self.expr(dom, scope), self.expr(cod, scope)), e.span)
            case Lambda(binder, body):
                arity = self.ns.fun_ap_arity
                if not arity:
                    self.error(
                        DiagnosticCode.MISSING_FUNCTION_TYPE,
                        f"lambda needs a codata type {FUNCTION_TYPE} with destructor '{FUNCTION_DTOR}'",
                        e.span,
                    )
                    arity = 1
                # The lambda binds the last parameter of `ap`.
                taken = {binder} | free_vars(body)
                implicit = [f"_{k}" for k in range(1, arity + len(taken) + 1) if f"_{k}" not in taken]
                params = tuple(implicit[: arity - 1]) + (binder,)
                body = self.expr(body, scope | {binder})
                return Comatch(None, (Case(FUNCTION_DTOR, params, body, e.span),), e.span)
        raise TypeError(f"not an expression: {e!r}")

    def case(self, case: Case, scope: FrozenSet[str]) -> Case:
        if case.body is None:
            return case
        return Case(case.name, case.params, self.expr(case.body, scope | set(case.params)), case.span)

    def telescope(self, params: Telescope, scope: FrozenSet[str]) -> Tuple[Telescope, FrozenSet[str]]:
        out = []
        for param in params:
            out.append(Param(param.name, self.expr(param.type, scope)))
            scope = scope | {param.name}
        return tuple(out), scope

    def args(self, args: Tuple[Expr, ...], scope: FrozenSet[str]) -> Tuple[Expr, ...]:
        return tuple(self.expr(a, scope) for a in args)

    def decl(self, decl: Decl) -> Decl:
        empty: FrozenSet[str] = frozenset()
        match decl:
            case DataDecl(name, params, ctors):
                params, _ = self.telescope(params, empty)
                out = []
                for ctor in ctors:
                    tel, scope = self.telescope(ctor.params, empty)
                    out.append(Ctor(ctor.name, tel, self.args(ctor.args, scope), ctor.span))
                return DataDecl(name, params, tuple(out), decl.span)
            case CodataDecl(name, params, dtors):
                params, _ = self.telescope(params, empty)
                out = []
                for dtor in dtors:
                    tel, scope = self.telescope(dtor.params, empty)
                    self_args = self.args(dtor.self_args, scope)
                    ret = self.expr(dtor.ret, scope | {dtor.self_name})
                    out.append(Dtor(dtor.name, dtor.self_name, self_args, tel, ret, dtor.span))
                return CodataDecl(name, params, tuple(out), decl.span)
            case DefDecl(name, self_name, self_type, params, ret, cases):
                tel, scope = self.telescope(params, empty)
                self_type = TypCtor(self_type.name, self.args(self_type.args, scope), self_type.span)
                ret = self.expr(ret, scope | {self_name})
                cases = tuple(self.case(c, scope) for c in cases)
                return DefDecl(name, self_name, self_type, tel, ret, cases, decl.span)
            case CodefDecl(name, params, result, cocases):
                tel, scope = self.telescope(params, empty)
                result = TypCtor(result.name, self.args(result.args, scope), result.span)
                cocases = tuple(self.case(c, scope) for c in cocases)
                return CodefDecl(name, tel, result, cocases, decl.span)
            case LetDecl(name, params, ty, body):
                tel, scope = self.telescope(params, empty)
                return LetDecl(name, tel, self.expr(ty, scope), self.expr(body, scope), decl.span)
        raise TypeError(f"not a declaration: {decl!r}")


def parse_declarations(text: str, file: Optional[str] = None) -> Tuple[List[Decl], List[Diagnostic]]:
    parser, diagnostics = _new_parser(text, file)
    decls = parser.parse_program()
    diagnostics.extend(parser.diagnostics)
    return decls, diagnostics


def parse(text: str, file: Optional[str] = None, prelude: Sequence[Decl] = ()) -> Program:
    """
    Parse and resolve a source file.

    Args:
        text: Source text
        file: Path used in diagnostics
        prelude: Resolved declarations in scope for the file

    Returns:
        The resolved Program

    Raises:
        DiagnosticError: on lexical, syntax or resolution errors
    """
    decls, diagnostics = parse_declarations(text, file)
    ns = Namespaces.collect(tuple(prelude) + tuple(decls), file, diagnostics)
    resolver = Resolver(ns, file)
    resolved = [resolver.decl(d) for d in decls]
    diagnostics.extend(resolver.diagnostics)
    if diagnostics:
        raise DiagnosticError(diagnostics)
    logger.debug(f"Parsed {len(resolved)} declarations from {file or '<input>'}")
    return Program(tuple(resolved), tuple(prelude))


def parse_expression(text: str, program: Program, scope: Sequence[str] = ()) -> Expr:
    """Parse and resolve an expression in the scope of `program`."""
    parser, diagnostics = _new_parser(text, None)
    try:
        e = parser.expr()
        if parser.tok.kind != "eof":
            parser.fail("unexpected input after expression")
    except _ParseError as err:
        diagnostics.append(make_diagnostic(DiagnosticCode.SYNTAX_ERROR, str(err), err.span))
        raise DiagnosticError(diagnostics)
    ns = Namespaces.collect(program.all_decls())
    resolver = Resolver(ns)
    e = resolver.expr(e, frozenset(scope))
    diagnostics.extend(resolver.diagnostics)
    if diagnostics:
        raise DiagnosticError(diagnostics)
    return e
