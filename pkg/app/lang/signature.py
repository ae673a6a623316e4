"""
Global signature table and declaration well-formedness scan
"""
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple, Union

from app.lang.syntax import (
    Case,
    CodataDecl,
    CodefDecl,
    DataDecl,
    Decl,
    DefDecl,
    Expr,
    LetDecl,
    Program,
    Telescope,
    TypCtor,
)
from app.models.diagnostic import Diagnostic, DiagnosticCode, make_diagnostic

TypeDecl = Union[DataDecl, CodataDecl]


@dataclass(frozen=True)
class ProducerSig:
    """Constructor or codefinition: `name(params): type_name(args)`."""
    name: str
    params: Telescope
    type_name: str
    args: Tuple[Expr, ...]
    is_ctor: bool


@dataclass(frozen=True)
class ConsumerSig:
    """Destructor or definition: `(self_name: type_name(self_args)).name(params): ret`."""
    name: str
    type_name: str
    self_name: str
    self_args: Tuple[Expr, ...]
    params: Telescope
    ret: Expr
    is_dtor: bool


class Signatures:
    """Lookup tables over every declaration in scope, prelude included."""

    def __init__(self, decls: Iterable[Decl] = ()):
        self.types: Dict[str, TypeDecl] = {}
        self.producers: Dict[str, ProducerSig] = {}
        self.consumers: Dict[str, ConsumerSig] = {}
        self.defs: Dict[str, DefDecl] = {}
        self.codefs: Dict[str, CodefDecl] = {}
        self.lets: Dict[str, LetDecl] = {}
        self._clauses: Dict[Tuple[str, str], Case] = {}
        for decl in decls:
            self.add(decl)

    @classmethod
    def from_program(cls, program: Program) -> "Signatures":
        return cls(program.all_decls())

    def add(self, decl: Decl) -> None:
        match decl:
            case DataDecl(name, _, ctors):
                self.types[name] = decl
                for ctor in ctors:
                    self.producers[ctor.name] = ProducerSig(ctor.name, ctor.params, name, ctor.args, True)
            case CodataDecl(name, _, dtors):
                self.types[name] = decl
                for dtor in dtors:
                    self.consumers[dtor.name] = ConsumerSig(
                        dtor.name, name, dtor.self_name, dtor.self_args, dtor.params, dtor.ret, True
                    )
            case DefDecl(name, self_name, self_type, params, ret, cases):
                self.defs[name] = decl
                self.consumers[name] = ConsumerSig(
                    name, self_type.name, self_name, self_type.args, params, ret, False
                )
                for case in cases:
                    self._clauses[(name, case.name)] = case
            case CodefDecl(name, params, result, cocases):
                self.codefs[name] = decl
                self.producers[name] = ProducerSig(name, params, result.name, result.args, False)
                for cocase in cocases:
                    self._clauses[(name, cocase.name)] = cocase
            case LetDecl(name):
                self.lets[name] = decl

    def replace(self, decl: Decl) -> None:
        if isinstance(decl, (DefDecl, CodefDecl)):
            for key in [k for k in self._clauses if k[0] == decl.name]:
                del self._clauses[key]
        self.add(decl)

    def is_data(self, name: str) -> bool:
        return isinstance(self.types.get(name), DataDecl)

    def is_codata(self, name: str) -> bool:
        return isinstance(self.types.get(name), CodataDecl)

    def def_case(self, def_name: str, ctor_name: str) -> Optional[Case]:
        """The clause of definition `def_name` for constructor `ctor_name`."""
        return self._clauses.get((def_name, ctor_name))

    def codef_cocase(self, codef_name: str, dtor_name: str) -> Optional[Case]:
        return self._clauses.get((codef_name, dtor_name))

    def ctors_of(self, type_name: str) -> List[ProducerSig]:
        decl = self.types.get(type_name)
        if not isinstance(decl, DataDecl):
            return []
        return [self.producers[c.name] for c in decl.ctors]

    def dtors_of(self, type_name: str) -> List[ConsumerSig]:
        decl = self.types.get(type_name)
        if not isinstance(decl, CodataDecl):
            return []
        return [self.consumers[d.name] for d in decl.dtors]


def _error(out: List[Diagnostic], code: DiagnosticCode, message: str, span, file) -> None:
    out.append(make_diagnostic(code, message, span, file))


def _check_type_ref(
    sigs: Signatures, ty: TypCtor, want_data: Optional[bool], rule: str, span, file, out: List[Diagnostic]
) -> bool:
    decl = sigs.types.get(ty.name)
    if decl is None:
        _error(out, DiagnosticCode.BAD_RESULT_TYPE, f"{rule}: '{ty.name}' is not a type", span, file)
        return False
    if want_data is True and not isinstance(decl, DataDecl):
        _error(out, DiagnosticCode.BAD_RESULT_TYPE, f"{rule}: '{ty.name}' is not a data type", span, file)
        return False
    if want_data is False and not isinstance(decl, CodataDecl):
        _error(out, DiagnosticCode.BAD_RESULT_TYPE, f"{rule}: '{ty.name}' is not a codata type", span, file)
        return False
    if len(ty.args) != len(decl.params):
        _error(
            out,
            DiagnosticCode.ARITY_MISMATCH,
            f"{rule}: '{ty.name}' expects {len(decl.params)} arguments, got {len(ty.args)}",
            span,
            file,
        )
        return False
    return True


def check_coverage(
    clauses: Tuple[Case, ...],
    expected: Dict[str, int],
    rule: str,
    owner: str,
    span,
    file: Optional[str],
) -> List[Diagnostic]:
    """Exactly one clause per constructor (or destructor) with matching arity."""
    out: List[Diagnostic] = []
    seen = set()
    for clause in clauses:
        where = clause.span or span
        if clause.name not in expected:
            _error(out, DiagnosticCode.UNKNOWN_CASE, f"{rule}: '{clause.name}' does not belong to '{owner}'", where, file)
            continue
        if clause.name in seen:
            _error(out, DiagnosticCode.DUPLICATE_CASE, f"{rule}: duplicate clause for '{clause.name}'", where, file)
            continue
        seen.add(clause.name)
        if len(clause.params) != expected[clause.name]:
            _error(
                out,
                DiagnosticCode.ARITY_MISMATCH,
                f"{rule}: clause '{clause.name}' binds {len(clause.params)} parameters, "
                f"expected {expected[clause.name]}",
                where,
                file,
            )
    for name in expected:
        if name not in seen:
            _error(out, DiagnosticCode.MISSING_CASE, f"{rule}: missing clause for '{name}'", span, file)
    return out


def validate_program(program: Program, file: Optional[str] = None) -> List[Diagnostic]:
    """
    Linear scan of the structural invariants that do not need typing.

    Args:
        program: A resolved program
        file: Path used in diagnostics

    Returns:
        Diagnostics, empty when the program is structurally well formed
    """
    sigs = Signatures.from_program(program)
    out: List[Diagnostic] = []
    for decl in program.decls:
        match decl:
            case DataDecl(name, params, ctors):
                for ctor in ctors:
                    if len(ctor.args) != len(params):
                        _error(
                            out,
                            DiagnosticCode.ARITY_MISMATCH,
                            f"DATA: constructor '{ctor.name}' must return '{name}' applied to "
                            f"{len(params)} arguments",
                            ctor.span or decl.span,
                            file,
                        )
            case CodataDecl(name, params, dtors):
                for dtor in dtors:
                    if len(dtor.self_args) != len(params):
                        _error(
                            out,
                            DiagnosticCode.ARITY_MISMATCH,
                            f"CODATA: destructor '{dtor.name}' must observe '{name}' applied to "
                            f"{len(params)} arguments",
                            dtor.span or decl.span,
                            file,
                        )
                    if dtor.self_name in {p.name for p in dtor.params}:
                        _error(
                            out,
                            DiagnosticCode.SELF_IN_TELESCOPE,
                            f"CODATA: self parameter '{dtor.self_name}' of '{dtor.name}' clashes with a parameter",
                            dtor.span or decl.span,
                            file,
                        )
            case DefDecl(name, self_name, self_type, params, _, cases):
                if self_name in {p.name for p in params}:
                    _error(
                        out,
                        DiagnosticCode.SELF_IN_TELESCOPE,
                        f"DEF: self parameter '{self_name}' of '{name}' clashes with a parameter",
                        decl.span,
                        file,
                    )
                if _check_type_ref(sigs, self_type, True, "DEF", decl.span, file, out):
                    expected = {c.name: len(c.params) for c in sigs.ctors_of(self_type.name)}
                    out.extend(check_coverage(cases, expected, "DEF", self_type.name, decl.span, file))
            case CodefDecl(name, _, result, cocases):
                if _check_type_ref(sigs, result, False, "CODEF", decl.span, file, out):
                    expected = {d.name: len(d.params) for d in sigs.dtors_of(result.name)}
                    out.extend(check_coverage(cocases, expected, "CODEF", result.name, decl.span, file))
    return out
