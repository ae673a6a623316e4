"""
De- and refunctionalization as transposition of a type's matrix

Rows of the matrix are the producers of a type (constructors or
codefinitions), columns its consumers (definitions or destructors), and each
cell is the body of the clause for that pair. Both directions only move cell
bodies; binders are renamed where the new nesting requires it.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from app.lang.checker import TypedProgram, check_program
from app.lang.errors import DiagnosticError, TransformError, XfuncVerificationError
from app.lang.syntax import (
    Case,
    CodataDecl,
    CodefDecl,
    Ctor,
    DataDecl,
    Decl,
    DefDecl,
    Dtor,
    Expr,
    Param,
    Program,
    Telescope,
    TypCtor,
    Var,
    free_vars,
    fresh_name,
    subst,
)
from app.models.program import XfuncDirection, XfuncReport

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Row:
    """A producer `name(params): T(args)`."""
    name: str
    params: Telescope
    args: Tuple[Expr, ...]


@dataclass(frozen=True)
class Column:
    """A consumer `(self_name: T(self_args)).name(params): ret`."""
    name: str
    self_name: str
    self_args: Tuple[Expr, ...]
    params: Telescope
    ret: Expr


@dataclass(frozen=True)
class Cell:
    """
    A clause body with the names it uses for the producer's and the
    consumer's parameters. A body of None is an absurd clause.
    """
    producer_binders: Tuple[str, ...]
    consumer_binders: Tuple[str, ...]
    body: Optional[Expr]


@dataclass
class TypeMatrix:
    type_name: str
    params: Telescope
    is_data: bool
    rows: List[Row] = field(default_factory=list)
    columns: List[Column] = field(default_factory=list)
    cells: Dict[Tuple[str, str], Cell] = field(default_factory=dict)


def eligible_types(program: Program) -> List[str]:
    """User-declared data and codata types, in declaration order."""
    return [d.name for d in program.decls if isinstance(d, (DataDecl, CodataDecl))]


def _names(params: Sequence[Param]) -> Tuple[str, ...]:
    return tuple(p.name for p in params)


def build_matrix(typed: TypedProgram, type_name: str) -> TypeMatrix:
    """
    Collect the producers, consumers and clause bodies of a type.

    Args:
        typed: A lifted and checked program
        type_name: A type declared in the program (not in its prelude)

    Returns:
        The TypeMatrix of the type

    Raises:
        TransformError: if the type is unknown or belongs to the prelude
    """
    program = typed.program
    decl = next((d for d in program.decls if d.name == type_name), None)
    if not isinstance(decl, (DataDecl, CodataDecl)):
        if any(d.name == type_name for d in program.prelude):
            raise TransformError(f"'{type_name}' is declared in the prelude and cannot be transformed")
        raise TransformError(f"'{type_name}' is not a data or codata type of this program")
    if isinstance(decl, DataDecl):
        matrix = TypeMatrix(type_name, decl.params, True)
        matrix.rows = [Row(c.name, c.params, c.args) for c in decl.ctors]
        defs = [d for d in program.decls if isinstance(d, DefDecl) and d.self_type.name == type_name]
        for definition in defs:
            matrix.columns.append(Column(
                definition.name, definition.self_name, definition.self_type.args, definition.params, definition.ret
            ))
            for case in definition.cases:
                matrix.cells[(case.name, definition.name)] = Cell(case.params, _names(definition.params), case.body)
    else:
        matrix = TypeMatrix(type_name, decl.params, False)
        matrix.columns = [Column(d.name, d.self_name, d.self_args, d.params, d.ret) for d in decl.dtors]
        codefs = [d for d in program.decls if isinstance(d, CodefDecl) and d.result.name == type_name]
        for codef in codefs:
            matrix.rows.append(Row(codef.name, codef.params, codef.result.args))
            for cocase in codef.cocases:
                matrix.cells[(codef.name, cocase.name)] = Cell(_names(codef.params), cocase.params, cocase.body)
    for row in matrix.rows:
        for column in matrix.columns:
            assert (row.name, column.name) in matrix.cells, f"missing clause {row.name}/{column.name}"
    return matrix


def _clause(name: str, cell: Cell, outer: Tuple[str, ...], outer_binders: Tuple[str, ...],
            inner_binders: Tuple[str, ...]) -> Case:
    """
    Rebind a cell body under a declaration telescope `outer` and fresh clause
    binders. `outer_binders` and `inner_binders` are the cell's own names for
    those two parameter lists.
    """
    body_fv = free_vars(cell.body) if cell.body is not None else frozenset()
    taken = set(outer) | set(body_fv) | set(inner_binders)
    params: List[str] = []
    for binder in inner_binders:
        if binder in outer or binder in params:
            binder = fresh_name(binder, taken | set(params))
        params.append(binder)
    if cell.body is None:
        return Case(name, tuple(params), None)
    mapping = {old: Var(new) for old, new in zip(outer_binders, outer) if old != new}
    mapping.update({old: Var(new) for old, new in zip(inner_binders, params) if old != new})
    return Case(name, tuple(params), subst(cell.body, mapping))


def _replace_type(program: Program, matrix: TypeMatrix, new_decls: List[Decl]) -> Program:
    out: List[Decl] = []
    for decl in program.decls:
        if decl.name == matrix.type_name:
            out.extend(new_decls)
        elif isinstance(decl, DefDecl) and matrix.is_data and decl.self_type.name == matrix.type_name:
            continue
        elif isinstance(decl, CodefDecl) and not matrix.is_data and decl.result.name == matrix.type_name:
            continue
        else:
            out.append(decl)
    return program.with_decls(out)


def refunctionalize_matrix(matrix: TypeMatrix) -> List[Decl]:
    """Codata declaration and codefinitions for a data matrix."""
    dtors = tuple(Dtor(c.name, c.self_name, c.self_args, c.params, c.ret) for c in matrix.columns)
    decls: List[Decl] = [CodataDecl(matrix.type_name, matrix.params, dtors)]
    for row in matrix.rows:
        outer = _names(row.params)
        cocases = []
        for column in matrix.columns:
            cell = matrix.cells[(row.name, column.name)]
            cocases.append(_clause(column.name, cell, outer, cell.producer_binders, cell.consumer_binders))
        decls.append(CodefDecl(row.name, row.params, TypCtor(matrix.type_name, row.args), tuple(cocases)))
    return decls


def defunctionalize_matrix(matrix: TypeMatrix) -> List[Decl]:
    """Data declaration and definitions for a codata matrix."""
    ctors = tuple(Ctor(r.name, r.params, r.args) for r in matrix.rows)
    decls: List[Decl] = [DataDecl(matrix.type_name, matrix.params, ctors)]
    for column in matrix.columns:
        outer = _names(column.params)
        cases = []
        for row in matrix.rows:
            cell = matrix.cells[(row.name, column.name)]
            cases.append(_clause(row.name, cell, outer, cell.consumer_binders, cell.producer_binders))
        self_type = TypCtor(matrix.type_name, column.self_args)
        decls.append(DefDecl(column.name, column.self_name, self_type, column.params, column.ret, tuple(cases)))
    return decls


def _report(matrix: TypeMatrix, direction: XfuncDirection) -> XfuncReport:
    return XfuncReport(
        direction=direction,
        type_name=matrix.type_name,
        producers=len(matrix.rows),
        consumers=len(matrix.columns),
        cells=len(matrix.cells),
    )


def defunctionalize(typed: TypedProgram, type_name: str) -> Program:
    matrix = build_matrix(typed, type_name)
    if matrix.is_data:
        raise TransformError(f"'{type_name}' is already a data type")
    return _replace_type(typed.program, matrix, defunctionalize_matrix(matrix))


def refunctionalize(typed: TypedProgram, type_name: str) -> Program:
    matrix = build_matrix(typed, type_name)
    if not matrix.is_data:
        raise TransformError(f"'{type_name}' is already a codata type")
    return _replace_type(typed.program, matrix, refunctionalize_matrix(matrix))


def transpose(
    typed: TypedProgram,
    type_name: str,
    verify: bool = True,
    fuel: Optional[int] = None,
) -> Tuple[Program, XfuncReport]:
    """
    Transpose the matrix of `type_name`, choosing the direction from its kind.

    Args:
        typed: A lifted and checked program
        type_name: The type to transform
        verify: Typecheck the result before returning it
        fuel: Normalization budget for the verification

    Returns:
        The transformed program and an XfuncReport

    Raises:
        TransformError: if the type cannot be transformed
        XfuncVerificationError: if the transformed program does not typecheck
    """
    matrix = build_matrix(typed, type_name)
    if matrix.is_data:
        direction = XfuncDirection.REFUNCTIONALIZE
        decls = refunctionalize_matrix(matrix)
    else:
        direction = XfuncDirection.DEFUNCTIONALIZE
        decls = defunctionalize_matrix(matrix)
    report = _report(matrix, direction)
    result = _replace_type(typed.program, matrix, decls)
    if verify:
        try:
            check_program(result, fuel=fuel)
        except DiagnosticError as e:
            logger.error(f"Transposed program for {type_name} failed to typecheck: {e}")
            raise XfuncVerificationError(e.diagnostics, report)
    logger.info(
        f"{direction.value} {type_name}: {report.producers} producers x {report.consumers} consumers"
    )
    return result, report
