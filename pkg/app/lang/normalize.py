"""
Weak-head and full normalization used by conversion and unification
"""
from typing import Dict, Optional, Sequence

from app.lang.errors import BudgetExhaustedError
from app.lang.signature import Signatures
from app.lang.syntax import (
    Call,
    Case,
    Comatch,
    DotCall,
    Expr,
    Match,
    Motive,
    Telescope,
    TypCtor,
    subst,
)


def clause_mapping(
    telescope: Telescope, outer_args: Sequence[Expr], names: Sequence[str], inner_args: Sequence[Expr]
) -> Dict[str, Expr]:
    """Bindings for a clause body; clause binders shadow the declaration telescope."""
    mapping: Dict[str, Expr] = {p.name: a for p, a in zip(telescope, outer_args)}
    mapping.update(zip(names, inner_args))
    return mapping


class Normalizer:
    """
    Beta-reduces consumer calls on producers and unfolds let constants.

    Every reduction consumes one unit of fuel; running out raises
    BudgetExhaustedError.
    """

    def __init__(self, sigs: Signatures, fuel: int):
        self.sigs = sigs
        self.fuel = fuel
        self.steps = 0

    def tick(self) -> None:
        if self.steps >= self.fuel:
            raise BudgetExhaustedError(self.steps)
        self.steps += 1

    def reduce(self, scrutinee: Expr, name: str, args) -> Optional[Expr]:
        """Contract `scrutinee.name(args)` if the scrutinee is a producer."""
        sig = self.sigs.consumers.get(name)
        if sig is None:
            return None
        if isinstance(scrutinee, Comatch):
            for cocase in scrutinee.cocases:
                if cocase.name == name and cocase.body is not None:
                    self.tick()
                    return subst(cocase.body, clause_mapping((), (), cocase.params, args))
            return None
        if not isinstance(scrutinee, Call):
            return None
        if sig.is_dtor:
            codef = self.sigs.codefs.get(scrutinee.name)
            clause = self.sigs.codef_cocase(scrutinee.name, name) if codef else None
            if clause is None or clause.body is None:
                return None
            self.tick()
            return subst(clause.body, clause_mapping(codef.params, scrutinee.args, clause.params, args))
        definition = self.sigs.defs.get(name)
        clause = self.sigs.def_case(name, scrutinee.name) if definition else None
        if clause is None or clause.body is None:
            return None
        self.tick()
        return subst(clause.body, clause_mapping(definition.params, args, clause.params, scrutinee.args))

    def reduce_match(self, scrutinee: Expr, cases) -> Optional[Expr]:
        if not isinstance(scrutinee, Call):
            return None
        for case in cases:
            if case.name == scrutinee.name and case.body is not None:
                self.tick()
                return subst(case.body, clause_mapping((), (), case.params, scrutinee.args))
        return None

    def unfold_let(self, e: Call) -> Optional[Expr]:
        let = self.sigs.lets.get(e.name)
        if let is None:
            return None
        self.tick()
        return subst(let.body, clause_mapping(let.params, e.args, (), ()))

    def whnf(self, e: Expr) -> Expr:
        while True:
            match e:
                case DotCall(scrutinee, name, args):
                    head = self.whnf(scrutinee)
                    reduced = self.reduce(head, name, args)
                    if reduced is None:
                        return DotCall(head, name, args, e.span) if head is not scrutinee else e
                    e = reduced
                case Match(label, scrutinee, motive, cases):
                    head = self.whnf(scrutinee)
                    reduced = self.reduce_match(head, cases)
                    if reduced is None:
                        return Match(label, head, motive, cases, e.span)
                    e = reduced
                case Call():
                    unfolded = self.unfold_let(e)
                    if unfolded is None:
                        return e
                    e = unfolded
                case _:
                    return e

    def normalize(self, e: Expr) -> Expr:
        e = self.whnf(e)
        match e:
            case TypCtor(name, args):
                return TypCtor(name, tuple(self.normalize(a) for a in args), e.span)
            case Call(name, args):
                return Call(name, tuple(self.normalize(a) for a in args), e.span)
            case DotCall(scrutinee, name, args):
                return DotCall(self.normalize(scrutinee), name, tuple(self.normalize(a) for a in args), e.span)
            case Comatch(label, cocases):
                return Comatch(label, tuple(self._case(c) for c in cocases), e.span)
            case Match(label, scrutinee, motive, cases):
                if motive is not None:
                    motive = Motive(motive.binder, self.normalize(motive.type))
                return Match(label, self.normalize(scrutinee), motive, tuple(self._case(c) for c in cases), e.span)
        return e

    def _case(self, case: Case) -> Case:
        if case.body is None:
            return case
        return Case(case.name, case.params, self.normalize(case.body), case.span)
