"""
Call-by-value small-step evaluator

A term is split into an evaluation context and a redex, the redex is
contracted, and the result is plugged back. Arguments are evaluated left to
right; nothing is evaluated under a binder.
"""
import logging
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Tuple, Union

from app.config import DEFAULT_FUEL
from app.lang.normalize import Normalizer
from app.lang.signature import Signatures
from app.lang.syntax import (
    Call,
    Case,
    Comatch,
    DotCall,
    Expr,
    Match,
    Motive,
    Program,
    TypCtor,
    Universe,
    Var,
    subst_case,
)

logger = logging.getLogger(__name__)


# Evaluation contexts

@dataclass(frozen=True)
class Hole:
    pass


@dataclass(frozen=True)
class ProducerFrame:
    """`C(v..., E, e...)`"""
    name: str
    done: Tuple[Expr, ...]
    inner: "EvalContext"
    pending: Tuple[Expr, ...]


@dataclass(frozen=True)
class TypCtorFrame:
    name: str
    done: Tuple[Expr, ...]
    inner: "EvalContext"
    pending: Tuple[Expr, ...]


@dataclass(frozen=True)
class ConsumerHeadFrame:
    """`E.d(e...)`"""
    inner: "EvalContext"
    name: str
    args: Tuple[Expr, ...]


@dataclass(frozen=True)
class ConsumerArgFrame:
    """`v.d(v..., E, e...)`"""
    scrutinee: Expr
    name: str
    done: Tuple[Expr, ...]
    inner: "EvalContext"
    pending: Tuple[Expr, ...]


@dataclass(frozen=True)
class MatchFrame:
    """`E.match { ... }` for programs that have not been lifted."""
    inner: "EvalContext"
    label: Optional[str]
    motive: Optional[Motive]
    cases: Tuple[Case, ...]


EvalContext = Union[Hole, ProducerFrame, TypCtorFrame, ConsumerHeadFrame, ConsumerArgFrame, MatchFrame]

HOLE = Hole()


def plug(ctx: EvalContext, e: Expr) -> Expr:
    """Fill the hole of `ctx` with `e`."""
    match ctx:
        case Hole():
            return e
        case ProducerFrame(name, done, inner, pending):
            return Call(name, done + (plug(inner, e),) + pending)
        case TypCtorFrame(name, done, inner, pending):
            return TypCtor(name, done + (plug(inner, e),) + pending)
        case ConsumerHeadFrame(inner, name, args):
            return DotCall(plug(inner, e), name, args)
        case ConsumerArgFrame(scrutinee, name, done, inner, pending):
            return DotCall(scrutinee, name, done + (plug(inner, e),) + pending)
        case MatchFrame(inner, label, motive, cases):
            return Match(label, plug(inner, e), motive, cases)
    raise TypeError(f"not an evaluation context: {ctx!r}")


# Outcomes

@dataclass(frozen=True)
class IsValue:
    value: Expr


@dataclass(frozen=True)
class Decomposition:
    context: EvalContext
    redex: Expr


@dataclass(frozen=True)
class Stuck:
    reason: str
    term: Expr


@dataclass(frozen=True)
class AtValue:
    value: Expr


@dataclass(frozen=True)
class Evaluated:
    value: Expr
    steps: int


@dataclass(frozen=True)
class BudgetExhausted:
    steps: int
    term: Expr


EvalResult = Union[Evaluated, BudgetExhausted, Stuck]


class Evaluator:
    """Steps closed terms against the declarations of a program."""

    def __init__(self, program: Union[Program, Signatures], fuel: Optional[int] = None):
        self.sigs = program if isinstance(program, Signatures) else Signatures.from_program(program)
        self.fuel = fuel if fuel is not None else DEFAULT_FUEL
        self._reducer = Normalizer(self.sigs, float("inf"))

    def is_value(self, e: Expr) -> bool:
        return isinstance(self.decompose(e), IsValue)

    def _args(self, args: Tuple[Expr, ...], frame) -> Optional[Union[Decomposition, Stuck]]:
        for i, arg in enumerate(args):
            inner = self.decompose(arg)
            if isinstance(inner, Stuck):
                return inner
            if isinstance(inner, Decomposition):
                return Decomposition(frame(args[:i], inner.context, args[i + 1:]), inner.redex)
        return None

    def decompose(self, e: Expr) -> Union[IsValue, Decomposition, Stuck]:
        """Split `e` into a value, or the unique context and redex."""
        match e:
            case Universe() | Comatch():
                return IsValue(e)
            case Var(name):
                return Stuck(f"free variable '{name}'", e)
            case TypCtor(name, args):
                found = self._args(args, lambda d, c, p: TypCtorFrame(name, d, c, p))
                return found or IsValue(e)
            case Call(name, args):
                found = self._args(args, lambda d, c, p: ProducerFrame(name, d, c, p))
                if found is not None:
                    return found
                if name in self.sigs.lets:
                    return Decomposition(HOLE, e)
                return IsValue(e)
            case DotCall(scrutinee, name, args):
                head = self.decompose(scrutinee)
                if isinstance(head, Stuck):
                    return head
                if isinstance(head, Decomposition):
                    return Decomposition(ConsumerHeadFrame(head.context, name, args), head.redex)
                found = self._args(args, lambda d, c, p: ConsumerArgFrame(scrutinee, name, d, c, p))
                return found or Decomposition(HOLE, e)
            case Match(label, scrutinee, motive, cases):
                head = self.decompose(scrutinee)
                if isinstance(head, Stuck):
                    return head
                if isinstance(head, Decomposition):
                    return Decomposition(MatchFrame(head.context, label, motive, cases), head.redex)
                return Decomposition(HOLE, e)
        return Stuck(f"cannot evaluate {type(e).__name__}", e)

    def contract(self, redex: Expr) -> Union[Expr, Stuck]:
        """Perform one beta or unfolding step on a redex."""
        match redex:
            case DotCall(scrutinee, name, args):
                reduced = self._reducer.reduce(scrutinee, name, args)
                if reduced is None:
                    head = getattr(scrutinee, "name", None) or getattr(scrutinee, "label", None)
                    return Stuck(f"no clause of '{head}' applies to '{name}'", redex)
                return reduced
            case Match(label, scrutinee, _, cases):
                reduced = self._reducer.reduce_match(scrutinee, cases)
                if reduced is None:
                    return Stuck(f"no clause of match '{label}' applies", redex)
                return reduced
            case Call():
                reduced = self._reducer.unfold_let(redex)
                if reduced is not None:
                    return reduced
        return Stuck("not a redex", redex)

    def step(self, e: Expr) -> Union[Expr, AtValue, Stuck]:
        found = self.decompose(e)
        if isinstance(found, IsValue):
            return AtValue(found.value)
        if isinstance(found, Stuck):
            return found
        contracted = self.contract(found.redex)
        if isinstance(contracted, Stuck):
            return contracted
        return plug(found.context, contracted)

    def trace(self, e: Expr, limit: Optional[int] = None) -> Iterator[Expr]:
        """Yield `e` and every term it steps to, up to `limit` steps."""
        limit = self.fuel if limit is None else limit
        yield e
        for _ in range(limit):
            nxt = self.step(e)
            if isinstance(nxt, (AtValue, Stuck)):
                return
            e = nxt
            yield e

    def evaluate(self, e: Expr) -> EvalResult:
        steps = 0
        while True:
            nxt = self.step(e)
            if isinstance(nxt, AtValue):
                logger.debug(f"Evaluated to a value in {steps} steps")
                return Evaluated(nxt.value, steps)
            if isinstance(nxt, Stuck):
                return nxt
            if steps >= self.fuel:
                return BudgetExhausted(steps, e)
            e = nxt
            steps += 1


def evaluate(e: Expr, program: Program, fuel: Optional[int] = None) -> EvalResult:
    """
    Evaluate a closed expression to a value.

    Args:
        e: Closed expression
        program: Declarations in scope
        fuel: Maximum number of steps

    Returns:
        Evaluated, BudgetExhausted or Stuck
    """
    return Evaluator(program, fuel).evaluate(e)


def unfold_labels(value: Expr, sigs: Signatures, labels: Iterable[str]) -> Expr:
    """Replace calls to the given generated codefinitions by the comatches they came from."""
    labels = set(labels)

    def walk(e: Expr) -> Expr:
        match e:
            case TypCtor(name, args):
                return TypCtor(name, tuple(walk(a) for a in args))
            case Call(name, args) if name in labels and name in sigs.codefs:
                codef = sigs.codefs[name]
                mapping = {p.name: walk(a) for p, a in zip(codef.params, args)}
                return Comatch(name, tuple(subst_case(c, mapping) for c in codef.cocases))
            case Call(name, args):
                return Call(name, tuple(walk(a) for a in args))
        return e

    return walk(value)

