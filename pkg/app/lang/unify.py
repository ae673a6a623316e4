"""
First-order unification of constructor and index terms

Outcomes are three-valued: Unifies with a most general unifier, Absurd when
the equations provably have no solution, and Undecided when a neutral term
blocks a decision.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple, Union

from app.lang.normalize import Normalizer
from app.lang.syntax import (
    Call,
    Expr,
    TypCtor,
    Universe,
    Var,
    alpha_equal,
    free_vars,
    is_wildcard,
    subst,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Unifies:
    theta: Dict[str, Expr] = field(default_factory=dict)


@dataclass(frozen=True)
class Absurd:
    reason: str


@dataclass(frozen=True)
class Undecided:
    left: Expr
    right: Expr


UnifyOutcome = Union[Unifies, Absurd, Undecided]


def _head(e: Expr, normalizer: Normalizer) -> Optional[Tuple[str, str]]:
    """Head symbol of a rigid term, None for neutral terms."""
    match e:
        case Universe():
            return ("type", "Type")
        case TypCtor(name):
            return ("typ", name)
        case Call(name) if name in normalizer.sigs.producers:
            return ("call", name)
    return None


def _rigid_occurrence(x: str, e: Expr, normalizer: Normalizer) -> bool:
    """True if `x` occurs in `e` under constructor heads only."""
    match e:
        case Var(name):
            return name == x
        case TypCtor(_, args) | Call(_, args) if _head(e, normalizer) is not None:
            return any(_rigid_occurrence(x, a, normalizer) for a in args)
    return False


class Unifier:
    """Solves a list of equations for a set of flexible variables."""

    def __init__(self, flexible: Sequence[str], normalizer: Normalizer):
        self.flexible: Set[str] = set(flexible)
        self.normalizer = normalizer
        self.theta: Dict[str, Expr] = {}

    def solve(self, lhs: Sequence[Expr], rhs: Sequence[Expr]) -> UnifyOutcome:
        queue: List[Tuple[Expr, Expr]] = list(zip(lhs, rhs))
        postponed: List[Tuple[Expr, Expr]] = []
        while True:
            progress = False
            while queue:
                left, right = queue.pop(0)
                left = self.normalizer.normalize(subst(left, self.theta))
                right = self.normalizer.normalize(subst(right, self.theta))
                outcome = self._step(left, right, queue)
                if isinstance(outcome, Absurd):
                    return outcome
                if isinstance(outcome, Undecided):
                    postponed.append((left, right))
                else:
                    progress = progress or outcome
            if not postponed:
                return Unifies(dict(self.theta))
            if not progress:
                left, right = postponed[0]
                return Undecided(left, right)
            queue, postponed = postponed, []

    def _step(self, left: Expr, right: Expr, queue: List[Tuple[Expr, Expr]]) -> Union[bool, Absurd, Undecided]:
        """Process one equation; True if it bound a variable."""
        if alpha_equal(left, right):
            return False
        left_flex = isinstance(left, Var) and left.name in self.flexible
        right_flex = isinstance(right, Var) and right.name in self.flexible
        if left_flex and right_flex:
            if is_wildcard(right.name) and not is_wildcard(left.name):
                return self._bind(right.name, left)
            return self._bind(left.name, right)
        if left_flex:
            return self._bind(left.name, right)
        if right_flex:
            return self._bind(right.name, left)
        left_head = _head(left, self.normalizer)
        right_head = _head(right, self.normalizer)
        if left_head is None or right_head is None:
            return Undecided(left, right)
        if left_head != right_head:
            return Absurd(f"'{left_head[1]}' and '{right_head[1]}' are distinct")
        left_args = getattr(left, "args", ())
        right_args = getattr(right, "args", ())
        if len(left_args) != len(right_args):
            return Absurd(f"'{left_head[1]}' applied to different numbers of arguments")
        queue[:0] = list(zip(left_args, right_args))
        return False

    def _bind(self, name: str, value: Expr) -> Union[bool, Absurd, Undecided]:
        if name in free_vars(value):
            if _rigid_occurrence(name, value, self.normalizer):
                return Absurd(f"'{name}' occurs in its own solution")
            return Undecided(Var(name), value)
        step = {name: value}
        self.theta = {k: subst(v, step) for k, v in self.theta.items()}
        self.theta[name] = value
        self.flexible.discard(name)
        return True


def unify(
    flexible: Sequence[str],
    lhs: Sequence[Expr],
    rhs: Sequence[Expr],
    normalizer: Normalizer,
) -> UnifyOutcome:
    """
    Unify two argument lists pointwise.

    Args:
        flexible: Variables that may be solved for
        lhs: Left-hand sides
        rhs: Right-hand sides, same length as lhs
        normalizer: Normalizer used to bring both sides to normal form

    Returns:
        Unifies, Absurd or Undecided
    """
    outcome = Unifier(flexible, normalizer).solve(lhs, rhs)
    logger.debug(f"unify {len(lhs)} equations over {len(flexible)} variables: {type(outcome).__name__}")
    return outcome


def is_unifier(theta: Dict[str, Expr], lhs: Sequence[Expr], rhs: Sequence[Expr], normalizer: Normalizer) -> bool:
    """True if applying `theta` makes both sides convertible."""
    return all(
        alpha_equal(normalizer.normalize(subst(a, theta)), normalizer.normalize(subst(b, theta)))
        for a, b in zip(lhs, rhs)
    )
