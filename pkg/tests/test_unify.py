"""
Tests for first-order unification
"""
import itertools

import pytest

from app.lang.normalize import Normalizer
from app.lang.parser import parse
from app.lang.signature import Signatures
from app.lang.syntax import Call, DotCall, Var, alpha_equal, subst
from app.lang.unify import Absurd, Undecided, Unifies, is_unifier, unify

Z = Call("Z")


def S(e):
    return Call("S", (e,))


def x():
    return Var("x")


def y():
    return Var("y")


TRUE, FALSE = Call("True"), Call("False")

POOL = (Z, S(Z), S(S(Z)), x(), S(x()), y(), S(y()))
GROUND = (Z, S(Z), S(S(Z)), S(S(S(Z))))
BOOLS = (TRUE, FALSE)

NAT_AND_BOOL = """
data Nat { Z, S(n: Nat) }
data Bool { True, False }
"""


@pytest.fixture
def normalizer(check_corpus):
    return Normalizer(check_corpus("peano_data.dd").signatures, 10_000)


class TestUnify:
    """Tests for single equations."""

    def test_identical(self, normalizer):
        """Test equal sides unify with the empty substitution."""
        assert unify([], [S(Z)], [S(Z)], normalizer) == Unifies({})

    def test_bind_variable(self, normalizer):
        """Test a flexible variable is solved."""
        assert unify(["x"], [x()], [S(Z)], normalizer) == Unifies({"x": S(Z)})

    def test_bind_right_variable(self, normalizer):
        """Test a flexible variable on the right is solved."""
        assert unify(["x"], [S(Z)], [x()], normalizer) == Unifies({"x": S(Z)})

    def test_left_variable_bound_first(self, normalizer):
        """Test two named variables bind the left one."""
        assert unify(["x", "y"], [x()], [y()], normalizer) == Unifies({"x": y()})

    def test_wildcard_bound_first(self, normalizer):
        """Test a wildcard is bound in preference to a named variable."""
        assert unify(["x", "_3"], [x()], [Var("_3")], normalizer) == Unifies({"_3": x()})

    def test_rigid_variable(self, normalizer):
        """Test a variable that is not flexible behaves like a constant."""
        assert isinstance(unify([], [x()], [Z], normalizer), Undecided)

    def test_constructor_clash(self, normalizer):
        """Test distinct constructors are absurd."""
        assert isinstance(unify([], [Z], [S(Z)], normalizer), Absurd)

    def test_occurs_check(self, normalizer):
        """Test a variable cannot equal a constructor term containing it."""
        assert isinstance(unify(["x"], [x()], [S(x())], normalizer), Absurd)

    def test_neutral_term(self, normalizer):
        """Test a stuck definition call cannot be decided."""
        stuck = DotCall(x(), "plus", (Z,))
        outcome = unify(["x"], [stuck], [Z], normalizer)
        assert outcome == Undecided(stuck, Z)

    def test_normalizes_first(self, normalizer):
        """Test sides are compared after evaluation."""
        assert unify([], [DotCall(S(Z), "plus", (Z,))], [S(Z)], normalizer) == Unifies({})

    def test_postponed_equation(self, normalizer):
        """Test an undecided equation is retried after later ones solve its variable."""
        lhs = [DotCall(x(), "plus", (Z,)), x()]
        rhs = [S(Z), S(Z)]
        assert unify(["x"], lhs, rhs, normalizer) == Unifies({"x": S(Z)})

    def test_substitution_composed(self, normalizer):
        """Test earlier solutions are updated by later ones."""
        outcome = unify(["x", "y"], [x(), y()], [S(y()), Z], normalizer)
        assert outcome == Unifies({"x": S(Z), "y": Z})


class TestUnifyExhaustive:
    """Tests that unification agrees with ground enumeration on small equations."""

    @pytest.fixture(scope="class")
    def index_normalizer(self):
        return Normalizer(Signatures.from_program(parse(NAT_AND_BOOL)), 10_000)

    def assert_agrees(self, normalizer, variables, equations):
        """Every pair of equations: Unifies has a ground witness and solves them, Absurd has none."""
        names = list(variables)
        instances = [dict(zip(names, values)) for values in itertools.product(*variables.values())]
        checked = 0
        for (l1, r1), (l2, r2) in itertools.product(equations, repeat=2):
            lhs, rhs = [l1, l2], [r1, r2]
            outcome = unify(names, lhs, rhs, normalizer)
            assert not isinstance(outcome, Undecided), (lhs, rhs)
            solutions = [
                ground for ground in instances
                if all(alpha_equal(subst(a, ground), subst(b, ground)) for a, b in zip(lhs, rhs))
            ]
            if isinstance(outcome, Unifies):
                assert is_unifier(outcome.theta, lhs, rhs, normalizer), (lhs, rhs)
                assert solutions, (lhs, rhs)
            else:
                assert not solutions, (lhs, rhs)
            checked += 1
        return checked

    def test_two_nat_variables(self, index_normalizer):
        """Test equations over x, y: Nat up to constructor depth two."""
        equations = list(itertools.product(POOL, repeat=2))
        checked = self.assert_agrees(index_normalizer, {"x": GROUND, "y": GROUND}, equations)
        assert checked == len(POOL) ** 4

    def test_two_bool_variables(self, index_normalizer):
        """Test equations over b, c: Bool."""
        pool = (TRUE, FALSE, Var("b"), Var("c"))
        equations = list(itertools.product(pool, repeat=2))
        self.assert_agrees(index_normalizer, {"b": BOOLS, "c": BOOLS}, equations)

    def test_nat_and_bool_variables(self, index_normalizer):
        """Test equations mixing a Nat and a Bool variable, each equation well-sorted."""
        nats = (Z, S(Z), S(S(Z)), x(), S(x()))
        bools = (TRUE, FALSE, Var("b"))
        equations = list(itertools.product(nats, repeat=2)) + list(itertools.product(bools, repeat=2))
        self.assert_agrees(index_normalizer, {"x": GROUND, "b": BOOLS}, equations)

    def test_known_outcomes(self, index_normalizer):
        """Test a few outcomes from the enumeration by hand."""
        assert unify(["b"], [Var("b")], [TRUE], index_normalizer) == Unifies({"b": TRUE})
        assert isinstance(unify(["b"], [Var("b"), Var("b")], [TRUE, FALSE], index_normalizer), Absurd)
        outcome = unify(["x", "y"], [y(), x()], [S(x()), S(S(Z))], index_normalizer)
        assert outcome == Unifies({"x": S(S(Z)), "y": S(S(S(Z)))})
