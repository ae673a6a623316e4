"""
Tests for call-by-value evaluation
"""
import itertools

import pytest

from app.lang.checker import check_program, infer_type, types_convertible
from app.lang.errors import DiagnosticError
from app.lang.evaluator import BudgetExhausted, Evaluated, Evaluator, Stuck, evaluate
from app.lang.lift import lift_program
from app.lang.parser import parse_expression
from app.lang.printer import print_expr
from app.lang.syntax import Call, TypCtor, Var, alpha_equal, free_vars
from app.lang.xfunc import transpose
from app.models.diagnostic import DiagnosticCode
from app.models.program import RunStatus
from tests.conftest import corpus_source

NUMERALS = ("Z", "S(Z)", "S(S(Z))")


def closed_nat_terms():
    """Sums and products of small numerals, nested two deep."""
    for a, b in itertools.product(NUMERALS, repeat=2):
        for op in ("plus", "mul"):
            yield f"{a}.{op}({b})"
    for a, b, c in itertools.product(NUMERALS, repeat=3):
        for op1, op2 in itertools.product(("plus", "mul"), repeat=2):
            yield f"{a}.{op1}({b}).{op2}({c})"
            yield f"{a}.{op1}({b}.{op2}({c}))"


def numeral(n: int) -> str:
    return "S(" * n + "Z" + ")" * n


class TestRun:
    """Tests for evaluating expressions through the toolchain."""

    def test_value(self, tools):
        """Test a definition call evaluates to a constructor value."""
        result = tools.run(corpus_source("peano_data.dd"), "S(Z).plus(S(Z))", "peano_data.dd")
        assert result.status == RunStatus.VALUE
        assert result.value == "S(S(Z))"
        assert result.steps > 0

    def test_codata_value(self, tools):
        """Test a destructor call on a codefinition."""
        result = tools.run(corpus_source("bool_codata.dd"), "True.neg", "bool_codata.dd")
        assert result.value == "False"
        assert result.steps == 1

    def test_value_needs_no_steps(self, tools):
        """Test a value is returned as is."""
        result = tools.run(corpus_source("stream.dd"), "Count(Z)", "stream.dd")
        assert result.status == RunStatus.VALUE
        assert result.value == "Count(Z)"
        assert result.steps == 0

    def test_budget_exhausted(self, tools):
        """Test evaluation stops when the fuel runs out."""
        result = tools.run(corpus_source("peano_data.dd"), "S(S(Z)).mul(S(S(Z)))", "peano_data.dd", fuel=2)
        assert result.status == RunStatus.BUDGET_EXHAUSTED
        assert result.steps == 2
        assert result.term

    def test_infinite_stream_prefix(self, tools):
        """Test destructors force only as much of a stream as they need."""
        source = corpus_source("stream.dd")
        expr = "Count(Z).tail(Nat).tail(Nat).tail(Nat).head(Nat)"
        assert tools.run(source, expr, "stream.dd").value == numeral(3)

    def test_let_unfolds(self, tools):
        """Test a let constant applied to arguments."""
        result = tools.run(corpus_source("functions.dd"), "twice(Succ).ap(Nat, Nat, Z)", "functions.dd", prelude=False)
        assert result.value == "S(S(Z))"

    def test_lifted_value_unfolds(self, tools):
        """Test a value built by a lifted comatch prints as that comatch."""
        result = tools.run(corpus_source("functions.dd"), "twice(Succ)", "functions.dd", prelude=False)
        assert result.status == RunStatus.VALUE
        assert result.value.startswith("comatch twice_comatch_1 {")
        assert "Succ.ap(Nat, Nat, Succ.ap(Nat, Nat, x))" in result.value

    def test_dependent_function(self, tools):
        """Test a dependent function whose result type depends on its argument."""
        source = corpus_source("functions.dd")
        assert tools.run(source, "Default.dap(Bool, Choose, True)", "functions.dd", prelude=False).value == "True"

    def test_local_comatch_rejected(self, tools):
        """Test a lambda typed in by hand is rejected before evaluation."""
        with pytest.raises(DiagnosticError) as err:
            tools.run(corpus_source("peano_data.dd"), "\\x. x", "peano_data.dd")
        assert [d.code for d in err.value.diagnostics] == [DiagnosticCode.CANNOT_INFER]


class TestEvaluator:
    """Tests for the small-step evaluator."""

    def test_stuck_on_free_variable(self, check_corpus):
        """Test an open term gets stuck."""
        typed = check_corpus("peano_data.dd")
        result = Evaluator(typed.signatures).evaluate(Var("x"))
        assert isinstance(result, Stuck)
        assert "x" in result.reason

    def test_fuel_zero(self, check_corpus):
        """Test zero fuel evaluates values but no redexes."""
        typed = check_corpus("peano_data.dd")
        program = typed.program
        assert isinstance(evaluate(Call("Z"), program, fuel=0), Evaluated)
        redex = parse_expression("Z.plus(Z)", program)
        assert evaluate(redex, program, fuel=0) == BudgetExhausted(0, redex)

    def test_trace(self, check_corpus):
        """Test the trace starts at the input and ends at the value."""
        typed = check_corpus("peano_data.dd")
        e = parse_expression("S(Z).plus(Z)", typed.program)
        terms = list(Evaluator(typed.signatures).trace(e))
        assert terms[0] == e
        assert print_expr(terms[-1]) == "S(Z)"
        assert len(terms) == 3

    def test_left_to_right(self, check_corpus):
        """Test the scrutinee is evaluated before the arguments."""
        typed = check_corpus("peano_data.dd")
        e = parse_expression("Z.plus(Z).plus(Z.plus(Z))", typed.program)
        step = Evaluator(typed.signatures).step(e)
        assert print_expr(step) == "Z.plus(Z.plus(Z))"

    def test_values(self, check_corpus):
        """Test constructor and codefinition calls on values are values."""
        data = Evaluator(check_corpus("peano_data.dd").signatures)
        codata = Evaluator(check_corpus("stream.dd").signatures)
        assert data.is_value(Call("S", (Call("Z"),)))
        assert codata.is_value(Call("Ones"))
        assert not data.is_value(parse_expression("Z.plus(Z)", check_corpus("peano_data.dd").program))


class TestSoundness:
    """Tests that evaluation of well-typed closed terms makes progress and keeps its type."""

    def test_progress_and_preservation(self, check_corpus):
        """Test every reduct of a well-typed term has the same type, ending in a value."""
        terms = list(closed_nat_terms())
        assert len(terms) >= 100
        for name in ("peano_data.dd", "peano_codata.dd"):
            typed = check_corpus(name)
            program = typed.program
            nat = TypCtor("Nat")
            evaluator = Evaluator(typed.signatures)
            for text in terms:
                e = parse_expression(text, program)
                assert not free_vars(e)
                trace = list(evaluator.trace(e))
                for term in trace:
                    assert types_convertible(program, infer_type(program, term), nat), (name, print_expr(term))
                assert evaluator.is_value(trace[-1]), (name, text)
                assert isinstance(evaluator.evaluate(e), Evaluated)


def evaluated_value(program, text):
    result = evaluate(parse_expression(text, program), program)
    assert isinstance(result, Evaluated), (text, result)
    return result.value


class TestEvaluationPreserved:
    """Tests that lifting and transposition do not change what programs compute."""

    @pytest.fixture(scope="class")
    def evaluations(self, manifest):
        entries = [e for e in manifest if e.expectation.kind == "evaluate"]
        assert entries
        return entries

    def test_lifting(self, tools, evaluations):
        """Test each expression gives the same value before and after lifting."""
        for entry in evaluations:
            expr, expected = entry.expectation.args
            surface = tools.parse(corpus_source(entry.file.name), entry.file.name, entry.prelude)
            lifted = lift_program(surface, entry.file.name)
            before = evaluated_value(surface, expr)
            after = evaluated_value(lifted, expr)
            assert alpha_equal(before, after), (entry.file.name, expr)
            assert alpha_equal(before, parse_expression(expected, surface)), (entry.file.name, expr)

    def test_route_post_before_lifting(self, tools):
        """Test a route handler written as a local comatch runs on the unlifted program."""
        surface = tools.parse(corpus_source("webserver_routes_data.dd"), prelude=False)
        expr = "Index.post.ap(State(False), ×_(State(False), Response), Guest(Z)).snd(State(False), Response)"
        assert print_expr(evaluated_value(surface, expr)) == "Forbidden"
        assert print_expr(evaluated_value(lift_program(surface), expr)) == "Forbidden"

    def test_transposition(self, check_corpus, manifest, evaluations):
        """Test each expression gives the same value after transposing the listing's roundtrip types."""
        roundtrips = {}
        for entry in manifest:
            if entry.expectation.kind == "roundtrip":
                roundtrips.setdefault(entry.file.name, []).extend(entry.expectation.args)
        compared = 0
        for entry in evaluations:
            expr, _ = entry.expectation.args
            typed = check_corpus(entry.file.name, entry.prelude)
            before = evaluated_value(typed.program, expr)
            for name in roundtrips.get(entry.file.name, []):
                transposed, _ = transpose(typed, name)
                after = evaluated_value(check_program(transposed).program, expr)
                assert alpha_equal(before, after), (entry.file.name, name, expr)
                compared += 1
        assert compared >= 10
