"""
Tests for de- and refunctionalization
"""
import pytest

from app.lang.checker import check_program
from app.lang.errors import TransformError
from app.lang.syntax import CodataDecl, CodefDecl, DataDecl, DefDecl, program_equivalent
from app.lang.xfunc import build_matrix, defunctionalize, eligible_types, refunctionalize, transpose
from app.models.program import XfuncDirection
from tests.conftest import corpus_source

# Listings of one program in both presentations.
PAIRS = [
    ("bool_data.dd", "bool_codata.dd", "Bool"),
    ("neg_inverse_data.dd", "neg_inverse_codata.dd", "Bool"),
    ("pairs_data.dd", "pairs_codata.dd", "×_"),
    ("sigma_data.dd", "sigma_codata.dd", "Σ_"),
    ("church_data.dd", "church_codata.dd", "Nat"),
    ("induction_data.dd", "induction_codata.dd", "Nat"),
    ("peano_data.dd", "peano_codata.dd", "Nat"),
]


class TestTranspose:
    """Tests for transposing a single type."""

    def test_refunctionalize_bool(self, check_corpus):
        """Test a data type becomes codata with one codefinition per constructor."""
        program, report = transpose(check_corpus("bool_data.dd"), "Bool")
        kinds = [type(d) for d in program.decls]
        assert kinds == [CodataDecl, CodefDecl, CodefDecl]
        assert report.direction == XfuncDirection.REFUNCTIONALIZE
        assert (report.producers, report.consumers, report.cells) == (2, 1, 2)

    def test_defunctionalize_bool(self, check_corpus):
        """Test a codata type becomes data with one definition per destructor."""
        program, report = transpose(check_corpus("bool_codata.dd"), "Bool")
        kinds = [type(d) for d in program.decls]
        assert kinds == [DataDecl, DefDecl]
        assert report.direction == XfuncDirection.DEFUNCTIONALIZE

    @pytest.mark.parametrize("data_file, codata_file, type_name", PAIRS)
    def test_presentations_correspond(self, check_corpus, data_file, codata_file, type_name):
        """Test transposing one listing gives the other, in both directions."""
        data = check_corpus(data_file)
        codata = check_corpus(codata_file)
        assert program_equivalent(refunctionalize(data, type_name), codata.program)
        assert program_equivalent(defunctionalize(codata, type_name), data.program)

    def test_involution(self, tools, manifest):
        """Test transposing twice gives back every roundtrip listing."""
        entries = [e for e in manifest if e.expectation.kind == "roundtrip"]
        assert entries
        for entry in entries:
            typed = tools.check(corpus_source(entry.file.name), entry.file.name, entry.prelude)
            for name in entry.expectation.args:
                once, _ = transpose(typed, name, verify=False)
                twice, _ = transpose(check_program(once), name, verify=False)
                assert program_equivalent(twice, typed.program), (entry.file.name, name)

    def test_every_type_transposes_and_checks(self, check_corpus, accepted):
        """Test every type of every accepted listing transposes to a well-typed program and back."""
        transposed = 0
        for entry in accepted:
            typed = check_corpus(entry.file.name, entry.prelude)
            for name in eligible_types(typed.program):
                once, report = transpose(typed, name)
                assert report.type_name == name
                twice, _ = transpose(check_program(once), name)
                assert program_equivalent(twice, typed.program), (entry.file.name, name)
                transposed += 1
        assert transposed >= 50

    def test_other_declarations_untouched(self, check_corpus):
        """Test declarations not belonging to the type keep their place."""
        typed = check_corpus("neg_inverse_data.dd")
        program, _ = transpose(typed, "Bool")
        assert program.decls[0] == typed.program.decls[0]
        assert program.decls[0].name == "Eq"


class TestMatrix:
    """Tests for the producer/consumer matrix."""

    def test_cells(self, check_corpus):
        """Test one cell per constructor and definition."""
        matrix = build_matrix(check_corpus("peano_data.dd"), "Nat")
        assert matrix.is_data
        assert [r.name for r in matrix.rows] == ["S", "Z"]
        assert [c.name for c in matrix.columns] == ["plus", "mul"]
        assert set(matrix.cells) == {(r, c) for r in ("S", "Z") for c in ("plus", "mul")}

    def test_eligible_types(self, check_corpus):
        """Test only the program's own types are listed."""
        assert eligible_types(check_corpus("neg_inverse_data.dd").program) == ["Eq", "Bool"]
        assert eligible_types(check_corpus("stream.dd").program) == ["Nat", "Stream"]


class TestErrors:
    """Tests for types that cannot be transformed."""

    def test_wrong_direction(self, check_corpus):
        """Test defunctionalizing a data type."""
        with pytest.raises(TransformError):
            defunctionalize(check_corpus("bool_data.dd"), "Bool")
        with pytest.raises(TransformError):
            refunctionalize(check_corpus("bool_codata.dd"), "Bool")

    def test_unknown_type(self, check_corpus):
        """Test a name that is not a type of the program."""
        with pytest.raises(TransformError):
            transpose(check_corpus("bool_data.dd"), "Nope")

    def test_prelude_type(self, check_corpus):
        """Test prelude types are not transformed."""
        with pytest.raises(TransformError, match="prelude"):
            transpose(check_corpus("bool_data.dd"), "Fun")

    def test_not_a_type(self, check_corpus):
        """Test a definition name is rejected."""
        with pytest.raises(TransformError):
            transpose(check_corpus("bool_data.dd"), "neg")
