"""
Tests for the command-line driver
"""
import json
import shutil

import pytest

from app.cli import EXIT_BUDGET, EXIT_DIAGNOSTICS, EXIT_OK, EXIT_TRANSFORM, EXIT_USAGE, main
from app.lang.errors import XfuncVerificationError
from app.models.diagnostic import DiagnosticCode, make_diagnostic
from app.models.program import XfuncDirection, XfuncReport
from app.services.toolchain import toolchain
from tests.conftest import CORPUS_DIR


@pytest.fixture
def listing(tmp_path):
    """Copy a corpus file into a scratch directory."""

    def copy(name: str):
        target = tmp_path / name
        shutil.copy(CORPUS_DIR / name, target)
        return target

    return copy


class TestCheck:
    """Tests for the check command."""

    def test_ok(self, listing, capsys):
        """Test a well-typed program."""
        assert main(["check", str(listing("bool_data.dd"))]) == EXIT_OK
        assert "ok (2 declarations)" in capsys.readouterr().out

    def test_rejected(self, listing, capsys):
        """Test diagnostics go to stderr."""
        assert main(["check", str(listing("neg_missing_case.dd"))]) == EXIT_DIAGNOSTICS
        assert "[missing-case]" in capsys.readouterr().err

    def test_json_diagnostics(self, listing, capsys):
        """Test diagnostics as JSON lines."""
        assert main(["check", "--json", str(listing("neg_missing_case.dd"))]) == EXIT_DIAGNOSTICS
        lines = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
        assert "missing-case" in [d["code"] for d in lines]

    def test_no_prelude(self, listing):
        """Test a program using arrows needs the prelude."""
        path = listing("church_data.dd")
        assert main(["check", str(path)]) == EXIT_OK
        assert main(["check", "--no-prelude", str(path)]) == EXIT_DIAGNOSTICS

    def test_missing_file(self, tmp_path):
        """Test an unreadable file is a usage error."""
        assert main(["check", str(tmp_path / "absent.dd")]) == EXIT_USAGE


class TestRun:
    """Tests for the run command."""

    def test_value(self, listing, capsys):
        """Test the value is printed on stdout."""
        assert main(["run", str(listing("bool_data.dd")), "--expr", "True.neg"]) == EXIT_OK
        assert capsys.readouterr().out.strip() == "False"

    def test_budget(self, listing):
        """Test running out of fuel."""
        path = listing("peano_data.dd")
        assert main(["run", str(path), "--expr", "S(Z).plus(Z)", "--fuel", "0"]) == EXIT_BUDGET

    def test_json(self, listing, capsys):
        """Test the run result as JSON."""
        assert main(["run", "--json", str(listing("stream.dd")), "--expr", "Ones.head(Nat)"]) == EXIT_OK
        result = json.loads(capsys.readouterr().out)
        assert result["status"] == "value"
        assert result["value"] == "S(Z)"

    def test_unbound_expression(self, listing):
        """Test an expression mentioning an unknown name."""
        assert main(["run", str(listing("bool_data.dd")), "--expr", "Maybe"]) == EXIT_DIAGNOSTICS

    def test_local_comatch_expression(self, listing, capsys):
        """Test an expression that needs a type annotation to check."""
        assert main(["run", str(listing("peano_data.dd")), "--expr", "\\x. x"]) == EXIT_DIAGNOSTICS
        assert "[cannot-infer]" in capsys.readouterr().err

    def test_expr_required(self, listing):
        """Test run without an expression."""
        with pytest.raises(SystemExit) as err:
            main(["run", str(listing("bool_data.dd"))])
        assert err.value.code == EXIT_USAGE


class TestTransforms:
    """Tests for lift, xfunc and fmt."""

    def test_xfunc(self, listing, capsys):
        """Test refunctionalizing a data type."""
        assert main(["xfunc", str(listing("bool_data.dd")), "--type", "Bool"]) == EXIT_OK
        out = capsys.readouterr().out
        assert out.startswith("codata Bool { neg: Bool }")
        assert "codef True: Bool { neg => False }" in out

    def test_xfunc_unknown_type(self, listing, capsys):
        """Test a type the program does not declare is a precondition failure."""
        assert main(["xfunc", str(listing("bool_data.dd")), "--type", "Nat"]) == EXIT_DIAGNOSTICS
        assert "cannot transform Nat" in capsys.readouterr().err

    @pytest.mark.parametrize("name", ["neg", "Fun"])
    def test_xfunc_not_transformable(self, listing, name):
        """Test a definition name and a prelude type both exit with status 1."""
        assert main(["xfunc", str(listing("bool_data.dd")), "--type", name]) == EXIT_DIAGNOSTICS

    def test_xfunc_verification_failure(self, listing, monkeypatch, capsys):
        """Test an ill-typed transposition exits 4 and prints the report."""
        report = XfuncReport(
            direction=XfuncDirection.REFUNCTIONALIZE, type_name="Bool", producers=2, consumers=1, cells=2
        )
        diagnostic = make_diagnostic(DiagnosticCode.CONVERSION_FAILURE, "types differ")

        def failing(*args, **kwargs):
            raise XfuncVerificationError([diagnostic], report)

        monkeypatch.setattr(toolchain, "xfunc", failing)
        assert main(["xfunc", str(listing("bool_data.dd")), "--type", "Bool"]) == EXIT_TRANSFORM
        captured = capsys.readouterr()
        assert json.loads(captured.out)["cells"] == 2
        assert "[conversion-failure]" in captured.err

    def test_xfunc_out(self, listing, tmp_path):
        """Test writing the result to a file."""
        out = tmp_path / "bool.out.dd"
        assert main(["xfunc", str(listing("bool_codata.dd")), "--type", "Bool", "--out", str(out)]) == EXIT_OK
        assert out.read_text().startswith("data Bool { True, False }")

    def test_lift(self, listing, capsys):
        """Test lifting prints generated declarations."""
        assert main(["lift", "--no-prelude", str(listing("functions.dd"))]) == EXIT_OK
        assert "codef twice_comatch_1" in capsys.readouterr().out

    def test_fmt(self, listing, tmp_path):
        """Test formatting into a file."""
        out = tmp_path / "fmt.dd"
        assert main(["fmt", str(listing("bool_data.dd")), "--out", str(out)]) == EXIT_OK
        assert out.read_text().startswith("data Bool { True, False }")

    def test_fmt_syntax_error(self, tmp_path):
        """Test formatting a malformed file."""
        path = tmp_path / "bad.dd"
        path.write_text("data {")
        assert main(["fmt", str(path)]) == EXIT_DIAGNOSTICS


class TestCorpusCommand:
    """Tests for the corpus command."""

    def test_passing_manifest(self, listing, tmp_path, capsys):
        """Test a manifest whose expectations hold."""
        listing("bool_data.dd")
        manifest = tmp_path / "manifest.tsv"
        manifest.write_text("bool_data.dd\taccept\nbool_data.dd\troundtrip(Bool)\n")
        assert main(["corpus", str(manifest), "--workers", "1"]) == EXIT_OK
        assert "2 passed, 0 failed" in capsys.readouterr().out

    def test_failing_manifest(self, listing, tmp_path, capsys):
        """Test a failed expectation sets the exit status."""
        listing("bool_data.dd")
        manifest = tmp_path / "manifest.tsv"
        manifest.write_text("bool_data.dd\treject(missing-case)\n")
        assert main(["corpus", "--json", str(manifest)]) == EXIT_DIAGNOSTICS
        report = json.loads(capsys.readouterr().out)
        assert report["failed"] == 1

    def test_missing_manifest(self, tmp_path):
        """Test a manifest that does not exist."""
        assert main(["corpus", str(tmp_path / "none.tsv")]) == EXIT_USAGE


class TestUsage:
    """Tests for argument errors."""

    def test_unknown_command(self):
        """Test an unknown subcommand exits with the usage status."""
        with pytest.raises(SystemExit) as err:
            main(["explode"])
        assert err.value.code == EXIT_USAGE

    def test_no_command(self):
        """Test a missing subcommand."""
        with pytest.raises(SystemExit) as err:
            main([])
        assert err.value.code == EXIT_USAGE
