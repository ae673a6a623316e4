"""
Tests for the corpus manifest and runner
"""
import pytest

from app.services.corpus import (
    CorpusRunner,
    Expectation,
    ManifestError,
    load_manifest,
    parse_expectation,
    parse_manifest,
    split_top_level,
)
from tests.conftest import CORPUS_DIR, MANIFEST


class TestExpectations:
    """Tests for parsing manifest expectations."""

    def test_accept(self):
        """Test the bare accept expectation."""
        assert parse_expectation("accept") == Expectation("accept")

    def test_reject(self):
        """Test a rejection names a diagnostic code."""
        assert parse_expectation("reject(missing-case)") == Expectation("reject", ("missing-case",))

    def test_unknown_code(self):
        """Test an unknown diagnostic code is refused."""
        with pytest.raises(ManifestError):
            parse_expectation("reject(no-such-code)")

    def test_evaluate_nested_commas(self):
        """Test commas inside arguments do not split the expectation."""
        e = parse_expectation("evaluate(MkPair(A, B).fst(A, B), A)")
        assert e.args == ("MkPair(A, B).fst(A, B)", "A")

    def test_evaluate_arity(self):
        """Test evaluate needs exactly an expression and a value."""
        with pytest.raises(ManifestError):
            parse_expectation("evaluate(Z)")

    def test_malformed(self):
        """Test unknown kinds and missing parentheses are refused."""
        for text in ("accepted", "roundtrip", "roundtrip()", "explode(x)"):
            with pytest.raises(ManifestError):
                parse_expectation(text)

    def test_split_top_level(self):
        """Test splitting at top-level commas only."""
        assert split_top_level("a, f(b, c), { d, e }") == ["a", "f(b, c)", "{ d, e }"]

    def test_render(self):
        """Test expectations print as written."""
        assert str(Expectation("roundtrip", ("Nat", "Bool"))) == "roundtrip(Nat, Bool)"
        assert str(Expectation("accept")) == "accept"


class TestManifest:
    """Tests for reading manifests."""

    def test_bundled_manifest(self, manifest):
        """Test the bundled manifest covers every kind of expectation."""
        kinds = {e.expectation.kind for e in manifest}
        assert kinds == {"accept", "reject", "roundtrip", "evaluate"}
        assert all(e.file.parent == CORPUS_DIR for e in manifest)

    def test_every_listing_is_used(self, manifest):
        """Test each corpus file appears in the manifest."""
        used = {e.file.name for e in manifest}
        assert used == {p.name for p in CORPUS_DIR.glob("*.dd")}

    def test_comments_and_prelude_flag(self, tmp_path):
        """Test comments are skipped and the prelude flag is read."""
        (tmp_path / "a.dd").write_text("data A { X }\n")
        entries = parse_manifest("# header\n\na.dd\taccept\na.dd\taccept\tno-prelude\n", tmp_path)
        assert [e.prelude for e in entries] == [True, False]

    def test_missing_file(self, tmp_path):
        """Test a manifest line naming a missing file."""
        with pytest.raises(ManifestError, match="line 1"):
            parse_manifest("missing.dd\taccept\n", tmp_path)

    def test_bad_columns(self, tmp_path):
        """Test a line without a tab separator."""
        (tmp_path / "a.dd").write_text("data A { X }\n")
        with pytest.raises(ManifestError):
            parse_manifest("a.dd accept\n", tmp_path)

    def test_missing_manifest(self, tmp_path):
        """Test loading a manifest that does not exist."""
        with pytest.raises(ManifestError):
            load_manifest(tmp_path / "nope.tsv")


class TestRunner:
    """Tests for running manifest expectations."""

    def test_bundled_corpus_passes(self, tools):
        """Test every expectation of the bundled manifest holds."""
        report = CorpusRunner(tools, workers=4).run(load_manifest(MANIFEST))
        failures = [(e.file, e.expectation, e.detail) for e in report.entries if not e.passed]
        assert failures == []
        assert report.ok
        assert report.passed == len(report.entries)

    def test_failures_are_reported(self, tools, tmp_path):
        """Test unmet expectations fail without stopping the run."""
        (tmp_path / "b.dd").write_text("data B { T, F }\ndef B.not: B { T => F, F => T }\n")
        manifest = tmp_path / "manifest.tsv"
        manifest.write_text(
            "b.dd\taccept\n"
            "b.dd\treject(missing-case)\n"
            "b.dd\tevaluate(T.not, T)\n"
            "b.dd\tevaluate(T.not, F)\n"
            "b.dd\troundtrip(*)\n"
        )
        report = CorpusRunner(tools, workers=1).run(load_manifest(manifest))
        assert [e.passed for e in report.entries] == [True, False, False, True, True]
        assert report.entries[1].detail == "accepted, expected missing-case"
        assert "expected T" in report.entries[2].detail
        assert (report.passed, report.failed) == (3, 2)
        assert not report.ok

    def test_order_kept_with_workers(self, tools, manifest):
        """Test parallel runs keep manifest order."""
        entries = manifest[:12]
        report = CorpusRunner(tools, workers=3).run(entries)
        assert [r.file for r in report.entries] == [e.file.name for e in entries]
