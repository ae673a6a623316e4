"""
Corpus manifest loading and execution
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from app.config import CORPUS_WORKERS
from app.lang.checker import check_program
from app.lang.errors import DiagnosticError, LangError
from app.lang.evaluator import BudgetExhausted, Evaluated, Stuck
from app.lang.parser import parse_expression
from app.lang.printer import print_expr
from app.lang.syntax import alpha_equal, program_equivalent
from app.lang.xfunc import eligible_types, transpose
from app.models.diagnostic import DiagnosticCode
from app.models.program import CorpusEntryResult, CorpusReport
from app.services.toolchain import Toolchain, toolchain as default_toolchain

logger = logging.getLogger(__name__)

EXPECTATIONS = ("accept", "reject", "roundtrip", "evaluate")
ALL_TYPES = "*"


class ManifestError(LangError):
    """The manifest is malformed or names a missing file"""


@dataclass(frozen=True)
class Expectation:
    kind: str
    args: Tuple[str, ...] = ()

    def __str__(self) -> str:
        if not self.args and self.kind == "accept":
            return self.kind
        return f"{self.kind}({', '.join(self.args)})"


@dataclass(frozen=True)
class ManifestEntry:
    file: Path
    expectation: Expectation
    prelude: bool = True


def split_top_level(text: str) -> List[str]:
    """Split on commas that are not nested inside brackets."""
    parts, depth, current = [], 0, []
    for ch in text:
        if ch in "({":
            depth += 1
        elif ch in ")}":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(current).strip())
            current = []
        else:
            current.append(ch)
    tail = "".join(current).strip()
    if tail or parts:
        parts.append(tail)
    return parts


def parse_expectation(text: str) -> Expectation:
    """
    Parse `accept`, `reject(code)`, `roundtrip(T, ...)`, `roundtrip(*)`
    or `evaluate(expr, value)`.

    Raises:
        ManifestError: on an unknown or malformed expectation
    """
    text = text.strip()
    if text == "accept":
        return Expectation("accept")
    kind, paren, rest = text.partition("(")
    kind = kind.strip()
    if kind not in EXPECTATIONS or not paren or not rest.endswith(")"):
        raise ManifestError(f"malformed expectation '{text}'")
    args = tuple(split_top_level(rest[:-1]))
    if kind == "reject":
        if len(args) != 1:
            raise ManifestError(f"reject takes one diagnostic code: '{text}'")
        try:
            DiagnosticCode(args[0])
        except ValueError:
            raise ManifestError(f"unknown diagnostic code '{args[0]}'")
    elif kind == "evaluate" and len(args) != 2:
        raise ManifestError(f"evaluate takes an expression and a value: '{text}'")
    elif kind == "roundtrip" and not args:
        raise ManifestError(f"roundtrip needs at least one type: '{text}'")
    return Expectation(kind, args)


def parse_manifest(text: str, base: Path) -> List[ManifestEntry]:
    """
    Parse manifest lines of the form `FILE<TAB>EXPECTATION[<TAB>no-prelude]`.
    Blank lines and lines starting with `#` are ignored.
    """
    entries = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.rstrip()
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) not in (2, 3) or (len(fields) == 3 and fields[2].strip() != "no-prelude"):
            raise ManifestError(f"line {lineno}: expected FILE<TAB>EXPECTATION[<TAB>no-prelude]")
        path = base / fields[0].strip()
        if not path.is_file():
            raise ManifestError(f"line {lineno}: no such corpus file '{fields[0].strip()}'")
        try:
            expectation = parse_expectation(fields[1])
        except ManifestError as e:
            raise ManifestError(f"line {lineno}: {e}")
        entries.append(ManifestEntry(path, expectation, len(fields) == 2))
    return entries


def load_manifest(path: Path) -> List[ManifestEntry]:
    path = Path(path)
    if not path.is_file():
        raise ManifestError(f"no such manifest '{path}'")
    entries = parse_manifest(path.read_text(encoding="utf-8"), path.parent)
    logger.info(f"Loaded {len(entries)} corpus entries from {path}")
    return entries


class CorpusRunner:
    """Checks manifest expectations, one isolated pipeline per entry"""

    def __init__(self, tools: Optional[Toolchain] = None, workers: int = CORPUS_WORKERS,
                 fuel: Optional[int] = None):
        self.tools = tools or default_toolchain
        self.workers = max(1, workers)
        self.fuel = fuel

    def _accept(self, entry: ManifestEntry, source: str) -> Optional[str]:
        try:
            self.tools.check(source, str(entry.file), entry.prelude)
        except DiagnosticError as e:
            return "; ".join(d.render() for d in e.diagnostics)
        return None

    def _reject(self, entry: ManifestEntry, source: str) -> Optional[str]:
        code = entry.expectation.args[0]
        try:
            self.tools.check(source, str(entry.file), entry.prelude)
        except DiagnosticError as e:
            codes = [d.code.value for d in e.diagnostics]
            if code in codes:
                return None
            return f"rejected with {', '.join(codes)} instead of {code}"
        return f"accepted, expected {code}"

    def _roundtrip(self, entry: ManifestEntry, source: str) -> Optional[str]:
        typed = self.tools.check(source, str(entry.file), entry.prelude)
        names = entry.expectation.args
        if names == (ALL_TYPES,):
            names = tuple(eligible_types(typed.program))
        for name in names:
            once, _ = transpose(typed, name, verify=False)
            twice, _ = transpose(check_program(once), name, verify=False)
            if not program_equivalent(twice, typed.program):
                return f"transposing {name} twice does not give back the program"
        return None

    def _evaluate(self, entry: ManifestEntry, source: str) -> Optional[str]:
        expr, expected = entry.expectation.args
        typed = self.tools.check(source, str(entry.file), entry.prelude)
        result = self.tools.evaluate(typed, expr, self.fuel)
        match result:
            case Evaluated(value, _):
                want = parse_expression(expected, typed.program)
                if alpha_equal(value, want):
                    return None
                return f"{expr} evaluated to {print_expr(value)}, expected {expected}"
            case BudgetExhausted(steps, _):
                return f"{expr} did not finish within {steps} steps"
            case Stuck(reason, _):
                return f"{expr} is stuck: {reason}"
        return f"unexpected result {result!r}"

    def run_entry(self, entry: ManifestEntry) -> CorpusEntryResult:
        check = {
            "accept": self._accept,
            "reject": self._reject,
            "roundtrip": self._roundtrip,
            "evaluate": self._evaluate,
        }[entry.expectation.kind]
        try:
            detail = check(entry, entry.file.read_text(encoding="utf-8"))
        except DiagnosticError as e:
            detail = "; ".join(d.render() for d in e.diagnostics)
        except LangError as e:
            detail = str(e)
        except Exception as e:
            logger.error(f"Corpus entry {entry.file.name} raised: {e}")
            detail = f"internal error: {e}"
        return CorpusEntryResult(
            file=entry.file.name,
            expectation=str(entry.expectation),
            passed=detail is None,
            detail=detail,
        )

    def run(self, entries: Sequence[ManifestEntry]) -> CorpusReport:
        """
        Run every entry; results keep manifest order.

        Args:
            entries: Parsed manifest entries

        Returns:
            CorpusReport with per-entry results and totals
        """
        self.tools.load_prelude()
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            results = list(pool.map(self.run_entry, entries))
        passed = sum(1 for r in results if r.passed)
        report = CorpusReport(entries=results, passed=passed, failed=len(results) - passed)
        logger.info(f"Corpus: {report.passed} passed, {report.failed} failed")
        return report


def run_corpus(entries: Sequence[ManifestEntry], workers: int = CORPUS_WORKERS,
               fuel: Optional[int] = None) -> CorpusReport:
    return CorpusRunner(workers=workers, fuel=fuel).run(entries)
