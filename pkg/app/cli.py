"""
Command-line driver
"""
import argparse
import logging
import logging.config
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from app.config import CORPUS_WORKERS, LOGGING_CONFIG
from app.lang.errors import DiagnosticError, TransformError, XfuncVerificationError
from app.models.diagnostic import Diagnostic
from app.models.program import RunStatus
from app.services.corpus import CorpusRunner, ManifestError, load_manifest
from app.services.toolchain import toolchain

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DIAGNOSTICS = 1
EXIT_BUDGET = 2
EXIT_STUCK = 3
EXIT_TRANSFORM = 4
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class ArgumentParser(argparse.ArgumentParser):
    """argparse parser that exits with the usage status"""

    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(EXIT_USAGE)


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    parser = ArgumentParser(prog="dualdata", description="Typecheck, run and transform dualdata programs.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log pipeline progress to stderr")
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")
    commands.required = True

    def program_command(name: str, help: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help)
        sub.add_argument("file", type=Path, help="source file")
        sub.add_argument("--no-prelude", dest="prelude", action="store_false",
                         help="do not put the bundled prelude in scope")
        sub.add_argument("--json", action="store_true", help="print diagnostics as JSON lines")
        return sub

    sub = program_command("check", "typecheck a program")
    sub.add_argument("--fuel", type=int, help="normalization budget per conversion check")

    sub = program_command("run", "evaluate an expression in a program")
    sub.add_argument("--expr", required=True, help="closed expression to evaluate")
    sub.add_argument("--fuel", type=int, help="maximum number of evaluation steps")

    sub = program_command("lift", "lift local matches and comatches to the top level")
    sub.add_argument("-o", "--out", type=Path, help="write the result here instead of stdout")

    sub = program_command("xfunc", "defunctionalize or refunctionalize a type")
    sub.add_argument("--type", dest="type_name", required=True, help="data or codata type to transform")
    sub.add_argument("--fuel", type=int, help="normalization budget per conversion check")
    sub.add_argument("-o", "--out", type=Path, help="write the result here instead of stdout")

    sub = program_command("fmt", "pretty-print a program")
    sub.add_argument("-o", "--out", type=Path, help="write the result here instead of stdout")

    sub = commands.add_parser("corpus", help="run a corpus manifest")
    sub.add_argument("manifest", type=Path, help="manifest file")
    sub.add_argument("--workers", type=int, default=CORPUS_WORKERS, help="entries checked in parallel")
    sub.add_argument("--fuel", type=int, help="maximum number of evaluation steps per entry")
    sub.add_argument("--json", action="store_true", help="print the report as JSON")

    return parser.parse_args(argv)


def _read(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror or e}")


def _report(diagnostics: List[Diagnostic], as_json: bool) -> None:
    for diagnostic in diagnostics:
        if as_json:
            print(diagnostic.to_json_line())
        else:
            print(diagnostic.render(), file=sys.stderr)


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def cmd_check(args: argparse.Namespace) -> int:
    result = toolchain.check_result(_read(args.file), str(args.file), args.prelude, args.fuel)
    if not result.ok:
        _report(result.diagnostics, args.json)
        return EXIT_DIAGNOSTICS
    if not args.json:
        print(f"{args.file}: ok ({result.declarations} declarations)")
    return EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    result = toolchain.run(_read(args.file), args.expr, str(args.file), args.prelude, args.fuel)
    if args.json:
        print(result.model_dump_json())
    elif result.status == RunStatus.VALUE:
        print(result.value)
    elif result.status == RunStatus.STUCK:
        print(f"stuck: {result.reason}: {result.term}", file=sys.stderr)
    else:
        print(f"budget exhausted after {result.steps} steps", file=sys.stderr)
    return {
        RunStatus.VALUE: EXIT_OK,
        RunStatus.BUDGET_EXHAUSTED: EXIT_BUDGET,
        RunStatus.STUCK: EXIT_STUCK,
    }[result.status]


def cmd_lift(args: argparse.Namespace) -> int:
    _emit(toolchain.lift(_read(args.file), str(args.file), args.prelude), args.out)
    return EXIT_OK


def cmd_xfunc(args: argparse.Namespace) -> int:
    try:
        source, report = toolchain.xfunc(_read(args.file), args.type_name, str(args.file), args.prelude, args.fuel)
    except TransformError as e:
        print(f"dualdata: cannot transform {args.type_name}: {e}", file=sys.stderr)
        return EXIT_DIAGNOSTICS
    _emit(source, args.out)
    logger.info(f"{report.direction.value} {report.type_name}: {report.cells} clauses moved")
    return EXIT_OK


def cmd_fmt(args: argparse.Namespace) -> int:
    _emit(toolchain.fmt(_read(args.file), str(args.file), args.prelude), args.out)
    return EXIT_OK


def cmd_corpus(args: argparse.Namespace) -> int:
    try:
        entries = load_manifest(args.manifest)
    except ManifestError as e:
        raise UsageError(str(e))
    report = CorpusRunner(workers=args.workers, fuel=args.fuel).run(entries)
    if args.json:
        print(report.model_dump_json(indent=2))
    else:
        for entry in report.entries:
            status = "PASS" if entry.passed else "FAIL"
            line = f"{status}  {entry.file}  {entry.expectation}"
            if entry.detail:
                line += f"  -- {entry.detail}"
            print(line)
        print(f"{report.passed} passed, {report.failed} failed")
    return EXIT_OK if report.ok else EXIT_DIAGNOSTICS


COMMANDS = {
    "check": cmd_check,
    "run": cmd_run,
    "lift": cmd_lift,
    "xfunc": cmd_xfunc,
    "fmt": cmd_fmt,
    "corpus": cmd_corpus,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = parse_args(argv)
    logging.config.dictConfig(LOGGING_CONFIG)
    if not args.verbose:
        logging.getLogger("app").setLevel(logging.WARNING)
    try:
        return COMMANDS[args.command](args)
    except UsageError as e:
        print(f"dualdata: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except DiagnosticError as e:
        _report(e.diagnostics, getattr(args, "json", False))
        return EXIT_DIAGNOSTICS
    except XfuncVerificationError as e:
        print(f"dualdata: {e}", file=sys.stderr)
        if e.report is not None:
            print(e.report.model_dump_json())
        _report(e.diagnostics, getattr(args, "json", False))
        return EXIT_TRANSFORM


if __name__ == "__main__":
    sys.exit(main())
