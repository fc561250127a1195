"""Command-line entry point.

Verdicts go to stdout, diagnostics to stderr.  Exit codes: 0 when every
lemma is complete, 2 when nothing failed but holes remain, 1 on any error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence, TextIO

from .checker import EXIT_ERROR, Report, check_source
from .diagnostics import Diagnostic, render, render_machine


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cyp", description="Check equational proofs, with holes.")
    p.add_argument(
        "-m",
        dest="blueprint",
        metavar="BLUEPRINT",
        help="match the solution against this blueprint before checking",
    )
    p.add_argument("file", metavar="FILE", help="module to check")
    p.add_argument(
        "--machine",
        action="store_true",
        help="print diagnostics as single 'file:line:col: phase: message' lines",
    )
    p.add_argument(
        "--allow-incomplete",
        action="store_true",
        help="exit 0 instead of 2 when only holes remain",
    )
    return p


def _read(path: str) -> str | Diagnostic:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        reason = e.strerror if isinstance(e, OSError) and e.strerror else str(e)
        return Diagnostic(f"cannot read '{path}': {reason}", (), "file")


def print_report(report: Report, sources: dict[str, str], machine: bool,
                 out: TextIO, err: TextIO) -> None:
    for lr in report.lemmas:
        holes = len(lr.result.holes)
        extra = f" ({holes} hole{'s' if holes != 1 else ''})" if holes else ""
        print(f"{lr.name}: {lr.status}{extra}", file=out)
    for h in report.holes:
        print(f"  {h.span}: {h.kind}", file=out)
    if report.diagnostic is not None:
        d = report.diagnostic
        text = render_machine(d, report.file) if machine else render(d, sources)
        print(text, file=err)


def run(argv: Sequence[str] | None = None, out: TextIO | None = None,
        err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    sources: dict[str, str] = {}
    blueprint = None
    for path in ([args.blueprint] if args.blueprint else []) + [args.file]:
        text = _read(path)
        if isinstance(text, Diagnostic):
            print_report(Report(path, diagnostic=text), {}, args.machine, out, err)
            return EXIT_ERROR
        sources[path] = text
    if args.blueprint:
        blueprint = sources[args.blueprint]
    report = check_source(sources[args.file], args.file, blueprint, args.blueprint or "")
    print_report(report, sources, args.machine, out, err)
    return report.exit_code(args.allow_incomplete)


def main() -> None:
    sys.exit(run())
