"""The whole pipeline: parse, match against a blueprint, resolve, type, prove."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .blueprint import match_module
from .diagnostics import CypError, Diagnostic
from .parser import parse_module, resolve_names
from .proofcheck import FAILED, HoleInfo, LemmaResult, check_module, declaration_holes
from .typecheck import check_module_types

EXIT_OK, EXIT_ERROR, EXIT_INCOMPLETE = 0, 1, 2


@dataclass
class Report:
    file: str
    lemmas: list[LemmaResult] = field(default_factory=list)
    program_holes: list[HoleInfo] = field(default_factory=list)
    diagnostic: Diagnostic | None = None

    @property
    def holes(self) -> list[HoleInfo]:
        out = list(self.program_holes)
        for lr in self.lemmas:
            out.extend(lr.result.holes)
        return out

    def exit_code(self, allow_incomplete: bool = False) -> int:
        if self.diagnostic is not None:
            return EXIT_ERROR
        if self.holes and not allow_incomplete:
            return EXIT_INCOMPLETE
        return EXIT_OK


def check_source(
    source: str,
    file: str = "<input>",
    blueprint: str | None = None,
    blueprint_file: str = "<blueprint>",
) -> Report:
    report = Report(file)
    try:
        module = parse_module(source, file)
        if blueprint is not None:
            module = match_module(parse_module(blueprint, blueprint_file), module)
        module = resolve_names(module)
        env = check_module_types(module)
        report.program_holes = declaration_holes(module)
        report.lemmas = check_module(module, env)
    except CypError as e:
        report.diagnostic = e.diagnostic
        return report
    for lr in report.lemmas:
        if lr.status == FAILED:
            report.diagnostic = lr.result.diagnostic
    return report


def check_file(path: str | Path, blueprint: str | Path | None = None) -> Report:
    path = Path(path)
    bp_text = Path(blueprint).read_text() if blueprint is not None else None
    return check_source(
        path.read_text(), str(path), bp_text, str(blueprint) if blueprint else "<blueprint>"
    )
