"""Error values with source spans, and their rendering."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .syntax import Span

PHASES = ("parse", "resolve", "type", "proof", "match", "file")


@dataclass(frozen=True)
class Diagnostic:
    message: str
    spans: tuple[Span, ...] = ()
    phase: str = "proof"

    def __post_init__(self):
        if self.phase not in PHASES:
            raise ValueError(f"unknown phase {self.phase!r}")


class CypError(Exception):
    """Raised to abort a pipeline stage with a diagnostic."""

    def __init__(self, diagnostic: Diagnostic):
        super().__init__(diagnostic.message)
        self.diagnostic = diagnostic


def error(message: str, *spans: Span | None, phase: str = "proof") -> CypError:
    return CypError(Diagnostic(message, tuple(s for s in spans if s is not None), phase))


def _line_starts(text: str) -> list[int]:
    starts = [0]
    for i, c in enumerate(text):
        if c == "\n":
            starts.append(i + 1)
    return starts


def offset(text: str, pos: tuple[int, int]) -> int:
    starts = _line_starts(text)
    line, col = pos
    line = min(max(line, 1), len(starts))
    return min(starts[line - 1] + col - 1, len(text))


def source_slice(span: Span, text: str) -> str:
    return text[offset(text, span.start) : offset(text, span.end)]


def _render_span(span: Span, text: str | None) -> list[str]:
    out = [f"  --> {span}"]
    if text is None:
        return out
    lo, hi = offset(text, span.start), offset(text, span.end)
    starts = _line_starts(text)
    first = span.start[0]
    for ln in range(first, max(span.end[0], first) + 1):
        if ln > len(starts):
            break
        a = starts[ln - 1]
        b = text.find("\n", a)
        b = len(text) if b < 0 else b
        line = text[a:b]
        u0, u1 = max(lo, a) - a, min(hi, b) - a
        if u1 <= u0 and ln != first:
            continue
        # keep tabs in the underline prefix so carets stay aligned
        pad = "".join(c if c == "\t" else " " for c in line[:u0])
        out.append(f"   | {line}")
        out.append(f"   | {pad}{'^' * max(u1 - u0, 1)}")
    return out


def render(d: Diagnostic, sources: Mapping[str, str]) -> str:
    lines = [f"error ({d.phase}): {d.message}"]
    for s in d.spans:
        lines.extend(_render_span(s, sources.get(s.file)))
    return "\n".join(lines)


def render_machine(d: Diagnostic, default_file: str = "<input>") -> str:
    if d.spans:
        s = d.spans[0]
        loc = f"{s.file}:{s.start[0]}:{s.start[1]}"
    else:
        loc = f"{default_file}:0:0"
    msg = " ".join(d.message.split())
    return f"{loc}: {d.phase}: {msg}"
