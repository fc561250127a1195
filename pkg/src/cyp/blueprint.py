"""Matching a solution against an instructor's blueprint with holes.

The traversal is generic over the AST dataclasses: a node's *root* is its
class together with its atomic fields (names, flags), and its *children* are
its node-valued fields.  Holes in the blueprint accept anything of their
category.  Lists may contain at most one multi-hole (``...``), which absorbs
the middle of the solution list between a positional prefix and suffix.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, is_dataclass
from typing import Sequence

from .diagnostics import CypError, Diagnostic
from .syntax import (
    ByHole,
    CaseHole,
    Chain,
    DeclHole,
    Ellipsis,
    Hole,
    HoleProof,
    Module,
    Span,
    Step,
    Term,
    Type,
)


@dataclass(frozen=True)
class SpanPair:
    blueprint: Span | None = None
    solution: Span | None = None

    def visit(self, b, s) -> "SpanPair":
        bs = getattr(b, "span", None)
        ss = getattr(s, "span", None)
        if bs is None and ss is None:
            return self
        return SpanPair(bs or self.blueprint, ss or self.solution)

    def spans(self) -> tuple[Span, ...]:
        return tuple(x for x in (self.blueprint, self.solution) if x is not None)


class Succeed:
    def __repr__(self) -> str:
        return "Succeed"


class Decline:
    def __repr__(self) -> str:
        return "Decline"


@dataclass(frozen=True)
class Fail:
    diagnostic: Diagnostic


SUCCEED = Succeed()
DECLINE = Decline()
MatchOutcome = Succeed | Decline | Fail

_SINGLE_HOLES = (Hole, ByHole, HoleProof)


def _category(x) -> str:
    if isinstance(x, Term):
        return "Term"
    if isinstance(x, Type):
        return "Type"
    name = type(x).__name__
    if name in ("ByDef", "ByRule", "ByHole", "Ellipsis"):
        return "Link"
    if name in ("Rewriting", "Extensionality", "CaseAnalysis", "Induction", "HoleProof"):
        return "Proof"
    if name in ("Case", "IndCase", "CaseHole"):
        return "Case"
    if name in ("DataDecl", "SigDecl", "FunEquation", "Axiom", "Lemma", "DeclHole"):
        return "Declaration"
    return name


def _is_node(v) -> bool:
    return is_dataclass(v) and not isinstance(v, (Span, type))


# tuple-valued fields holding names rather than nodes
_ATOMIC_TUPLES = frozenset({"params"})


def _children(x):
    for f in fields(x):
        if f.name == "span" or f.name in _ATOMIC_TUPLES:
            continue
        v = getattr(x, f.name)
        if _is_node(v) or isinstance(v, tuple):
            yield f.name


def _root(x) -> tuple:
    kids = set(_children(x))
    atoms = tuple(
        getattr(x, f.name) for f in fields(x) if f.name != "span" and f.name not in kids
    )
    return (type(x).__name__, atoms)


def _describe(x) -> str:
    name, atoms = _root(x)
    shown = []
    for a in atoms:
        if isinstance(a, str):
            shown.append(a)
        elif isinstance(a, tuple):
            shown.extend(a)
        elif a is None:
            shown.append("<anonymous>")
        elif a is True:
            shown.append("(rigid)")
    return " ".join([name, *shown])


def _is_multi_hole(x) -> bool:
    return isinstance(x, (DeclHole, CaseHole)) or (
        isinstance(x, Step) and isinstance(x.link, Ellipsis)
    )


class Matcher:
    def fail(self, message: str, state: SpanPair) -> Fail:
        return Fail(Diagnostic(message, state.spans(), "match"))

    def match_node(self, b, s, state: SpanPair) -> MatchOutcome:
        state = state.visit(b, s)
        for alternative in (self.match_hole, self.match_same):
            out = alternative(b, s, state)
            if not isinstance(out, Decline):
                return out
        return self.fail(
            f"abstract syntax sub-trees of type {_category(b)} have different roots: "
            f"{_describe(b)}, {_describe(s)}",
            state,
        )

    def match_hole(self, b, s, state: SpanPair) -> MatchOutcome:
        if isinstance(b, _SINGLE_HOLES) and _category(b) == _category(s):
            return SUCCEED
        return DECLINE

    def match_same(self, b, s, state: SpanPair) -> MatchOutcome:
        if not (_is_node(b) and _is_node(s)) or _root(b) != _root(s):
            return DECLINE
        if isinstance(b, Chain):
            return self.match_chain(b, s, state)
        for name in _children(b):
            vb, vs = getattr(b, name), getattr(s, name)
            if isinstance(vb, tuple):
                out = self.match_list(vb, vs, state)
            else:
                out = self.match_node(vb, vs, state)
            if isinstance(out, Fail):
                return out
        return SUCCEED

    def _split(self, bs: Sequence, ss: Sequence, state: SpanPair):
        """Positional split around the single multi-hole; a Fail or the pieces."""
        holes = [i for i, x in enumerate(bs) if _is_multi_hole(x)]
        if len(holes) > 1:
            second = bs[holes[1]]
            st = SpanPair(second.span or state.blueprint, state.solution)
            return self.fail(
                "ambiguous blueprint: a list may contain at most one '...'", st
            )
        if not holes:
            if len(bs) != len(ss):
                return self.fail(
                    f"expected {len(bs)} item(s) here as in the blueprint, found {len(ss)}",
                    state,
                )
            return list(zip(bs, ss)), None, None
        k = holes[0]
        prefix, suffix = bs[:k], bs[k + 1 :]
        if len(ss) < len(prefix) + len(suffix):
            return self.fail(
                f"expected at least {len(prefix) + len(suffix)} item(s) here as in the "
                f"blueprint, found {len(ss)}",
                state,
            )
        tail = len(ss) - len(suffix)
        pairs = list(zip(prefix, ss[:k])) + list(zip(suffix, ss[tail:]))
        return pairs, bs[k], list(ss[k:tail])

    def match_list(self, bs: Sequence, ss: Sequence, state: SpanPair) -> MatchOutcome:
        split = self._split(bs, ss, state)
        if isinstance(split, Fail):
            return split
        pairs, _, _ = split
        for b, s in pairs:
            out = self.match_node(b, s, state)
            if isinstance(out, Fail):
                return out
        return SUCCEED

    def match_chain(self, b: Chain, s: Chain, state: SpanPair) -> MatchOutcome:
        out = self.match_node(b.first, s.first, state)
        if isinstance(out, Fail):
            return out
        split = self._split(b.steps, s.steps, state)
        if isinstance(split, Fail):
            return split
        pairs, hole, middle = split
        for bb, ss in pairs:
            out = self.match_node(bb, ss, state)
            if isinstance(out, Fail):
                return out
        if hole is not None:
            # '... .=. t' stands for steps that end in t
            k = b.steps.index(hole)
            if middle:
                end = middle[-1].term
            else:
                end = s.steps[k - 1].term if k > 0 else s.first
            out = self.match_node(hole.term, end, state.visit(hole, None))
            if isinstance(out, Fail):
                return out
        return SUCCEED


def match_node(b, s, state: SpanPair | None = None) -> MatchOutcome:
    return Matcher().match_node(b, s, state or SpanPair())


def match_list(bs: Sequence, ss: Sequence, state: SpanPair | None = None) -> MatchOutcome:
    return Matcher().match_list(bs, ss, state or SpanPair())


def match_module(blueprint: Module, solution: Module) -> Module:
    """Return the solution if it fills the blueprint's holes, else raise."""
    out = Matcher().match_node(blueprint, solution, SpanPair())
    if isinstance(out, Fail):
        raise CypError(out.diagnostic)
    return solution
