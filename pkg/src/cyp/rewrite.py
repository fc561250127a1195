"""First-order matching and validation of single rewrite steps."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .diagnostics import CypError, Diagnostic
from .syntax import (
    App,
    ByDef,
    ByHole,
    ByRule,
    Ellipsis,
    Hole,
    Link,
    Prop,
    SchematicVar,
    Term,
    Type,
    has_hole,
    hole_match,
    replace_at,
    schematic_vars,
    substitute,
    subterm_positions,
)
from .typecheck import TypeEnv, check_rule_application_types

ORIGINS = ("def", "axiom", "lemma", "assumption", "ih")


@dataclass(frozen=True)
class Rule:
    name: str
    origin: str
    prop: Prop


@dataclass
class RuleEnv:
    definitions: dict[str, list[Rule]] = field(default_factory=dict)
    named: dict[str, Rule] = field(default_factory=dict)

    def with_rules(self, *rules: Rule) -> "RuleEnv":
        named = dict(self.named)
        for r in rules:
            named[r.name] = r
        return RuleEnv(self.definitions, named)


@dataclass(frozen=True)
class Valid:
    pass


@dataclass(frozen=True)
class ValidIncomplete:
    reason: str  # hole-in-term | hole-link | ellipsis


@dataclass(frozen=True)
class Invalid:
    diagnostic: Diagnostic


StepVerdict = Valid | ValidIncomplete | Invalid


def _match(p: Term, t: Term, s: dict[str, Term], lenient: bool) -> bool:
    if lenient and isinstance(t, Hole):
        return True
    match p:
        case SchematicVar(n):
            if n in s:
                return hole_match(s[n], t) if lenient else s[n] == t
            s[n] = t
            return True
        case Hole():
            # a hole inside a rule (unfinished definition) matches anything
            return True
        case App(pf, pa):
            return (
                isinstance(t, App)
                and _match(pf, t.fn, s, lenient)
                and _match(pa, t.arg, s, lenient)
            )
    return p == t


def match_pattern(pattern: Term, t: Term) -> dict[str, Term] | None:
    """Substitution ``s`` with ``substitute(pattern, s) == t``, or None."""
    s: dict[str, Term] = {}
    return s if _match(pattern, t, s, False) else None


def _candidates(prop: Prop, a: Term, b: Term) -> Iterator[dict[str, Term]]:
    """All substitutions under which one application of ``prop`` turns a into b."""
    for src, tgt in ((prop.lhs, prop.rhs), (prop.rhs, prop.lhs)):
        for pos, sub in subterm_positions(a):
            if has_hole(sub):
                continue
            s = match_pattern(src, sub)
            if s is None:
                continue
            result = replace_at(a, pos, substitute(tgt, s))
            if schematic_vars(result):
                # variables only on the target side are fixed by the result
                s = dict(s)
                if not _match(result, b, s, True):
                    continue
            elif not hole_match(result, b):
                continue
            yield s


def _try_rule(
    rule: Rule,
    a: Term,
    b: Term,
    env: TypeEnv,
    assumptions: Mapping[str, Type],
    type_errors: list[CypError],
) -> bool:
    for s in _candidates(rule.prop, a, b):
        try:
            check_rule_application_types(rule.prop, s, env, assumptions, rule.name)
        except CypError as e:
            type_errors.append(e)
            continue
        return True
    return False


def rule_rewrites(
    rule: Rule,
    a: Term,
    b: Term,
    env: TypeEnv,
    assumptions: Mapping[str, Type],
) -> bool:
    return _try_rule(rule, a, b, env, assumptions, [])


def _link_rules(rules: RuleEnv, link: Link) -> list[Rule] | None:
    match link:
        case ByDef(n):
            return rules.definitions.get(n)
        case ByRule(n):
            r = rules.named.get(n)
            return None if r is None else [r]
    return []


def check_step(
    rules: RuleEnv,
    t1: Term,
    link: Link,
    t2: Term,
    env: TypeEnv,
    assumptions: Mapping[str, Type],
) -> StepVerdict:
    if isinstance(link, Ellipsis):
        return ValidIncomplete("ellipsis")
    if isinstance(link, ByHole):
        return ValidIncomplete("hole-link")
    candidates = _link_rules(rules, link)
    if candidates is None:
        what = "definition of" if isinstance(link, ByDef) else "rule"
        return Invalid(
            Diagnostic(f"unknown {what} '{link.name}'", _spans(link.span), "proof")
        )
    if has_hole(t1) or has_hole(t2):
        return ValidIncomplete("hole-in-term")
    type_errors: list[CypError] = []
    for r in candidates:
        if _try_rule(r, t1, t2, env, assumptions, type_errors):
            return Valid()
    if type_errors:
        return Invalid(type_errors[0].diagnostic)
    if isinstance(link, ByDef):
        msg = f"no equation of '{link.name}' rewrites the previous term into this one"
    else:
        msg = f"rule '{link.name}' does not rewrite the previous term into this one"
    return Invalid(Diagnostic(msg, _spans(link.span, t1.span, t2.span), "proof"))


def _spans(*spans):
    return tuple(s for s in spans if s is not None)
