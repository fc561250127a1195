"""Abstract syntax for theories and proofs, plus structural term utilities.

Every node carries an optional ``span``.  Spans never take part in equality
or hashing, so two trees that differ only in source positions compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, is_dataclass, replace
from typing import Iterator, Mapping, Union

Position = tuple[int, ...]


@dataclass(frozen=True, order=True)
class Span:
    start: tuple[int, int]  # (line, column), both 1-based
    end: tuple[int, int]  # position just past the last character
    file: str = "<input>"

    def __str__(self) -> str:
        return f"{self.file}:{self.start[0]}:{self.start[1]}-{self.end[0]}:{self.end[1]}"


def _span():
    return field(default=None, compare=False, repr=False, kw_only=True)


# ---------------------------------------------------------------- terms


class Term:
    span: Span | None

    def __str__(self) -> str:
        return show_term(self)


@dataclass(frozen=True, eq=True)
class Hole(Term):
    span: Span | None = _span()


@dataclass(frozen=True)
class Ident(Term):
    """An identifier that has not been through name resolution yet."""

    name: str
    span: Span | None = _span()


@dataclass(frozen=True)
class Const(Term):
    name: str
    span: Span | None = _span()


@dataclass(frozen=True)
class FixedVar(Term):
    name: str
    span: Span | None = _span()


@dataclass(frozen=True)
class SchematicVar(Term):
    name: str
    span: Span | None = _span()


@dataclass(frozen=True)
class App(Term):
    fn: Term
    arg: Term
    span: Span | None = _span()


Substitution = Mapping[str, Term]


def apply(head: Term, *args: Term) -> Term:
    for a in args:
        head = App(head, a)
    return head


def spine(t: Term) -> tuple[Term, list[Term]]:
    """Split ``f a b`` into ``(f, [a, b])``."""
    args: list[Term] = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fn
    args.reverse()
    return t, args


def show_term(t: Term, nested: bool = False) -> str:
    match t:
        case Hole():
            return "_"
        case Ident(n) | Const(n) | FixedVar(n) | SchematicVar(n):
            return n
        case App():
            head, args = spine(t)
            s = " ".join([show_term(head, True)] + [show_term(a, True) for a in args])
            return f"({s})" if nested else s
    raise TypeError(f"not a term: {t!r}")


def subterm_positions(t: Term) -> list[tuple[Position, Term]]:
    out: list[tuple[Position, Term]] = []

    def go(s: Term, path: Position) -> None:
        out.append((path, s))
        if isinstance(s, App):
            go(s.fn, path + (0,))
            go(s.arg, path + (1,))

    go(t, ())
    return out


def subterm_at(t: Term, p: Position) -> Term:
    for i in p:
        if not isinstance(t, App) or i not in (0, 1):
            raise ValueError(f"invalid position {p}")
        t = t.fn if i == 0 else t.arg
    return t


def replace_at(t: Term, p: Position, s: Term) -> Term:
    if not p:
        return s
    if not isinstance(t, App) or p[0] not in (0, 1):
        raise ValueError(f"invalid position {p}")
    if p[0] == 0:
        return replace(t, fn=replace_at(t.fn, p[1:], s))
    return replace(t, arg=replace_at(t.arg, p[1:], s))


def substitute(t: Term, sigma: Substitution) -> Term:
    match t:
        case SchematicVar(n) if n in sigma:
            return sigma[n]
        case App(f, a):
            f2, a2 = substitute(f, sigma), substitute(a, sigma)
            if f2 is f and a2 is a:
                return t
            return replace(t, fn=f2, arg=a2)
    return t


def iter_terms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, App):
        yield from iter_terms(t.fn)
        yield from iter_terms(t.arg)


def holes_in(t: Term) -> list[Hole]:
    return [s for s in iter_terms(t) if isinstance(s, Hole)]


def has_hole(t: Term) -> bool:
    return any(isinstance(s, Hole) for s in iter_terms(t))


def schematic_vars(t: Term) -> set[str]:
    return {s.name for s in iter_terms(t) if isinstance(s, SchematicVar)}


def hole_match(a: Term, b: Term) -> bool:
    if isinstance(a, Hole) or isinstance(b, Hole):
        return True
    if isinstance(a, App) and isinstance(b, App):
        return hole_match(a.fn, b.fn) and hole_match(a.arg, b.arg)
    return a == b


# ---------------------------------------------------------------- types


class Type:
    span: Span | None

    def __str__(self) -> str:
        return show_type(self)


@dataclass(frozen=True)
class TVar(Type):
    name: str
    rigid: bool = False
    span: Span | None = _span()


@dataclass(frozen=True)
class TCon(Type):
    name: str
    args: tuple[Type, ...] = ()
    span: Span | None = _span()


@dataclass(frozen=True)
class Fun(Type):
    arg: Type
    res: Type
    span: Span | None = _span()


def show_type(t: Type, prec: int = 0) -> str:
    match t:
        case TVar(n):
            return n
        case TCon(n, ()):
            return n
        case TCon(n, args):
            s = " ".join([n] + [show_type(a, 2) for a in args])
            return f"({s})" if prec >= 2 else s
        case Fun(a, r):
            s = f"{show_type(a, 1)} -> {show_type(r, 0)}"
            return f"({s})" if prec >= 1 else s
    raise TypeError(f"not a type: {t!r}")


def type_vars(t: Type) -> list[str]:
    """Type variable names in order of first occurrence."""
    out: list[str] = []

    def go(s: Type) -> None:
        match s:
            case TVar(n):
                if n not in out:
                    out.append(n)
            case TCon(_, args):
                for a in args:
                    go(a)
            case Fun(a, r):
                go(a)
                go(r)

    go(t)
    return out


def fun_type(args: list[Type], res: Type) -> Type:
    for a in reversed(args):
        res = Fun(a, res)
    return res


# ---------------------------------------------------------------- propositions


@dataclass(frozen=True)
class Binder:
    name: str
    type: Type
    span: Span | None = _span()


@dataclass(frozen=True)
class Prop:
    binders: tuple[Binder, ...]
    lhs: Term
    rhs: Term
    span: Span | None = _span()

    def __str__(self) -> str:
        s = f"{self.lhs} .=. {self.rhs}"
        if self.binders:
            bs = ", ".join(f"{b.name} :: {b.type}" for b in self.binders)
            s = f"forall {bs} : {s}"
        return s


def _types_alpha(a: Type, b: Type, ren: dict[str, str], back: dict[str, str]) -> bool:
    match a, b:
        case TVar(x, r1), TVar(y, r2):
            if r1 != r2:
                return False
            if ren.setdefault(x, y) != y or back.setdefault(y, x) != x:
                return False
            return True
        case TCon(n, xs), TCon(m, ys):
            return n == m and len(xs) == len(ys) and all(
                _types_alpha(x, y, ren, back) for x, y in zip(xs, ys)
            )
        case Fun(a1, r1), Fun(a2, r2):
            return _types_alpha(a1, a2, ren, back) and _types_alpha(r1, r2, ren, back)
    return False


def alpha_equal(a: Prop, b: Prop) -> bool:
    """Equality of propositions up to renaming of bound variables.

    Binders are paired by their occurrences in the equation, so independent
    binders may appear in a different order.  Binder types must agree up to a
    consistent renaming of type variables.
    """
    if len(a.binders) != len(b.binders):
        return False
    bound_a = {x.name for x in a.binders}
    bound_b = {x.name for x in b.binders}
    ren: dict[str, str] = {}
    back: dict[str, str] = {}

    def terms(s: Term, t: Term) -> bool:
        match s, t:
            case SchematicVar(x), SchematicVar(y) if x in bound_a and y in bound_b:
                return ren.setdefault(x, y) == y and back.setdefault(y, x) == x
            case SchematicVar(x), _ if x in bound_a:
                return False
            case _, SchematicVar(y) if y in bound_b:
                return False
            case App(f1, x1), App(f2, x2):
                return terms(f1, f2) and terms(x1, x2)
        return s == t

    if not (terms(a.lhs, b.lhs) and terms(a.rhs, b.rhs)):
        return False
    # binders that do not occur in the body pair up in order
    rest_a = [x.name for x in a.binders if x.name not in ren]
    rest_b = [y.name for y in b.binders if y.name not in back]
    for x, y in zip(rest_a, rest_b):
        ren[x] = y
    types_a = {x.name: x.type for x in a.binders}
    types_b = {y.name: y.type for y in b.binders}
    tren: dict[str, str] = {}
    tback: dict[str, str] = {}
    return all(_types_alpha(types_a[x], types_b[y], tren, tback) for x, y in ren.items())


# ---------------------------------------------------------------- proofs


@dataclass(frozen=True)
class ByDef:
    name: str
    span: Span | None = _span()


@dataclass(frozen=True)
class ByRule:
    name: str
    span: Span | None = _span()


@dataclass(frozen=True)
class ByHole:
    span: Span | None = _span()


@dataclass(frozen=True)
class Ellipsis:
    span: Span | None = _span()


Link = Union[ByDef, ByRule, ByHole, Ellipsis]


@dataclass(frozen=True)
class Step:
    link: Link
    term: Term
    span: Span | None = _span()


@dataclass(frozen=True)
class Chain:
    first: Term
    steps: tuple[Step, ...]
    span: Span | None = _span()

    def terms(self) -> list[Term]:
        return [self.first] + [s.term for s in self.steps]


@dataclass(frozen=True)
class Assumption:
    name: str
    prop: Prop
    span: Span | None = _span()


@dataclass(frozen=True)
class CaseHole:
    """``...`` standing for any number of further cases."""

    span: Span | None = _span()


@dataclass(frozen=True)
class Case:
    pattern: Term
    assumption: Assumption
    sub: "Proof"
    span: Span | None = _span()


@dataclass(frozen=True)
class IndCase:
    pattern: Term
    fixes: tuple[Binder, ...]
    ihs: tuple[Assumption, ...]
    generalized: tuple[Binder, ...]
    shown: Prop
    sub: "Proof"
    span: Span | None = _span()


@dataclass(frozen=True)
class Rewriting:
    chain: Chain
    span: Span | None = _span()


@dataclass(frozen=True)
class Extensionality:
    var: Binder
    shown: Prop
    sub: "Proof"
    span: Span | None = _span()


@dataclass(frozen=True)
class CaseAnalysis:
    scrutinee: Term
    type: Type
    cases: tuple[Case | CaseHole, ...]
    span: Span | None = _span()

    @property
    def case_hole(self) -> bool:
        return any(isinstance(c, CaseHole) for c in self.cases)


@dataclass(frozen=True)
class Induction:
    var: Binder
    generalizing: tuple[Binder, ...]
    cases: tuple[IndCase | CaseHole, ...]
    span: Span | None = _span()

    @property
    def case_hole(self) -> bool:
        return any(isinstance(c, CaseHole) for c in self.cases)


@dataclass(frozen=True)
class HoleProof:
    span: Span | None = _span()


Proof = Union[Rewriting, Extensionality, CaseAnalysis, Induction, HoleProof]


# ---------------------------------------------------------------- declarations


@dataclass(frozen=True)
class ConDecl:
    name: str
    args: tuple[Type, ...]
    span: Span | None = _span()


@dataclass(frozen=True)
class DataDecl:
    name: str
    params: tuple[str, ...]
    constructors: tuple[ConDecl, ...]
    span: Span | None = _span()


@dataclass(frozen=True)
class SigDecl:
    name: str
    type: Type
    span: Span | None = _span()


@dataclass(frozen=True)
class FunEquation:
    lhs: Term
    rhs: Term
    span: Span | None = _span()

    @property
    def head(self) -> str:
        h, _ = spine(self.lhs)
        return h.name  # type: ignore[attr-defined]

    @property
    def patterns(self) -> list[Term]:
        return spine(self.lhs)[1]


@dataclass(frozen=True)
class Axiom:
    name: str
    prop: Prop
    span: Span | None = _span()


@dataclass(frozen=True)
class Lemma:
    name: str | None
    prop: Prop
    proof: Proof
    span: Span | None = _span()


@dataclass(frozen=True)
class DeclHole:
    """``...`` at declaration level: any run of further declarations."""

    span: Span | None = _span()


Decl = Union[DataDecl, SigDecl, FunEquation, Axiom, Lemma, DeclHole]


@dataclass(frozen=True)
class Module:
    decls: tuple[Decl, ...]
    span: Span | None = _span()

    def lemmas(self) -> list[Lemma]:
        return [d for d in self.decls if isinstance(d, Lemma)]


def lemma_name(lemma: Lemma, index: int) -> str:
    """Display name; anonymous lemmas are numbered from 1 in file order."""
    return lemma.name if lemma.name is not None else f"lemma_{index}"


def strip_spans(node):
    """Copy of an AST with every span removed."""
    if isinstance(node, tuple):
        return tuple(strip_spans(x) for x in node)
    if not is_dataclass(node) or isinstance(node, Span):
        return node
    changes = {}
    for f in fields(node):
        v = getattr(node, f.name)
        if f.name == "span":
            if v is not None:
                changes["span"] = None
        else:
            w = strip_spans(v)
            if w is not v:
                changes[f.name] = w
    return replace(node, **changes) if changes else node
