"""Test helpers: corpus access, independent oracles, random generators, unparser."""

from __future__ import annotations

import itertools
import random
from pathlib import Path

from cyp.parser import FIXED, SCHEMATIC, parse_module, parse_term, resolve_names, resolve_term
from cyp.syntax import (
    App,
    ByDef,
    ByHole,
    ByRule,
    Case,
    CaseAnalysis,
    CaseHole,
    Chain,
    Const,
    DataDecl,
    DeclHole,
    Ellipsis,
    Extensionality,
    FixedVar,
    Fun,
    FunEquation,
    Hole,
    HoleProof,
    Ident,
    IndCase,
    Induction,
    Lemma,
    Axiom,
    Module,
    Prop,
    Rewriting,
    SchematicVar,
    SigDecl,
    TCon,
    TVar,
    Term,
    Type,
)
from cyp.typecheck import check_module_types

CORPUS = Path(__file__).parent / "corpus"


def corpus(name: str) -> str:
    return (CORPUS / name).read_text()


def load(source: str):
    """Parse, resolve and type a module; returns (module, env)."""
    m = resolve_names(parse_module(source))
    return m, check_module_types(m)


def term(text: str, m: Module, fixed=(), schematic=()) -> Term:
    scope = {n: FIXED for n in fixed} | {n: SCHEMATIC for n in schematic}
    return resolve_term(parse_term(text), m, scope)


# ------------------------------------------------------------ rewrite oracle


def _positions(t: Term, path=()):
    yield path, t
    if isinstance(t, App):
        yield from _positions(t.fn, path + (0,))
        yield from _positions(t.arg, path + (1,))


def _at(t: Term, path):
    for i in path:
        if not isinstance(t, App):
            return None
        t = t.fn if i == 0 else t.arg
    return t


def _put(t: Term, path, s: Term) -> Term:
    if not path:
        return s
    if path[0] == 0:
        return App(_put(t.fn, path[1:], s), t.arg)
    return App(t.fn, _put(t.arg, path[1:], s))


def _bind(p: Term, t: Term, sigma: dict) -> bool:
    if isinstance(p, SchematicVar):
        if p.name in sigma:
            return sigma[p.name] == t
        sigma[p.name] = t
        return True
    if isinstance(p, App):
        return isinstance(t, App) and _bind(p.fn, t.fn, sigma) and _bind(p.arg, t.arg, sigma)
    return p == t


def _inst(p: Term, sigma: dict) -> Term:
    if isinstance(p, SchematicVar):
        return sigma[p.name]
    if isinstance(p, App):
        return App(_inst(p.fn, sigma), _inst(p.arg, sigma))
    return p


def oracle_rewrites(lhs: Term, rhs: Term, a: Term, b: Term) -> bool:
    """Brute force: every position of a, both orientations, syntactic comparison.

    Variables occurring only on the target side are bound by matching the
    target against the corresponding subterm of b.
    """
    for src, tgt in ((lhs, rhs), (rhs, lhs)):
        for path, sub in _positions(a):
            sigma: dict = {}
            if not _bind(src, sub, sigma):
                continue
            there = _at(b, path)
            if there is None:
                continue
            if _put(b, path, Hole()) != _put(a, path, Hole()):
                continue
            full = dict(sigma)
            if _bind(tgt, there, full) and all(map(saturated, full.values())):
                return True
    return False


def saturated(t: Term) -> bool:
    """Well-typed at the single sort of SIG3: every constructor fully applied."""
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fn
    arity = dict(CONS).get(getattr(t, "name", None), 0)
    return len(args) == arity and all(map(saturated, args))


# --------------------------------------------------- random terms and rules

# a single sort with three constructors of arity 0, 1 and 2
SIG3 = "data T = A | B T | C T T\n"
CONS = (("A", 0), ("B", 1), ("C", 2))


def _size(t: Term) -> int:
    return sum(1 for _ in _positions(t))


def random_term(rng: random.Random, leaves, max_nodes: int = 12, depth: int = 4) -> Term:
    while True:
        t = _grow(rng, leaves, depth)
        if _size(t) <= max_nodes:
            return t


def _grow(rng: random.Random, leaves, depth: int) -> Term:
    if depth == 0 or rng.random() < 0.3:
        return rng.choice(leaves)()
    name, arity = rng.choice(CONS)
    t: Term = Const(name)
    for _ in range(arity):
        t = App(t, _grow(rng, leaves, depth - 1))
    return t


def random_rule(rng: random.Random) -> tuple[Term, Term]:
    svars = [lambda n=n: SchematicVar(n) for n in ("x", "y")]
    consts = [lambda: Const("A")]
    lhs = random_term(rng, svars + consts, 7, 3)
    rhs = random_term(rng, svars + consts, 7, 3)
    return lhs, rhs


def random_ground(rng: random.Random, max_nodes: int = 12) -> Term:
    leaves = [lambda: Const("A"), lambda: FixedVar("a"), lambda: FixedVar("b")]
    return random_term(rng, leaves, max_nodes)


def rewrite_somewhere(rng: random.Random, lhs: Term, rhs: Term, a: Term) -> Term | None:
    """Apply the rule once at a random redex, choosing extra variables at random."""
    options = []
    for src, tgt in ((lhs, rhs), (rhs, lhs)):
        for path, sub in _positions(a):
            sigma: dict = {}
            if _bind(src, sub, sigma):
                options.append((path, tgt, sigma))
    if not options:
        return None
    path, tgt, sigma = rng.choice(options)
    for v in ("x", "y"):
        sigma.setdefault(v, random_ground(rng, 3))
    return _put(a, path, _inst(tgt, sigma))


# ------------------------------------------------------------- random types

TYPE_CONS = (("N", 0), ("Bool", 0), ("List", 1))


def random_type(rng: random.Random, depth: int = 5, tvars=("a", "b", "c")) -> Type:
    if depth <= 1 or rng.random() < 0.25:
        if rng.random() < 0.5:
            return TVar(rng.choice(tvars))
        return TCon(rng.choice(("N", "Bool")))
    r = rng.random()
    if r < 0.5:
        return Fun(random_type(rng, depth - 1, tvars), random_type(rng, depth - 1, tvars))
    if r < 0.75:
        return TCon("List", (random_type(rng, depth - 1, tvars),))
    return TCon(rng.choice(("N", "Bool")))


def type_depth(t: Type) -> int:
    match t:
        case Fun(a, r):
            return 1 + max(type_depth(a), type_depth(r))
        case TCon(_, args) if args:
            return 1 + max(type_depth(a) for a in args)
    return 1


def subst_type(t: Type, s: dict) -> Type:
    """Plain simultaneous substitution, independent of the library's."""
    match t:
        case TVar(n) if n in s:
            return s[n]
        case Fun(a, r):
            return Fun(subst_type(a, s), subst_type(r, s))
        case TCon(n, args):
            return TCon(n, tuple(subst_type(a, s) for a in args))
    return t


def generalize(t, rng, fresh):
    """Replace random subterms by distinct fresh variables; returns (type, bindings)."""
    if rng.random() < 0.2:
        v = f"g{len(fresh)}"
        fresh[v] = t
        return TVar(v)
    match t:
        case Fun(x, y):
            return Fun(generalize(x, rng, fresh), generalize(y, rng, fresh))
        case TCon(n, args) if args:
            return TCon(n, tuple(generalize(x, rng, fresh) for x in args))
    return t


def type_match(pattern: Type, t: Type, s: dict) -> bool:
    """One-way matching: is t an instance of pattern?"""
    match pattern:
        case TVar(n):
            if n in s:
                return s[n] == t
            s[n] = t
            return True
        case Fun(a, r):
            return isinstance(t, Fun) and type_match(a, t.arg, s) and type_match(r, t.res, s)
        case TCon(n, args):
            return (
                isinstance(t, TCon)
                and t.name == n
                and len(t.args) == len(args)
                and all(type_match(x, y, s) for x, y in zip(args, t.args))
            )
    return False


def monotypes(depth: int, bases=("B", "N")) -> list[Type]:
    """All ground types up to the given depth over the bases and arrows."""
    level = [TCon(b) for b in bases]
    seen = list(level)
    for _ in range(depth - 1):
        level = [Fun(a, r) for a, r in itertools.product(seen, seen)]
        seen = list(dict.fromkeys(seen + level))
    return seen


# ---------------------------------------------------------------- unparser


def show_type_src(t: Type, prec: int = 0) -> str:
    match t:
        case TVar(n):
            return n
        case TCon(n, ()):
            return n
        case TCon(n, args):
            s = " ".join([n] + [show_type_src(a, 2) for a in args])
            return f"({s})" if prec >= 2 else s
        case Fun(a, r):
            s = f"{show_type_src(a, 1)} -> {show_type_src(r, 0)}"
            return f"({s})" if prec >= 1 else s
    raise TypeError(t)


def show_term_src(t: Term, arg: bool = False) -> str:
    match t:
        case Hole():
            return "_"
        case Ident(n) | Const(n) | FixedVar(n) | SchematicVar(n):
            return n
        case App(f, a):
            s = f"{show_term_src(f)} {show_term_src(a, True)}"
            return f"({s})" if arg else s
    raise TypeError(t)


def show_prop_src(p: Prop) -> str:
    body = f"{show_term_src(p.lhs)} .=. {show_term_src(p.rhs)}"
    if not p.binders:
        return body
    bs = ", ".join(f"{b.name} :: {show_type_src(b.type)}" for b in p.binders)
    return f"forall {bs} : {body}"


def _link(link) -> str:
    match link:
        case ByDef(n):
            return f"(by def {n})"
        case ByRule(n):
            return f"(by {n})"
        case ByHole():
            return "(by _)"
    return "..."


def _binders(bs) -> str:
    return ", ".join(f"{b.name} :: {show_type_src(b.type)}" for b in bs)


def unparse_proof(p, ind: str = "  ") -> list[str]:
    match p:
        case HoleProof():
            return [ind + "..."]
        case Rewriting(chain):
            out = [ind + "Proof by rewriting", ind + "  " + show_term_src(chain.first)]
            for st in chain.steps:
                out.append(f"{ind}  {_link(st.link)} .=. {show_term_src(st.term)}")
            return out + [ind + "QED"]
        case Extensionality(var, shown, sub):
            return (
                [ind + f"Proof by extensionality with {_binders([var])}",
                 ind + "  Show: " + show_prop_src(shown)]
                + unparse_proof(sub, ind + "  ")
                + [ind + "QED"]
            )
        case CaseAnalysis(scrut, ty, cases):
            out = [ind + f"Proof by case analysis on {show_term_src(scrut)} :: {show_type_src(ty)}"]
            for c in cases:
                if isinstance(c, CaseHole):
                    out.append(ind + "  ...")
                    continue
                out.append(ind + "  Case " + show_term_src(c.pattern))
                out.append(ind + f"    Assume {c.assumption.name}: {show_prop_src(c.assumption.prop)}")
                sub = unparse_proof(c.sub, ind + "    ")
                out.append(ind + "    Then " + sub[0].strip())
                out.extend(sub[1:])
            return out + [ind + "QED"]
        case Induction(var, gen, cases):
            head = f"Proof by induction on {_binders([var])}"
            if gen:
                head += " generalizing " + _binders(gen)
            out = [ind + head]
            for c in cases:
                if isinstance(c, CaseHole):
                    out.append(ind + "  ...")
                    continue
                out.append(ind + "  Case " + show_term_src(c.pattern))
                if c.fixes:
                    out.append(ind + "    Fix " + _binders(c.fixes))
                for k, ih in enumerate(c.ihs):
                    kw = "Assume " if k == 0 else "       "
                    out.append(ind + f"    {kw}{ih.name}: {show_prop_src(ih.prop)}")
                if c.ihs:
                    out.append(ind + "    Then")
                if c.generalized:
                    out.append(ind + "    For fixed " + _binders(c.generalized))
                out.append(ind + "    Show: " + show_prop_src(c.shown))
                out.extend(unparse_proof(c.sub, ind + "    "))
            return out + [ind + "QED"]
    raise TypeError(p)


def unparse_module(m: Module) -> str:
    out = []
    for d in m.decls:
        match d:
            case DataDecl(name, params, cons):
                head = " ".join([name, *params])
                if cons:
                    alts = " | ".join(
                        " ".join([c.name] + [show_type_src(a, 2) for a in c.args]) for c in cons
                    )
                    out.append(f"data {head} = {alts}")
                else:
                    out.append(f"data {head}")
            case SigDecl(name, ty):
                out.append(f"{name} :: {show_type_src(ty)}")
            case FunEquation(lhs, rhs):
                out.append(f"{show_term_src(lhs)} = {show_term_src(rhs)}")
            case Axiom(name, prop):
                out.append(f"axiom {name}: {show_prop_src(prop)}")
            case Lemma(name, prop, proof):
                out.append(f"Lemma {name or ''}: {show_prop_src(prop)}")
                body = unparse_proof(proof, "")
                if isinstance(proof, HoleProof):
                    body = ["Proof", "...", "QED"]
                out.extend(body)
            case DeclHole():
                out.append("...")
    return "\n".join(out) + "\n"
