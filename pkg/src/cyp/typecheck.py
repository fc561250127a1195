"""Hindley-Milner style type checking for programs, lemmas and proof terms.

There are no type classes and no inference for unsignatured functions: every
function carries a signature, so inference is only needed for terms.  Type
variables come in two flavours.  Flexible ones (``TVar(rigid=False)``) can be
bound by unification.  Rigid ones stand for a lemma's own type variables while
its proof is checked, and only unify with themselves.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Mapping

from .diagnostics import CypError, Diagnostic
from .syntax import (
    App,
    Axiom,
    Binder,
    Chain,
    Const,
    DataDecl,
    FixedVar,
    Fun,
    FunEquation,
    Hole,
    Ident,
    Lemma,
    Module,
    Prop,
    SchematicVar,
    SigDecl,
    Span,
    TCon,
    Term,
    TVar,
    Type,
    fun_type,
    iter_terms,
    show_term,
    spine,
    type_vars,
)

TypeSubst = dict[str, Type]


@dataclass(frozen=True)
class Scheme:
    quantified: tuple[str, ...]
    body: Type

    def __str__(self) -> str:
        if not self.quantified:
            return str(self.body)
        return f"forall {' '.join(self.quantified)}. {self.body}"


@dataclass
class DataInfo:
    params: tuple[str, ...]
    constructors: dict[str, tuple[Type, ...]]  # in declaration order


@dataclass
class TypeEnv:
    datatypes: dict[str, DataInfo] = field(default_factory=dict)
    constructors: dict[str, Scheme] = field(default_factory=dict)
    functions: dict[str, Scheme] = field(default_factory=dict)
    # one typed rule per defining equation; binder types may be polymorphic
    definitions: dict[str, list[Prop]] = field(default_factory=dict)

    def constructor_of(self, name: str) -> str | None:
        for tname, info in self.datatypes.items():
            if name in info.constructors:
                return tname
        return None


def _terr(message: str, *spans: Span | None) -> CypError:
    return CypError(Diagnostic(message, tuple(s for s in spans if s), "type"))


# ---------------------------------------------------------------- unification


def apply_subst(t: Type, s: Mapping[str, Type]) -> Type:
    match t:
        case TVar(n, False) if n in s:
            return apply_subst(s[n], s)
        case TCon(n, args) if args:
            return replace(t, args=tuple(apply_subst(a, s) for a in args))
        case Fun(a, r):
            return replace(t, arg=apply_subst(a, s), res=apply_subst(r, s))
    return t


def _occurs(v: str, t: Type, s: Mapping[str, Type]) -> bool:
    t = _walk(t, s)
    match t:
        case TVar(n, False):
            return n == v
        case TCon(_, args):
            return any(_occurs(v, a, s) for a in args)
        case Fun(a, r):
            return _occurs(v, a, s) or _occurs(v, r, s)
    return False


def _walk(t: Type, s: Mapping[str, Type]) -> Type:
    while isinstance(t, TVar) and not t.rigid and t.name in s:
        t = s[t.name]
    return t


def _unify_into(a: Type, b: Type, s: TypeSubst) -> bool:
    """Extend the triangular substitution ``s`` in place; False on clash."""
    a, b = _walk(a, s), _walk(b, s)
    match a, b:
        case TVar(x, False), TVar(y, False) if x == y:
            return True
        case TVar(x, False), _:
            if _occurs(x, b, s):
                return False
            s[x] = b
            return True
        case _, TVar(y, False):
            if _occurs(y, a, s):
                return False
            s[y] = a
            return True
        case TVar(x, True), TVar(y, True):
            return x == y
        case TCon(n, xs), TCon(m, ys):
            return (
                n == m
                and len(xs) == len(ys)
                and all(_unify_into(x, y, s) for x, y in zip(xs, ys))
            )
        case Fun(a1, r1), Fun(a2, r2):
            return _unify_into(a1, a2, s) and _unify_into(r1, r2, s)
    return False


def unify(a: Type, b: Type) -> TypeSubst | None:
    """Most general unifier of two types, or None if there is none.

    The result is idempotent: no variable in its domain occurs in its range.
    """
    s: TypeSubst = {}
    if not _unify_into(a, b, s):
        return None
    return {v: apply_subst(t, s) for v, t in s.items()}


# ---------------------------------------------------------------- inference


class Inference:
    """Mutable unification state for one checking task."""

    _ids = itertools.count(1)

    def __init__(self, env: TypeEnv):
        self.env = env
        self.subst: TypeSubst = {}

    def fresh(self) -> TVar:
        return TVar(f"?{next(self._ids)}")

    def resolve(self, t: Type) -> Type:
        return apply_subst(t, self.subst)

    def unify(self, a: Type, b: Type) -> bool:
        trial = dict(self.subst)
        if _unify_into(a, b, trial):
            self.subst = trial
            return True
        return False

    def instantiate(self, scheme: Scheme) -> Type:
        mapping = {v: self.fresh() for v in scheme.quantified}
        return apply_subst(scheme.body, mapping)

    def refresh(self, types: list[Type]) -> list[Type]:
        """Rename all flexible variables of ``types`` apart, consistently."""
        names = []
        for t in types:
            names.extend(v for v in _flex_vars(t) if v not in names)
        mapping = {v: self.fresh() for v in names}
        return [apply_subst(t, mapping) for t in types]

    def infer(self, t: Term, assumptions: Mapping[str, Type]) -> Type:
        match t:
            case Hole():
                return self.fresh()
            case Const(n):
                scheme = self.env.constructors.get(n) or self.env.functions.get(n)
                if scheme is None:
                    raise _terr(f"unknown constant '{n}'", t.span)
                return self.instantiate(scheme)
            case FixedVar(n) | SchematicVar(n):
                if n not in assumptions:
                    raise _terr(f"no type known for variable '{n}'", t.span)
                return assumptions[n]
            case Ident(n):
                raise _terr(f"unresolved name '{n}'", t.span)
            case App(f, a):
                tf = self.infer(f, assumptions)
                ta = self.infer(a, assumptions)
                res = self.fresh()
                if not self.unify(tf, Fun(ta, res)):
                    raise _terr(
                        f"ill-typed application: '{show_term(f)}' has type "
                        f"{self.resolve(tf)} but is applied to '{show_term(a)}' "
                        f"of type {self.resolve(ta)}",
                        t.span,
                    )
                return res
        raise TypeError(f"not a term: {t!r}")


def _flex_vars(t: Type) -> list[str]:
    out: list[str] = []

    def go(s: Type) -> None:
        match s:
            case TVar(n, False):
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


def rigidify(t: Type) -> Type:
    match t:
        case TVar(n, False):
            return replace(t, rigid=True)
        case TCon(n, args) if args:
            return replace(t, args=tuple(rigidify(a) for a in args))
        case Fun(a, r):
            return replace(t, arg=rigidify(a), res=rigidify(r))
    return t


def flexify(t: Type) -> Type:
    match t:
        case TVar(n, True):
            return replace(t, rigid=False)
        case TCon(n, args) if args:
            return replace(t, args=tuple(flexify(a) for a in args))
        case Fun(a, r):
            return replace(t, arg=flexify(a), res=flexify(r))
    return t


def infer_type(env: TypeEnv, assumptions: Mapping[str, Type], t: Term) -> Type:
    """Principal type of ``t``; each hole gets its own fresh type variable."""
    inf = Inference(env)
    return inf.resolve(inf.infer(t, assumptions))


# ---------------------------------------------------------------- well-formedness


def check_type_wf(env: TypeEnv, t: Type, allowed: set[str] | None = None) -> None:
    """Type constructors must be declared and fully applied.

    With ``allowed`` given, only those type variable names may occur.
    """
    match t:
        case TVar(n):
            if allowed is not None and n not in allowed:
                raise _terr(f"type variable '{n}' is not in scope", t.span)
        case TCon(n, args):
            info = env.datatypes.get(n)
            if info is None:
                raise _terr(f"undefined type '{n}'", t.span)
            if len(info.params) != len(args):
                raise _terr(
                    f"type '{n}' expects {len(info.params)} argument(s), "
                    f"got {len(args)}",
                    t.span,
                )
            for a in args:
                check_type_wf(env, a, allowed)
        case Fun(a, r):
            check_type_wf(env, a, allowed)
            check_type_wf(env, r, allowed)


def _split_fun(t: Type) -> tuple[list[Type], Type]:
    args = []
    while isinstance(t, Fun):
        args.append(t.arg)
        t = t.res
    return args, t


# ---------------------------------------------------------------- modules


def build_env(m: Module) -> TypeEnv:
    env = TypeEnv()
    datas = [d for d in m.decls if isinstance(d, DataDecl)]
    for d in datas:
        if len(set(d.params)) != len(d.params):
            raise _terr(f"repeated type parameter in '{d.name}'", d.span)
        env.datatypes[d.name] = DataInfo(d.params, {})
    for d in datas:
        result = TCon(d.name, tuple(TVar(p) for p in d.params))
        info = env.datatypes[d.name]
        for c in d.constructors:
            for a in c.args:
                check_type_wf(env, a, set(d.params))
            info.constructors[c.name] = c.args
            env.constructors[c.name] = Scheme(d.params, fun_type(list(c.args), result))
    for d in m.decls:
        if isinstance(d, SigDecl):
            check_type_wf(env, d.type)
            env.functions[d.name] = Scheme(tuple(type_vars(d.type)), d.type)
    return env


def _check_pattern_shape(env: TypeEnv, p: Term, seen: set[str]) -> None:
    head, args = spine(p)
    if isinstance(head, SchematicVar):
        if args:
            raise _terr("a pattern variable cannot be applied", p.span)
        if head.name in seen:
            raise _terr(
                f"variable '{head.name}' occurs more than once in the patterns",
                head.span,
            )
        seen.add(head.name)
        return
    if not isinstance(head, Const) or head.name not in env.constructors:
        raise _terr("patterns may only contain constructors and variables", head.span)
    arity = len(_split_fun(env.constructors[head.name].body)[0])
    if len(args) != arity:
        raise _terr(
            f"constructor '{head.name}' expects {arity} argument(s) in a pattern, "
            f"got {len(args)}",
            p.span,
        )
    for a in args:
        _check_pattern_shape(env, a, seen)


def check_equation(env: TypeEnv, eq: FunEquation) -> Prop:
    """Type-check one defining equation; returns it as a typed rule."""
    name = eq.head
    scheme = env.functions.get(name)
    if scheme is None:
        raise _terr(f"function '{name}' has no type signature", eq.span)
    patterns = eq.patterns
    seen: set[str] = set()
    for p in patterns:
        _check_pattern_shape(env, p, seen)
    sig = rigidify(scheme.body)
    arg_types, result = _split_fun(sig)
    if len(patterns) > len(arg_types):
        raise _terr(
            f"'{name}' is applied to {len(patterns)} patterns but its type has "
            f"only {len(arg_types)} argument(s)",
            eq.lhs.span,
        )
    inf = Inference(env)
    assumptions: dict[str, Type] = {v: inf.fresh() for v in sorted(seen)}
    for p, expected in zip(patterns, arg_types):
        actual = inf.infer(p, assumptions)
        if not inf.unify(actual, expected):
            raise _terr(
                f"pattern has type {inf.resolve(actual)} but '{name}' expects "
                f"{expected} here",
                p.span,
            )
    remaining = fun_type(arg_types[len(patterns) :], result)
    rhs_type = inf.infer(eq.rhs, assumptions)
    if not inf.unify(rhs_type, remaining):
        raise _terr(
            f"right-hand side has type {inf.resolve(rhs_type)} but the signature "
            f"of '{name}' requires {remaining}",
            eq.rhs.span,
        )
    order = [s.name for s in iter_terms(eq.lhs) if isinstance(s, SchematicVar)]
    binders = tuple(
        Binder(v, flexify(inf.resolve(assumptions[v]))) for v in order
    )
    return Prop(binders, eq.lhs, eq.rhs, span=eq.span)


def prop_assumptions(env: TypeEnv, prop: Prop) -> dict[str, Type]:
    """Binder types of a lemma or axiom, with its type variables made rigid."""
    out = {}
    for b in prop.binders:
        check_type_wf(env, b.type)
        out[b.name] = rigidify(b.type)
    return out


def check_prop_types(env: TypeEnv, prop: Prop, assumptions: Mapping[str, Type] | None = None) -> Type:
    if assumptions is None:
        assumptions = prop_assumptions(env, prop)
    inf = Inference(env)
    tl = inf.infer(prop.lhs, assumptions)
    tr = inf.infer(prop.rhs, assumptions)
    if not inf.unify(tl, tr):
        raise _terr(
            f"the two sides of the equation have different types: "
            f"{inf.resolve(tl)} and {inf.resolve(tr)}",
            prop.lhs.span,
            prop.rhs.span,
        )
    return inf.resolve(tl)


def check_module_types(m: Module) -> TypeEnv:
    env = build_env(m)
    for d in m.decls:
        match d:
            case FunEquation():
                env.definitions.setdefault(d.head, []).append(check_equation(env, d))
            case Axiom(_, prop) | Lemma(_, prop):
                check_prop_types(env, prop)
    return env


# ---------------------------------------------------------------- proofs


def check_chain_types(
    env: TypeEnv,
    assumptions: Mapping[str, Type],
    chain: Chain,
    goal: Prop | None = None,
) -> Type:
    """All terms of a rewriting chain (and the goal) must share one type."""
    inf = Inference(env)
    first = chain.first
    common = inf.infer(first, assumptions)
    if goal is not None:
        for side in (goal.lhs, goal.rhs):
            ts = inf.infer(side, assumptions)
            if not inf.unify(common, ts):
                raise _terr(
                    f"term has type {inf.resolve(common)} but the goal has type "
                    f"{inf.resolve(ts)}",
                    first.span,
                    goal.span,
                )
    for t in chain.terms()[1:]:
        tt = inf.infer(t, assumptions)
        if not inf.unify(common, tt):
            raise _terr(
                f"all terms of an equational proof must have the same type, but this "
                f"term has type {inf.resolve(tt)} while the first one has type "
                f"{inf.resolve(common)}",
                t.span,
                first.span,
            )
    return inf.resolve(common)


def check_rule_application_types(
    rule: Prop,
    sigma: Mapping[str, Term],
    env: TypeEnv,
    assumptions: Mapping[str, Type],
    rule_name: str = "rule",
) -> None:
    """Instantiate the rule's binder types once and unify with the substitution."""
    inf = Inference(env)
    binders = [b for b in rule.binders]
    inst = inf.refresh([b.type for b in binders])
    for b, ty in zip(binders, inst):
        if b.name not in sigma:
            continue
        term = sigma[b.name]
        actual = inf.infer(term, assumptions)
        if not inf.unify(ty, actual):
            raise _terr(
                f"cannot apply '{rule_name}': variable {b.name} :: {b.type} would be "
                f"instantiated with '{show_term(term)}' of type {inf.resolve(actual)}, "
                f"and these types do not unify",
                term.span,
                b.span,
            )
