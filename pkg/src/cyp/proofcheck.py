"""Checking of lemmas and their proofs.

Checking a proof either raises a :class:`CypError` (the proof is wrong) or
returns normally, having recorded every hole it walked over.  A proof without
recorded holes is complete.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping

from .diagnostics import CypError, Diagnostic
from .rewrite import Invalid, Rule, RuleEnv, check_step
from .syntax import (
    App,
    Assumption,
    Axiom,
    Binder,
    ByHole,
    Case,
    CaseAnalysis,
    CaseHole,
    Chain,
    Const,
    DeclHole,
    Ellipsis,
    Extensionality,
    FixedVar,
    Fun,
    FunEquation,
    HoleProof,
    IndCase,
    Induction,
    Lemma,
    Module,
    Prop,
    Rewriting,
    SchematicVar,
    Span,
    TCon,
    Term,
    Type,
    alpha_equal,
    holes_in,
    hole_match,
    lemma_name,
    spine,
)
from .typecheck import (
    Inference,
    TypeEnv,
    apply_subst,
    check_chain_types,
    check_module_types,
    check_type_wf,
    rigidify,
)

COMPLETE = "complete"
INCOMPLETE = "incomplete"
FAILED = "failed"


@dataclass(frozen=True)
class HoleInfo:
    span: Span | None
    kind: str  # expression hole | rule hole | ellipsis | proof hole | case hole | declaration hole


@dataclass(frozen=True)
class ProofResult:
    status: str
    holes: tuple[HoleInfo, ...] = ()
    diagnostic: Diagnostic | None = None

    @property
    def failed(self) -> bool:
        return self.status == FAILED


@dataclass(frozen=True)
class LemmaResult:
    name: str
    span: Span | None
    result: ProofResult

    @property
    def status(self) -> str:
        return self.result.status


@dataclass
class LocalContext:
    fixed: dict[str, Type] = field(default_factory=dict)
    rules: RuleEnv = field(default_factory=RuleEnv)
    local_rules: tuple[str, ...] = ()

    def fix(self, name: str, ty: Type, span: Span | None = None) -> "LocalContext":
        if name in self.fixed:
            raise _perr(f"variable '{name}' is already fixed here; choose a fresh name", span)
        return replace(self, fixed={**self.fixed, name: ty})

    def assume(self, rule: Rule, span: Span | None = None) -> "LocalContext":
        if rule.name in self.rules.named or rule.name in self.rules.definitions:
            raise _perr(f"the name '{rule.name}' is already in use for a rule", span)
        return replace(
            self,
            rules=self.rules.with_rules(rule),
            local_rules=self.local_rules + (rule.name,),
        )


def _perr(message: str, *spans: Span | None) -> CypError:
    return CypError(Diagnostic(message, tuple(s for s in spans if s), "proof"))


def _fix_term(t: Term, names: Mapping[str, Term]) -> Term:
    match t:
        case SchematicVar(n) if n in names:
            image = names[n]
            return replace(image, span=t.span) if image.span is None else image
        case App(f, a):
            return replace(t, fn=_fix_term(f, names), arg=_fix_term(a, names))
    return t


def _instantiate(prop: Prop, names: Mapping[str, Term], keep: tuple[Binder, ...] = ()) -> Prop:
    return Prop(keep, _fix_term(prop.lhs, names), _fix_term(prop.rhs, names), span=prop.span)


def _show_prop(p: Prop) -> str:
    return str(p)


class ProofChecker:
    def __init__(self, env: TypeEnv):
        self.env = env
        self.holes: list[HoleInfo] = []

    def hole(self, span: Span | None, kind: str) -> None:
        self.holes.append(HoleInfo(span, kind))

    # ------------------------------------------------------------ dispatch

    def check(self, goal: Prop, proof, ctx: LocalContext) -> None:
        match proof:
            case HoleProof():
                self.hole(proof.span, "proof hole")
            case Induction():
                self.check_induction(goal, proof, ctx)
            case _:
                goal, ctx = self.fix_goal(goal, ctx)
                match proof:
                    case Rewriting(chain):
                        self.check_rewriting(goal, chain, ctx)
                    case Extensionality():
                        self.check_extensionality(goal, proof, ctx)
                    case CaseAnalysis():
                        self.check_case_analysis(goal, proof, ctx)
                    case _:
                        raise TypeError(f"not a proof: {proof!r}")

    def fix_goal(self, goal: Prop, ctx: LocalContext) -> tuple[Prop, LocalContext]:
        names = {}
        for b in goal.binders:
            check_type_wf(self.env, b.type)
            ctx = ctx.fix(b.name, rigidify(b.type), b.span)
            names[b.name] = FixedVar(b.name)
        return _instantiate(goal, names), ctx

    # ------------------------------------------------------------ rewriting

    def check_rewriting(self, goal: Prop, chain: Chain, ctx: LocalContext) -> None:
        for t in chain.terms():
            for h in holes_in(t):
                self.hole(h.span, "expression hole")
        for s in chain.steps:
            if isinstance(s.link, ByHole):
                self.hole(s.link.span, "rule hole")
            elif isinstance(s.link, Ellipsis):
                self.hole(s.link.span, "ellipsis")
        check_chain_types(self.env, ctx.fixed, chain, goal)
        first, last = chain.first, chain.terms()[-1]
        forward = hole_match(first, goal.lhs) and hole_match(last, goal.rhs)
        backward = hole_match(first, goal.rhs) and hole_match(last, goal.lhs)
        if not (forward or backward):
            bad = first if not (hole_match(first, goal.lhs) or hole_match(first, goal.rhs)) else last
            raise _perr(
                f"the equational proof does not connect the two sides of the goal "
                f"{goal.lhs} .=. {goal.rhs}",
                bad.span,
                goal.span,
            )
        prev = chain.first
        for s in chain.steps:
            verdict = check_step(ctx.rules, prev, s.link, s.term, self.env, ctx.fixed)
            if isinstance(verdict, Invalid):
                raise CypError(verdict.diagnostic)
            prev = s.term

    # ------------------------------------------------------------ extensionality

    def check_extensionality(self, goal: Prop, proof: Extensionality, ctx: LocalContext) -> None:
        var = proof.var
        check_type_wf(self.env, var.type)
        inf = Inference(self.env)
        tl = inf.infer(goal.lhs, ctx.fixed)
        tr = inf.infer(goal.rhs, ctx.fixed)
        dom, cod = inf.fresh(), inf.fresh()
        if not (inf.unify(tl, tr) and inf.unify(tl, Fun(dom, cod))):
            raise _perr(
                f"proof by extensionality needs an equation between functions, "
                f"but the goal has type {inf.resolve(tl)}",
                goal.span,
            )
        ty = rigidify(var.type)
        if not inf.unify(dom, ty):
            raise _perr(
                f"'{var.name}' is declared with type {var.type}, but the functions "
                f"take arguments of type {inf.resolve(dom)}",
                var.span,
                goal.span,
            )
        inner = ctx.fix(var.name, inf.resolve(ty), var.span)
        x = FixedVar(var.name)
        expected = Prop((), App(goal.lhs, x), App(goal.rhs, x))
        shown = proof.shown
        if shown.binders or not alpha_equal(shown, expected):
            raise _perr(
                f"expected 'Show: {_show_prop(expected)}'",
                shown.span,
                goal.span,
            )
        self.check(shown, proof.sub, inner)

    # ------------------------------------------------------------ case splits

    def datatype(self, ty: Type, span: Span | None):
        check_type_wf(self.env, ty)
        if not isinstance(ty, TCon):
            raise _perr(f"{ty} is not a data type", span)
        info = self.env.datatypes[ty.name]
        params = dict(zip(info.params, rigidify(ty).args))
        return info, params

    def case_pattern(
        self, pattern: Term, ty: TCon, info, params, seen: set[str]
    ) -> tuple[str, list[tuple[str, Type]]]:
        head, args = spine(pattern)
        if not isinstance(head, Const) or head.name not in info.constructors:
            raise _perr(f"'{head}' is not a constructor of type {ty}", head.span)
        if head.name in seen:
            raise _perr(f"duplicate case for constructor '{head.name}'", pattern.span)
        arg_types = info.constructors[head.name]
        if len(args) != len(arg_types):
            raise _perr(
                f"constructor '{head.name}' takes {len(arg_types)} argument(s), "
                f"the case gives {len(args)}",
                pattern.span,
            )
        names = []
        for a in args:
            if not isinstance(a, FixedVar):
                raise _perr("arguments in a case pattern must be variables", a.span)
            if a.name in names:
                raise _perr(f"variable '{a.name}' occurs twice in the pattern", a.span)
            names.append(a.name)
        seen.add(head.name)
        return head.name, [(n, apply_subst(t, params)) for n, t in zip(names, arg_types)]

    def check_missing(self, info, seen: set[str], case_hole: bool, ty: Type, span) -> None:
        missing = [c for c in info.constructors if c not in seen]
        if missing and not case_hole:
            raise _perr(
                f"missing case(s) for constructor(s) {', '.join(missing)} of type {ty}",
                span,
            )

    def check_case_analysis(self, goal: Prop, proof: CaseAnalysis, ctx: LocalContext) -> None:
        info, params = self.datatype(proof.type, proof.type.span)
        ty = rigidify(proof.type)
        inf = Inference(self.env)
        actual = inf.infer(proof.scrutinee, ctx.fixed)
        if not inf.unify(actual, ty):
            raise _perr(
                f"the term has type {inf.resolve(actual)}, which is different from "
                f"the type {proof.type} of the case analysis",
                proof.scrutinee.span,
                proof.type.span,
            )
        seen: set[str] = set()
        for case in proof.cases:
            if isinstance(case, CaseHole):
                self.hole(case.span, "case hole")
                continue
            _, args = self.case_pattern(case.pattern, proof.type, info, params, seen)
            inner = ctx
            for n, t in args:
                inner = inner.fix(n, t, case.pattern.span)
            a = case.assumption
            prop = a.prop
            if prop.binders:
                raise _perr("a case assumption cannot quantify variables", prop.span)
            sides = ((prop.lhs, prop.rhs), (prop.rhs, prop.lhs))
            if (proof.scrutinee, case.pattern) not in sides:
                raise _perr(
                    f"expected 'Assume {a.name}: {proof.scrutinee} .=. {case.pattern}'",
                    prop.span,
                )
            inner = inner.assume(Rule(a.name, "assumption", prop), a.span)
            self.check(goal, case.sub, inner)
        self.check_missing(info, seen, proof.case_hole, proof.type, proof.span)

    # ------------------------------------------------------------ induction

    def check_induction(self, goal: Prop, proof: Induction, ctx: LocalContext) -> None:
        var = proof.var
        binders = {b.name: b for b in goal.binders}
        if var.name not in binders:
            raise _perr(
                f"'{var.name}' is not a quantified variable of the goal",
                var.span,
                goal.span,
            )
        info, params = self.datatype(var.type, var.type.span)
        declared = binders[var.name]
        if not Inference(self.env).unify(rigidify(declared.type), rigidify(var.type)):
            raise _perr(
                f"'{var.name}' has type {declared.type} in the goal, but the induction "
                f"is on type {var.type}",
                var.span,
                declared.span,
            )
        gen_names = []
        for g in proof.generalizing:
            b = binders.get(g.name)
            if b is None or g.name == var.name:
                raise _perr(f"cannot generalize '{g.name}': not a quantified variable", g.span)
            if rigidify(b.type) != rigidify(g.type):
                raise _perr(
                    f"'{g.name}' has type {b.type} in the goal, not {g.type}",
                    g.span,
                    b.span,
                )
            gen_names.append(g.name)
        outer = ctx
        for b in goal.binders:
            if b.name != var.name and b.name not in gen_names:
                check_type_wf(self.env, b.type)
                outer = outer.fix(b.name, rigidify(b.type), b.span)
        seen: set[str] = set()
        for case in proof.cases:
            if isinstance(case, CaseHole):
                self.hole(case.span, "case hole")
                continue
            self.check_induction_case(goal, proof, case, outer, info, params, seen, gen_names)
        self.check_missing(info, seen, proof.case_hole, var.type, proof.span)

    def check_induction_case(
        self,
        goal: Prop,
        proof: Induction,
        case: IndCase,
        outer: LocalContext,
        info,
        params,
        seen: set[str],
        gen_names: list[str],
    ) -> None:
        var = proof.var
        binders = {b.name: b for b in goal.binders}
        _, args = self.case_pattern(case.pattern, var.type, info, params, seen)
        inner = outer
        for n, t in args:
            if n in gen_names:
                raise _perr(
                    f"variable '{n}' is generalized; choose a fresh name", case.pattern.span
                )
            inner = inner.fix(n, t, case.pattern.span)
        for g in gen_names:
            inner = inner.fix(g, rigidify(binders[g].type), binders[g].span)
        arg_types = dict(args)
        for fx in case.fixes:
            if fx.name not in arg_types:
                raise _perr(f"'{fx.name}' is not a variable of this case", fx.span)
            if rigidify(fx.type) != arg_types[fx.name]:
                raise _perr(
                    f"'{fx.name}' has type {arg_types[fx.name]} in this case, not {fx.type}",
                    fx.span,
                )
        for fx in case.generalized:
            if fx.name not in gen_names:
                raise _perr(f"'{fx.name}' is not a generalized variable", fx.span)
            if rigidify(fx.type) != rigidify(binders[fx.name].type):
                raise _perr(
                    f"'{fx.name}' has type {binders[fx.name].type}, not {fx.type}", fx.span
                )
        expected = expected_ihs(self.env, var.type, case.pattern, goal, var.name, proof.generalizing)
        unused = list(expected)
        for ih in case.ihs:
            match = next((e for e in unused if alpha_equal(ih.prop, e)), None)
            if match is None:
                if expected:
                    hint = "; expected one of: " + "; ".join(_show_prop(e) for e in expected)
                else:
                    hint = "; this case has no induction hypotheses"
                raise _perr(
                    f"'{ih.name}' is not an induction hypothesis of this case{hint}",
                    ih.prop.span,
                    case.pattern.span,
                )
            unused.remove(match)
            rule_prop = replace(
                ih.prop,
                binders=tuple(replace(b, type=rigidify(b.type)) for b in ih.prop.binders),
            )
            inner = inner.assume(Rule(ih.name, "ih", rule_prop), ih.span)
        names: dict[str, Term] = {var.name: case.pattern}
        for b in goal.binders:
            if b.name != var.name:
                names[b.name] = FixedVar(b.name)
        want = _instantiate(goal, names)
        shown = case.shown
        if shown.binders or not alpha_equal(shown, want):
            raise _perr(f"expected 'Show: {_show_prop(want)}'", shown.span, case.pattern.span)
        self.check(shown, case.sub, inner)


def expected_ihs(
    env: TypeEnv,
    ty: Type,
    pattern: Term,
    goal: Prop,
    ind_var: str,
    generalizing: tuple[Binder, ...] = (),
) -> list[Prop]:
    """Induction hypotheses for one case of a structural induction.

    One hypothesis per constructor argument of the induction type itself:
    the goal at that argument, still quantified over the generalized
    variables, with every other variable fixed.
    """
    binder_names = [b.name for b in goal.binders]
    if ind_var not in binder_names:
        raise _perr(f"'{ind_var}' is not a quantified variable of the goal", goal.span)
    gen = {g.name for g in generalizing}
    for g in gen:
        if g not in binder_names:
            raise _perr(f"cannot generalize '{g}': not a quantified variable", goal.span)
    if not isinstance(ty, TCon) or ty.name not in env.datatypes:
        raise _perr(f"{ty} is not a data type", getattr(ty, "span", None))
    info = env.datatypes[ty.name]
    ty = rigidify(ty)
    params = dict(zip(info.params, ty.args))
    head, args = spine(pattern)
    arg_types = info.constructors.get(getattr(head, "name", ""), ())
    keep = tuple(b for b in goal.binders if b.name in gen)
    out = []
    for a, t in zip(args, arg_types):
        if apply_subst(t, params) != ty or not isinstance(a, FixedVar):
            continue
        names: dict[str, Term] = {ind_var: FixedVar(a.name)}
        for b in goal.binders:
            if b.name != ind_var and b.name not in gen:
                names[b.name] = FixedVar(b.name)
        out.append(_instantiate(goal, names, keep))
    return out


def check_hole_proof(span: Span | None = None) -> ProofResult:
    return ProofResult(INCOMPLETE, (HoleInfo(span, "proof hole"),))


def _result(checker: ProofChecker) -> ProofResult:
    if checker.holes:
        return ProofResult(INCOMPLETE, tuple(checker.holes))
    return ProofResult(COMPLETE)


def check_lemma(env: TypeEnv, rules: RuleEnv, lemma: Lemma) -> ProofResult:
    checker = ProofChecker(env)
    for side in (lemma.prop.lhs, lemma.prop.rhs):
        for h in holes_in(side):
            checker.hole(h.span, "expression hole")
    try:
        checker.check(lemma.prop, lemma.proof, LocalContext(rules=rules))
    except CypError as e:
        return ProofResult(FAILED, tuple(checker.holes), e.diagnostic)
    return _result(checker)


def definition_rules(env: TypeEnv) -> dict[str, list[Rule]]:
    return {f: [Rule(f, "def", p) for p in props] for f, props in env.definitions.items()}


def check_module(m: Module, env: TypeEnv | None = None) -> list[LemmaResult]:
    """Check lemmas in order, stopping after the first failed one.

    Axioms are usable everywhere after their declaration; a lemma becomes a
    rule for later lemmas once it is checked, even while it still has holes.
    """
    if env is None:
        env = check_module_types(m)
    rules = RuleEnv(definition_rules(env), {})
    results: list[LemmaResult] = []
    index = 0
    for d in m.decls:
        if isinstance(d, Axiom):
            rules = rules.with_rules(Rule(d.name, "axiom", d.prop))
        elif isinstance(d, Lemma):
            index += 1
            name = lemma_name(d, index)
            res = check_lemma(env, rules, d)
            results.append(LemmaResult(name, d.span, res))
            if res.failed:
                break
            rules = rules.with_rules(Rule(name, "lemma", d.prop))
    return results


def declaration_holes(m: Module) -> list[HoleInfo]:
    """Holes outside lemma proofs: in equations, axioms, and ``...`` declarations."""
    out = []
    for d in m.decls:
        match d:
            case FunEquation(_, rhs):
                out.extend(HoleInfo(h.span, "expression hole") for h in holes_in(rhs))
            case Axiom(_, prop):
                for side in (prop.lhs, prop.rhs):
                    out.extend(HoleInfo(h.span, "expression hole") for h in holes_in(side))
            case DeclHole():
                out.append(HoleInfo(d.span, "declaration hole"))
    return out
