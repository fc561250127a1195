"""Parser for theory-and-proof modules, and name resolution.

The grammar is layout-insensitive: proof structure is delimited by keywords.
Terms, however, follow the "expression to end of line" rule.  A term never
continues past a line break (or ``;``), and in propositions the left-hand
side stops at ``.=.``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import Callable, Mapping

from .diagnostics import CypError, Diagnostic
from .syntax import (
    App,
    Assumption,
    Axiom,
    Binder,
    ByDef,
    ByHole,
    ByRule,
    Case,
    CaseAnalysis,
    CaseHole,
    Chain,
    ConDecl,
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
    Module,
    Prop,
    Rewriting,
    SchematicVar,
    SigDecl,
    Span,
    Step,
    TCon,
    Term,
    TVar,
    Type,
    spine,
)

KEYWORDS = frozenset(
    "data axiom Lemma Proof QED by def Case Assume Then Show Fix For forall generalizing".split()
)

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<comment>--[^\n]*)
  | (?P<nl>\n|;)
  | (?P<ident>[A-Za-z][A-Za-z0-9_']*)
  | (?P<sym>\.=\.|\.\.\.|::|->|[()=|,:]|_(?![A-Za-z0-9_']))
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # ident | sym | nl | eof
    text: str
    start: tuple[int, int]
    end: tuple[int, int]

    def __str__(self) -> str:
        if self.kind == "eof":
            return "end of input"
        if self.kind == "nl":
            return "end of line" if self.text == "\n" else "';'"
        return f"'{self.text}'"


def tokenize(source: str, file: str = "<input>") -> list[Token]:
    toks: list[Token] = []
    line, col, i = 1, 1, 0
    while i < len(source):
        m = _TOKEN.match(source, i)
        if m is None:
            c = source[i]
            span = Span((line, col), (line, col + 1), file)
            hint = ""
            if c == ".":
                hint = "; infix operators are not supported, write the function prefix"
            raise CypError(Diagnostic(f"unexpected character {c!r}{hint}", (span,), "parse"))
        kind = m.lastgroup
        text = m.group()
        end = (line, col + len(text))
        if kind == "nl":
            toks.append(Token("nl", text, (line, col), end))
            if text == "\n":
                line, col = line + 1, 1
            else:
                col += 1
        else:
            if kind in ("ident", "sym"):
                toks.append(Token(kind, text, (line, col), end))
            col += len(text)
        i = m.end()
    toks.append(Token("eof", "", (line, col), (line, col)))
    return toks


class Parser:
    def __init__(self, source: str, file: str = "<input>"):
        self.file = file
        self.toks = tokenize(source, file)
        self.pos = 0
        self.last_end: tuple[int, int] = (1, 1)

    # ------------------------------------------------------------ helpers

    def peek(self, k: int = 0) -> Token:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def advance(self) -> Token:
        tok = self.peek()
        if tok.kind != "eof":
            self.pos += 1
            if tok.kind != "nl":
                self.last_end = tok.end
        return tok

    def at(self, text: str, k: int = 0) -> bool:
        tok = self.peek(k)
        return tok.kind in ("ident", "sym") and tok.text == text

    def at_eol(self) -> bool:
        return self.peek().kind in ("nl", "eof")

    def skip_nl(self) -> None:
        while self.peek().kind == "nl":
            self.advance()

    def tok_span(self, tok: Token) -> Span:
        if tok.kind == "eof" and self.pos > 0:
            # point at the last real token instead of past the input
            prev = [t for t in self.toks[: self.pos] if t.kind != "nl"]
            if prev:
                return Span(prev[-1].start, prev[-1].end, self.file)
        return Span(tok.start, tok.end, self.file)

    def span_from(self, start: tuple[int, int]) -> Span:
        return Span(start, self.last_end, self.file)

    def fail(self, message: str, tok: Token | None = None) -> CypError:
        tok = tok or self.peek()
        return CypError(Diagnostic(message, (self.tok_span(tok),), "parse"))

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.fail(f"expected '{text}', found {self.peek()}")
        return self.advance()

    def expect_eol(self, what: str = "term") -> None:
        if not self.at_eol():
            raise self.fail(
                f"unexpected {self.peek()} after {what}; expected end of line"
            )

    def name(self, what: str = "a name") -> Token:
        tok = self.peek()
        if tok.kind != "ident" or tok.text in KEYWORDS:
            raise self.fail(f"expected {what}, found {tok}")
        return self.advance()

    def lower_name(self, what: str) -> Token:
        tok = self.name(what)
        if not tok.text[0].islower():
            raise self.fail(f"expected {what} (lowercase), found {tok}", tok)
        return tok

    def upper_name(self, what: str) -> Token:
        tok = self.name(what)
        if not tok.text[0].isupper():
            raise self.fail(f"expected {what} (uppercase), found {tok}", tok)
        return tok

    # ------------------------------------------------------------ terms

    def starts_atom(self) -> bool:
        tok = self.peek()
        if tok.kind == "ident":
            return tok.text not in KEYWORDS
        return tok.kind == "sym" and tok.text in ("_", "(")

    def atom(self) -> tuple[Term, tuple[int, int]]:
        tok = self.peek()
        if tok.kind == "ident" and tok.text not in KEYWORDS:
            self.advance()
            return Ident(tok.text, span=Span(tok.start, tok.end, self.file)), tok.start
        if self.at("_"):
            self.advance()
            return Hole(span=Span(tok.start, tok.end, self.file)), tok.start
        if self.at("("):
            self.advance()
            t = self.term()
            self.expect(")")
            return t, tok.start
        raise self.fail(f"expected a term, found {tok}")

    def term(self) -> Term:
        t, start = self.atom()
        while self.starts_atom():
            a, _ = self.atom()
            t = App(t, a, span=self.span_from(start))
        return t

    def term_eol(self) -> Term:
        t = self.term()
        self.expect_eol()
        return t

    def prop(self, binders: tuple[Binder, ...] = (), start=None) -> Prop:
        first = self.peek().start if start is None else start
        lhs = self.term()
        if not self.at(".=."):
            raise self.fail(f"expected '.=.', found {self.peek()}")
        self.advance()
        rhs = self.term_eol()
        return Prop(binders, lhs, rhs, span=self.span_from(first))

    def binder(self) -> Binder:
        tok = self.lower_name("a variable")
        self.expect("::")
        ty = self.type_()
        return Binder(tok.text, ty, span=self.span_from(tok.start))

    def binders(self) -> tuple[Binder, ...]:
        bs = [self.binder()]
        while self.at(","):
            self.advance()
            bs.append(self.binder())
        return tuple(bs)

    def quant_prop(self) -> Prop:
        start = self.peek().start
        binders: tuple[Binder, ...] = ()
        if self.at("forall"):
            self.advance()
            binders = self.binders()
            self.expect(":")
            self.skip_nl()
        return self.prop(binders, start)

    # ------------------------------------------------------------ types

    def type_(self) -> Type:
        start = self.peek().start
        t = self.btype()
        if self.at("->"):
            self.advance()
            r = self.type_()
            return Fun(t, r, span=self.span_from(start))
        return t

    def btype(self) -> Type:
        tok = self.peek()
        if tok.kind == "ident" and tok.text not in KEYWORDS and tok.text[0].isupper():
            self.advance()
            args = []
            while self.starts_atype():
                args.append(self.atype())
            return TCon(tok.text, tuple(args), span=self.span_from(tok.start))
        return self.atype()

    def starts_atype(self) -> bool:
        tok = self.peek()
        return (tok.kind == "ident" and tok.text not in KEYWORDS) or self.at("(")

    def atype(self) -> Type:
        tok = self.peek()
        if tok.kind == "ident" and tok.text not in KEYWORDS:
            self.advance()
            sp = Span(tok.start, tok.end, self.file)
            if tok.text[0].isupper():
                return TCon(tok.text, (), span=sp)
            return TVar(tok.text, span=sp)
        if self.at("("):
            self.advance()
            t = self.type_()
            self.expect(")")
            return t
        raise self.fail(f"expected a type, found {tok}")

    # ------------------------------------------------------------ declarations

    def module(self) -> Module:
        decls = []
        self.skip_nl()
        while self.peek().kind != "eof":
            decls.append(self.decl())
            if not self.at_eol():
                raise self.fail(f"unexpected {self.peek()} after declaration")
            self.skip_nl()
        span = Span((1, 1), self.last_end, self.file) if decls else None
        return Module(tuple(decls), span=span)

    def decl(self):
        tok = self.peek()
        if self.at("data"):
            return self.data_decl()
        if self.at("axiom"):
            self.advance()
            name = self.name("an axiom name")
            self.expect(":")
            prop = self.quant_prop()
            return Axiom(name.text, prop, span=self.span_from(tok.start))
        if self.at("Lemma"):
            return self.lemma()
        if self.at("..."):
            self.advance()
            return DeclHole(span=self.span_from(tok.start))
        if tok.kind == "ident" and tok.text not in KEYWORDS:
            if self.at("::", 1):
                name = self.lower_name("a function name")
                self.expect("::")
                ty = self.type_()
                self.expect_eol("type signature")
                return SigDecl(name.text, ty, span=self.span_from(tok.start))
            lhs = self.term()
            self.expect("=")
            rhs = self.term_eol()
            return FunEquation(lhs, rhs, span=self.span_from(tok.start))
        raise self.fail(f"expected a declaration, found {tok}")

    def data_decl(self) -> DataDecl:
        start = self.advance().start
        name = self.upper_name("a type name")
        params = []
        while self.peek().kind == "ident" and not self.at("="):
            params.append(self.lower_name("a type parameter").text)
        if self.at_eol():
            # abstract type without constructors
            return DataDecl(name.text, tuple(params), (), span=self.span_from(start))
        self.expect("=")
        cons = [self.con_decl()]
        while True:
            # constructor alternatives may continue on the next line
            k = 0
            while self.peek(k).kind == "nl" and self.peek(k).text == "\n":
                k += 1
            if not self.at("|", k):
                break
            self.skip_nl()
            self.advance()
            cons.append(self.con_decl())
        self.expect_eol("data declaration")
        return DataDecl(name.text, tuple(params), tuple(cons), span=self.span_from(start))

    def con_decl(self) -> ConDecl:
        tok = self.upper_name("a constructor name")
        args = []
        while self.starts_atype():
            args.append(self.atype())
        return ConDecl(tok.text, tuple(args), span=self.span_from(tok.start))

    def lemma(self) -> Lemma:
        start = self.advance().start
        name = None
        tok = self.peek()
        if tok.kind == "ident" and tok.text not in KEYWORDS and self.at(":", 1):
            name = self.advance().text
            self.advance()
        elif self.at(":"):
            self.advance()
        prop = self.quant_prop()
        self.skip_nl()
        proof = self.proof()
        return Lemma(name, prop, proof, span=self.span_from(start))

    # ------------------------------------------------------------ proofs

    def expect_word(self, word: str) -> Token:
        if not self.at(word):
            raise self.fail(f"expected '{word}', found {self.peek()}")
        return self.advance()

    def expect_qed(self, start: tuple[int, int]) -> None:
        self.skip_nl()
        if self.at("QED"):
            self.advance()
            return
        if self.peek().kind == "eof":
            raise CypError(
                Diagnostic(
                    "proof is not terminated: expected 'QED'",
                    (self.span_from(start),),
                    "parse",
                )
            )
        raise self.fail(f"expected 'QED', found {self.peek()}")

    def proof(self):
        start = self.expect("Proof").start
        if self.at("..."):
            self.advance()
            self.expect_qed(start)
            return HoleProof(span=self.span_from(start))
        self.expect("by")
        method = self.peek()
        if self.at("rewriting"):
            self.advance()
            self.skip_nl()
            chain = self.chain()
            self.expect_qed(start)
            return Rewriting(chain, span=self.span_from(start))
        if self.at("extensionality"):
            self.advance()
            self.expect_word("with")
            var = self.binder()
            self.expect_eol("binder")
            self.skip_nl()
            self.expect("Show")
            self.expect(":")
            shown = self.prop()
            sub = self.subproof()
            self.expect_qed(start)
            return Extensionality(var, shown, sub, span=self.span_from(start))
        if self.at("case"):
            self.advance()
            self.expect_word("analysis")
            self.expect_word("on")
            scrutinee = self.term()
            self.expect("::")
            ty = self.type_()
            self.expect_eol("type")
            cases = self.case_list(self.analysis_case)
            self.expect_qed(start)
            return CaseAnalysis(scrutinee, ty, cases, span=self.span_from(start))
        if self.at("induction"):
            self.advance()
            self.expect_word("on")
            var = self.binder()
            gen: tuple[Binder, ...] = ()
            if self.at("generalizing"):
                self.advance()
                gen = self.binders()
            self.expect_eol("induction header")
            cases = self.case_list(self.induction_case)
            self.expect_qed(start)
            return Induction(var, gen, cases, span=self.span_from(start))
        raise self.fail(
            "expected a proof method (rewriting, extensionality, case analysis, "
            f"induction), found {method}"
        )

    def subproof(self):
        self.skip_nl()
        if self.at("..."):
            tok = self.advance()
            return HoleProof(span=Span(tok.start, tok.end, self.file))
        return self.proof()

    def link(self):
        start = self.expect("(").start
        self.expect("by")
        if self.at("_"):
            self.advance()
            self.expect(")")
            return ByHole(span=self.span_from(start))
        if self.at("def"):
            self.advance()
            name = self.name("a function name")
            self.expect(")")
            return ByDef(name.text, span=self.span_from(start))
        name = self.name("a rule name")
        self.expect(")")
        return ByRule(name.text, span=self.span_from(start))

    def chain(self) -> Chain:
        start = self.peek().start
        first = self.term_eol()
        steps = []
        while True:
            self.skip_nl()
            tok = self.peek()
            if self.at("(") and self.at("by", 1):
                link = self.link()
            elif self.at("...") and self.at(".=.", 1):
                self.advance()
                link = Ellipsis(span=Span(tok.start, tok.end, self.file))
            else:
                break
            self.expect(".=.")
            t = self.term_eol()
            steps.append(Step(link, t, span=self.span_from(tok.start)))
        return Chain(first, tuple(steps), span=self.span_from(start))

    def case_list(self, case: Callable[[], object]) -> tuple:
        cases = []
        while True:
            self.skip_nl()
            if self.at("Case"):
                cases.append(case())
            elif self.at("..."):
                tok = self.advance()
                cases.append(CaseHole(span=Span(tok.start, tok.end, self.file)))
            else:
                return tuple(cases)

    def assumption(self) -> Assumption:
        tok = self.name("an assumption name")
        self.expect(":")
        prop = self.quant_prop()
        return Assumption(tok.text, prop, span=self.span_from(tok.start))

    def analysis_case(self) -> Case:
        start = self.advance().start
        pattern = self.term_eol()
        self.skip_nl()
        self.expect("Assume")
        assumption = self.assumption()
        self.skip_nl()
        self.expect("Then")
        sub = self.subproof()
        return Case(pattern, assumption, sub, span=self.span_from(start))

    def at_assumption(self) -> bool:
        tok = self.peek()
        return tok.kind == "ident" and tok.text not in KEYWORDS and self.at(":", 1)

    def induction_case(self) -> IndCase:
        start = self.advance().start
        pattern = self.term_eol()
        fixes: list[Binder] = []
        ihs: list[Assumption] = []
        generalized: list[Binder] = []
        while True:
            self.skip_nl()
            if self.at("Fix"):
                self.advance()
                fixes.extend(self.binders())
                self.expect_eol("binder")
            elif self.at("Assume"):
                self.advance()
                self.skip_nl()
                ihs.append(self.assumption())
                while True:
                    k = 0
                    while self.peek(k).kind == "nl":
                        k += 1
                    nxt = self.peek(k)
                    if not (
                        nxt.kind == "ident" and nxt.text not in KEYWORDS and self.at(":", k + 1)
                    ):
                        break
                    self.skip_nl()
                    ihs.append(self.assumption())
            elif self.at("Then"):
                self.advance()
            elif (self.at("For") or self.at("for")) and self.at("fixed", 1):
                self.advance()
                self.advance()
                generalized.extend(self.binders())
                self.expect_eol("binder")
            elif self.at("Show"):
                self.advance()
                self.expect(":")
                shown = self.prop()
                break
            else:
                raise self.fail(f"expected 'Show:', found {self.peek()}")
        sub = self.subproof()
        return IndCase(
            pattern,
            tuple(fixes),
            tuple(ihs),
            tuple(generalized),
            shown,
            sub,
            span=self.span_from(start),
        )


def parse_module(source: str, file: str = "<input>") -> Module:
    """Parse a module; raises CypError on the first syntax error."""
    return Parser(source, file).module()


def parse_term(text: str, file: str = "<input>") -> Term:
    p = Parser(text, file)
    p.skip_nl()
    t = p.term()
    p.skip_nl()
    if p.peek().kind != "eof":
        raise p.fail(f"unexpected {p.peek()} after term")
    return t


def parse_type(text: str, file: str = "<input>") -> Type:
    p = Parser(text, file)
    t = p.type_()
    if p.peek().kind != "eof":
        raise p.fail(f"unexpected {p.peek()} after type")
    return t


def parse_prop(text: str, file: str = "<input>") -> Prop:
    p = Parser(text, file)
    prop = p.quant_prop()
    p.skip_nl()
    if p.peek().kind != "eof":
        raise p.fail(f"unexpected {p.peek()} after proposition")
    return prop


# ---------------------------------------------------------------- resolution

FIXED = "fixed"
SCHEMATIC = "schematic"


def _rerr(message: str, *spans: Span | None) -> CypError:
    return CypError(Diagnostic(message, tuple(s for s in spans if s), "resolve"))


class Resolver:
    def __init__(self, module: Module):
        self.constructors: set[str] = set()
        self.functions: set[str] = set()
        seen_types: dict[str, Span | None] = {}
        for d in module.decls:
            if isinstance(d, DataDecl):
                if d.name in seen_types:
                    raise _rerr(f"duplicate data type '{d.name}'", d.span)
                seen_types[d.name] = d.span
                for c in d.constructors:
                    if c.name in self.constructors:
                        raise _rerr(f"duplicate constructor '{c.name}'", c.span)
                    self.constructors.add(c.name)
            elif isinstance(d, SigDecl):
                if d.name in self.functions:
                    raise _rerr(f"duplicate signature for '{d.name}'", d.span)
                self.functions.add(d.name)

    @property
    def globals(self) -> set[str]:
        return self.constructors | self.functions

    def term(self, t: Term, scope: Mapping[str, str]) -> Term:
        match t:
            case Ident(n):
                kind = scope.get(n)
                if kind == FIXED:
                    return FixedVar(n, span=t.span)
                if kind == SCHEMATIC:
                    return SchematicVar(n, span=t.span)
                if n in self.constructors or n in self.functions:
                    return Const(n, span=t.span)
                raise _rerr(f"undefined name '{n}'", t.span)
            case App(f, a):
                return replace(t, fn=self.term(f, scope), arg=self.term(a, scope))
        return t

    def prop(self, p: Prop, scope: Mapping[str, str]) -> Prop:
        inner = dict(scope)
        seen: set[str] = set()
        for b in p.binders:
            if b.name in seen:
                raise _rerr(f"duplicate binder '{b.name}'", b.span)
            seen.add(b.name)
            inner[b.name] = SCHEMATIC
        return replace(p, lhs=self.term(p.lhs, inner), rhs=self.term(p.rhs, inner))

    def equation(self, eq: FunEquation) -> FunEquation:
        head, args = spine(eq.lhs)
        if not isinstance(head, Ident) or not head.name[0].islower():
            raise _rerr("left-hand side of an equation must start with a function name", head.span)
        if head.name not in self.functions:
            raise _rerr(f"function '{head.name}' has no type signature", head.span)
        scope: dict[str, str] = {}

        def pattern(p: Term) -> Term:
            match p:
                case Ident(n) if n[0].islower():
                    scope[n] = SCHEMATIC
                    return SchematicVar(n, span=p.span)
                case Ident(n):
                    if n not in self.constructors:
                        raise _rerr(f"undefined constructor '{n}'", p.span)
                    return Const(n, span=p.span)
                case App(f, a):
                    return replace(p, fn=pattern(f), arg=pattern(a))
                case Hole():
                    raise _rerr("holes are not allowed in patterns", p.span)
            return p

        lhs: Term = Const(head.name, span=head.span)
        for a in args:
            lhs = App(lhs, pattern(a), span=None)
        # keep the original application spans
        lhs = _respan(lhs, eq.lhs)
        return replace(eq, lhs=lhs, rhs=self.term(eq.rhs, scope))

    def pattern_vars(self, pattern: Term) -> dict[str, str]:
        _, args = spine(pattern)
        return {a.name: FIXED for a in args if isinstance(a, Ident) and a.name[0].islower()}

    def case_pattern(self, pattern: Term) -> Term:
        head, args = spine(pattern)

        def go(t: Term) -> Term:
            match t:
                case Ident(n) if n[0].islower():
                    return FixedVar(n, span=t.span)
                case Ident(n):
                    if n not in self.constructors:
                        raise _rerr(f"undefined constructor '{n}'", t.span)
                    return Const(n, span=t.span)
                case App(f, a):
                    return replace(t, fn=go(f), arg=go(a))
            return t

        if not (isinstance(head, Ident) and head.name in self.constructors):
            raise _rerr("a case must start with a constructor", head.span)
        return go(pattern)

    def proof(self, p, scope: dict[str, str]):
        match p:
            case Rewriting(chain):
                first = self.term(chain.first, scope)
                steps = tuple(replace(s, term=self.term(s.term, scope)) for s in chain.steps)
                return replace(p, chain=replace(chain, first=first, steps=steps))
            case Extensionality(var, shown, sub):
                inner = {**scope, var.name: FIXED}
                return replace(p, shown=self.prop(shown, inner), sub=self.proof(sub, inner))
            case CaseAnalysis(scrutinee, _, cases):
                out = []
                for c in cases:
                    if isinstance(c, CaseHole):
                        out.append(c)
                        continue
                    inner = {**scope, **self.pattern_vars(c.pattern)}
                    a = c.assumption
                    out.append(
                        replace(
                            c,
                            pattern=self.case_pattern(c.pattern),
                            assumption=replace(a, prop=self.prop(a.prop, inner)),
                            sub=self.proof(c.sub, inner),
                        )
                    )
                return replace(p, scrutinee=self.term(scrutinee, scope), cases=tuple(out))
            case Induction(var, generalizing, cases):
                base = {k: v for k, v in scope.items() if k != var.name}
                for g in generalizing:
                    base[g.name] = FIXED
                out = []
                for c in cases:
                    if isinstance(c, CaseHole):
                        out.append(c)
                        continue
                    inner = {**base, **self.pattern_vars(c.pattern)}
                    out.append(
                        replace(
                            c,
                            pattern=self.case_pattern(c.pattern),
                            ihs=tuple(replace(a, prop=self.prop(a.prop, inner)) for a in c.ihs),
                            shown=self.prop(c.shown, inner),
                            sub=self.proof(c.sub, inner),
                        )
                    )
                return replace(p, cases=tuple(out))
        return p

    def module(self, module: Module) -> Module:
        decls = []
        rule_names: set[str] = set()
        for d in module.decls:
            match d:
                case FunEquation():
                    d = self.equation(d)
                case Axiom(name, prop) | Lemma(name, prop):
                    if name is not None:
                        if name in rule_names:
                            raise _rerr(f"duplicate axiom or lemma name '{name}'", d.span)
                        rule_names.add(name)
                    prop = self.prop(prop, {})
                    if isinstance(d, Lemma):
                        scope = {b.name: FIXED for b in prop.binders}
                        d = replace(d, prop=prop, proof=self.proof(d.proof, scope))
                    else:
                        d = replace(d, prop=prop)
            decls.append(d)
        return replace(module, decls=tuple(decls))


def _respan(new: Term, old: Term) -> Term:
    if isinstance(new, App) and isinstance(old, App):
        return replace(new, fn=_respan(new.fn, old.fn), arg=new.arg, span=old.span)
    return new


def resolve_names(raw: Module) -> Module:
    """Turn identifiers into constants, fixed variables or schematic variables."""
    return Resolver(raw).module(raw)


def resolve_term(raw: Term, module: Module, scope: Mapping[str, str] | None = None) -> Term:
    return Resolver(module).term(raw, scope or {})
