import random

import pytest
from hypothesis import given, settings, strategies as st

from cyp.blueprint import DECLINE, SUCCEED, Fail, SpanPair, Matcher, match_list, match_module, match_node
from cyp.diagnostics import CypError
from cyp.parser import parse_module, parse_term
from cyp.syntax import CaseHole, DeclHole, Hole, Ident
from support import CORPUS, corpus

BP = corpus("succ.byp")


def match(b, s):
    return match_module(parse_module(b, "b.byp"), parse_module(s, "s.cyp"))


def test_blueprint_matches_itself_and_solution():
    match(BP, BP)
    match(BP, corpus("succ_solved.cyp"))


def test_renamed_solution_is_rejected():
    with pytest.raises(CypError) as e:
        match(BP, corpus("succ_renamed.cyp"))
    d = e.value.diagnostic
    assert "different roots" in d.message
    assert "succB" in d.message and "incB" in d.message
    assert [s.file for s in d.spans] == ["b.byp", "s.cyp"]


def test_node_examples():
    assert match_node(Hole(), parse_term("Even (succB x)")) is SUCCEED
    assert match_node(parse_term("S x"), parse_term("S x")) is SUCCEED
    out = match_node(parse_term("Z"), parse_term("S Z"))
    assert isinstance(out, Fail)
    assert "Ident Z" in out.diagnostic.message and "App" in out.diagnostic.message


def test_hole_only_matches_its_category():
    assert Matcher().match_hole(Hole(), parse_term("Z"), SpanPair()) is SUCCEED
    assert Matcher().match_hole(Ident("Z"), parse_term("Z"), SpanPair()) is DECLINE


def test_list_examples():
    z, s = parse_term("Z"), parse_term("S Z")
    assert match_list([], []) is SUCCEED
    assert match_list([DeclHole()], [z, s, z]) is SUCCEED
    assert match_list([z, DeclHole()], [z, s]) is SUCCEED
    assert isinstance(match_list([z], [z, s]), Fail)
    assert isinstance(match_list([z, DeclHole(), s], [z]), Fail)


def test_ambiguous_blueprint():
    z = parse_term("Z")
    bs = [DeclHole(), z, DeclHole(), z, DeclHole()]
    out = match_list(bs, [z] * 6)
    assert isinstance(out, Fail) and "ambiguous" in out.diagnostic.message


def test_case_hole_absorbs_cases():
    match(corpus("plus_Z.cyp"), corpus("plus_Z_filled.cyp"))


def test_chain_ellipsis_and_holes():
    match(corpus("group.cyp"), corpus("group_filled.cyp"))
    match(corpus("xor.cyp"), corpus("xor_filled.cyp"))


def test_chain_ellipsis_end_term_is_checked():
    bad = corpus("group_filled.cyp").replace(
        "(by neutral_left)  .=. times y x", "(by neutral_left)  .=. times y y"
    )
    with pytest.raises(CypError):
        match(corpus("group.cyp"), bad)


def test_remaining_holes_still_match():
    # incremental development: the solution may still contain a hole
    partial = BP.replace("succB Zero = _", "succB Zero = Odd Zero")
    match(BP, partial)


def test_declaration_ellipsis_absorbs_mixed_kinds():
    b = "data N = Z | S N\n...\n"
    s = "data N = Z | S N\nf :: N -> N\nf x = x\nLemma: Z .=. Z\nProof ... QED\n"
    match(b, s)


@pytest.mark.parametrize("path", sorted(CORPUS.iterdir()), ids=lambda p: p.name)
def test_reflexive_on_corpus(path):
    text = path.read_text()
    match(text, text)


def test_whitespace_is_ignored():
    reformatted = BP.replace("succB Zero = _", "succB   Zero =   _   -- fill me")
    match(BP, reformatted)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32))
def test_non_hole_changes_fail(seed):
    rng = random.Random(seed)
    text = corpus("succ_solved.cyp")
    words = [w for w in ("doubleN", "value", "Even", "Odd", "Zero") if w in text]
    w = rng.choice(words)
    occurrences = [i for i in range(len(text)) if text.startswith(w, i)]
    i = rng.choice(occurrences)
    mutated = text[:i] + w + "X" + text[i + len(w):]
    with pytest.raises(CypError):
        match(corpus("succ_solved.cyp"), mutated)


FILLS = [
    ("succB Zero = _", "succB Zero = Odd Zero"),
    ("succB (Even x) = _", "succB (Even x) = Odd x"),
    ("succB (Odd x) = _", "succB (Odd x) = Even (succB x)"),
]


@pytest.mark.parametrize("k", range(len(FILLS)))
def test_fill_monotone(k):
    old, new = FILLS[k]
    s = BP.replace(old, new)
    match(BP, s)
    for o, n in FILLS:
        match(BP, s.replace(o, n))
