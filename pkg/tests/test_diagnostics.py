import pytest

from cyp.checker import check_source
from cyp.diagnostics import Diagnostic, render, render_machine, source_slice
from cyp.syntax import Span
from support import CORPUS, corpus


def test_zero_span_renders_message_only():
    d = Diagnostic("missing declaration", (), "resolve")
    assert render(d, {}) == "error (resolve): missing declaration"
    assert render_machine(d, "f.cyp") == "f.cyp:0:0: resolve: missing declaration"


def test_phase_is_validated():
    with pytest.raises(ValueError):
        Diagnostic("x", (), "nope")


def test_two_span_rendering():
    text = corpus("group_filled.cyp").replace("(by square)        .=. times e (times y x)", "(by assoc)         .=. times e (times y x)")
    r = check_source(text, "g.cyp")
    d = r.diagnostic
    assert d is not None and len(d.spans) >= 2
    out = render(d, {"g.cyp": text})
    assert out.count("  --> g.cyp:") == len(d.spans)
    for s in d.spans:
        assert source_slice(s, text).splitlines()[0] in out


def test_carets_align_with_tabs():
    text = "\tfoo bar\n"
    d = Diagnostic("m", (Span((1, 6), (1, 9), "t"),), "parse")
    lines = render(d, {"t": text}).splitlines()
    assert lines[2] == "   | \tfoo bar"
    assert lines[3] == "   | \t    ^^^"


def test_multiline_span():
    text = "ab\ncd\nef\n"
    d = Diagnostic("m", (Span((1, 2), (3, 2), "t"),), "parse")
    lines = render(d, {"t": text}).splitlines()
    assert lines[2:] == ["   | ab", "   |  ^", "   | cd", "   | ^^", "   | ef", "   | ^"]


def test_root_clash_names_both_sides():
    r = check_source(corpus("succ_renamed.cyp"), "s.cyp", corpus("succ.byp"), "b.byp")
    out = render(r.diagnostic, {"s.cyp": corpus("succ_renamed.cyp"), "b.byp": corpus("succ.byp")})
    assert "succB :: B -> B" in out and "incB :: B -> B" in out


def test_rendering_is_total_on_odd_spans():
    d = Diagnostic("m", (Span((9, 1), (9, 4), "t"), Span((1, 50), (1, 60), "t")), "proof")
    render(d, {"t": "short\n"})
    render(d, {})
