import json

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from qyangian.findings import FindingsReport
from qyangian.hopfaudit import (
    GenSymbol,
    PBWEngine,
    UnsupportedShape,
    build_delta_table,
    build_relation_table,
    check_confluence,
    check_correspondence,
    check_delta_homomorphism,
    check_invariance_lemma,
    e_sym,
    half_casimir,
    hom_tails,
    hopf_suite,
    load_presentation,
    pbw_reduce,
    presentation_from_json,
    presentation_json,
    sym,
)
from qyangian.supermodel import named_basis

N2_SYMBOLS = [sym(f, 1, lvl) for f in ("h", "k", "x+", "x-", "xh+", "xh-") for lvl in (0, 1)]


def test_symbol_json_and_validation():
    s = sym("xh+", 2, 1)
    assert GenSymbol.from_json(json.loads(json.dumps(s.to_json()))) == s
    assert s.parity == 1 and sym("x-", 1).parity == 0
    with pytest.raises(ValueError):
        GenSymbol("y", 1)
    with pytest.raises(ValueError):
        GenSymbol("h", 1, 2)


def test_single_letters_are_normal():
    for s in N2_SYMBOLS[::2]:
        assert pbw_reduce((s,), 2) == e_sym(s)
    with pytest.raises(UnsupportedShape):
        pbw_reduce((sym("h", 1, 1),), 2)


@given(st.lists(st.sampled_from(N2_SYMBOLS[::2]), min_size=2, max_size=3))
def test_rewriting_strategies_agree_at_level0(word):
    word = tuple(word)
    assert pbw_reduce(word, 2, "left") == pbw_reduce(word, 2, "right")


@given(st.sampled_from(N2_SYMBOLS[1::2]), st.lists(st.sampled_from(N2_SYMBOLS[::2]), min_size=1, max_size=2),
       st.integers(0, 2))
def test_rewriting_strategies_agree_with_level1(top, rest, pos):
    # the engine handles words with at most one level-1 letter
    word = rest[:pos] + [top] + rest[pos:]
    eng = PBWEngine(2, build_relation_table(2).level1_rules())
    x = {tuple(word): 1}
    try:
        left = eng.reduce(x, "left")
    except UnsupportedShape:
        # the presentation gives no rule for some [level-1, level-0] pairs, e.g. [k_{1,1}, h_{1,0}]
        assume(False)
    assert left == eng.reduce(x, "right")


def test_level1_rules_cover_both_printed_orders():
    rules = build_relation_table(2).level1_rules()
    assert rules[(sym("h", 1, 1), sym("h", 1, 0))] == {}
    assert (sym("h", 1, 1), sym("x+", 1, 0)) in rules
    eng = PBWEngine(2, rules)
    with pytest.raises(UnsupportedShape):
        eng.reduce({(sym("k", 1, 1), sym("h", 1, 0)): 1})


def test_confluence_n2():
    assert check_confluence(2, 3).passed


def test_presentation_round_trip(tmp_path):
    text = presentation_json(2)
    rt, dt = presentation_from_json(text)
    assert json.loads(text)["relations"] == rt.to_json()
    path = tmp_path / "pres.json"
    path.write_text(text, encoding="utf-8")
    for source in (path, str(path), text):
        rt2, dt2 = load_presentation(source)
        assert rt2.to_json() == rt.to_json() and dt2.to_json() == dt.to_json()
    assert len(build_relation_table(2)) == 54
    assert len(build_delta_table(2).entries) == 12


def test_correspondence_frozen_n2():
    dt = build_delta_table(2)
    h = check_correspondence(sym("h", 1, 1), 2, dt)
    assert h.by_id("correspondence.h.1.order0").passed
    assert not h.by_id("correspondence.h.1.expansion").passed
    assert h.by_id("correspondence.h.1.half-casimir").passed
    k = check_correspondence(sym("k", 1, 1), 2, dt)
    assert k.by_id("correspondence.k.1.half-casimir").passed
    xh = check_correspondence(sym("xh+", 1, 1), 2, dt)
    assert not xh.by_id("correspondence.xh+.1.order0").passed
    with pytest.raises(ValueError):
        check_correspondence(sym("h", 1, 0), 2, dt)


def test_delta_homomorphism_frozen_n2():
    rep = check_delta_homomorphism(("h", "x"), 2)
    assert rep.by_id("delta-hom.[h1,x0].-.1,1").passed
    bad = rep.by_id("delta-hom.[h1,x0].+.1,1")
    assert not bad.passed and bad.witness["order0"] == []
    with pytest.raises(KeyError):
        check_delta_homomorphism(("x", "h"), 2)


def test_drop_k_control_is_reported_as_info():
    dropped = hom_tails(2, drop_k=True)
    rep = check_delta_homomorphism(("h", "x"), 2, tails={k: v for k, v in dropped.items() if k[0] == "h"},
                                   ident="control.x", control=True)
    assert all(f.status == "info" for f in rep)


@pytest.mark.parametrize("n", [2, 3])
def test_invariance_lemma_on_g0(n):
    for nm, m in named_basis(n):
        assert check_invariance_lemma(m).passed, nm


def test_half_casimir_is_nonzero():
    assert not half_casimir(2).is_zero()


def test_hopf_suite_counts_frozen():
    rep = hopf_suite(2, controls=True)
    assert isinstance(rep, FindingsReport)
    assert len(rep) == 151
    assert sum(f.status == "fail" for f in rep) == 34
    assert rep.by_id("presentation.round-trip").passed
    assert rep.by_id("correspondence.global-sign").witness == {"sign": 0}
    assert rep.by_id("coproduct.k[1,1].sign-consistency").status == "fail"
    assert all(f.status == "info" for f in rep if f.control)
