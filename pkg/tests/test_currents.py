from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracle
from conftest import to_sympy
from qyangian.currents import (
    Current,
    TwistViolation,
    audit_theorem2,
    build_tower,
    current_bracket,
    decomposition_project,
    make_current,
    proportionality,
    scalar_law,
    serre_audit,
)
from qyangian.supermodel import GradedMatrix, ModelConfig, center_project, gen_h, gen_h_dual, gen_k, gen_x, named_basis


def test_make_current_twist_condition():
    assert make_current(gen_h(2, 1), 0).degrees() == [0]
    assert make_current(gen_h_dual(2, 1), 1).degrees() == [1]
    with pytest.raises(TwistViolation):
        make_current(gen_h(2, 1), 1)
    with pytest.raises(ValueError):
        make_current(gen_h(2, 1), -2)


def test_bracket_examples():
    n = 2
    lhs = current_bracket(make_current(gen_x(n, 1, 1), 0), make_current(gen_x(n, 1, -1), 0))
    assert lhs == make_current(gen_h(n, 1), 0)
    hu = make_current(gen_h_dual(n, 1), 1)
    assert current_bracket(hu, hu).is_zero()


@given(st.integers(0, 16), st.integers(0, 16))
def test_bracket_respects_twist(i, j):
    n = 2
    g0 = [m for _, m in named_basis(n)]
    g1 = [m for _, m in named_basis(n, dual=True)]
    a = make_current(g0[i % 7], 2)
    b = make_current(g1[j % 7], 3)
    out = current_bracket(a, b)
    assert set(out.degrees()) <= {5}


def test_decomposition_project():
    n = 2
    h, hd = gen_h(n, 1), gen_h_dual(n, 1)
    cur, res = decomposition_project({2: h})
    assert res == {} and cur.component(2) == center_project(h)
    cur, res = decomposition_project({1: h})
    assert cur.is_zero() and res[1] == center_project(h)
    cur, res = decomposition_project({1: h + hd})
    assert cur == make_current(hd, 1)


def test_tower_seed_n2():
    n = 2
    tw = build_tower(ModelConfig(n), 3)
    hu = make_current(gen_h_dual(n, 1), 1)
    expect = current_bracket(hu, make_current(gen_x(n, 1, 1), 0)).scale(Fraction(1, 2))
    assert tw.x[(1, 1, 1)] == expect
    assert tw.x[(1, 1, 1)].degrees() == [1]
    # both h^0 and h^2 fall outside 1..n-1, so the k tower stops at level 1
    assert tw.k[(1, 1)].is_zero()
    assert tw.xh[(1, 1, 1)].is_zero()


def test_tower_level_two_is_proportional_to_u_squared():
    n = 3
    tw = build_tower(ModelConfig(n), 2)
    lam = proportionality(tw.x[(1, 1, 2)], Current(n, {2: gen_x(n, 1, 1)}))
    assert lam is not None and lam != 0


def test_htilde_commute_n3():
    n = 3
    tw = build_tower(ModelConfig(n), 4)
    assert current_bracket(tw.ht[(1, 2)], tw.ht[(1, 4)]).is_zero()


def test_n2_scalar_law_prediction_fails():
    n = 2
    tw = build_tower(ModelConfig(n), 2)
    got = current_bracket(tw.xh[(1, 1, 0)], tw.x[(-1, 1, 2)])
    assert scalar_law(2, 1) == 0
    assert not got.is_zero()
    assert to_sympy(got.component(2)) == oracle.n2_level2_bracket() == oracle.mod_center(to_sympy(gen_k(2, 1)), 2)
    rep = audit_theorem2(ModelConfig(n), 4)
    assert rep.by_id("scalar.even.n2-zero.k=1").status == "fail"


def test_scalar_law_values():
    assert scalar_law(4, 2) == Fraction(1, 4)
    assert scalar_law(3, 0) == 1


@pytest.mark.parametrize("n,expected", [(3, None), (4, "1/1"), (5, "1/1")])
def test_lambda_outcomes_frozen(n, expected):
    rep = audit_theorem2(ModelConfig(n), 6)
    for k in (1, 2):
        w = rep.by_id(f"scalar.even.lambda.k={k}").witness
        assert w["lambda"] == expected and w["match"] is False
    assert rep.by_id("scalar.even.lambda.k=0").witness["match"] is True


def test_audit_n3_frozen_failure_families():
    rep = audit_theorem2(ModelConfig(3), 8)
    fams = sorted({f.id.split(".")[0] for f in rep if f.status == "fail"})
    assert fams == ["[ht_odd,k]", "[k0,x]", "[k0,xh]", "[k_even,k_even]", "diff", "scalar"]
    assert len(rep) == 2484


@pytest.mark.parametrize("n", [3, 4])
def test_serre_relations_hold(n):
    rep = serre_audit(ModelConfig(n))
    assert len(rep) > 0 and rep.ok
    base = serre_audit(ModelConfig(n), levels=[(0, 0, 0), (0, 0, 1)])
    assert base.by_id("serre.x.+1.1,2.0,0,0").passed
    assert base.by_id("serre.x.+1.1,2.0,0,1").passed
    assert base.by_id("serre.xh.+1.1,2.0,0,0").passed


def test_current_to_json_shape():
    cur = make_current(gen_h(2, 1), 2)
    assert list(cur.to_json()) == ["2"]
    assert Current(2, {0: GradedMatrix.identity(2)}).is_zero()
