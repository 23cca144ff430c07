from fractions import Fraction

import pytest

import oracle
from qyangian.currents import make_current
from qyangian.formdual import casimirs
from qyangian.gradedtensor import left, right, tensor_commutator
from qyangian.rmatrixlab import (
    CANONICAL,
    LITERAL,
    U_MINUS_V,
    U_PLUS_V,
    PoleNotCancelled,
    PoleTensor,
    averaging_derivation,
    canonical_partial_sums,
    check_cobracket_laws,
    check_cybe,
    check_twist_rejection,
    check_unitarity,
    cocommutator,
    constant_part,
    delta_claims,
    leg_ordered,
    resummation_check,
    rmatrix_suite,
    series_coefficients,
    swap_uv,
    twisted_membership,
    twisted_r,
    twisted_r_average,
    twisted_r_closed,
    yang_r,
    yang_series_check,
)
from qyangian.scalars import SparsePoly
from qyangian.supermodel import gen_h, gen_h_dual, gen_k, gen_x, generator


def evaluate(r: PoleTensor, point):
    """Numeric order-2 tensor r(point) with Fraction coefficients."""
    out = {}
    for den, t in r.parts.items():
        d = Fraction(1)
        for i, j, s in den:
            d *= point[i] + s * point[j]
        for key, c in t.items():
            val = SparsePoly.coerce(c)
            num = sum((coef * point[0] ** e[0] * point[1] ** e[1] * point[2] ** e[2] for e, coef in val.items()),
                      Fraction(0))
            out[key] = out.get(key, 0) + num / d
    return {k: v for k, v in out.items() if v}


def dense_cube(n, terms, legs):
    i, j = legs
    padded = {}
    for (a, b), c in terms.items():
        key = [None, None, None]
        key[i], key[j] = a, b
        padded[tuple(key)] = c
    return oracle.tensor_rep(n, padded, 3)


def dense_cybe(n, r, u, v, w):
    r12 = dense_cube(n, evaluate(r, (u, v, 0)), (0, 1))
    r13 = dense_cube(n, evaluate(r, (u, w, 0)), (0, 2))
    r23 = dense_cube(n, evaluate(r, (v, w, 0)), (1, 2))

    def br(x, y):
        # r is even, so the super bracket is the plain one
        return x * y - y * x

    total = br(r12, r13) + br(r12, r23) + br(r13, r23)
    return oracle.project_legs(n, oracle.dense_to_coefficients(n, total, 3), 3)


def test_yang_r_structure():
    n = 2
    r = yang_r(n)
    assert r.denominators() == [(U_MINUS_V,)]
    assert r.term(U_MINUS_V).map_coefficients(lambda p: SparsePoly.coerce(p).constant()) == casimirs(n).t


def test_twisted_forms_agree_and_split():
    for n in (2, 3):
        closed, avg = twisted_r_closed(n), twisted_r_average(n)
        assert (closed - avg).is_zero()
        c = casimirs(n)
        coeff = constant_part(twisted_r(n).term(U_MINUS_V))
        assert coeff.equal_mod_center((c.t0 + c.t1).scale(Fraction(1, 2)))


def test_series_against_geometric_oracle():
    n = 2
    minus, plus = oracle.series_coefficients(8)
    c = casimirs(n)
    sym = (c.t0 + c.t1).scale(Fraction(1, 2))
    anti = (c.t0 - c.t1).scale(Fraction(1, 2))
    coeffs = series_coefficients(twisted_r(n), 8)
    for k in range(9):
        expected = sym.scale(Fraction(int(minus[k]))) + anti.scale(Fraction(int(plus[k])))
        assert coeffs[k].equal_mod_center(expected)
    assert yang_series_check(n, 8)


@pytest.mark.parametrize("n", [2, 3])
def test_resummation_from_dual_currents(n):
    assert resummation_check(n, 8).passed
    partial = canonical_partial_sums(n, 3)
    c = casimirs(n)
    assert partial[0].equal_mod_center(c.t0)
    assert partial[1].equal_mod_center(c.t1)


@pytest.mark.parametrize("n", [2, 3])
def test_unitarity(n):
    assert check_unitarity(twisted_r(n)).passed
    assert check_unitarity(yang_r(n)).passed


def test_unitarity_control_fails():
    n = 2
    c = casimirs(n)
    bumped = twisted_r(n) + PoleTensor.simple(c.t0.map_coefficients(SparsePoly.coerce), U_PLUS_V)
    f = check_unitarity(bumped)
    assert f.status == "fail" and f.witness


@pytest.mark.parametrize("n", [2, 3])
def test_cybe(n):
    assert check_cybe(yang_r(n)).passed
    assert check_cybe(leg_ordered(twisted_r(n))).passed


def test_cybe_control_t0_only_fails():
    assert not check_cybe(yang_r(2, casimirs(2).t0)).passed


def test_cybe_point_evaluation_dense_oracle():
    n = 2
    u, v, w = Fraction(3), Fraction(-5, 2), Fraction(7, 3)
    assert dense_cybe(n, yang_r(n), u, v, w) == {}
    assert dense_cybe(n, leg_ordered(twisted_r(n)), u, v, w) == {}
    assert dense_cybe(n, yang_r(n, casimirs(n).t0), u, v, w) != {}


def test_averaging_derivation():
    rep = averaging_derivation(2)
    for ident in ("averaging.per-bracket", "averaging.total", "averaging.target", "averaging.identity-term"):
        assert rep.by_id(ident).passed


def test_delta_examples():
    n = 2
    hd = gen_h_dual(n, 1)
    c = casimirs(n)
    lit = constant_part(cocommutator({1: hd}, n, LITERAL))
    can = constant_part(cocommutator({1: hd}, n, CANONICAL))
    assert lit.equal_mod_center(tensor_commutator(left(hd), c.t0))
    assert can.equal_mod_center(tensor_commutator(right(hd), c.t0))
    # a level-0 current is primitive in the sense that δ vanishes
    assert cocommutator({0: gen_x(n, 1, 1)}, n).is_zero()
    assert cocommutator(make_current(gen_h(n, 1), 0), n).is_zero()


def test_delta_rejects_untwisted_current():
    with pytest.raises(PoleNotCancelled):
        cocommutator({1: gen_h(2, 1)}, 2)
    assert check_twist_rejection(2).passed
    with pytest.raises(ValueError):
        cocommutator({1: gen_h_dual(2, 1)}, 2, convention="sideways")


def test_cobracket_laws_n2():
    rep = check_cobracket_laws(2, 3, CANONICAL)
    assert rep.ok, [f.id for f in rep.failures()]
    lit = check_cobracket_laws(2, 2, LITERAL)
    assert not lit.by_id("delta.twisted-target.literal").passed
    assert lit.by_id("delta.co-antisymmetry.literal").passed


def test_twisted_membership():
    n = 2
    c = casimirs(n)
    k = gen_k(n, 1, dual=True)
    assert twisted_membership(constant_part(cocommutator({1: k}, n, CANONICAL)).map_coefficients(SparsePoly.coerce))
    assert not twisted_membership(tensor_commutator(left(k), c.t0).map_coefficients(SparsePoly.coerce))


@pytest.mark.parametrize("n", [2, 3])
def test_delta_claims_frozen(n):
    rep = delta_claims(n)
    for fam in ("h", "k", "x+", "x-", "xh+", "xh-"):
        for i in range(1, n):
            assert rep.by_id(f"delta-claim.{fam}.{i}.forms-agree").passed
            literal = rep.by_id(f"delta-claim.{fam}.{i}")
            assert literal.passed == (fam == "h")
            assert literal.witness["matches"] == ["+[m⊗1,t0]"]
            canon = rep.by_id(f"delta-claim.{fam}.{i}.canonical")
            assert canon.status == "info" and canon.witness["claim_holds"] is False
            assert canon.witness["matches"] == ["+[1⊗m,t0]"]


def test_rmatrix_suite_passes_with_controls():
    rep = rmatrix_suite(2, controls=True)
    assert rep.ok
    assert rep.by_id("control.unitarity.perturbed").status == "info"
    assert rep.by_id("control.cybe.t0-only").status == "info"


def test_swap_is_an_involution():
    r = twisted_r(2)
    assert (swap_uv(swap_uv(r)) - r).is_zero()
    assert generator(2, "h", 1, dual=True) == gen_h_dual(2, 1)
