import itertools
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

import oracle
from conftest import homogeneous_matrix, to_sympy
from qyangian.formdual import (
    casimirs,
    casimirs_from,
    current_basis,
    current_dual_basis,
    dual_basis,
    form,
    gram_rank,
    matrix_coordinates,
    positive_roots,
    residue_pairing,
    root_vectors,
    tbar0,
    tbar0_summands,
    tensor_coordinates,
)
from qyangian.gradedtensor import SuperTensor, apply_sigma, superflip, tensor_commutator, right
from qyangian.scalars import LaurentPoly
from qyangian.supermodel import E, GradedMatrix, gen_h, gen_h_dual, named_basis, supercommutator


@pytest.mark.parametrize("n", [2, 3])
def test_eigenspaces_are_isotropic(n):
    for dual in (False, True):
        basis = [m for _, m in named_basis(n, dual=dual)]
        assert all(form(a, b) == 0 for a in basis for b in basis)


def test_h_pairs_with_its_dual_partner():
    value = form(gen_h(2, 1), gen_h_dual(2, 1))
    assert value == oracle.str_(oracle.h(2, 1) * oracle.h_dual(2, 1), 2) == 4


@given(homogeneous_matrix(), homogeneous_matrix(), homogeneous_matrix(), st.integers(-3, 3))
def test_form_ignores_central_shift(a, b, c, lam):
    traceless = supercommutator(b, c)
    shifted = a + GradedMatrix.identity(2).scale(lam)
    assert form(shifted, traceless) == form(a, traceless)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_gram_rank_matches_oracle(n):
    expected = 2 * n * n - 1
    assert gram_rank(n) == expected
    if n <= 4:
        assert oracle.gram_rank(n) == expected


@pytest.mark.parametrize("n", [2, 3])
def test_dual_basis_pairs_to_identity(n):
    pair = dual_basis(n)
    dim = 2 * n * n - 1
    assert len(pair.e) == len(pair.e_dual) == dim
    dense = sp.Matrix([[oracle.str_(to_sympy(d) * to_sympy(x), n) for x in pair.e] for d in pair.e_dual])
    assert dense == sp.eye(dim)
    assert pair.pairing_matrix() == [[int(i == j) for j in range(dim)] for i in range(dim)]
    # the opposite order differs by the Koszul sign of odd basis vectors
    for x, d, s in zip(pair.e, pair.e_dual, pair.signs):
        assert form(x, d) == s == (-1 if x.parity() else 1)


@pytest.mark.parametrize("n", [2, 3])
def test_casimir_identities(n):
    c = casimirs(n)
    assert superflip(c.t0).equal_mod_center(c.t1)
    assert apply_sigma(c.t, (0, 1)).equal_mod_center(c.t.scale(-1))
    pair = dual_basis(n)
    rescaled = casimirs_from([m.scale(3) for m in pair.e], [m.scale(Fraction(1, 3)) for m in pair.e_dual])
    assert rescaled.t.equal_mod_center(c.t)


def test_casimir_is_invariant_under_g0():
    n = 2
    c = casimirs(n)
    from qyangian.gradedtensor import left

    for _, m in named_basis(n):
        total = tensor_commutator(left(m), c.t) + tensor_commutator(right(m), c.t)
        assert total.is_zero_mod_center()


def test_tbar0_n2_is_the_single_root_formula():
    n = 2
    table = root_vectors(n)
    pair = dual_basis(n)
    k_idx = pair.names.index("k_1")
    expected = (SuperTensor.pure(table.x[(1, 2)], table.x_dual[(1, 2)])
                - SuperTensor.pure(table.xh[(1, 2)], table.xh_dual[(1, 2)])
                + SuperTensor.pure(pair.e[k_idx], pair.e_dual[k_idx]).scale(Fraction(1, 2)))
    assert tbar0(n) == expected
    assert table.x[(1, 2)] == E(2, 1, 2) + E(2, -1, -2)


def test_tbar0_summand_count():
    assert tbar0_summands(3) == 8
    assert len(positive_roots(3)) == 3


def test_bracket_with_tbar0_is_finite():
    n = 2
    t = tensor_commutator(right(gen_h(n, 1)), tbar0(n))
    assert not t.is_zero() and len(t) < 100


@pytest.mark.parametrize("n", [2, 3])
def test_root_vectors_have_unit_duals(n):
    table = root_vectors(n)
    for ab in table.x:
        assert form(table.x_dual[ab], table.x[ab]) == 1
        assert form(table.xh_dual[ab], table.xh[ab]) == 1


def test_residue_examples():
    n = 2
    pair = dual_basis(n)
    i = 0
    f = LaurentPoly({2: pair.e[i]})
    g = LaurentPoly({-3: pair.e_dual[i]})
    assert residue_pairing(g, f) == 1
    assert residue_pairing(LaurentPoly({1: pair.e[i]}), LaurentPoly({2: pair.e_dual[i]})) == 0


def test_dual_currents_pairing_n2():
    n = 2
    dim = 2 * n * n - 1
    for i, j in itertools.product(range(dim), repeat=2):
        for k, l in itertools.product(range(5), repeat=2):
            v = residue_pairing(current_dual_basis(n, j, l), current_basis(n, i, k))
            assert v == (1 if (i, k) == (j, l) else 0)


def test_residue_argument_order_sign():
    n = 2
    pair = dual_basis(n)
    for i, x in enumerate(pair.e):
        for k in range(3):
            fwd = residue_pairing(current_basis(n, i, k), current_dual_basis(n, i, k))
            assert fwd == (-1 if x.parity() else 1)


@pytest.mark.parametrize("n", [2, 3])
def test_matrix_coordinates_round_trip(n):
    named = dict(named_basis(n) + named_basis(n, dual=True))
    for nm, m in named.items():
        assert matrix_coordinates(m) == {nm: 1}
    combo = named["h_1"].scale(2) + named[f"xh+^{1}"].scale(Fraction(-1, 3))
    assert matrix_coordinates(combo) == {"h_1": 2, "xh+^1": Fraction(-1, 3)}


def test_matrix_coordinates_rejects_supertrace():
    with pytest.raises(ValueError):
        matrix_coordinates(E(2, 1, 1))


def test_tensor_coordinates_of_t0():
    n = 2
    pair = dual_basis(n)
    coords = tensor_coordinates(casimirs(n).t0)
    assert len(coords) > 0
    rebuilt = SuperTensor.zero(n, 2)
    named = dict(named_basis(n) + named_basis(n, dual=True))
    for (a, b), c in coords.items():
        rebuilt = rebuilt + SuperTensor.pure(named[a], named[b]).scale(c)
    assert rebuilt.equal_mod_center(casimirs(n).t0)
    assert pair.names[0] == "h_1"


@given(homogeneous_matrix(), homogeneous_matrix(), homogeneous_matrix())
def test_form_is_supersymmetric_and_invariant(a, b, c):
    sign = -1 if a.parity() and b.parity() else 1
    assert form(a, b) == sign * form(b, a)
    assert form(supercommutator(a, b), c) == form(a, supercommutator(b, c))
