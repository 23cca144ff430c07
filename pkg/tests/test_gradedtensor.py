import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracle
from conftest import homogeneous_matrix, nonzero_q
from qyangian.formdual import casimirs
from qyangian.gradedtensor import (
    SuperTensor,
    embed,
    key_parity,
    left,
    right,
    superflip,
    tensor_commutator,
    tensor_mul,
)
from qyangian.supermodel import E, gen_h, gen_k, labels

N = 2
LEGS = [None] + [(a, b) for a in labels(N) for b in labels(N)]


@st.composite
def tensors(draw, order=2, max_terms=4):
    keys = draw(st.lists(st.tuples(*[st.sampled_from(LEGS)] * order), min_size=0, max_size=max_terms, unique=True))
    return SuperTensor(N, order, {k: draw(nonzero_q) for k in keys})


@given(tensors(), tensors(), tensors())
def test_associativity(x, y, z):
    assert tensor_mul(tensor_mul(x, y), z) == tensor_mul(x, tensor_mul(y, z))


@given(tensors(order=3, max_terms=3), tensors(order=3, max_terms=3))
def test_product_matches_faithful_representation(x, y):
    lhs = oracle.tensor_rep(N, tensor_mul(x, y).terms, 3)
    assert lhs == oracle.tensor_rep(N, x.terms, 3) * oracle.tensor_rep(N, y.terms, 3)


@given(tensors(), tensors())
def test_square_product_matches_faithful_representation(x, y):
    assert oracle.tensor_rep(N, tensor_mul(x, y).terms) == oracle.tensor_rep(N, x.terms) * oracle.tensor_rep(N, y.terms)


@given(tensors())
def test_unit_and_flip(x):
    one = SuperTensor.unit(N, 2)
    assert tensor_mul(one, x) == x == tensor_mul(x, one)
    assert superflip(superflip(x)) == x


@given(homogeneous_matrix(), homogeneous_matrix())
def test_koszul_swap_rule(b, c):
    got = tensor_mul(right(b), left(c))
    sign = -1 if b.parity() and c.parity() else 1
    assert got == SuperTensor.pure(c, b).scale(sign)


def test_even_products_carry_no_sign():
    a, b = E(N, 1, 2), E(N, 2, 1)
    assert tensor_mul(SuperTensor.pure(a, b), SuperTensor.pure(b, a)) == SuperTensor.pure(E(N, 1, 1), E(N, 2, 2))


def test_flip_of_even_term_is_plain_swap():
    a, b = E(N, 1, 2), E(N, -1, -2)
    assert superflip(SuperTensor.pure(a, b)) == SuperTensor.pure(b, a)
    odd = E(N, 1, -1)
    assert superflip(SuperTensor.pure(odd, odd)) == SuperTensor.pure(odd, odd).scale(-1)


def test_flip_requires_order_two():
    with pytest.raises(ValueError):
        superflip(SuperTensor.unit(N, 3))
    with pytest.raises(ValueError):
        embed(SuperTensor.unit(N, 3), "12")
    with pytest.raises(ValueError):
        embed(SuperTensor.unit(N, 2), "31")


def test_embed_places_legs():
    a, b = E(N, 1, 2), E(N, -1, 2)
    assert embed(SuperTensor.pure(a, b), "13") == SuperTensor.pure(a, None, b)
    assert embed(SuperTensor.pure(a, b), "23") == SuperTensor.pure(None, a, b)


@given(tensors(), tensors())
def test_embed_is_multiplicative_and_keeps_parity(x, y):
    assert tensor_mul(embed(x, "12"), embed(y, "12")) == embed(tensor_mul(x, y), "12")
    for key in embed(x, "13").terms:
        assert key_parity(key) == key_parity(tuple(l for l in key if l is not None))


def test_casimir_flip():
    c = casimirs(N)
    assert superflip(c.t0) == c.t1


def test_self_bracket_of_even_casimir():
    t0 = casimirs(N).t0
    assert tensor_commutator(t0.parity_parts().get(0, SuperTensor.zero(N, 2)),
                             t0.parity_parts().get(0, SuperTensor.zero(N, 2))).is_zero()


def test_bracket_identities_with_casimirs():
    c = casimirs(N)
    h = gen_h(N, 1)
    assert tensor_commutator(left(h), c.t0).equal_mod_center(tensor_commutator(right(h), c.t0).scale(-1))
    k_dual = gen_k(N, 1, dual=True)
    total = tensor_commutator(left(k_dual), c.t0) + tensor_commutator(right(k_dual), c.t1)
    assert total.is_zero_mod_center()


@given(tensors(), tensors())
def test_commutator_antisymmetry(x, y):
    for p, xp in x.parity_parts().items():
        for q, yq in y.parity_parts().items():
            sign = -1 if p and q else 1
            assert tensor_commutator(xp, yq) == tensor_commutator(yq, xp).scale(-sign)


@pytest.mark.parametrize("n", [2, 3])
def test_odd_identity_needs_the_antifixed_partner(n):
    c = casimirs(n)

    def residual(b):
        return tensor_commutator(left(b), c.t0) + tensor_commutator(right(b), c.t1)

    assert residual(gen_k(n, 1, dual=True)).is_zero_mod_center()
    # with the σ-fixed k_1 in place of k^1 the identity does not hold
    assert not residual(gen_k(n, 1)).is_zero_mod_center()
