from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from k3cm.arith import primes_below
from k3cm.errors import InvalidInput
from k3cm.lattices import (
    GramMatrix,
    binary_disc,
    double_pairing,
    endomorphism_order,
    hyperbolic_plane,
    nonsplit_criterion,
    orthogonal_sum,
    singular_normal_form,
)


def test_normal_form_examples():
    nf = singular_normal_form(GramMatrix.binary(2, 1, 2), 5)
    assert (nf.n, nf.a1p, nf.a2, nf.a3p, nf.disc_pic) == (0, 1, 1, 1, -3)
    nf = singular_normal_form(GramMatrix.binary(2, 0, 2), 3)
    assert (nf.n, nf.a1p, nf.a2, nf.a3p, nf.disc_pic) == (0, 1, 0, 1, -4)
    nf = singular_normal_form(GramMatrix.binary(10, 1, 10), 5)
    assert (nf.n, nf.a1p, nf.a2, nf.a3p, nf.disc_pic) == (1, 1, 1, 1, -99)


def test_endomorphism_order_examples():
    cases = [((2, 1, 2), 5, (1, 1, 1), -3), ((2, 0, 2), 3, (1, 0, 1), -4), ((10, 1, 10), 5, (25, 1, 1), -99)]
    for gram, p, poly, disc in cases:
        order = endomorphism_order(singular_normal_form(GramMatrix.binary(*gram), p))
        assert (order.c0, order.c1, order.c2) == poly
        assert order.poly_discriminant == disc


def test_nonsplit_examples():
    assert nonsplit_criterion(singular_normal_form(GramMatrix.binary(2, 1, 2), 5))
    assert not nonsplit_criterion(singular_normal_form(GramMatrix.binary(2, 1, 2), 7))
    assert not nonsplit_criterion(singular_normal_form(GramMatrix.binary(2, 1, 4), 2))


def test_rejections():
    with pytest.raises(InvalidInput):
        singular_normal_form(GramMatrix.binary(2, 1, 2), 3)  # 3 | disc
    with pytest.raises(InvalidInput):
        singular_normal_form(GramMatrix.binary(1, 0, 1), 3)  # odd
    with pytest.raises(InvalidInput):
        singular_normal_form(GramMatrix.binary(2, 3, 2), 7)  # indefinite


def test_doubling_examples():
    assert double_pairing(GramMatrix.binary(2, 1, 2)) == GramMatrix.binary(4, 2, 4)
    assert double_pairing(hyperbolic_plane()).to_list() == [[0, 2], [2, 0]]
    uu = orthogonal_sum(hyperbolic_plane(), hyperbolic_plane())
    assert double_pairing(uu).determinant() == 16 * uu.determinant() == 16


even_binary = st.tuples(st.integers(1, 25), st.integers(-25, 25), st.integers(1, 25)).map(
    lambda t: GramMatrix.binary(2 * t[0], t[1], 2 * t[2])
).filter(lambda g: g.is_positive_definite())


@given(st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), min_size=3, max_size=3))
def test_doubling_scales_determinant(rows):
    sym = [[rows[i][j] if i <= j else rows[j][i] for j in range(3)] for i in range(3)]
    for i in range(3):
        sym[i][i] = 2 * sym[i][i]
    g = GramMatrix.of(sym)
    doubled = double_pairing(g)
    assert doubled.determinant() == 8 * g.determinant()
    assert doubled.is_even() and g.is_even()


@given(even_binary, st.sampled_from(primes_below(60)))
def test_order_discriminant_is_disc_pic(gram, p):
    if binary_disc(gram) % p == 0:
        return
    nf = singular_normal_form(gram, p)
    assert endomorphism_order(nf).poly_discriminant == nf.disc_pic == binary_disc(gram)
