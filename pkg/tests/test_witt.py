from __future__ import annotations

import pytest
from hypothesis import given, strategies as st
from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_form

from k3cm.arith import padic_valuation
from k3cm.errors import InvalidInput
from k3cm.witt import IntegerModRing, find_irreducible, rank_mod_p, smith_valuations, witt_approx

CONFIGS = [(2, 4, 6), (3, 2, 6), (3, 4, 5), (5, 2, 5), (5, 4, 4), (7, 6, 3)]


def elements(R):
    return st.lists(st.integers(0, R.q - 1), min_size=R.m, max_size=R.m).map(tuple)


@pytest.mark.parametrize("p,m,N", CONFIGS)
def test_frobenius_has_order_m(p, m, N):
    R = witt_approx(p, m, N)
    x = R.gen()
    assert R.frobenius_power(x, m) == x
    if m > 1:
        assert R.frobenius(x) != x
    assert R.frobenius(R.from_int(17)) == R.from_int(17)


@pytest.mark.parametrize("p,m,N", CONFIGS)
def test_frobenius_lifts_pth_power(p, m, N):
    R = witt_approx(p, m, N)
    x = R.add(R.gen(), R.from_int(1))
    assert R.reduce_mod_p(R.frobenius(x)) == R.reduce_mod_p(R.power(x, p))


@pytest.mark.parametrize("p,m,N", CONFIGS)
def test_modulus_irreducible_and_teichmuller(p, m, N):
    from sympy import GF, Poly, symbols

    X = symbols("X")
    g = Poly(list(reversed(find_irreducible(p, m))), X, domain=GF(p))
    assert g.is_irreducible
    R = witt_approx(p, m, N)
    for d in [d for d in range(1, m + 1) if m % d == 0]:
        w = R.teichmuller_generator(d)
        assert R.power(w, p**d) == w
        assert R.frobenius(w) == R.power(w, p)
        if d > 1:
            assert R.frobenius_power(w, d - 1) != w


@pytest.mark.parametrize("p,m,N", CONFIGS[:4])
def test_homomorphism_and_inverse(p, m, N):
    R = witt_approx(p, m, N)

    @given(elements(R), elements(R))
    def check(a, b):
        assert R.frobenius(R.mul(a, b)) == R.mul(R.frobenius(a), R.frobenius(b))
        assert R.frobenius(R.add(a, b)) == R.add(R.frobenius(a), R.frobenius(b))
        if any(c % p for c in a):
            assert R.mul(a, R.inverse(a)) == R.one()
        else:
            with pytest.raises(InvalidInput):
                R.inverse(a)

    check()


def test_valuation():
    R = witt_approx(3, 2, 5)
    assert R.valuation(R.zero()) == 5
    assert R.valuation((9, 27)) == 2
    Z = IntegerModRing(5, 4)
    assert Z.valuation(50) == 2 and Z.valuation(0) == 4


def _snf_oracle(matrix, p, N):
    diag = smith_normal_form(Matrix(matrix))
    n = min(diag.shape)
    out = []
    for i in range(n):
        v = padic_valuation(int(diag[i, i]), p) if diag[i, i] != 0 else N
        out.append(min(v, N))
    return sorted(out)


@given(
    st.sampled_from([2, 3, 5]),
    st.integers(1, 4),
    st.integers(1, 4),
    st.data(),
)
def test_smith_valuations_against_sympy(p, rows, cols, data):
    N = 5
    entries = data.draw(
        st.lists(st.lists(st.sampled_from([0, 1, -1, p, 2 * p, p * p, p**3, 1 + p]), min_size=cols, max_size=cols),
                 min_size=rows, max_size=rows)
    )
    Z = IntegerModRing(p, N)
    sparse = [{j: a % Z.q for j, a in enumerate(r) if a % Z.q} for r in entries]
    assert smith_valuations(Z, sparse, cols) == _snf_oracle(entries, p, N)


def test_rank_mod_p():
    assert rank_mod_p([[1, 2], [2, 4]], 5) == 1
    assert rank_mod_p([[1, 2], [3, 4]], 2) == 1
    assert rank_mod_p([[1, 2], [3, 4]], 5) == 2
    assert rank_mod_p([], 3) == 0
