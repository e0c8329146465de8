from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from k3cm.crystal import (
    LocalFieldData,
    artin_invariant_via_cokernel,
    beta_exponents,
    bk_symbolic,
    build_beta,
    fixed_module_basis,
    fixed_span_cokernel_length,
    p_over_pi,
    specialize_mod_u,
    uniformizer,
)
from k3cm.errors import InvalidInput

GRID = [(2, 2, 1), (3, 2, 1), (3, 2, 2), (5, 4, 1), (2, 4, 1), (3, 4, 2), (2, 2, 3), (7, 6, 1)]


def pi_exponents(d):
    return [q for _, q in beta_exponents(d)]


def test_beta_examples():
    assert build_beta(LocalFieldData(5, 4, 1)).beta == ((5,), (25,), (5,), (1,))
    assert build_beta(LocalFieldData(3, 2, 1)).beta == ((1,), (9,))
    c = build_beta(LocalFieldData(3, 2, 2, (-3, 0, 1)))
    assert c.beta == ((0, 1), (0, 3))  # beta_0 = 3/pi = pi, beta_1 = 3 pi
    assert c.diagnostics


def test_pi_exponent_patterns():
    assert pi_exponents(2) == [-1, 1]
    assert pi_exponents(4) == [0, 1, 0, -1]
    assert pi_exponents(6) == [0, 1, 0, 0, -1, 0]


def test_odd_or_incompatible_inputs_rejected():
    with pytest.raises(InvalidInput):
        build_beta(LocalFieldData(3, 3, 1))
    with pytest.raises(InvalidInput):
        build_beta(LocalFieldData(3, 2, 1), residue_degree=3)
    with pytest.raises(InvalidInput):
        LocalFieldData(3, 2, 2, (-9, 0, 1))
    with pytest.raises(InvalidInput):
        LocalFieldData(3, 2, 2, (-3, 1, 1))


def test_bk_symbolic_examples():
    assert [c.pi_power for c in bk_symbolic(2).components] == [1, -1]
    assert [c.pi_power for c in bk_symbolic(4).components] == [1, 0, -1, 0]
    comp0 = bk_symbolic(4).components[0]
    assert dict(comp0.unit_factors) == {"E/E(0)": 1, "E0/E0(0)": 1}
    assert dict(bk_symbolic(4).components[2].unit_factors) == {"E/E(0)": 1, "E2/E2(0)": -1}


@pytest.mark.parametrize("d", [2, 4, 6, 8, 10])
def test_specialization_matches_beta(d):
    assert specialize_mod_u(bk_symbolic(d)) == beta_exponents(d)


@pytest.mark.parametrize("p,d,e", GRID)
def test_beta_product_is_p_to_the_d(p, d, e):
    c = build_beta(LocalFieldData(p, d, e), precision=6)
    acc = (1,) + (0,) * (e - 1)
    for b in c.beta:
        acc = _mul(c, acc, b)
    assert acc == tuple(p**d % c.ring.q if k == 0 else 0 for k in range(e))


def _mul(c, a, b):
    # multiply integer polynomials in T modulo the Eisenstein polynomial
    R = c.ring
    x = tuple(R.from_int(t) for t in a)
    y = c.scale(x, b)
    return tuple(t[0] for t in y)


@pytest.mark.parametrize("eis", [(-3, 0, 1), (-6, 3, 1), (-12, 0, 1), (3, -3, 1)])
def test_p_over_pi_times_pi_is_p(eis):
    lfd = LocalFieldData(3, 2, 2, eis)
    c = build_beta(lfd, precision=6)
    prod = _mul(c, uniformizer(lfd, c.ring.q), p_over_pi(lfd, c.ring.q))
    assert prod == (3, 0)


@pytest.mark.parametrize("p,d,e", GRID)
def test_phi_d_is_p_d_times_sigma_d(p, d, e):
    c = build_beta(LocalFieldData(p, d, e), precision=5)
    R = c.ring
    x = tuple(tuple(R.add(R.gen(), R.from_int(i + k)) for k in range(e)) for i in range(d))
    y = x
    for _ in range(d):
        y = c.phi(y)
    expected = x
    for _ in range(d):
        expected = tuple(c.comp_frobenius(comp) for comp in expected)
    for _ in range(d):
        expected = c.times_p(expected)
    assert y == expected


@pytest.mark.parametrize("p,d,e", GRID)
def test_phi_commutes_with_coefficient_action(p, d, e):
    c = build_beta(LocalFieldData(p, d, e), precision=5)
    R = c.ring
    w = R.add(R.teichmuller_generator(d), R.from_int(p))
    x = tuple(tuple(R.power(R.add(R.gen(), R.from_int(i)), k + 1) for k in range(e)) for i in range(d))
    assert c.phi(c.act_unramified(w, x)) == c.act_unramified(w, c.phi(x))
    assert c.phi(c.act_uniformizer(x)) == c.act_uniformizer(c.phi(x))


@pytest.mark.parametrize("p,d,e", GRID)
def test_fixed_module(p, d, e):
    c = build_beta(LocalFieldData(p, d, e), precision=6)
    fixed = fixed_module_basis(c)
    assert len(fixed.vectors) == d * e == fixed.rank_mod_p
    assert fixed.achieved_precision >= c.ring.N - 1
    for x in fixed.vectors:
        assert c.phi(x) == c.times_p(x)
    assert fixed_span_cokernel_length(c, fixed) == d // 2


def test_cokernel_examples():
    assert artin_invariant_via_cokernel(build_beta(LocalFieldData(3, 2, 1))).length == 1
    assert artin_invariant_via_cokernel(build_beta(LocalFieldData(5, 4, 1))).length == 2
    assert artin_invariant_via_cokernel(build_beta(LocalFieldData(3, 2, 2, (-3, 0, 1)))).length == 1


@given(
    st.sampled_from([2, 3, 5]),
    st.sampled_from([2, 4]),
    st.sampled_from([1, 2]),
    st.sampled_from([1, 2]),
    st.integers(3, 8),
    st.booleans(),
)
def test_cokernel_independent_of_model(p, d, e, mult, N, twist):
    eis = ()
    if twist:
        # T^e - p(1 + p): a different Eisenstein polynomial for the same e
        eis = (-p * (1 + p),) + (0,) * (e - 1) + (1,)
    c = build_beta(LocalFieldData(p, d, e, eis), precision=N, residue_degree=d * mult)
    result = artin_invariant_via_cokernel(c)
    assert result.length == d // 2
    assert result.prime_ring_total == c.ring.m * d // 2
