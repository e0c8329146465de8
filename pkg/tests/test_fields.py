from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from k3cm.acceptance import NEG_FUNDAMENTAL, ramified_over_real_subfield
from k3cm.arith import multiplicative_order, primes_below
from k3cm.errors import InvalidInput
from k3cm.fields import (
    CONSISTENT,
    VIOLATED,
    Biquadratic,
    Cyclotomic,
    ImagQuadratic,
    analyze_place,
    biquadratic_order_index_at_p,
    check_unramified_consistency,
    field_from_dict,
    norm_generation_check,
)

PRIMES = primes_below(40)


def test_place_examples():
    inv = analyze_place(ImagQuadratic(-4), 5)
    assert (inv.split_q_in_E, inv.local_degree, inv.kq_degree) == (True, 1, 1)
    inv = analyze_place(ImagQuadratic(-4), 3)
    assert (inv.split_q_in_E, inv.e_p, inv.f_p, inv.d, inv.kq_degree) == (False, 1, 2, 2, 1)
    inv = analyze_place(Biquadratic(-20, -15), 5)
    assert (inv.f_q, inv.e_p, inv.f_p, inv.split_q_in_E, inv.kq_degree) == (2, 2, 2, False, 2)
    assert inv.q_behaviour == "ramified"


def test_consistency_examples():
    assert check_unramified_consistency(analyze_place(ImagQuadratic(-4), 3), True, True) == CONSISTENT
    inv = analyze_place(ImagQuadratic(-20), 5)
    assert check_unramified_consistency(inv, True, True) == VIOLATED
    assert check_unramified_consistency(inv, False, True) == CONSISTENT


def test_norm_generation_examples():
    assert norm_generation_check(-1, 6)
    assert norm_generation_check(2, 6)
    assert norm_generation_check(-1, 1)
    with pytest.raises(InvalidInput):
        norm_generation_check(17, 4)
    with pytest.raises(InvalidInput):
        norm_generation_check(-7, 4)


def test_order_index_examples():
    idx = biquadratic_order_index_at_p(-20, -15, 5)
    assert (idx.index, idx.maximal_at_p) == (5, False)
    assert biquadratic_order_index_at_p(-4, -3, 5).index == 1
    assert biquadratic_order_index_at_p(-20, -15, 7).maximal_at_p
    assert biquadratic_order_index_at_p(-4, -8, 2).index == 2
    assert biquadratic_order_index_at_p(-3, -15, 3).index == 3


def test_field_validation():
    with pytest.raises(InvalidInput):
        ImagQuadratic(-12)
    with pytest.raises(InvalidInput):
        Biquadratic(-4, -4)
    with pytest.raises(InvalidInput):
        field_from_dict({"type": "cubic"})
    assert field_from_dict({"type": "cyclotomic", "N": 7}) == Cyclotomic(7)


def _specs():
    quad = st.sampled_from(NEG_FUNDAMENTAL).map(ImagQuadratic)
    biq = st.tuples(st.sampled_from(NEG_FUNDAMENTAL), st.sampled_from(NEG_FUNDAMENTAL)).filter(
        lambda t: t[0] != t[1]
    ).map(lambda t: Biquadratic(*t))
    cyc = st.sampled_from([3, 4, 5, 7, 8, 9, 11, 12, 13, 15, 16, 20, 21, 24]).map(Cyclotomic)
    return st.one_of(quad, biq, cyc)


@given(_specs(), st.sampled_from(PRIMES))
def test_fundamental_identity(spec, p):
    inv = analyze_place(spec, p)
    assert inv.e_p * inv.f_p * inv.g_p == spec.degree
    assert inv.e_q * inv.f_q * inv.g_q == spec.degree // 2
    # E_p / F_q has degree 1 (split) or 2
    rel = (inv.e_p * inv.f_p) // (inv.e_q * inv.f_q)
    assert rel == (1 if inv.split_q_in_E else 2)


@given(_specs(), st.sampled_from(PRIMES))
def test_ramification_matches_independent_oracle(spec, p):
    inv = analyze_place(spec, p)
    assert (inv.e_p > inv.e_q) == ramified_over_real_subfield(spec, p)


@given(st.integers(3, 60), st.sampled_from(PRIMES))
def test_cyclotomic_residue_degree(N, p):
    if N % 4 == 2:
        return
    n_prime = N
    while n_prime % p == 0:
        n_prime //= p
    inv = analyze_place(Cyclotomic(N), p)
    assert inv.f_p == (1 if n_prime == 1 else multiplicative_order(p, n_prime))


@given(_specs(), st.sampled_from(PRIMES), st.booleans())
def test_consistency_never_violated_without_maximality(spec, p, disc):
    assert check_unramified_consistency(analyze_place(spec, p), disc, False) == CONSISTENT
