from __future__ import annotations

import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from k3cm.acceptance import FORMULA_CATALOG, NEG_FUNDAMENTAL, admissible_grams
from k3cm.arith import INF, RationalPoly, fundamental_discriminant, primes_below
from k3cm.errors import InconsistentData, InvalidInput
from k3cm.fields import Biquadratic, Cyclotomic, ImagQuadratic
from k3cm.frobenius import FrobCharPoly
from k3cm.lattices import GramMatrix, binary_disc
from k3cm.predictor import (
    NOT_APPLICABLE,
    NOT_DETERMINED,
    K3CmInput,
    ReductionReport,
    cross_validate,
    input_from_dict,
    predict_reduction,
    predict_singular,
)

PRIMES = primes_below(40)


def test_predict_examples():
    r = predict_reduction(K3CmInput(ImagQuadratic(-4), 5, True, True))
    assert (r.picard, r.height, r.supersingular, r.artin_invariant) == (20, 1, False, NOT_APPLICABLE)
    r = predict_reduction(K3CmInput(ImagQuadratic(-4), 3, True, True))
    assert r.core() == (22, INF, True, 1)
    r = predict_reduction(K3CmInput(Biquadratic(-20, -15), 5, disc_pic_mod_p_nonzero=True))
    assert r.supersingular and r.artin_invariant == NOT_DETERMINED
    assert any("order-maximality" in d for d in r.diagnostics)


def test_inconsistent_assertion_raises():
    with pytest.raises(InconsistentData, match="ramified"):
        predict_reduction(K3CmInput(ImagQuadratic(-20), 5, True, True))
    # same field without asserting both hypotheses is fine
    r = predict_reduction(K3CmInput(ImagQuadratic(-20), 5, True, False))
    assert r.supersingular and r.artin_invariant == NOT_DETERMINED


def test_derived_flags_override_supplied():
    # disc Pic = -3 is prime to 5, so a supplied "False" is overridden
    inp = K3CmInput(ImagQuadratic(-3), 5, False, True, gram=GramMatrix.binary(2, 1, 2))
    r = predict_reduction(inp)
    assert r.artin_invariant == 1
    assert any(d.startswith("warning:") for d in r.diagnostics)
    with pytest.raises(InvalidInput):
        predict_reduction(K3CmInput(ImagQuadratic(-4), 5, gram=GramMatrix.binary(2, 1, 2)))


@pytest.mark.parametrize("case", FORMULA_CATALOG, ids=lambda c: f"{c[0].label()}@{c[1]}")
def test_formula_catalog(case):
    spec, p, disc, maximal, picard, height, artin = case
    expected = (picard, height, height == INF, artin)
    assert predict_reduction(K3CmInput(spec, p, disc, maximal)).core() == expected


def _specs():
    quad = st.sampled_from(NEG_FUNDAMENTAL).map(ImagQuadratic)
    biq = st.tuples(st.sampled_from(NEG_FUNDAMENTAL), st.sampled_from(NEG_FUNDAMENTAL)).filter(
        lambda t: t[0] != t[1]
    ).map(lambda t: Biquadratic(*t))
    cyc = st.sampled_from([3, 4, 5, 7, 8, 9, 12, 15, 16, 20]).map(Cyclotomic)
    return st.one_of(quad, biq, cyc)


@given(_specs(), st.sampled_from(PRIMES), st.sampled_from([None, True, False]), st.sampled_from([None, True, False]))
def test_dichotomy_is_total(spec, p, disc, maximal):
    try:
        r = predict_reduction(K3CmInput(spec, p, disc, maximal))
    except InconsistentData:
        return
    if r.supersingular:
        assert r.picard == 22 and r.height == INF
        assert r.artin_invariant == NOT_DETERMINED or 1 <= r.artin_invariant <= spec.degree // 2
    else:
        assert r.picard == 22 - spec.degree and r.height == r.place["local_degree"]
        assert r.artin_invariant == NOT_APPLICABLE
        assert r.picard <= 22 - 2 * r.height
    assert ReductionReport.from_dict(json.loads(json.dumps(r.to_dict()))) == r


def test_singular_examples():
    r = predict_singular(GramMatrix.binary(2, 1, 2), 5)
    assert r.core() == (22, INF, True, 1)
    assert predict_singular(GramMatrix.binary(2, 1, 2), 7).core()[:2] == (20, 1)
    assert predict_singular(GramMatrix.binary(2, 1, 4), 2).core()[:2] == (20, 1)
    with pytest.raises(InvalidInput):
        predict_singular(GramMatrix.binary(2, 1, 2), 3)


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
def test_singular_path_matches_field_path(p):
    for entries in admissible_grams(8):
        gram = GramMatrix.binary(*entries)
        dp = binary_disc(gram)
        if dp % p == 0:
            continue
        via_lattice = predict_singular(gram, p)
        via_field = predict_reduction(K3CmInput(ImagQuadratic(fundamental_discriminant(dp)), p, True, True))
        assert via_lattice.core() == via_field.core()


def test_cross_validate_examples():
    inp = K3CmInput(ImagQuadratic(-4), 3, True, True)
    rec = cross_validate(predict_reduction(inp), inp)
    assert rec.ok and {c.name: c.status for c in rec.checks} == {"frobenius": "skipped", "crystal": "pass"}

    inp = K3CmInput(Biquadratic(-20, -15), 5, True)
    rec = cross_validate(predict_reduction(inp), inp)
    assert {c.name: c.status for c in rec.checks}["crystal"] == "skipped"

    poly = RationalPoly([-1, 1]) ** 20 * RationalPoly([1, Fraction(-26, 5), 1])
    inp = K3CmInput(ImagQuadratic(-4), 5, True, True, frobenius_poly=FrobCharPoly(5, 5, poly))
    rec = cross_validate(predict_reduction(inp), inp)
    assert {c.name: c.status for c in rec.checks} == {"frobenius": "pass", "crystal": "skipped"}


def test_cross_validate_reports_disagreement():
    # supersingular polynomial against a split prediction
    poly = RationalPoly([-1, 1]) ** 22
    inp = K3CmInput(ImagQuadratic(-4), 5, True, True, frobenius_poly=FrobCharPoly(5, 5, poly))
    rec = cross_validate(predict_reduction(inp), inp)
    assert not rec.ok
    fail = [c for c in rec.checks if c.status == "fail"][0]
    assert "20" in fail.detail and "22" in fail.detail


def test_input_from_dict():
    doc = {
        "field": {"type": "imag_quadratic", "D": -3},
        "p": 5,
        "gram": [[2, 1], [1, 2]],
        "frobenius": {"q": 5, "coefficients": "1,-2,1"},
    }
    inp = input_from_dict(doc)
    assert inp.gram == GramMatrix.binary(2, 1, 2)
    assert inp.frobenius_poly.p == 5 and inp.frobenius_poly.degree == 2
