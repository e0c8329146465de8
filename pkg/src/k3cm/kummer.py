"""Kummer surfaces of products of CM elliptic curves.

Km(C1 x C2) has CM by E(C1) (x) E(C2): the field itself when the two CM
fields agree (Picard number 20), the biquadratic compositum otherwise
(Picard number 18).  Its transcendental lattice is T(A) with the pairing
doubled; for non-isogenous C1, C2 that is U + U scaled by 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .arith import is_fundamental_discriminant, is_prime
from .errors import InvalidInput
from .fields import Biquadratic, CmFieldSpec, ImagQuadratic, analyze_place, biquadratic_order_index_at_p
from .lattices import GramMatrix, double_pairing, hyperbolic_plane, orthogonal_sum
from .predictor import K3CmInput, ReductionReport, predict_reduction


@dataclass(frozen=True)
class KummerInput:
    D1: int
    D2: int

    def __post_init__(self):
        for D in (self.D1, self.D2):
            if D >= 0 or not is_fundamental_discriminant(D):
                raise InvalidInput(f"{D} is not a negative fundamental discriminant")


def kummer_cm_data(inp: KummerInput) -> tuple[CmFieldSpec, int]:
    if inp.D1 == inp.D2:
        return ImagQuadratic(inp.D1), 20
    return Biquadratic(inp.D1, inp.D2), 18


def product_transcendental_lattice() -> GramMatrix:
    """T(C1 x C2) for non-isogenous curves: H^1 (x) H^1, i.e. U + U."""
    return orthogonal_sum(hyperbolic_plane(), hyperbolic_plane())


@dataclass(frozen=True)
class KnownAnswer:
    """An Artin invariant established by other means, kept as metadata only."""

    D1: int
    D2: int
    p: int
    artin_invariant: int
    reason: str


def known_answer(D1: int, D2: int, p: int) -> Optional[KnownAnswer]:
    if (D1, D2) in ((-20, -15), (-15, -20)) and p == 5:
        return KnownAnswer(
            D1, D2, p, 1,
            "both elliptic factors reduce supersingularly at 5 (5 ramifies in each CM field)",
        )
    if D1 == D2 and p != 2 and D1 % p == 0:
        return KnownAnswer(
            D1, D2, p, 1,
            "self-product of a CM curve at an odd prime ramified in its CM field",
        )
    return None


@dataclass(frozen=True)
class CounterexampleFinding:
    D1: int
    D2: int
    p: int
    disc_T_km: int
    disc_coprime_to_p: bool
    order_index: int
    order_maximal_at_p: bool
    q_in_F: str
    q_in_E: str
    would_give: Optional[int]
    actual: Optional[int]
    assumption_failed: Optional[str]
    report: ReductionReport

    @property
    def is_counterexample(self) -> bool:
        return self.would_give is not None and self.actual is not None and self.would_give != self.actual

    def to_dict(self) -> dict:
        return {
            "D1": self.D1,
            "D2": self.D2,
            "p": self.p,
            "disc_T_km": self.disc_T_km,
            "disc_coprime_to_p": self.disc_coprime_to_p,
            "order_index": self.order_index,
            "order_maximal_at_p": self.order_maximal_at_p,
            "q_in_F": self.q_in_F,
            "q_in_E": self.q_in_E,
            "would_give": self.would_give,
            "actual": self.actual,
            "assumption_failed": self.assumption_failed,
            "is_counterexample": self.is_counterexample,
            "report": self.report.to_dict(),
        }


def counterexample_report(p: int = 5, D1: int = -20, D2: int = -15) -> CounterexampleFinding:
    """Run the Kummer compositum through the predictor and contrast the
    formula [k(q):F_p] with any recorded true value."""
    if not is_prime(p):
        raise InvalidInput(f"{p} is not prime")
    spec, _ = kummer_cm_data(KummerInput(D1, D2))
    if not isinstance(spec, Biquadratic):
        raise InvalidInput("the counterexample pipeline needs two distinct CM fields")
    t_km = double_pairing(product_transcendental_lattice())
    disc = abs(t_km.determinant())
    disc_ok = disc % p != 0
    index = biquadratic_order_index_at_p(D1, D2, p)
    inv = analyze_place(spec, p)
    report = predict_reduction(K3CmInput(spec, p, disc_pic_mod_p_nonzero=disc_ok))
    failed = [name for name, ok in (("disc-Pic coprimality", disc_ok), ("order-maximality", index.maximal_at_p)) if not ok]
    # what the formula would say if applied regardless of its hypotheses
    would_give = inv.kq_degree if report.supersingular else None
    known = known_answer(D1, D2, p)
    q_in_F = "ramified" if inv.e_q > 1 else "inert" if inv.f_q > 1 else "split"
    return CounterexampleFinding(
        D1=D1,
        D2=D2,
        p=p,
        disc_T_km=disc,
        disc_coprime_to_p=disc_ok,
        order_index=index.index,
        order_maximal_at_p=index.maximal_at_p,
        q_in_F=q_in_F,
        q_in_E=inv.q_behaviour,
        would_give=would_give,
        actual=known.artin_invariant if known else None,
        assumption_failed=", ".join(failed) if failed else None,
        report=report,
    )
