"""Reduction invariants of a CM K3 surface from its CM field, and the two
independent cross-checks (Frobenius polynomial and crystal cokernel).

Potential good reduction at p is an assumption of the model: nothing here
checks it.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional, Union

from .arith import INF, RationalPoly, fundamental_discriminant
from .crystal import LocalFieldData, artin_invariant_via_cokernel, build_beta
from .errors import InconsistentData, InvalidInput
from .fields import (
    VIOLATED,
    Biquadratic,
    CmFieldSpec,
    ImagQuadratic,
    PlaceInvariants,
    analyze_place,
    biquadratic_order_index_at_p,
    check_unramified_consistency,
    field_from_dict,
)
from .frobenius import FrobCharPoly, Height, analyze, format_height, parse_height
from .lattices import (
    GramMatrix,
    binary_disc,
    endomorphism_order,
    nonsplit_criterion,
    singular_normal_form,
    validate_singular_gram,
)

log = logging.getLogger(__name__)

NOT_DETERMINED = "not determined by the paper"
NOT_APPLICABLE = "not applicable"
GOOD_REDUCTION_NOTE = "potential good reduction at p is assumed, not verified"

ArtinValue = Union[int, str]


@dataclass(frozen=True)
class K3CmInput:
    field: CmFieldSpec
    p: int
    disc_pic_mod_p_nonzero: Optional[bool] = None
    order_maximal_at_p: Optional[bool] = None
    gram: Optional[GramMatrix] = None
    frobenius_poly: Optional[FrobCharPoly] = None

    @property
    def picard_complex(self) -> int:
        return 22 - self.field.degree


@dataclass(frozen=True)
class Assumptions:
    disc_coprime: bool
    order_maximal: bool
    asserted_both: bool
    notes: tuple[str, ...]

    @property
    def both(self) -> bool:
        return self.disc_coprime and self.order_maximal


def resolve_assumptions(inp: K3CmInput) -> Assumptions:
    """Combine supplied flags with whatever can be derived.  A derived value
    wins over a supplied one; the conflict is noted and logged."""
    notes: list[str] = []
    disc = inp.disc_pic_mod_p_nonzero
    maximal = inp.order_maximal_at_p

    def settle(name, supplied, derived, how):
        if supplied is not None and supplied != derived:
            msg = f"supplied {name}={supplied} overridden by derived value {derived} ({how})"
            log.warning(msg)
            notes.append("warning: " + msg)
        return derived

    if inp.gram is not None:
        validate_singular_gram(inp.gram)
        dp = binary_disc(inp.gram)
        if isinstance(inp.field, ImagQuadratic) and fundamental_discriminant(dp) != inp.field.D:
            raise InvalidInput(
                f"Gram matrix has disc Pic {dp}, which does not belong to {inp.field.label()}"
            )
        disc = settle("disc_pic_mod_p_nonzero", disc, dp % inp.p != 0, f"disc Pic = {dp}")
        if dp % inp.p:
            order = endomorphism_order(singular_normal_form(inp.gram, inp.p))
            maximal = settle(
                "order_maximal_at_p", maximal, order.maximal_at_p, "rank-2 endomorphism order presentation"
            )
    if isinstance(inp.field, Biquadratic):
        idx = biquadratic_order_index_at_p(inp.field.D1, inp.field.D2, inp.p)
        maximal = settle(
            "order_maximal_at_p", maximal, idx.maximal_at_p, f"tensor-product order has index {idx.index}"
        )
    if disc is None:
        notes.append("disc Pic coprime to p: not supplied, treated as not established")
    if maximal is None:
        notes.append("endomorphism order maximal at p: not supplied, treated as not established")
    asserted = bool(inp.disc_pic_mod_p_nonzero) and bool(inp.order_maximal_at_p)
    return Assumptions(bool(disc), bool(maximal), asserted, tuple(notes))


@dataclass(frozen=True)
class ReductionReport:
    field: str
    p: int
    picard: int
    height: Height
    supersingular: bool
    artin_invariant: ArtinValue
    picard_complex: int
    place: dict = field(default_factory=dict)
    diagnostics: tuple[str, ...] = ()
    provenance: dict = field(default_factory=dict)

    def core(self) -> tuple:
        return (self.picard, self.height, self.supersingular, self.artin_invariant)

    def to_dict(self) -> dict:
        return {
            "field": self.field,
            "p": self.p,
            "picard": self.picard,
            "height": format_height(self.height),
            "supersingular": self.supersingular,
            "artin_invariant": self.artin_invariant,
            "picard_complex": self.picard_complex,
            "place": dict(self.place),
            "diagnostics": list(self.diagnostics),
            "provenance": dict(self.provenance),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ReductionReport":
        return cls(
            field=data["field"],
            p=data["p"],
            picard=data["picard"],
            height=parse_height(data["height"]),
            supersingular=data["supersingular"],
            artin_invariant=data["artin_invariant"],
            picard_complex=data["picard_complex"],
            place=dict(data.get("place", {})),
            diagnostics=tuple(data.get("diagnostics", ())),
            provenance=dict(data.get("provenance", {})),
        )


def predict_reduction(inp: K3CmInput) -> ReductionReport:
    inv = analyze_place(inp.field, inp.p)
    flags = resolve_assumptions(inp)
    ramified = inv.e_p > inv.e_q
    if ramified and (flags.asserted_both or flags.both):
        status = check_unramified_consistency(inv, True, True)
        assert status == VIOLATED
        raise InconsistentData(
            f"{inp.field.label()} at p={inp.p}: the place of E is ramified over its real subfield "
            f"(e_p={inv.e_p} > e_q={inv.e_q}), but both hypotheses (p does not divide disc Pic, "
            "endomorphism order maximal at p) are asserted; those hypotheses force E_p/F_q unramified"
        )
    diagnostics = [GOOD_REDUCTION_NOTE, *flags.notes]
    if inv.split_q_in_E:
        return ReductionReport(
            field=inp.field.label(),
            p=inp.p,
            picard=inp.picard_complex,
            height=inv.local_degree,
            supersingular=False,
            artin_invariant=NOT_APPLICABLE,
            picard_complex=inp.picard_complex,
            place=inv.to_dict(),
            diagnostics=tuple(diagnostics),
            provenance={
                "picard": "q splits in E: picard = 22 - [E:Q]",
                "height": "q splits in E: height = [E_p:Q_p]",
                "supersingular": "finite height",
                "artin_invariant": "defined only for supersingular reductions",
            },
        )
    if flags.both:
        artin: ArtinValue = inv.kq_degree
        artin_src = "both hypotheses hold: Artin invariant = [k(q):F_p]"
    else:
        failed = []
        if not flags.disc_coprime:
            failed.append("disc-Pic coprimality")
        if not flags.order_maximal:
            failed.append("order-maximality")
        artin = NOT_DETERMINED
        artin_src = "hypothesis failed: " + ", ".join(failed)
        diagnostics.append(f"Artin invariant not predicted; failed assumption: {', '.join(failed)}")
    return ReductionReport(
        field=inp.field.label(),
        p=inp.p,
        picard=22,
        height=INF,
        supersingular=True,
        artin_invariant=artin,
        picard_complex=inp.picard_complex,
        place=inv.to_dict(),
        diagnostics=tuple(diagnostics),
        provenance={
            "picard": f"q {inv.q_behaviour} in E: supersingular reduction, picard 22",
            "height": f"q {inv.q_behaviour} in E: height infinity",
            "supersingular": "q does not split in E",
            "artin_invariant": artin_src,
        },
    )


def predict_singular(gram: GramMatrix, p: int) -> ReductionReport:
    """Picard-20 path: decided by the lattice criterion alone, without
    consulting the splitting computation of :func:`analyze_place`."""
    nf = singular_normal_form(gram, p)
    order = endomorphism_order(nf)
    spec = ImagQuadratic(fundamental_discriminant(nf.disc_pic))
    place = {"normal_form": nf.to_dict(), "endomorphism_order": order.to_dict()}
    common = dict(field=spec.label(), p=p, picard_complex=20, place=place, diagnostics=(GOOD_REDUCTION_NOTE,))
    if nonsplit_criterion(nf):
        return ReductionReport(
            picard=22,
            height=INF,
            supersingular=True,
            artin_invariant=1,
            provenance={
                "picard": "lattice criterion: p does not split in E",
                "height": "lattice criterion: supersingular",
                "supersingular": "Legendre symbol of disc Pic is -1" if p != 2 else "n = 0 and a3' odd",
                "artin_invariant": "singular K3 with p prime to disc Pic: Artin invariant 1",
            },
            **common,
        )
    return ReductionReport(
        picard=20,
        height=1,
        supersingular=False,
        artin_invariant=NOT_APPLICABLE,
        provenance={
            "picard": "lattice criterion: p splits in E, picard 20",
            "height": "p splits in an imaginary quadratic field: height 1",
            "supersingular": "finite height",
            "artin_invariant": "defined only for supersingular reductions",
        },
        **common,
    )


@dataclass(frozen=True)
class Check:
    name: str
    status: str  # "pass", "fail" or "skipped"
    detail: str

    def to_dict(self) -> dict:
        return {"name": self.name, "status": self.status, "detail": self.detail}


@dataclass(frozen=True)
class ValidationRecord:
    checks: tuple[Check, ...]

    @property
    def ok(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checks": [c.to_dict() for c in self.checks]}


def crystal_data_for(inv: PlaceInvariants) -> LocalFieldData:
    return LocalFieldData(p=inv.p, d=2 * inv.kq_degree, e=inv.e_p)


def cross_validate(report: ReductionReport, inp: K3CmInput, precision: int = 8) -> ValidationRecord:
    checks = []
    if inp.frobenius_poly is not None:
        fr = analyze(inp.frobenius_poly)
        mine = (report.picard, report.height, report.supersingular)
        theirs = (fr.picard, fr.height, fr.supersingular)
        status = "pass" if mine == theirs else "fail"
        checks.append(
            Check(
                "frobenius",
                status,
                f"formula (picard, height, supersingular) = {_fmt(mine)}; Frobenius polynomial gives {_fmt(theirs)}",
            )
        )
    else:
        checks.append(Check("frobenius", "skipped", "no Frobenius polynomial supplied"))

    if report.supersingular and isinstance(report.artin_invariant, int):
        inv = analyze_place(inp.field, inp.p)
        lfd = crystal_data_for(inv)
        result = artin_invariant_via_cokernel(build_beta(lfd, precision=precision))
        status = "pass" if result.length == report.artin_invariant else "fail"
        checks.append(
            Check(
                "crystal",
                status,
                f"formula gives {report.artin_invariant}; cokernel length for d={lfd.d}, e={lfd.e} is {result.length}",
            )
        )
    elif report.supersingular:
        checks.append(Check("crystal", "skipped", "hypotheses fail, so the formula makes no claim to compare"))
    else:
        checks.append(Check("crystal", "skipped", "reduction is not supersingular"))
    return ValidationRecord(tuple(checks))


def _fmt(t: tuple) -> str:
    return "(" + ", ".join(str(format_height(x)) if x == INF else str(x) for x in t) + ")"


def input_from_dict(data: dict) -> K3CmInput:
    """Build a K3CmInput from an already schema-validated document."""
    gram = GramMatrix.of(data["gram"]) if data.get("gram") is not None else None
    fp = None
    if data.get("frobenius") is not None:
        f = data["frobenius"]
        fp = FrobCharPoly(q=f["q"], p=f.get("p", data["p"]), poly=RationalPoly.parse(f["coefficients"]))
    return K3CmInput(
        field=field_from_dict(data["field"]),
        p=data["p"],
        disc_pic_mod_p_nonzero=data.get("disc_pic_mod_p_nonzero"),
        order_maximal_at_p=data.get("order_maximal_at_p"),
        gram=gram,
        frobenius_poly=fp,
    )

