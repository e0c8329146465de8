"""Picard number, formal-Brauer height and supersingularity from the
characteristic polynomial of Frobenius on Tate-twisted H^2.

The Picard number is read off as the number of roots that are roots of
unity (this identification is conditional on the Tate conjecture; the count
itself is unconditional).  The height is the number of roots of strictly
positive p-adic valuation, read off the Newton polygon.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .arith import (
    INF,
    RationalPoly,
    cyclotomic_indices_up_to_degree,
    cyclotomic_polynomial,
    is_prime,
    newton_polygon,
)
from .errors import InvalidInput

Height = Union[int, float]  # a positive integer or INF

K3_RANK = 22


def format_height(h: Height) -> Union[int, str]:
    return "infinity" if h == INF else int(h)


def parse_height(h: Union[int, str]) -> Height:
    return INF if h == "infinity" else int(h)


@dataclass(frozen=True)
class FrobCharPoly:
    q: int
    p: int
    poly: RationalPoly

    def __post_init__(self):
        if not is_prime(self.p):
            raise InvalidInput(f"{self.p} is not prime")
        k = self.q
        while k > 1 and k % self.p == 0:
            k //= self.p
        if self.q < self.p or k != 1:
            raise InvalidInput(f"q={self.q} is not a power of p={self.p}")
        if not self.poly.is_monic():
            raise InvalidInput("Frobenius characteristic polynomial must be monic")
        if self.poly[0] == 0:
            raise InvalidInput("Frobenius characteristic polynomial has zero constant term")

    @property
    def degree(self) -> int:
        return self.poly.degree

    def to_dict(self) -> dict:
        return {"q": self.q, "p": self.p, "coefficients": [str(c) for c in self.poly.coeffs]}


@dataclass(frozen=True)
class FrobReport:
    picard: int
    height: Height
    supersingular: bool
    rank: int = K3_RANK
    positive_slopes: int = 0
    negative_slopes: int = 0
    diagnostics: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "picard": self.picard,
            "picard_note": "Tate-conditional",
            "height": format_height(self.height),
            "supersingular": self.supersingular,
            "rank": self.rank,
            "diagnostics": list(self.diagnostics),
        }


def count_unit_root_multiplicity(poly: RationalPoly) -> int:
    """Total multiplicity of roots of unity, by exhaustive trial division."""
    if not poly.is_monic() or poly[0] == 0:
        raise InvalidInput("expected a monic polynomial with nonzero constant term")
    rest = poly
    count = 0
    for m in cyclotomic_indices_up_to_degree(poly.degree):
        phi_m = cyclotomic_polynomial(m)
        while phi_m.degree <= rest.degree:
            quo, rem = rest.divmod(phi_m)
            if not rem.is_zero():
                break
            rest = quo
            count += phi_m.degree
    return count


def check_artin_inequality(report: FrobReport, rank: int = K3_RANK) -> bool:
    """rho <= rank - 2h whenever the height is finite."""
    return report.height == INF or report.picard <= rank - 2 * report.height


def analyze(fp: FrobCharPoly, strict: bool = False) -> FrobReport:
    """Picard number, height and supersingularity of a Frobenius polynomial.

    ``strict`` demands a Newton polygon symmetric about slope 0, as the
    functional equation forces for a genuine Weil polynomial.
    """
    poly = fp.poly
    deg = poly.degree
    np_ = newton_polygon(poly, fp.p)
    positive = np_.count_roots(lambda v: v > 0)
    negative = np_.count_roots(lambda v: v < 0)
    picard = count_unit_root_multiplicity(poly)
    if picard + positive + negative > deg:
        raise AssertionError("roots of unity must lie on slope 0")
    if strict and sorted(np_.root_valuations()) != sorted(-v for v in np_.root_valuations()):
        raise InvalidInput("strict mode: Newton polygon is not symmetric about slope 0")

    diagnostics = []
    if deg != K3_RANK:
        diagnostics.append(f"degree {deg} differs from 22; synthetic input")
    if picard == deg:
        report = FrobReport(picard, INF, True, deg, positive, negative)
    else:
        report = FrobReport(picard, positive, False, deg, positive, negative)
        if positive == 0:
            diagnostics.append("no root of positive valuation: height 0 is impossible for a K3 surface")
        if not check_artin_inequality(report, rank=deg):
            diagnostics.append(
                f"inconsistent input: Artin inequality fails (picard {picard} > {deg} - 2*{positive})"
            )
    return FrobReport(
        report.picard,
        report.height,
        report.supersingular,
        deg,
        positive,
        negative,
        tuple(diagnostics),
    )


def is_consistent(report: FrobReport) -> bool:
    return not any(d.startswith("inconsistent input") for d in report.diagnostics)

