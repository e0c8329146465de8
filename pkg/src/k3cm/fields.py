"""CM fields of the three supported shapes and the splitting of a prime in them.

A field E is described by one of

* :class:`ImagQuadratic` -- Q(sqrt(D)), D < 0 a fundamental discriminant, F = Q;
* :class:`Biquadratic` -- Q(sqrt(D1), sqrt(D2)) for distinct negative
  fundamental discriminants; F is the real quadratic subfield Q(sqrt(D3));
* :class:`Cyclotomic` -- Q(zeta_N) with N >= 3, N != 2 mod 4; F = Q(zeta_N)^+.

For a rational prime p, :func:`analyze_place` returns the ramification
index, residue degree and number of places above p in E and in F, and
whether the place q of F below a place of E splits in E.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .arith import (
    euler_phi,
    fundamental_discriminant,
    is_fundamental_discriminant,
    is_prime,
    kronecker_symbol,
    multiplicative_order,
)
from .errors import InvalidInput

CONSISTENT = "consistent"
VIOLATED = "violated"


@dataclass(frozen=True)
class ImagQuadratic:
    D: int

    def __post_init__(self):
        if self.D >= 0 or not is_fundamental_discriminant(self.D):
            raise InvalidInput(f"{self.D} is not a negative fundamental discriminant")

    @property
    def degree(self) -> int:
        return 2

    def label(self) -> str:
        return f"Q(sqrt({self.D}))"

    def to_dict(self) -> dict:
        return {"type": "imag_quadratic", "D": self.D}


@dataclass(frozen=True)
class Biquadratic:
    D1: int
    D2: int

    def __post_init__(self):
        for D in (self.D1, self.D2):
            if D >= 0 or not is_fundamental_discriminant(D):
                raise InvalidInput(f"{D} is not a negative fundamental discriminant")
        if self.D1 == self.D2:
            raise InvalidInput("biquadratic field needs two distinct discriminants")

    @property
    def D3(self) -> int:
        """Discriminant of the real quadratic subfield F."""
        return fundamental_discriminant(self.D1 * self.D2)

    @property
    def degree(self) -> int:
        return 4

    def label(self) -> str:
        return f"Q(sqrt({self.D1}), sqrt({self.D2}))"

    def to_dict(self) -> dict:
        return {"type": "biquadratic", "D1": self.D1, "D2": self.D2}


@dataclass(frozen=True)
class Cyclotomic:
    N: int

    def __post_init__(self):
        if self.N < 3 or self.N % 4 == 2:
            raise InvalidInput(f"Q(zeta_{self.N}): need N >= 3 and N != 2 mod 4")

    @property
    def degree(self) -> int:
        return euler_phi(self.N)

    def label(self) -> str:
        return f"Q(zeta_{self.N})"

    def to_dict(self) -> dict:
        return {"type": "cyclotomic", "N": self.N}


CmFieldSpec = Union[ImagQuadratic, Biquadratic, Cyclotomic]


def field_from_dict(data: dict) -> CmFieldSpec:
    kind = data.get("type")
    if kind == "imag_quadratic":
        return ImagQuadratic(data["D"])
    if kind == "biquadratic":
        return Biquadratic(data["D1"], data["D2"])
    if kind == "cyclotomic":
        return Cyclotomic(data["N"])
    raise InvalidInput(f"unknown field type {kind!r}")


@dataclass(frozen=True)
class PlaceInvariants:
    """Local data of p in E (place p) and in F (place q below it).

    All places of a Galois field above p share (e, f), so the tuple
    (e, f, g) describes p completely; ``g_*`` counts the places.
    """

    p: int
    split_q_in_E: bool
    e_q: int
    f_q: int
    g_q: int
    e_p: int
    f_p: int
    g_p: int

    @property
    def d(self) -> int:
        """Degree of the maximal unramified subextension of E_p over Q_p."""
        return self.f_p

    @property
    def e(self) -> int:
        return self.e_p

    @property
    def kq_degree(self) -> int:
        return self.f_q

    @property
    def local_degree(self) -> int:
        return self.e_p * self.f_p

    @property
    def q_behaviour(self) -> str:
        """How q behaves in E: "split", "inert" or "ramified"."""
        if self.split_q_in_E:
            return "split"
        return "ramified" if self.e_p > self.e_q else "inert"

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "q_in_E": self.q_behaviour,
            "split_q_in_E": self.split_q_in_E,
            "e_q": self.e_q,
            "f_q": self.f_q,
            "g_q": self.g_q,
            "e_p": self.e_p,
            "f_p": self.f_p,
            "g_p": self.g_p,
            "d": self.d,
            "e": self.e,
            "kq_degree": self.kq_degree,
            "local_degree": self.local_degree,
        }


def quadratic_efg(D: int, p: int) -> tuple[int, int, int]:
    """(e, f, g) of p in Q(sqrt(D)) for a fundamental discriminant D."""
    k = kronecker_symbol(D, p)
    if k == 1:
        return 1, 1, 2
    if k == -1:
        return 1, 2, 1
    return 2, 1, 1


def analyze_place(spec: CmFieldSpec, p: int) -> PlaceInvariants:
    if not is_prime(p):
        raise InvalidInput(f"{p} is not prime")
    if isinstance(spec, ImagQuadratic):
        e, f, g = quadratic_efg(spec.D, p)
        return _make(p, (1, 1, 1), (e, f, g))
    if isinstance(spec, Biquadratic):
        return _make(p, quadratic_efg(spec.D3, p), _biquadratic_efg(spec, p))
    if isinstance(spec, Cyclotomic):
        return _cyclotomic_place(spec.N, p)
    raise InvalidInput(f"unsupported field {spec!r}")


def _make(p: int, efg_q: tuple[int, int, int], efg_p: tuple[int, int, int]) -> PlaceInvariants:
    e_q, f_q, g_q = efg_q
    e_p, f_p, g_p = efg_p
    return PlaceInvariants(
        p=p,
        split_q_in_E=(e_p * f_p == e_q * f_q),
        e_q=e_q,
        f_q=f_q,
        g_q=g_q,
        e_p=e_p,
        f_p=f_p,
        g_p=g_p,
    )


def _biquadratic_efg(spec: Biquadratic, p: int) -> tuple[int, int, int]:
    # Gal(E/Q) = V4; its index-2 subgroups are the three order-2 subgroups H_j,
    # one per quadratic subfield K_j.  p splits in K_j iff D <= H_j, and is
    # unramified in K_j iff I <= H_j.
    behaviours = [kronecker_symbol(D, p) for D in (spec.D1, spec.D2, spec.D3)]
    ramified = behaviours.count(0)
    split = behaviours.count(1)
    e = {0: 1, 2: 2, 3: 4}[ramified]
    decomposition = {3: 1, 1: 2, 0: 4}[split]
    return e, decomposition // e, 4 // decomposition


def _cyclotomic_place(N: int, p: int) -> PlaceInvariants:
    a, Np = 0, N
    while Np % p == 0:
        Np //= p
        a += 1
    units = [x for x in range(1, N) if math.gcd(x, N) == 1]
    frob = multiplicative_order(p, Np)
    # inertia: units that are 1 mod N'; decomposition: units whose class mod N'
    # lies in the cyclic group generated by p
    p_powers = {pow(p, k, Np) for k in range(frob)} if Np > 1 else {0}
    inertia = {x for x in units if x % Np == 1 % Np}
    decomp = {x for x in units if x % Np in p_powers}
    conj = {1, N - 1}
    inertia_c = {x * c % N for x in inertia for c in conj}
    decomp_c = {x * c % N for x in decomp for c in conj}
    e_p = len(inertia)
    f_p = len(decomp) // e_p
    g_p = len(units) // len(decomp)
    e_q = len(inertia_c) // 2
    f_q = len(decomp_c) // len(inertia_c)
    g_q = len(units) // len(decomp_c)
    return _make(p, (e_q, f_q, g_q), (e_p, f_p, g_p))


def check_unramified_consistency(
    inv: PlaceInvariants, disc_pic_coprime_to_p: bool, order_maximal_at_p: bool
) -> str:
    """``"violated"`` iff both hypotheses are asserted but E_p/F_q is ramified.

    Under both hypotheses the local extension E_p/F_q must be unramified, so
    that combination signals contradictory input.
    """
    if disc_pic_coprime_to_p and order_maximal_at_p and inv.e_p > inv.e_q:
        return VIOLATED
    return CONSISTENT


def _is_ramified_over_q2(c: int) -> bool:
    # Q_2(sqrt(c)) is ramified iff c = 4^k * u with u even or u = 3 mod 4
    while c % 4 == 0:
        c //= 4
    return c % 2 == 0 or c % 4 == 3


def norm_generation_check(c: int, precision: int) -> bool:
    """Do the norms x^2 - c y^2 additively generate Z/2^precision?

    Exhaustive over all residues x, y mod 2^precision.  The additive subgroup
    of Z/2^n generated by a set S is generated by gcd(S, 2^n).
    """
    if c == 0 or not _is_ramified_over_q2(c):
        raise InvalidInput(f"Q_2(sqrt({c}))/Q_2 is not a ramified quadratic extension")
    if precision < 1:
        raise InvalidInput("precision must be >= 1")
    mod = 2**precision
    squares = sorted({x * x % mod for x in range(mod)})
    g = mod
    for x2 in squares:
        for y2 in squares:
            g = math.gcd(g, (x2 - c * y2) % mod)
            if g == 1:
                return True
    return g == 1


@dataclass(frozen=True)
class OrderIndex:
    """Index of O_K1 (x) O_K2 in the maximal order of the compositum."""

    D1: int
    D2: int
    D3: int
    index: int
    p: int

    @property
    def maximal_at_p(self) -> bool:
        return self.index % self.p != 0

    def to_dict(self) -> dict:
        return {
            "D1": self.D1,
            "D2": self.D2,
            "D3": self.D3,
            "index": self.index,
            "p": self.p,
            "maximal_at_p": self.maximal_at_p,
        }


def biquadratic_order_index_at_p(D1: int, D2: int, p: int) -> OrderIndex:
    """index^2 = disc(O_K1 (x) O_K2) / disc(E) = D1^2 D2^2 / (D1 D2 D3)."""
    spec = Biquadratic(D1, D2)
    D3 = spec.D3
    num = D1 * D1 * D2 * D2
    disc_E = D1 * D2 * D3
    if num % disc_E:
        raise AssertionError("discriminant ratio is not an integer")
    sq = num // disc_E
    index = math.isqrt(sq)
    if index * index != sq:
        raise AssertionError("discriminant ratio is not a square")
    return OrderIndex(D1=D1, D2=D2, D3=D3, index=index, p=p)
