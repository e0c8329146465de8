"""The explicit F-crystal attached to a CM place, its Breuil-Kisin
description, the phi = p fixed module and the cokernel computation giving
the Artin invariant.

Notation.  d is the inertia degree of E_p over Q_p and e its ramification
index; d is even.  O_{E_p} tensor W splits as a product of d components
W_i = W[T]/(E(T)), E an Eisenstein polynomial with integer coefficients,
and T acts as the uniformizer pi.  Frobenius maps component i to i+1:

    phi(x)_{i+1} = beta_{i+1} * sigma(x_i)

with beta_1 = p*pi, beta_{d'} = p/pi and beta_i = p otherwise, where
d' = d/2 + 1 for d != 2 and d' = 0 for d = 2.  Elements of Z[T]/(E) such
as pi, p/pi and beta_i are stored as integer coefficient tuples ("int
polys"); p/pi is kept integral through the Eisenstein relation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .arith import is_prime
from .errors import InternalError, InvalidInput, PrecisionError
from .witt import IntegerModRing, WittApprox, rank_mod_p, smith_valuations, witt_approx

DEFAULT_PRECISION = 16

IntPoly = tuple  # integer coefficients in T, lowest degree first, length e


@dataclass(frozen=True)
class LocalFieldData:
    p: int
    d: int
    e: int
    eisenstein: tuple[int, ...] = ()

    def __post_init__(self):
        if not is_prime(self.p):
            raise InvalidInput(f"{self.p} is not prime")
        if self.d < 1 or self.e < 1:
            raise InvalidInput("d and e must be positive")
        if not self.eisenstein:
            object.__setattr__(self, "eisenstein", (-self.p,) + (0,) * (self.e - 1) + (1,))
        eis = self.eisenstein
        if len(eis) != self.e + 1 or eis[-1] != 1:
            raise InvalidInput(f"Eisenstein polynomial must be monic of degree e={self.e}")
        if any(c % self.p for c in eis[:-1]) or eis[0] % (self.p * self.p) == 0:
            raise InvalidInput(f"{list(eis)} is not Eisenstein at p={self.p}")

    @property
    def local_degree(self) -> int:
        return self.d * self.e

    @property
    def d_prime(self) -> int:
        return 0 if self.d == 2 else self.d // 2 + 1

    def to_dict(self) -> dict:
        return {"p": self.p, "d": self.d, "e": self.e, "eisenstein": list(self.eisenstein)}


# -- integer polynomials modulo the Eisenstein polynomial ----------------------


def _reduce_int_poly(coeffs: list[int], eis: tuple[int, ...], modulus: int) -> IntPoly:
    e = len(eis) - 1
    coeffs = list(coeffs) + [0] * max(0, e - len(coeffs))
    for k in range(len(coeffs) - 1, e - 1, -1):
        c = coeffs[k]
        if c:
            for j in range(e):
                coeffs[k - e + j] -= c * eis[j]
            coeffs[k] = 0
    return tuple(c % modulus for c in coeffs[:e])


def _mul_int_poly(a: IntPoly, b: IntPoly, eis, modulus) -> IntPoly:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _reduce_int_poly(out, eis, modulus)


def uniformizer(lfd: LocalFieldData, modulus: int) -> IntPoly:
    """The class of T; for e = 1 this is -a_0, a p-multiple."""
    return _reduce_int_poly([0, 1], lfd.eisenstein, modulus)


def p_over_pi(lfd: LocalFieldData, modulus: int) -> IntPoly:
    """p/pi as an integral element.

    From E(pi) = 0: pi * (pi^{e-1} + a_{e-1} pi^{e-2} + ... + a_1) = -a_0 = -p*u0,
    so p/pi = -u0^{-1} (pi^{e-1} + ... + a_1).  For T^e - p this is T^{e-1}.
    """
    eis, p = lfd.eisenstein, lfd.p
    u0_inv = pow(eis[0] // p, -1, modulus)
    return tuple(-u0_inv * c % modulus for c in eis[1:-1] + (1,))


# -- the crystal ----------------------------------------------------------------

CompElem = tuple  # e elements of the Witt approximation (coefficients of T^k)


@dataclass(frozen=True)
class FCrystal:
    lfd: LocalFieldData
    ring: WittApprox
    beta: tuple[IntPoly, ...]
    exponents: tuple[tuple[int, int], ...]  # (p-exponent, pi-exponent) per component
    pi: IntPoly
    diagnostics: tuple[str, ...] = field(default=())

    @property
    def d(self) -> int:
        return self.lfd.d

    @property
    def e(self) -> int:
        return self.lfd.e

    # component-ring helpers
    def comp_zero(self) -> CompElem:
        return (self.ring.zero(),) * self.e

    def scale(self, x: CompElem, c: IntPoly) -> CompElem:
        """Multiply a component element by an integer polynomial in T."""
        R, e = self.ring, self.e
        prod = [R.zero()] * (2 * e - 1)
        for i, xi in enumerate(x):
            for j, cj in enumerate(c):
                if cj:
                    prod[i + j] = R.add(prod[i + j], R.scale(xi, cj))
        eis = self.lfd.eisenstein
        for k in range(2 * e - 2, e - 1, -1):
            top = prod[k]
            if R.is_zero(top):
                continue
            for j in range(e):
                if eis[j]:
                    prod[k - e + j] = R.sub(prod[k - e + j], R.scale(top, eis[j]))
        return tuple(prod[:e])

    def comp_frobenius(self, x: CompElem) -> CompElem:
        return tuple(self.ring.frobenius(c) for c in x)

    def phi(self, x: tuple[CompElem, ...]) -> tuple[CompElem, ...]:
        d = self.d
        return tuple(self.scale(self.comp_frobenius(x[(i - 1) % d]), self.beta[i]) for i in range(d))

    def times_p(self, x: tuple[CompElem, ...]) -> tuple[CompElem, ...]:
        return tuple(self.scale(c, (self.lfd.p,)) for c in x)

    def act_unramified(self, a, x: tuple[CompElem, ...]) -> tuple[CompElem, ...]:
        """Action of a in W(F_{p^d}) (viewed in O_{E_p,0}); component i sees sigma^i(a)."""
        R = self.ring
        out, ai = [], a
        for comp in x:
            out.append(tuple(R.mul(ai, c) for c in comp))
            ai = R.frobenius(ai)
        return tuple(out)

    def act_uniformizer(self, x: tuple[CompElem, ...]) -> tuple[CompElem, ...]:
        return tuple(self.scale(c, self.pi) for c in x)

    def beta_table(self) -> list[dict]:
        return [
            {
                "index": i,
                "p_exponent": pe,
                "pi_exponent": qe,
                "integral_form": list(self.beta[i]),
            }
            for i, (pe, qe) in enumerate(self.exponents)
        ]


def beta_exponents(d: int) -> tuple[tuple[int, int], ...]:
    if d < 2 or d % 2:
        raise InvalidInput(f"d={d}: the crystal needs an even inertia degree d >= 2")
    d_prime = 0 if d == 2 else d // 2 + 1
    out = []
    for i in range(d):
        if i == 1:
            out.append((1, 1))
        elif i == d_prime:
            out.append((1, -1))
        else:
            out.append((1, 0))
    return tuple(out)


def build_beta(
    lfd: LocalFieldData,
    precision: int = DEFAULT_PRECISION,
    residue_degree: Optional[int] = None,
) -> FCrystal:
    exps = beta_exponents(lfd.d)
    m = residue_degree if residue_degree is not None else lfd.d
    if m % lfd.d:
        raise InvalidInput(f"residue degree m={m} must be a multiple of d={lfd.d}")
    if precision < 2:
        raise InvalidInput("precision must be at least 2")
    ring = witt_approx(lfd.p, m, precision)
    q, p = ring.q, lfd.p
    pi = uniformizer(lfd, q)
    forms = {
        1: tuple(p * c % q for c in pi),
        0: _reduce_int_poly([p], lfd.eisenstein, q),
        -1: p_over_pi(lfd, q),
    }
    beta = tuple(forms[pi_exp] for _, pi_exp in exps)
    diagnostics = ()
    if lfd.e > 1:
        diagnostics = ("extrapolated normalization: e > 1 uses the Eisenstein rewrite of p/pi",)
    return FCrystal(lfd, ring, beta, exps, pi, diagnostics)


# -- Breuil-Kisin description ----------------------------------------------------

UNIT_E = "E/E(0)"


def unit_E_index(j: int) -> str:
    return f"E{j}/E{j}(0)"


@dataclass(frozen=True)
class BkComponent:
    p_power: int
    pi_power: int
    unit_factors: tuple[tuple[str, int], ...]  # (token, exponent), sorted

    def at_u_zero(self) -> tuple[int, int]:
        # every token is a unit power series with constant term 1
        return (self.p_power, self.pi_power)


@dataclass(frozen=True)
class BkSymbolic:
    d: int
    components: tuple[BkComponent, ...]


def bk_symbolic(lfd_or_d) -> BkSymbolic:
    d = lfd_or_d.d if isinstance(lfd_or_d, LocalFieldData) else int(lfd_or_d)
    if d < 2 or d % 2:
        raise InvalidInput(f"d={d} must be even and at least 2")
    comps = []
    for i in range(d):
        if i == 0:
            comps.append(BkComponent(1, 1, ((UNIT_E, 1), (unit_E_index(0), 1))))
        elif i == d // 2:
            comps.append(BkComponent(1, -1, ((UNIT_E, 1), (unit_E_index(d // 2), -1))))
        else:
            comps.append(BkComponent(1, 0, ((UNIT_E, 1),)))
    return BkSymbolic(d, tuple(comps))


def specialize_mod_u(bk: BkSymbolic) -> tuple[tuple[int, int], ...]:
    """Set u = 0 and pull back along Frobenius: component i of the result is
    component i-1 of the Breuil-Kisin module."""
    d = bk.d
    return tuple(bk.components[(i - 1) % d].at_u_zero() for i in range(d))


# -- the phi = p fixed module ------------------------------------------------------


@dataclass(frozen=True)
class FixedModule:
    vectors: tuple[tuple[CompElem, ...], ...]
    seeds: tuple[tuple[int, int], ...]  # (a, b): the vector through omega^a T^b
    start_index: int
    achieved_precision: int
    rank_mod_p: int


def _flatten(x: tuple[CompElem, ...]) -> list[int]:
    return [c for comp in x for r in comp for c in r]


def fixed_module_basis(crystal: FCrystal) -> FixedModule:
    """Z_p-basis of the phi = p part, built from its projection to component
    j0 = d/2 + 1 (mod d).

    Starting from x_{j0} = y in O_{E_p}, the equations p x_{i+1} =
    beta_{i+1} sigma(x_i) are solved forward, i -> i+1, for the d - 1 steps
    that end at x_{d/2}.  None of those steps divides by pi, so the vectors
    are exact in the truncated ring; the closing equation at j0 is then
    checked rather than imposed.
    """
    R, d, e, p = crystal.ring, crystal.d, crystal.e, crystal.lfd.p
    j0 = (d // 2 + 1) % d
    omega = R.teichmuller_generator(d)
    # O_{E_p,0} sits in W_{j0} through sigma^{j0}
    omega_j0 = R.frobenius_power(omega, j0)
    p_inv_beta = []
    for pe, qe in crystal.exponents:
        if pe != 1:
            raise InternalError("every beta component carries exactly one p")
        p_inv_beta.append({1: crystal.pi, 0: (1,) + (0,) * (e - 1), -1: None}[qe])

    vectors, seeds = [], []
    power = R.one()
    for a in range(d):
        for b in range(e):
            y = tuple(power if k == b else R.zero() for k in range(e))
            x = [None] * d
            x[j0] = y
            i = j0
            for _ in range(d - 1):
                nxt = (i + 1) % d
                factor = p_inv_beta[nxt]
                if factor is None:
                    raise InternalError("forward recursion reached the p/pi component")
                x[nxt] = crystal.scale(crystal.comp_frobenius(x[i]), factor)
                i = nxt
            vectors.append(tuple(x))
            seeds.append((a, b))
        power = R.mul(power, omega_j0)

    achieved = R.N
    for x in vectors:
        diff = [R.sub(u, v) for cu, cv in zip(crystal.phi(x), crystal.times_p(x)) for u, v in zip(cu, cv)]
        achieved = min([achieved] + [R.valuation(t) for t in diff])
    if achieved < R.N - 1:
        raise PrecisionError(f"fixed vectors only satisfy phi(x) = p x modulo p^{achieved}", achieved)
    rank = rank_mod_p([_flatten(x) for x in vectors], p)
    return FixedModule(tuple(vectors), tuple(seeds), j0, achieved, rank)


def spread(crystal: FCrystal, y: CompElem, j0: int) -> tuple[CompElem, ...]:
    """Component i gets sigma^{(i - j0) mod d}(y)."""
    d = crystal.d
    out = [None] * d
    cur = y
    for k in range(d):
        out[(j0 + k) % d] = cur
        cur = crystal.comp_frobenius(cur)
    return tuple(out)


def cokernel_element(crystal: FCrystal) -> tuple[IntPoly, ...]:
    """Components 1 at i = 0, pi for 1 <= i <= d/2, and 1 afterwards."""
    one = (1,) + (0,) * (crystal.e - 1)
    return tuple(crystal.pi if 1 <= i <= crystal.d // 2 else one for i in range(crystal.d))


# -- cokernel lengths --------------------------------------------------------------


@dataclass(frozen=True)
class CokernelResult:
    length: int
    w_diagonal: tuple[int, ...]
    prime_ring_total: int
    residue_degree: int

    def to_dict(self) -> dict:
        return {
            "artin_invariant": self.length,
            "snf_valuations_over_W": list(self.w_diagonal),
            "prime_ring_length": self.prime_ring_total,
            "residue_degree": self.residue_degree,
        }


def _multiplication_rows_over_w(crystal: FCrystal, element: tuple[IntPoly, ...]) -> list[dict]:
    """Matrix of x -> element * x on prod W_i in the W-basis {T^b in component i}."""
    R, e = crystal.ring, crystal.e
    rows: list[dict] = [dict() for _ in range(crystal.d * e)]
    for i, z in enumerate(element):
        for b in range(e):
            basis = tuple(R.one() if k == b else R.zero() for k in range(e))
            image = crystal.scale(basis, z)
            for k, c in enumerate(image):
                if not R.is_zero(c):
                    rows[i * e + k][i * e + b] = c
    return rows


def _multiplication_rows_over_prime_ring(crystal: FCrystal, element: tuple[IntPoly, ...]) -> list[dict]:
    """Same map over Z/p^N in the basis {X^a T^b in component i}."""
    R, e, m = crystal.ring, crystal.e, crystal.ring.m
    size = crystal.d * e * m
    rows: list[dict] = [dict() for _ in range(size)]
    for i, z in enumerate(element):
        for b in range(e):
            for a in range(m):
                xa = tuple(1 if j == a else 0 for j in range(m))
                basis = tuple(xa if k == b else R.zero() for k in range(e))
                image = crystal.scale(basis, z)
                col = (i * e + b) * m + a
                for k, coeff in enumerate(image):
                    for j, c in enumerate(coeff):
                        if c:
                            rows[(i * e + k) * m + j][col] = c
    return rows


def artin_invariant_via_cokernel(crystal: FCrystal) -> CokernelResult:
    """W-length of the cokernel of multiplication by the cokernel element.

    Computed twice: by a Smith form over the truncated Witt ring, and by a
    Smith form of the expanded matrix over Z/p^N, whose total valuation is
    m times the W-length.
    """
    element = cokernel_element(crystal)
    R = crystal.ring
    n = crystal.d * crystal.e
    w_diag = smith_valuations(R, _multiplication_rows_over_w(crystal, element), n)
    prime = IntegerModRing(R.p, R.N)
    prime_diag = smith_valuations(prime, _multiplication_rows_over_prime_ring(crystal, element), n * R.m)
    if R.N in w_diag or R.N in prime_diag:
        raise InternalError("cokernel element is not injective at working precision")
    w_length = sum(w_diag)
    total = sum(prime_diag)
    if total != R.m * w_length:
        raise InternalError(f"W-length {w_length} disagrees with prime-ring length {total}/{R.m}")
    return CokernelResult(w_length, tuple(v for v in w_diag if v), total, R.m)


def fixed_span_cokernel_length(crystal: FCrystal, fixed: FixedModule) -> int:
    """W-length of the cokernel of (fixed module) tensor W -> O_{E_p} tensor W.

    This is the composite the cokernel element describes, computed from the
    actual fixed vectors instead of from the closed form.
    """
    R, e = crystal.ring, crystal.e
    n = crystal.d * e
    rows: list[dict] = [dict() for _ in range(n)]
    for col, x in enumerate(fixed.vectors):
        for i, comp in enumerate(x):
            for k, c in enumerate(comp):
                if not R.is_zero(c):
                    rows[i * e + k][col] = c
    diag = smith_valuations(R, rows, n)
    if R.N in diag:
        raise InternalError("fixed vectors are W-linearly dependent at working precision")
    return sum(diag)
