"""Exact arithmetic: rationals, rational polynomials, p-adic valuations,
Newton polygons, Kronecker symbols and a few elementary number-theory helpers.

Rationals are :class:`fractions.Fraction`, which is always kept in lowest
terms with a positive denominator.  Nothing in this module uses floating
point; ``math.inf`` only stands for the valuation of zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

from .errors import InvalidInput

Rational = Fraction
Number = Union[int, Fraction]

INF = math.inf


# ---------------------------------------------------------------------------
# elementary number theory


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


def primes_below(n: int) -> list[int]:
    return [k for k in range(2, n) if is_prime(k)]


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorization of ``|n|`` (n != 0)."""
    if n == 0:
        raise InvalidInput("cannot factor 0")
    n = abs(n)
    out: dict[int, int] = {}
    k = 2
    while k * k <= n:
        while n % k == 0:
            out[k] = out.get(k, 0) + 1
            n //= k
        k += 1 if k == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def euler_phi(n: int) -> int:
    result = n
    for q in factorize(n):
        result = result // q * (q - 1)
    return result


def multiplicative_order(a: int, n: int) -> int:
    if n == 1:
        return 1
    if math.gcd(a, n) != 1:
        raise InvalidInput(f"{a} is not a unit modulo {n}")
    k, x = 1, a % n
    while x != 1:
        x = x * a % n
        k += 1
    return k


def squarefree_part(n: int) -> int:
    """Signed squarefree kernel: n = squarefree_part(n) * s**2."""
    if n == 0:
        raise InvalidInput("0 has no squarefree part")
    core = 1
    for q, k in factorize(n).items():
        if k % 2:
            core *= q
    return core if n > 0 else -core


def is_fundamental_discriminant(D: int) -> bool:
    if D in (0, 1):
        return False
    if D % 4 == 1:
        return squarefree_part(D) == D
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and squarefree_part(m) == m
    return False


def fundamental_discriminant(n: int) -> int:
    """Discriminant of the quadratic field Q(sqrt(n)); n must not be a square."""
    s = squarefree_part(n)
    if s == 1:
        raise InvalidInput(f"{n} is a square; Q(sqrt({n})) is not a quadratic field")
    return s if s % 4 == 1 else 4 * s


def kronecker_symbol(a: int, m: int) -> int:
    """Kronecker symbol (a/m); equals the Legendre symbol for odd prime m."""
    if m == 0:
        raise InvalidInput("Kronecker symbol (a/0) is not defined here")
    result = 1
    if m < 0:
        m = -m
        if a < 0:
            result = -result
    v = 0
    while m % 2 == 0:
        m //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol (a/m) for odd positive m
    a %= m
    while a:
        while a % 2 == 0:
            a //= 2
            if m % 8 in (3, 5):
                result = -result
        a, m = m, a
        if a % 4 == 3 and m % 4 == 3:
            result = -result
        a %= m
    return result if m == 1 else 0


# ---------------------------------------------------------------------------
# p-adic valuations


def padic_valuation(x: Number, p: int) -> Union[int, float]:
    """nu_p(x) normalized by nu_p(p) = 1; ``INF`` for zero."""
    x = Fraction(x)
    if x == 0:
        return INF
    return _int_val(x.numerator, p) - _int_val(x.denominator, p)


def _int_val(n: int, p: int) -> int:
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


# ---------------------------------------------------------------------------
# polynomials over Q


class RationalPoly:
    """Dense univariate polynomial over Q, coefficients lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Number] = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def monomial(cls, k: int, c: Number = 1) -> "RationalPoly":
        return cls([0] * k + [c])

    @classmethod
    def parse(cls, text: str) -> "RationalPoly":
        """Parse ``"c0,c1,..."`` with exact rational entries such as ``29/5``."""
        try:
            return cls(Fraction(tok.strip()) for tok in text.split(",") if tok.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInput(f"cannot parse polynomial {text!r}: {exc}") from None

    def format(self) -> str:
        return ",".join(str(c) for c in self.coeffs) if self.coeffs else "0"

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, RationalPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"RationalPoly([{self.format()}])"

    def __add__(self, other: "RationalPoly") -> "RationalPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return RationalPoly(self[k] + other[k] for k in range(n))

    def __neg__(self) -> "RationalPoly":
        return RationalPoly(-c for c in self.coeffs)

    def __sub__(self, other: "RationalPoly") -> "RationalPoly":
        return self + (-other)

    def __mul__(self, other: "RationalPoly") -> "RationalPoly":
        if not self.coeffs or not other.coeffs:
            return RationalPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return RationalPoly(out)

    def __pow__(self, k: int) -> "RationalPoly":
        result = RationalPoly([1])
        for _ in range(k):
            result = result * self
        return result

    def divmod(self, divisor: "RationalPoly") -> tuple["RationalPoly", "RationalPoly"]:
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dd = divisor.degree
        lead = divisor.coeffs[-1]
        quo = [Fraction(0)] * max(len(rem) - dd, 0)
        for k in range(len(rem) - dd - 1, -1, -1):
            c = rem[k + dd] / lead
            quo[k] = c
            if c:
                for j, b in enumerate(divisor.coeffs):
                    rem[k + j] -= c * b
        return RationalPoly(quo), RationalPoly(rem[:dd])

    def __call__(self, x: Number) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


def poly_product(factors: Sequence[RationalPoly]) -> RationalPoly:
    out = RationalPoly([1])
    for f in factors:
        out = out * f
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> RationalPoly:
    """Phi_m, computed as (T^m - 1) divided by Phi_k for every proper divisor k."""
    if m < 1:
        raise InvalidInput("cyclotomic index must be positive")
    num = RationalPoly.monomial(m) - RationalPoly([1])
    for k in range(1, m):
        if m % k == 0:
            num, rem = num.divmod(cyclotomic_polynomial(k))
            assert rem.is_zero()
    return num


def cyclotomic_indices_up_to_degree(n: int) -> list[int]:
    """All m with phi(m) <= n.  phi(m) >= sqrt(m/2) bounds the search."""
    return [m for m in range(1, 2 * n * n + 3) if euler_phi(m) <= n]


# ---------------------------------------------------------------------------
# Newton polygons


@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull of the points (i, nu_p(c_i)).

    ``segments`` holds (slope, horizontal length) with strictly increasing
    slopes.  A root of valuation v corresponds to hull slope -v.
    """

    prime: int
    segments: tuple[tuple[Fraction, int], ...]

    @property
    def degree(self) -> int:
        return sum(length for _, length in self.segments)

    def slopes(self) -> list[Fraction]:
        """Hull slopes with multiplicity, increasing."""
        return [s for s, length in self.segments for _ in range(length)]

    def root_valuations(self) -> list[Fraction]:
        """Valuations of the roots with multiplicity (negated hull slopes)."""
        return sorted(-s for s in self.slopes())

    def count_roots(self, predicate) -> int:
        return sum(length for s, length in self.segments if predicate(-s))


def newton_polygon(poly: RationalPoly, p: int) -> NewtonPolygon:
    if poly.is_zero():
        raise InvalidInput("Newton polygon of the zero polynomial is undefined")
    if poly[0] == 0:
        raise InvalidInput("zero constant term: root valuations are unbounded")
    if not is_prime(p):
        raise InvalidInput(f"{p} is not prime")
    pts = [(i, Fraction(padic_valuation(c, p))) for i, c in enumerate(poly.coeffs) if c]
    hull: list[tuple[int, Fraction]] = []
    for pt in pts:
        # pop while the last turn is not strictly convex (collinear points merge)
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], pt) <= 0:
            hull.pop()
        hull.append(pt)
    segments = []
    for (x0, y0), (x1, y1) in zip(hull, hull[1:]):
        segments.append(((y1 - y0) / (x1 - x0), x1 - x0))
    return NewtonPolygon(prime=p, segments=tuple(segments))


def _cross(o, a, b) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
