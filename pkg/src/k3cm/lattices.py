"""Even lattices: Gram matrices, the rank-2 normal form at a prime, the
non-splitting criteria for singular K3 surfaces and the doubling isometry.

Sign convention: ``disc_pic = a2^2 - a1*a3``, i.e. minus the determinant of
the rank-2 transcendental Gram matrix.  It is negative for positive definite
input and its quadratic field is the CM field E.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .arith import fundamental_discriminant, is_prime, kronecker_symbol, padic_valuation
from .errors import InvalidInput


@dataclass(frozen=True)
class GramMatrix:
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.entries)
        if n == 0 or any(len(row) != n for row in self.entries):
            raise InvalidInput("Gram matrix must be square and non-empty")
        for i in range(n):
            for j in range(n):
                if self.entries[i][j] != self.entries[j][i]:
                    raise InvalidInput("Gram matrix must be symmetric")

    @classmethod
    def of(cls, rows: Sequence[Sequence[int]]) -> "GramMatrix":
        return cls(tuple(tuple(int(x) for x in row) for row in rows))

    @classmethod
    def binary(cls, a1: int, a2: int, a3: int) -> "GramMatrix":
        return cls(((a1, a2), (a2, a3)))

    @property
    def rank(self) -> int:
        return len(self.entries)

    def is_even(self) -> bool:
        return all(self.entries[i][i] % 2 == 0 for i in range(self.rank))

    def determinant(self) -> int:
        return _bareiss_det([list(row) for row in self.entries])

    def is_positive_definite(self) -> bool:
        # Sylvester: every leading principal minor positive
        return all(
            _bareiss_det([list(row[:k]) for row in self.entries[:k]]) > 0
            for k in range(1, self.rank + 1)
        )

    def to_list(self) -> list[list[int]]:
        return [list(row) for row in self.entries]


def _bareiss_det(m: list[list[int]]) -> int:
    n = len(m)
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


@dataclass(frozen=True)
class SingularNormalForm:
    """a1 = 2 p^n a1p, a3 = 2 p^n a3p with p not dividing a1p (after a swap)."""

    p: int
    n: int
    a1p: int
    a2: int
    a3p: int
    disc_pic: int
    swapped: bool = False

    @property
    def a1(self) -> int:
        return 2 * self.p**self.n * self.a1p

    @property
    def a3(self) -> int:
        return 2 * self.p**self.n * self.a3p

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "a1p": self.a1p,
            "a2": self.a2,
            "a3p": self.a3p,
            "disc_pic": self.disc_pic,
            "swapped": self.swapped,
        }


def binary_disc(gram: GramMatrix) -> int:
    (a1, a2), (_, a3) = gram.entries
    return a2 * a2 - a1 * a3


def validate_singular_gram(gram: GramMatrix) -> None:
    if gram.rank != 2:
        raise InvalidInput("transcendental lattice of a singular K3 has rank 2")
    if not gram.is_even():
        raise InvalidInput("transcendental lattice must be even")
    if not gram.is_positive_definite():
        raise InvalidInput("transcendental lattice must be positive definite")


def singular_normal_form(gram: GramMatrix, p: int) -> SingularNormalForm:
    validate_singular_gram(gram)
    if not is_prime(p):
        raise InvalidInput(f"{p} is not prime")
    (a1, a2), (_, a3) = gram.entries
    disc = a2 * a2 - a1 * a3
    if disc % p == 0:
        raise InvalidInput(f"p={p} divides disc Pic = {disc}; outside the hypothesis p does not divide disc Pic")
    n = min(padic_valuation(a1 // 2, p), padic_valuation(a3 // 2, p))
    swapped = False
    if padic_valuation(a1 // 2, p) > n:
        a1, a3 = a3, a1
        swapped = True
    scale = 2 * p**n
    return SingularNormalForm(
        p=p, n=n, a1p=a1 // scale, a2=a2, a3p=a3 // scale, disc_pic=disc, swapped=swapped
    )


@dataclass(frozen=True)
class EndomorphismOrder:
    """Z_(p)[T]/(c2 T^2 + c1 T + c0), the local endomorphism order."""

    c2: int
    c1: int
    c0: int
    disc_pic: int
    maximal_at_p: bool = True

    @property
    def poly_discriminant(self) -> int:
        return self.c1 * self.c1 - 4 * self.c2 * self.c0

    @property
    def field_discriminant(self) -> int:
        return fundamental_discriminant(self.disc_pic)

    def to_dict(self) -> dict:
        return {
            "polynomial": [self.c0, self.c1, self.c2],
            "disc_pic": self.disc_pic,
            "field_discriminant": self.field_discriminant,
            "maximal_at_p": self.maximal_at_p,
        }


def endomorphism_order(nf: SingularNormalForm) -> EndomorphismOrder:
    order = EndomorphismOrder(
        c2=nf.a1p, c1=nf.a2, c0=nf.p ** (2 * nf.n) * nf.a3p, disc_pic=nf.disc_pic
    )
    if order.poly_discriminant != nf.disc_pic:
        raise AssertionError("presentation discriminant differs from disc Pic")
    # the discriminant is prime to p, so the presented order is maximal at p
    if order.poly_discriminant % nf.p == 0:
        raise AssertionError("presented order is not maximal at p")
    return order


def nonsplit_criterion(nf: SingularNormalForm) -> bool:
    """True when p does not split in E = Q(sqrt(disc_pic))."""
    if nf.p != 2:
        return kronecker_symbol(nf.disc_pic, nf.p) == -1
    return nf.n == 0 and nf.a3p % 2 == 1


def double_pairing(gram: GramMatrix) -> GramMatrix:
    return GramMatrix(tuple(tuple(2 * x for x in row) for row in gram.entries))


def hyperbolic_plane() -> GramMatrix:
    return GramMatrix(((0, 1), (1, 0)))


def orthogonal_sum(*grams: GramMatrix) -> GramMatrix:
    n = sum(g.rank for g in grams)
    rows = [[0] * n for _ in range(n)]
    off = 0
    for g in grams:
        for i in range(g.rank):
            for j in range(g.rank):
                rows[off + i][off + j] = g.entries[i][j]
        off += g.rank
    return GramMatrix.of(rows)

