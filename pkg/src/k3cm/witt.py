"""Truncated Witt vectors of a finite field and Smith normal forms over
finite chain rings.

``W(F_{p^m}) / p^N`` is modelled as ``(Z/p^N)[X]/(g)`` where ``g`` is a monic
lift of an irreducible polynomial of degree m over F_p.  That quotient is
the unique unramified extension of Z/p^N of degree m, so it *is* the Witt
ring truncated at level N; no ghost components are involved.  The Frobenius
lift sends X to the root of g congruent to X^p.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

import numpy as np
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_gcdex, gf_irreducible_p

from .arith import factorize, is_prime
from .errors import InternalError, InvalidInput

Elem = tuple  # m residues mod p^N, lowest degree first


class IntegerModRing:
    """Z/p^N with the interface shared by :class:`WittApprox`."""

    def __init__(self, p: int, N: int):
        self.p, self.N = p, N
        self.q = p**N

    def zero(self) -> int:
        return 0

    def is_zero(self, a: int) -> bool:
        return a % self.q == 0

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.q

    def mul(self, a: int, b: int) -> int:
        return a * b % self.q

    def valuation(self, a: int) -> int:
        a %= self.q
        if a == 0:
            return self.N
        v = 0
        while a % self.p == 0:
            a //= self.p
            v += 1
        return v

    def shift_down(self, a: int, v: int) -> int:
        return (a % self.q) // self.p**v

    def inverse(self, a: int) -> int:
        return pow(a, -1, self.q)


class WittApprox:
    """W(F_{p^m}) / p^N as (Z/p^N)[X]/(g)."""

    def __init__(self, p: int, m: int, N: int):
        if not is_prime(p):
            raise InvalidInput(f"{p} is not prime")
        if m < 1 or N < 1:
            raise InvalidInput("residue degree and precision must be positive")
        self.p, self.m, self.N = p, m, N
        self.q = p**N
        self.modulus = find_irreducible(p, m)
        self._frob_images = self._frobenius_images()
        self._teich: dict[int, Elem] = {}

    # -- construction -------------------------------------------------------

    def _frobenius_images(self) -> list[Elem]:
        """sigma(X^j) for j < m, where sigma(X) is the Newton-lifted root of g."""
        y = self.power(self.gen(), self.p)
        dg = [k * c for k, c in enumerate(self.modulus)][1:]
        for _ in range(self.N.bit_length() + 1):
            step = self.mul(self._eval_poly(self.modulus, y), self.inverse(self._eval_poly(dg, y)))
            y = self.sub(y, step)
        if not self.is_zero(self._eval_poly(self.modulus, y)):
            raise InternalError("Newton lift of the Frobenius root did not converge")
        images, acc = [], self.one()
        for _ in range(self.m):
            images.append(acc)
            acc = self.mul(acc, y)
        return images

    def _eval_poly(self, coeffs: Sequence[int], x: Elem) -> Elem:
        acc = self.zero()
        for c in reversed(coeffs):
            acc = self.add(self.mul(acc, x), self.from_int(c))
        return acc

    # -- ring structure -----------------------------------------------------

    def zero(self) -> Elem:
        return (0,) * self.m

    def one(self) -> Elem:
        return self.from_int(1)

    def gen(self) -> Elem:
        if self.m == 1:
            return self.from_int(-self.modulus[0])
        return (0, 1) + (0,) * (self.m - 2)

    def from_int(self, c: int) -> Elem:
        return (c % self.q,) + (0,) * (self.m - 1)

    def is_zero(self, a: Elem) -> bool:
        return not any(a)

    def add(self, a: Elem, b: Elem) -> Elem:
        q = self.q
        return tuple((x + y) % q for x, y in zip(a, b))

    def sub(self, a: Elem, b: Elem) -> Elem:
        q = self.q
        return tuple((x - y) % q for x, y in zip(a, b))

    def neg(self, a: Elem) -> Elem:
        q = self.q
        return tuple(-x % q for x in a)

    def scale(self, a: Elem, c: int) -> Elem:
        q = self.q
        return tuple(x * c % q for x in a)

    def mul(self, a: Elem, b: Elem) -> Elem:
        m, q, g = self.m, self.q, self.modulus
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        for k in range(2 * m - 2, m - 1, -1):
            c = prod[k] % q
            if c:
                base = k - m
                for j in range(m):
                    prod[base + j] -= c * g[j]
        return tuple(c % q for c in prod[:m])

    def power(self, a: Elem, k: int) -> Elem:
        result, base = self.one(), a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def frobenius(self, a: Elem) -> Elem:
        q = self.q
        out = [0] * self.m
        for c, img in zip(a, self._frob_images):
            if c:
                for j, v in enumerate(img):
                    out[j] += c * v
        return tuple(x % q for x in out)

    def frobenius_power(self, a: Elem, k: int) -> Elem:
        for _ in range(k % self.m):
            a = self.frobenius(a)
        return a

    # -- valuations and units ----------------------------------------------

    def valuation(self, a: Elem) -> int:
        """min nu_p of the coordinates; N for zero."""
        v = self.N
        for c in a:
            if c:
                k = 0
                while c % self.p == 0:
                    c //= self.p
                    k += 1
                v = min(v, k)
        return v

    def shift_down(self, a: Elem, v: int) -> Elem:
        pv = self.p**v
        return tuple(c // pv for c in a)

    def reduce_mod_p(self, a: Elem) -> tuple[int, ...]:
        return tuple(c % self.p for c in a)

    def inverse(self, a: Elem) -> Elem:
        p = self.p
        a_bar = [int(c) % p for c in reversed(a)]
        g_bar = [int(c) % p for c in reversed(self.modulus)]
        s, _, h = gf_gcdex(_strip(a_bar), g_bar, p, ZZ)
        if [int(c) for c in h] != [1]:
            raise InvalidInput("element is not a unit")
        s = [int(c) for c in reversed(s)]
        u = tuple(s + [0] * (self.m - len(s)))
        two = self.from_int(2)
        prec = 1
        while prec < self.N:
            u = self.mul(u, self.sub(two, self.mul(a, u)))
            prec *= 2
        return u

    # -- Teichmuller representatives ---------------------------------------

    def teichmuller_generator(self, d: int) -> Elem:
        """A Teichmuller lift omega with F_p(omega mod p) = F_{p^d}, d | m.

        omega^{p^d} = omega, so sigma(omega) = omega^p, and 1, omega, ...,
        omega^{d-1} is a basis of W(F_{p^d}) / p^N.
        """
        if d < 1 or self.m % d:
            raise InvalidInput(f"need d dividing the residue degree m={self.m}, got d={d}")
        if d in self._teich:
            return self._teich[d]
        p, m = self.p, self.m
        pd = p**d
        exponent = (p**m - 1) // (pd - 1)
        proper = [d // r for r in factorize(d)] if d > 1 else []
        for code in range(1, p**m):
            c = tuple((code // p**k) % p for k in range(m))
            b = self.power(c, exponent)
            b_bar = self.reduce_mod_p(b)
            if not any(b_bar):
                continue
            if all(self.reduce_mod_p(self.power(b, p**k)) != b_bar for k in proper):
                break
        else:  # pragma: no cover
            raise InternalError("no generator of F_{p^d} found")
        w = b
        for _ in range(self.N):
            w = self.power(w, pd)
        self._teich[d] = w
        return w

    def to_list(self, a: Elem) -> list[int]:
        return list(a)


def _strip(coeffs: list[int]) -> list[int]:
    while coeffs and coeffs[0] == 0:
        coeffs = coeffs[1:]
    return coeffs


@lru_cache(maxsize=None)
def find_irreducible(p: int, m: int) -> tuple[int, ...]:
    """First monic irreducible polynomial of degree m over F_p in a fixed
    enumeration order, lowest degree first."""
    for code in range(p**m):
        low = [(code // p**k) % p for k in range(m)]
        if m > 1 and low[0] == 0:
            continue
        if gf_irreducible_p([1] + low[::-1], p, ZZ):
            return tuple(low) + (1,)
    raise InternalError(f"no irreducible polynomial of degree {m} over F_{p}")  # pragma: no cover


@lru_cache(maxsize=None)
def witt_approx(p: int, m: int, N: int) -> WittApprox:
    return WittApprox(p, m, N)


def smith_valuations(ring, rows: list[dict[int, object]], ncols: int) -> list[int]:
    """Valuations of the Smith normal form diagonal of a sparse matrix over a
    finite chain ring (Z/p^N or a truncated Witt ring).

    ``rows[i]`` maps column index to a nonzero entry.  At each step the
    global entry of minimal valuation is the pivot; because every other
    entry in its row and column is divisible by it, clearing the column
    and discarding the pivot row is a valid Smith reduction.  Missing
    diagonal entries (rank deficiency) are reported as valuation N.
    """
    active = [dict(r) for r in rows]
    diag: list[int] = []
    while True:
        best = None
        for ri, row in enumerate(active):
            if row is None:
                continue
            for cj, a in row.items():
                v = ring.valuation(a)
                if v < ring.N and (best is None or v < best[0]):
                    best = (v, ri, cj)
                    if v == 0:
                        break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        v, ri, cj = best
        pivot_row = active[ri]
        active[ri] = None
        u_inv = ring.inverse(ring.shift_down(pivot_row[cj], v))
        for rk, row in enumerate(active):
            if row is None or cj not in row:
                continue
            factor = ring.mul(ring.shift_down(row[cj], v), u_inv)
            for c, a in pivot_row.items():
                new = ring.sub(row.get(c, ring.zero()), ring.mul(factor, a))
                if ring.is_zero(new):
                    row.pop(c, None)
                else:
                    row[c] = new
        diag.append(v)
    rank_deficit = min(len(rows), ncols) - len(diag)
    return sorted(diag) + [ring.N] * rank_deficit


def rank_mod_p(vectors: Sequence[Sequence[int]], p: int) -> int:
    """Rank over F_p of the given integer vectors."""
    if not vectors:
        return 0
    a = np.array(vectors, dtype=object)
    a = (a % p).astype(np.int64)
    rows, cols = a.shape
    rank = 0
    for c in range(cols):
        nz = np.nonzero(a[rank:, c])[0]
        if nz.size == 0:
            continue
        r = rank + nz[0]
        a[[rank, r]] = a[[r, rank]]
        a[rank] = a[rank] * pow(int(a[rank, c]), -1, p) % p
        others = np.nonzero(a[:, c])[0]
        for k in others:
            if k != rank:
                a[k] = (a[k] - a[k, c] * a[rank]) % p
        rank += 1
        if rank == rows:
            break
    return rank
