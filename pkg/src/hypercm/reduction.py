"""Reduction of number-field data modulo a degree-one prime.

For a field Q[x]/(m) and a rational prime p with a simple root r of m mod p,
the map x -> r gives a ring map from the p-integral elements onto F_p.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import modp
from .numfield import NFElem, NFPoly, NumberFieldCtx


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, int(n**0.5) + 1):
        if n % d == 0:
            return False
    return True


@dataclass(frozen=True)
class SplitPrime:
    ctx: NumberFieldCtx
    p: int
    root: int

    def reduce(self, e: NFElem) -> int:
        if e.den % self.p == 0:
            raise ZeroDivisionError(f"element is not integral at {self.p}")
        acc = 0
        for c in reversed(e.num):
            acc = (acc * self.root + c) % self.p
        return acc * pow(e.den, -1, self.p) % self.p

    def reduce_poly(self, f: NFPoly) -> list[int]:
        return modp.normalize([self.reduce(c) for c in f.coeffs], self.p)


def split_primes(ctx: NumberFieldCtx, start: int = 3, count: int | None = None):
    """Primes p >= start at which the modulus has a simple root, in increasing order."""
    m = [int(c) for c in ctx.modulus.coeffs]
    N = ctx.conductor
    p = max(start, 3)
    found = 0
    while count is None or found < count:
        if _is_prime(p) and (not N or p % N == 1):
            root = _find_root(m, p, N)
            if root is not None:
                found += 1
                yield SplitPrime(ctx, p, root)
        p += 1


def _find_root(m, p, N):
    mp = modp.normalize(m, p)
    if N:
        # a primitive N-th root of unity: x^((p-1)/N) for a suitable x
        for x in range(2, p):
            r = pow(x, (p - 1) // N, p)
            if _evaluate(mp, r, p) == 0:
                return r
        return None
    if p > 200000:
        return None
    if len(modp.gcd(mp, modp.derivative(mp, p), p)) > 1:
        return None
    for r in range(p):
        if _evaluate(mp, r, p) == 0:
            return r
    return None


def _evaluate(c, x, p):
    acc = 0
    for a in reversed(c):
        acc = (acc * x + a) % p
    return acc


def separable_mod_split_prime(f: NFPoly, tries: int = 5) -> bool:
    """Certify that f is separable by finding a degree-one prime where its
    reduction keeps its degree and is squarefree.  Falls back to the exact gcd."""
    for sp in split_primes(f.ctx, start=f.degree + 3, count=tries):
        try:
            fp = sp.reduce_poly(f)
        except ZeroDivisionError:
            continue
        if len(fp) - 1 != f.degree:
            continue
        if len(modp.gcd(fp, modp.derivative(fp, sp.p), sp.p)) == 1:
            return True
    from .numfield import is_separable

    return is_separable(f)
