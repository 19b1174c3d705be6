"""Point counting on y^2 = f(x) over F_q and the characteristic polynomial
of Frobenius.

F_q = F_p[t]/(m(t)) with m the smallest monic irreducible of degree k in
lexicographic order.  Elements are k-vectors of residues.  The kernel walks
F_q along lines x0 + F_p, where f(x0 + c) is a polynomial in c whose values
come from a forward-difference table, and takes the quadratic character of
f(x) through the norm to F_p:  chi(y) = legendre(y^(1 + p + ... + p^(k-1))).
"""

from __future__ import annotations

import math
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from numba import njit

from . import modp
from .polycore import RationalPoly, discriminant

MAX_Q = 10**9


class BadPrimeError(ValueError):
    pass


class OutOfScaleError(ValueError):
    pass


@dataclass(frozen=True)
class GFContext:
    p: int
    k: int
    modulus: tuple = field(default=())

    @classmethod
    def create(cls, p: int, k: int) -> "GFContext":
        if p < 3 or not _is_prime(p):
            raise ValueError("p must be an odd prime")
        if k < 1:
            raise ValueError("extension degree must be positive")
        m = modp.smallest_irreducible(p, k)
        if not modp.is_irreducible(m, p):
            raise AssertionError("modulus failed the Rabin test")
        return cls(p, k, tuple(m))

    @property
    def q(self) -> int:
        return self.p**self.k


def _is_prime(n):
    return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))


def good_prime(f: RationalPoly, p: int) -> bool:
    """p odd and not dividing lc(f) * disc(f) (f with integer coefficients)."""
    if p <= 2 or not _is_prime(p):
        return False
    lc_disc = f.lc * discriminant(f)
    if lc_disc == 0:
        return False
    num = Fraction(lc_disc).numerator
    return num % p != 0


def good_prime_poly_mod_p(coeffs: list[int], p: int) -> bool:
    """Good reduction test on an integer coefficient list already taken mod p."""
    c = modp.normalize(coeffs, p)
    if p <= 2 or len(c) < 2:
        return False
    return len(modp.gcd(c, modp.derivative(c, p), p)) == 1


# field tables


def _frobenius_matrices(m: tuple, p: int, k: int):
    """frob[j] is the matrix of y -> y^(p^j) on the basis 1, t, ..., t^(k-1)."""
    mats = np.zeros((k, k, k), dtype=np.int64)
    m = list(m)
    for j in range(k):
        for i in range(k):
            img = modp.powmod([0] * i + [1], p**j, m, p)
            for r, c in enumerate(img):
                mats[j, r, i] = c
    return mats


def _reduction_table(m: tuple, p: int, k: int):
    """red[j] = t^(k + j) mod m for j = 0..k-2."""
    red = np.zeros((max(k - 1, 1), k), dtype=np.int64)
    for j in range(k - 1):
        r = modp.rem([0] * (k + j) + [1], list(m), p)
        for i, c in enumerate(r):
            red[j, i] = c
    return red


def _legendre_table(p: int):
    t = np.full(p, -1, dtype=np.int64)
    t[0] = 0
    for a in range(1, p):
        t[a * a % p] = 1
    return t


@njit(cache=True)
def _mul(a, b, red, p, k, out, tmp):
    for i in range(2 * k - 1):
        tmp[i] = 0
    for i in range(k):
        ai = a[i]
        if ai != 0:
            for j in range(k):
                tmp[i + j] += ai * b[j]
    for i in range(2 * k - 1):
        tmp[i] %= p
    for i in range(k):
        out[i] = tmp[i]
    for j in range(k - 1):
        h = tmp[k + j]
        if h != 0:
            for i in range(k):
                out[i] += h * red[j, i]
    for i in range(k):
        out[i] %= p


@njit(cache=True)
def _matvec(M, v, p, k, out):
    for r in range(k):
        s = 0
        for c in range(k):
            s += M[r, c] * v[c]
        out[r] = s % p


@njit(cache=True)
def _norm(y, frob, red, p, k, chain, tmp, a, b, c):
    """Norm of y to F_p by repeated doubling of the Frobenius exponent."""
    # acc holds y^(1 + p + ... + p^(e-1)) with e a prefix of the chain
    for i in range(k):
        a[i] = y[i]
    e = 1
    for step in range(chain.shape[0]):
        op = chain[step]
        if op == 0:
            # double: acc <- acc * frob^e(acc)
            _matvec(frob[e], a, p, k, b)
            _mul(a, b, red, p, k, c, tmp)
            for i in range(k):
                a[i] = c[i]
            e = 2 * e
        else:
            # increment: acc <- y * frob(acc)
            _matvec(frob[1], a, p, k, b)
            _mul(y, b, red, p, k, c, tmp)
            for i in range(k):
                a[i] = c[i]
            e = e + 1
    return a[0]


def _norm_chain(k: int) -> np.ndarray:
    """Doubling (0) / increment (1) steps building the exponent k from 1."""
    ops = []
    for bit in bin(k)[3:]:
        ops.append(0)
        if bit == "1":
            ops.append(1)
    return np.array(ops, dtype=np.int64)


@njit(cache=True)
def _horner(coeffs, x, red, p, k, out, tmp, acc):
    d = coeffs.shape[0] - 1
    for i in range(k):
        acc[i] = 0
    acc[0] = coeffs[d]
    for j in range(d - 1, -1, -1):
        _mul(acc, x, red, p, k, out, tmp)
        for i in range(k):
            acc[i] = out[i]
        acc[0] = (acc[0] + coeffs[j]) % p


@njit(cache=True)
def _line_weight(idx, x, frob, p, k, y):
    """Size of the Frobenius orbit of the line x0 + F_p if idx is the smallest
    index in it, else 0.  x holds x0 (constant coordinate 0)."""
    size = 1
    for j in range(1, k):
        _matvec(frob[j], x, p, k, y)
        other = 0
        for i in range(k - 1, 0, -1):
            other = other * p + y[i]
        if other < idx:
            return 0
        if other == idx:
            # orbit closed after j steps
            return size
        size += 1
    return size


@njit(cache=True)
def _char_sum_range(coeffs, p, k, red, frob, chain, leg, start, stop):
    """Sum of chi(f(x)) over x = x0 + c, x0 running over indices [start, stop)
    of the elements with zero constant coordinate, c over F_p.  Lines in one
    Frobenius orbit have equal sums, so only the smallest index is evaluated."""
    d = coeffs.shape[0] - 1
    tmp = np.zeros(2 * k, dtype=np.int64)
    out = np.zeros(k, dtype=np.int64)
    acc = np.zeros(k, dtype=np.int64)
    x = np.zeros(k, dtype=np.int64)
    y = np.zeros(k, dtype=np.int64)
    na = np.zeros(k, dtype=np.int64)
    nb = np.zeros(k, dtype=np.int64)
    nc = np.zeros(k, dtype=np.int64)
    table = np.zeros((d + 1, k), dtype=np.int64)
    total = 0
    for idx in range(start, stop):
        rest = idx
        x[0] = 0
        for i in range(1, k):
            x[i] = rest % p
            rest //= p
        w = _line_weight(idx, x, frob, p, k, y) if k > 1 else 1
        if w == 0:
            continue
        # values at c = 0..d, then forward differences
        for j in range(d + 1):
            x[0] = j % p
            _horner(coeffs, x, red, p, k, out, tmp, acc)
            for i in range(k):
                table[j, i] = acc[i]
        x[0] = 0
        for lev in range(1, d + 1):
            for j in range(d, lev - 1, -1):
                for i in range(k):
                    table[j, i] = (table[j, i] - table[j - 1, i]) % p
        # table[j] now holds the j-th difference at c = 0
        line = 0
        for c in range(p):
            if k == 1:
                line += leg[table[0, 0]]
            else:
                n = _norm(table[0], frob, red, p, k, chain, tmp, na, nb, nc)
                line += leg[n]
            for j in range(d):
                for i in range(k):
                    s = table[j, i] + table[j + 1, i]
                    if s >= p:
                        s -= p
                    table[j, i] = s
        total += w * line
    return total


@njit(cache=True)
def _char_sum_prime(coeffs, p, leg_p):
    """k = 1 with a large p: plain Horner, Euler criterion when no table fits."""
    d = coeffs.shape[0] - 1
    total = 0
    for x in range(p):
        acc = coeffs[d]
        for j in range(d - 1, -1, -1):
            acc = (acc * x + coeffs[j]) % p
        if acc == 0:
            continue
        if leg_p.shape[0] == p:
            total += leg_p[acc]
        else:
            # Euler criterion by square and multiply
            e = (p - 1) // 2
            r = 1
            base = acc
            while e > 0:
                if e & 1:
                    r = r * base % p
                base = base * base % p
                e >>= 1
            total += 1 if r == 1 else -1
    return total


def _reduce_coeffs(f, p: int) -> list[int]:
    if isinstance(f, RationalPoly):
        out = []
        for c in f.coeffs:
            if c.denominator % p == 0:
                raise BadPrimeError(f"coefficient {c} is not integral at {p}")
            out.append(c.numerator * pow(c.denominator, -1, p) % p)
        return out
    return [c % p for c in f]


def count_points(f, ctx: GFContext, progress: bool = False, check_good: bool = True) -> int:
    """Number of points on the smooth model of y^2 = f(x) over F_q.

    ``f`` is a RationalPoly or an integer coefficient list (ascending), the
    latter already reduced at a degree-one prime of its coefficient field.
    """
    p, k, q = ctx.p, ctx.k, ctx.q
    if q > MAX_Q:
        raise OutOfScaleError(f"q = {p}^{k} = {q} exceeds the counting limit {MAX_Q}")
    c = _reduce_coeffs(f, p)
    deg = len(f.coeffs) - 1 if isinstance(f, RationalPoly) else len(modp.normalize(f, p)) - 1
    c = modp.normalize(c, p)
    if len(c) - 1 != deg:
        raise BadPrimeError(f"leading coefficient vanishes mod {p}")
    if check_good and not good_prime_poly_mod_p(c, p):
        raise BadPrimeError(f"y^2 = f(x) has bad reduction at {p}")
    coeffs = np.array(c, dtype=np.int64)
    lc = c[-1]
    if k == 1:
        leg = _legendre_table(p) if p <= 10**7 else np.zeros(1, dtype=np.int64)
        S = int(_char_sum_prime(coeffs, p, leg))
        chi_lc = _legendre(lc, p)
    else:
        leg = _legendre_table(p)
        red = _reduction_table(ctx.modulus, p, k)
        frob = _frobenius_matrices(ctx.modulus, p, k)
        chain = _norm_chain(k)
        lines = q // p
        chunk = max(1, min(lines, 2_000_000 // max(p, 1)))
        S = 0
        t0 = time.time()
        for start in range(0, lines, chunk):
            stop = min(lines, start + chunk)
            S += int(_char_sum_range(coeffs, p, k, red, frob, chain, leg, start, stop))
            if progress:
                done = stop / lines
                el = time.time() - t0
                eta = el / done - el if done else float("nan")
                print(
                    f"\r  counting over F_{p}^{k}: {100 * done:5.1f}%  eta {eta:6.0f}s",
                    end="",
                    file=sys.stderr,
                    flush=True,
                )
        if progress:
            print(file=sys.stderr)
        # lc lies in F_p, its norm is lc^k
        chi_lc = _legendre(pow(lc, k, p), p)
    at_infinity = 1 if deg % 2 else 1 + chi_lc
    return q + S + at_infinity


def _legendre(a, p):
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def brute_force_count(f, ctx: GFContext) -> int:
    """Oracle: enumerate all pairs (x, y) in F_q^2 and the points at infinity."""
    p, k, q = ctx.p, ctx.k, ctx.q
    m = list(ctx.modulus)
    c = modp.normalize(_reduce_coeffs(f, p), p)
    elems = []
    for idx in range(q):
        v, r = [], idx
        for _ in range(k):
            v.append(r % p)
            r //= p
        elems.append(tuple(modp.normalize(v, p)))

    def ev(x):
        acc = []
        for a in reversed(c):
            acc = modp.add(modp.rem(modp.mul(acc, list(x), p), m, p) if acc else [], [a], p)
        return tuple(acc)

    squares = {}
    for y in elems:
        s = tuple(modp.rem(modp.mul(list(y), list(y), p), m, p))
        squares[s] = squares.get(s, 0) + 1
    affine = sum(squares.get(ev(x), 0) for x in elems)
    deg = len(c) - 1
    if deg % 2:
        inf = 1
    else:
        lc = c[-1]
        inf = 1 + _legendre(pow(lc, k, p), p)
    return affine + inf


# characteristic polynomial of Frobenius


class WeilBoundError(ArithmeticError):
    pass


def lpoly_from_counts(counts: list[int], p: int, g: int) -> RationalPoly:
    """Characteristic polynomial T^2g + a1 T^(2g-1) + ... + p^g of Frobenius
    from N_1..N_g, through the power sums s_k = p^k + 1 - N_k."""
    if len(counts) < g:
        raise ValueError(f"need {g} counts, got {len(counts)}")
    s = [None] + [p**k + 1 - counts[k - 1] for k in range(1, g + 1)]
    e = [Fraction(1)]
    for k in range(1, g + 1):
        acc = Fraction(0)
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * e[k - i] * s[i]
        e.append(acc / k)
    a = [Fraction(0)] * (2 * g + 1)
    for i in range(g + 1):
        a[i] = (-1) ** i * e[i]
    for i in range(g):
        a[2 * g - i] = p ** (g - i) * a[i]
    for i, ai in enumerate(a):
        if ai.denominator != 1:
            raise WeilBoundError(f"non-integral coefficient a_{i} = {ai}")
        bound = math.comb(2 * g, i) * math.sqrt(p) ** i
        if abs(ai) > bound + 1e-6:
            raise WeilBoundError(f"|a_{i}| = {abs(ai)} exceeds the Weil bound {bound:.1f}")
    # a[i] is the coefficient of T^(2g - i)
    return RationalPoly(reversed(a))


def counts_from_lpoly(P: RationalPoly, p: int, upto: int) -> list[int]:
    """N_1..N_upto predicted by a characteristic polynomial of Frobenius."""
    n = P.degree
    # e_i from the coefficients, then power sums by Newton
    e = [Fraction(1)] + [(-1) ** i * P[n - i] for i in range(1, n + 1)]
    s = [Fraction(0)] * (upto + 1)
    for k in range(1, upto + 1):
        acc = Fraction(0)
        for i in range(1, min(k, n) + 1):
            term = e[i] * s[k - i] if i < k else e[i] * k
            acc += (-1) ** (i - 1) * term
        s[k] = acc
    return [int(p**k + 1 - s[k]) for k in range(1, upto + 1)]


def functional_equation_holds(P: RationalPoly, p: int) -> bool:
    n = P.degree
    g = n // 2
    return all(P[i] == p ** (g - i) * P[n - i] for i in range(g + 1)) and P[n] == 1
