"""Exact univariate polynomials over Q.

``RationalPoly`` is an immutable dense polynomial with ``Fraction``
coefficients in ascending order.  Heavy lifting (resultants, gcds) happens
on primitive integer coefficient lists, which keeps the subresultant chain
free of denominators.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from . import modp


def _trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


@dataclass(frozen=True)
class RationalPoly:
    coeffs: tuple  # Fractions, ascending, no trailing zeros

    def __init__(self, coeffs: Iterable = ()):
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in _trim(coeffs)))

    # constructors

    @classmethod
    def x(cls) -> "RationalPoly":
        return cls([0, 1])

    @classmethod
    def const(cls, c) -> "RationalPoly":
        return cls([c])

    @classmethod
    def from_roots(cls, roots) -> "RationalPoly":
        out = cls([1])
        for r in roots:
            out = out * cls([-Fraction(r), 1])
        return out

    # basic queries

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, i) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __bool__(self):
        return bool(self.coeffs)

    def __call__(self, t):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def int_coeffs(self) -> list[int]:
        if not self.is_integral():
            raise ValueError("polynomial has non-integer coefficients")
        return [int(c) for c in self.coeffs]

    # arithmetic

    def __add__(self, other):
        other = _coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return RationalPoly(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return RationalPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        if not self.coeffs or not other.coeffs:
            return RationalPoly()
        if len(other.coeffs) == 1:
            c = other.coeffs[0]
            return RationalPoly(a * c for a in self.coeffs)
        return from_int_scaled(*_mul_scaled(self, other))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out, base = RationalPoly([1]), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __divmod__(self, other):
        other = _coerce(other)
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        a = list(self.coeffs)
        b = other.coeffs
        inv = 1 / b[-1]
        q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
        for shift in range(len(a) - len(b), -1, -1):
            c = a[shift + len(b) - 1] * inv
            q[shift] = c
            if c:
                for j, bj in enumerate(b):
                    a[shift + j] -= c * bj
        return RationalPoly(q), RationalPoly(a[: len(b) - 1])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> "RationalPoly":
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError("division is not exact")
        return q

    # transformations

    def derivative(self) -> "RationalPoly":
        return RationalPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def monic(self) -> "RationalPoly":
        if not self.coeffs:
            raise ValueError("zero polynomial has no monic form")
        return self * (1 / self.lc)

    def content(self) -> Fraction:
        """Positive rational c with self/c primitive integral (sign kept in the primitive part)."""
        if not self.coeffs:
            return Fraction(0)
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        num = 0
        for c in self.coeffs:
            num = math.gcd(num, int(c * den))
        return Fraction(num, den)

    def primitive(self) -> tuple[Fraction, "RationalPoly"]:
        """Split as ``scalar * prim`` with prim integral, primitive, positive leading coefficient.

        Applying it to ``prim`` returns ``(1, prim)``.
        """
        c = self.content()
        if c == 0:
            return Fraction(0), self
        if self.lc < 0:
            c = -c
        return c, RationalPoly(a / c for a in self.coeffs)

    def scale_var(self, c) -> "RationalPoly":
        """f(c*T)."""
        c = Fraction(c)
        return RationalPoly(a * c**i for i, a in enumerate(self.coeffs))

    def subs_power(self, n: int) -> "RationalPoly":
        """f(T^n)."""
        out = [Fraction(0)] * (n * self.degree + 1) if self.coeffs else []
        for i, a in enumerate(self.coeffs):
            out[n * i] = a
        return RationalPoly(out)

    def compose(self, other: "RationalPoly") -> "RationalPoly":
        acc = RationalPoly()
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc

    def reverse(self) -> "RationalPoly":
        return RationalPoly(reversed(self.coeffs))

    def strip_t(self) -> "RationalPoly":
        """Remove every factor T."""
        c = list(self.coeffs)
        while c and c[0] == 0:
            c.pop(0)
        return RationalPoly(c)

    def __str__(self):
        return format_poly(self.coeffs, "T")

    def __repr__(self):
        return f"RationalPoly({self})"


def _coerce(v) -> RationalPoly:
    return v if isinstance(v, RationalPoly) else RationalPoly([v])


def _int_scaled(f: RationalPoly) -> tuple[list[int], Fraction]:
    """(ints, s) with f = s * ints and ints primitive."""
    s, prim = f.primitive()
    return [int(c) for c in prim.coeffs], s


def from_int_scaled(ints: Sequence[int], s=1) -> RationalPoly:
    s = Fraction(s)
    return RationalPoly(c * s for c in ints)


def _mul_scaled(f, g):
    a, sa = _int_scaled(f)
    b, sb = _int_scaled(g)
    return _int_mul(a, b), sa * sb


def _int_mul(a, b):
    if len(a) * len(b) > 400:
        # Kronecker substitution: one big-integer product
        bound = max(map(abs, a)) * max(map(abs, b)) * min(len(a), len(b))
        bits = bound.bit_length() + 2
        pack = lambda c: sum((v << (bits * i)) for i, v in enumerate(c))  # noqa: E731
        prod = pack(a) * pack(b)
        out, mask, half = [], (1 << bits) - 1, 1 << (bits - 1)
        for _ in range(len(a) + len(b) - 1):
            v = prod & mask
            prod >>= bits
            if v >= half:
                v -= 1 << bits
                prod += 1
            out.append(v)
        return out
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def format_poly(coeffs, var="x") -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if mono and c == 1:
            s = mono
        elif mono and c == -1:
            s = "-" + mono
        else:
            s = str(c) + ("*" + mono if mono else "")
        terms.append(s)
    if not terms:
        return "0"
    return " + ".join(terms).replace("+ -", "- ")


# integer polynomial kernels (ascending lists, no trailing zeros)


def _icontent(a):
    g = 0
    for c in a:
        g = math.gcd(g, c)
    return g


def _iprim(a):
    g = _icontent(a)
    if g == 0:
        return a
    if a[-1] < 0:
        g = -g
    return [c // g for c in a]


def _prem(a, b):
    """Pseudo-remainder lc(b)^(da-db+1) * a mod b over Z."""
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    e = len(a) - len(b) + 1
    while len(a) - 1 >= db and a:
        c = a[-1]
        shift = len(a) - 1 - db
        a = [v * lb for v in a]
        for j, bj in enumerate(b):
            a[shift + j] -= c * bj
        a = _trim(a)
        e -= 1
    if e > 0:
        f = lb**e
        a = [v * f for v in a]
    return a


def int_resultant(a: Sequence[int], b: Sequence[int]) -> int:
    """Resultant of two integer polynomials by the subresultant algorithm."""
    a, b = _trim(a), _trim(b)
    if not a or not b:
        return 0
    da, db = len(a) - 1, len(b) - 1
    if da == 0:
        return a[0] ** db
    if db == 0:
        return b[0] ** da
    s = 1
    if da < db:
        a, b = b, a
        da, db = db, da
        if da % 2 and db % 2:
            s = -1
    ca, cb = _icontent(a), _icontent(b)
    a = [c // ca for c in a]
    b = [c // cb for c in b]
    t = ca**db * cb**da
    g = h = 1
    while True:
        da, db = len(a) - 1, len(b) - 1
        delta = da - db
        if da % 2 and db % 2:
            s = -s
        r = _prem(a, b)
        a = b
        if not r:
            return 0
        div = g * h**delta
        b = [c // div for c in r]
        g = a[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = g**delta // h ** (delta - 1)
        if len(b) == 1:
            da = len(a) - 1
            if da == 0:
                return s * t
            h = b[0] ** da // h ** (da - 1)
            return s * t * h


def resultant(f: RationalPoly, g: RationalPoly) -> Fraction:
    """Res(f, g) = lc(f)^deg g * prod g(a) over roots a of f."""
    if f.is_zero() or g.is_zero():
        return Fraction(0)
    a, sa = _int_scaled(f)
    b, sb = _int_scaled(g)
    return sa ** g.degree * sb ** f.degree * int_resultant(a, b)


def _int_gcd_prim(a, b):
    """Primitive gcd of two integer polynomials (primitive PRS)."""
    a, b = _iprim(_trim(a)), _iprim(_trim(b))
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _prem(a, b)
        a, b = b, (_iprim(r) if r else [])
    return _iprim(a)


def gcd(f: RationalPoly, g: RationalPoly) -> RationalPoly:
    """Monic gcd over Q (zero if both are zero)."""
    if f.is_zero():
        return g.monic() if g else RationalPoly()
    if g.is_zero():
        return f.monic()
    a, _ = _int_scaled(f)
    b, _ = _int_scaled(g)
    p = _large_prime_coprime(a[-1] * b[-1])
    if len(modp.gcd(a, b, p)) == 1:
        return RationalPoly([1])
    h = _heu_gcd(a, b)
    if h is None:
        h = _int_gcd_prim(a, b)
    return RationalPoly(h).monic()


def _int_divides(d, a):
    """True iff the integer polynomial d divides a in Z[T]."""
    a = list(a)
    ld, nd = d[-1], len(d)
    while len(a) >= nd:
        q, r = divmod(a[-1], ld)
        if r:
            return False
        shift = len(a) - nd
        for j, dj in enumerate(d):
            a[shift + j] -= q * dj
        a = _trim(a)
    return not a


def _heu_gcd(a, b):
    """Heuristic gcd: evaluate at a large integer, take the integer gcd and
    read the polynomial back from its balanced digits.  Any candidate is
    verified by exact division, so a returned value is always correct."""
    a, b = _iprim(a), _iprim(b)
    bound = max(max(map(abs, a)), max(map(abs, b)))
    xi = 2 * bound + 29
    for _ in range(6):
        va = _horner(a, xi)
        vb = _horner(b, xi)
        if va and vb:
            h = math.gcd(va, vb)
            cand = []
            while h:
                d = h % xi
                if d > xi // 2:
                    d -= xi
                cand.append(d)
                h = (h - d) // xi
            cand = _iprim(_trim(cand))
            if cand and _int_divides(cand, a) and _int_divides(cand, b):
                return cand
        xi = xi * 73794 // 27011 + 1
    return None


def _horner(a, t):
    acc = 0
    for c in reversed(a):
        acc = acc * t + c
    return acc


_BIG_PRIMES = (2305843009213693951, 1000000000000000003, 999999999999999989)


def _large_prime_coprime(n):
    for p in _BIG_PRIMES:
        if n % p:
            return p
    raise ArithmeticError("no usable prime")  # pragma: no cover


def squarefree_part(f: RationalPoly) -> RationalPoly:
    """Monic polynomial with the distinct roots of f, each once."""
    if f.is_zero():
        raise ValueError("squarefree_part of the zero polynomial")
    if f.degree == 0:
        return RationalPoly([1])
    d = gcd(f, f.derivative())
    return (f.exact_div(d) if d.degree > 0 else f).monic()


def is_squarefree(f: RationalPoly) -> bool:
    return f.degree >= 0 and gcd(f, f.derivative()).degree == 0


def discriminant(f: RationalPoly) -> Fraction:
    n = f.degree
    if n < 1:
        raise ValueError("discriminant needs degree >= 1")
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * resultant(f, f.derivative()) / f.lc


# resultants with a polynomial parameter


@dataclass(frozen=True)
class BivariatePoly:
    """F(T, y) = sum_i T^i * F_i(y), stored as the tuple of F_i."""

    t_coeffs: tuple

    @classmethod
    def t_minus(cls, e: RationalPoly) -> "BivariatePoly":
        """T - e(y)."""
        return cls((-e, RationalPoly([1])))

    @classmethod
    def scaled(cls, f: RationalPoly) -> "BivariatePoly":
        """f(T*y)."""
        return cls(tuple(RationalPoly([0] * i + [a]) for i, a in enumerate(f.coeffs)))

    @classmethod
    def shifted(cls, f: RationalPoly, c) -> "BivariatePoly":
        """f(T - c*y)."""
        # expand (T - c y)^i by the binomial theorem, collect by powers of T
        c = Fraction(c)
        n = f.degree
        cols = [[Fraction(0)] * (n + 1) for _ in range(n + 1)]
        for i, a in enumerate(f.coeffs):
            if not a:
                continue
            for k in range(i + 1):
                cols[k][i - k] += a * math.comb(i, k) * (-c) ** (i - k)
        return cls(tuple(RationalPoly(col) for col in cols))

    @property
    def t_degree(self) -> int:
        return len(self.t_coeffs) - 1

    @property
    def y_degree(self) -> int:
        return max((c.degree for c in self.t_coeffs if c), default=-1)

    def at(self, t) -> RationalPoly:
        acc = RationalPoly()
        for c in reversed(self.t_coeffs):
            acc = acc * t + c
        return acc


def resultant_elim(f: RationalPoly, F: BivariatePoly) -> RationalPoly:
    """Res_y(f(y), F(T, y)) as a polynomial in T.

    Equals lc(f)^n * prod_b F(T, b) over the roots b of f, with n the formal
    y-degree of F.  Computed by evaluation at integer points and Newton
    interpolation.
    """
    if f.is_zero():
        raise ValueError("resultant_elim needs nonzero f")
    m, n = f.degree, F.y_degree
    if n < 0:
        return RationalPoly()
    bound = m * max(F.t_degree, 0)
    a, sa = _int_scaled(f)
    lcf = f.lc
    values = []
    for t in range(bound + 1):
        g = F.at(t)
        if g.is_zero():
            values.append(Fraction(0))
            continue
        b, sb = _int_scaled(g)
        drop = n - g.degree
        values.append(lcf**drop * sa ** g.degree * sb**m * int_resultant(a, b))
    return newton_interpolate(values)


def newton_interpolate(values: Sequence) -> RationalPoly:
    """Polynomial of degree < len(values) through (t, values[t]) for t = 0, 1, ..."""
    diffs = [Fraction(v) for v in values]
    coef = []
    level = diffs
    k = 0
    while level:
        coef.append(level[0] / math.factorial(k))
        level = [level[i + 1] - level[i] for i in range(len(level) - 1)]
        k += 1
    # sum coef[k] * T (T-1) ... (T-k+1)
    out = RationalPoly()
    falling = RationalPoly([1])
    for k, c in enumerate(coef):
        if c:
            out = out + falling * c
        falling = falling * RationalPoly([-k, 1])
    return out


# cyclotomic polynomials


def _mobius(n):
    res, d = 1, 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            res = -res
        d += 1
    return -res if n > 1 else res


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> RationalPoly:
    if n < 1:
        raise ValueError("cyclotomic polynomial needs n >= 1")
    num, den = [1], [1]
    for d in range(1, n + 1):
        if n % d:
            continue
        mu = _mobius(n // d)
        term = [-1] + [0] * (d - 1) + [1]
        if mu == 1:
            num = _int_mul(num, term)
        elif mu == -1:
            den = _int_mul(den, term)
    return RationalPoly(num).exact_div(RationalPoly(den))


def euler_phi(n: int) -> int:
    out, m, d = n, n, 2
    while d * d <= m:
        if m % d == 0:
            while m % d == 0:
                m //= d
            out -= out // d
        d += 1
    if m > 1:
        out -= out // m
    return out


# irreducibility


class Irreducibility(str, enum.Enum):
    IRREDUCIBLE = "irreducible"
    REDUCIBLE = "reducible"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class IrreducibilityResult:
    status: Irreducibility
    method: str
    primes_used: tuple = ()

    def __bool__(self):
        return self.status is Irreducibility.IRREDUCIBLE


def _small_primes(start=3):
    p = start
    while True:
        if all(p % d for d in range(2, int(p**0.5) + 1)):
            yield p
        p += 1


def _divisors_if_small(n, limit=10**6):
    """Positive divisors of |n| if n factors over primes below ``limit``, else None."""
    n = abs(n)
    fac = {}
    d = 2
    while d * d <= n and d < limit:
        while n % d == 0:
            fac[d] = fac.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        if d * d <= n:
            return None
        fac[n] = fac.get(n, 0) + 1
    divs = [1]
    for q, e in fac.items():
        divs = [x * q**k for x in divs for k in range(e + 1)]
    return divs


def rational_roots(f: RationalPoly, max_candidates: int = 20000) -> list[Fraction] | None:
    """Rational roots of f, or None when the candidate set is too large to scan."""
    g = f.strip_t()
    roots = [Fraction(0)] if g.degree < f.degree else []
    if g.degree < 1:
        return roots
    a, _ = _int_scaled(g)
    num = _divisors_if_small(a[0])
    den = _divisors_if_small(a[-1])
    if num is None or den is None or len(num) * len(den) > max_candidates:
        return None
    n = len(a) - 1
    found = set()
    for p_ in num:
        for q_ in den:
            if math.gcd(p_, q_) != 1:
                continue
            qpow = [q_**k for k in range(n + 1)]
            for pp in (p_, -p_):
                # homogeneous Horner for sum a_i p^i q^(n-i)
                acc = a[n]
                for i in range(n - 1, -1, -1):
                    acc = acc * pp + a[i] * qpow[n - i]
                if acc == 0:
                    found.add(Fraction(pp, q_))
    return sorted(roots + list(found))


def irreducible_over_Q(
    f: RationalPoly, nprimes: int = 25, exact_fallback: bool = True
) -> IrreducibilityResult:
    """Degree-pattern sieve for irreducibility over Q.

    Returns irreducible only when the subset sums of factor degrees modulo
    several primes leave no room for a proper factor.  With
    ``exact_fallback`` an inconclusive sieve is settled by an exact
    factorization in FLINT; otherwise the answer is ``unknown``.
    """
    if f.degree < 1:
        raise ValueError("irreducibility needs degree >= 1")
    if not is_squarefree(f):
        raise ValueError("irreducible_over_Q expects a squarefree polynomial")
    n = f.degree
    if n == 1:
        return IrreducibilityResult(Irreducibility.IRREDUCIBLE, "degree-one")
    roots = rational_roots(f)
    if roots:
        return IrreducibilityResult(Irreducibility.REDUCIBLE, "rational-root")
    if n <= 3 and roots is not None:
        return IrreducibilityResult(Irreducibility.IRREDUCIBLE, "no-rational-root")
    a, _ = _int_scaled(f)
    full = (1 << (n + 1)) - 1
    allowed = full
    used = []
    for p in _small_primes():
        if len(used) >= nprimes:
            break
        if a[-1] % p == 0:
            continue
        ap = modp.normalize(a, p)
        if len(modp.gcd(ap, modp.derivative(ap, p), p)) > 1:
            continue
        used.append(p)
        sums = 1
        for d in modp.factor_degrees(ap, p):
            sums |= sums << d
        allowed &= sums
        if allowed == (1 | (1 << n)):
            return IrreducibilityResult(Irreducibility.IRREDUCIBLE, "degree-sieve", tuple(used))
    if exact_fallback:
        return _flint_irreducible(a, tuple(used))
    return IrreducibilityResult(Irreducibility.UNKNOWN, "degree-sieve", tuple(used))


def _flint_irreducible(a, used):
    import flint

    _, factors = flint.fmpz_poly(a).factor()
    status = (
        Irreducibility.IRREDUCIBLE
        if len(factors) == 1 and factors[0][1] == 1
        else Irreducibility.REDUCIBLE
    )
    return IrreducibilityResult(status, "exact-factorization", used)
