"""Exact arithmetic in number fields Q[x]/(m) with m monic over Z.

Elements are kept as an integer coordinate vector over one positive common
denominator, which keeps multiplication in cyclotomic fields of degree 16-24
cheap enough for group closures and equation transforms.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .polycore import (
    BivariatePoly,
    RationalPoly,
    cyclotomic,
    euler_phi,
    format_poly,
    irreducible_over_Q,
    resultant_elim,
    squarefree_part,
)


@dataclass(frozen=True, eq=False)
class NumberFieldCtx:
    modulus: RationalPoly
    name: str = "K"
    conductor: int = 0  # N when this is Q(zeta_N), else 0
    _mod_ints: tuple = field(default=(), repr=False)

    def __post_init__(self):
        m = self.modulus
        if m.degree < 1 or m.lc != 1 or not m.is_integral():
            raise ValueError("number field modulus must be monic with integer coefficients")
        object.__setattr__(self, "_mod_ints", tuple(m.int_coeffs()))

    @classmethod
    def create(cls, modulus: RationalPoly, name="K", conductor=0, check=True) -> "NumberFieldCtx":
        if check and modulus.degree > 1:
            res = irreducible_over_Q(modulus)
            if not res:
                raise ValueError(f"modulus {modulus} not certified irreducible ({res.status.value})")
        return cls(modulus, name, conductor)

    @property
    def degree(self) -> int:
        return self.modulus.degree

    def __call__(self, v) -> "NFElem":
        if isinstance(v, NFElem):
            if v.ctx is not self:
                raise ValueError("element belongs to a different field")
            return v
        v = Fraction(v)
        return NFElem._make(self, (v.numerator,) + (0,) * (self.degree - 1), v.denominator)

    def from_coords(self, coords: Sequence) -> "NFElem":
        coords = [Fraction(c) for c in coords]
        coords += [Fraction(0)] * (self.degree - len(coords))
        den = 1
        for c in coords:
            den = den * c.denominator // math.gcd(den, c.denominator)
        return NFElem._make(self, tuple(int(c * den) for c in coords), den)

    def from_poly(self, coeffs: Sequence) -> "NFElem":
        """Residue of the polynomial sum c_i x^i (any length)."""
        coords = [Fraction(c) for c in coeffs]
        den = 1
        for c in coords:
            den = den * c.denominator // math.gcd(den, c.denominator)
        return NFElem._make(self, _reduce([int(c * den) for c in coords], self._mod_ints), den)

    @property
    def gen(self) -> "NFElem":
        return self.from_poly([0, 1])

    def zero(self) -> "NFElem":
        return self(0)

    def one(self) -> "NFElem":
        return self(1)

    # cyclotomic helpers

    def zeta(self, k: int, power: int = 1) -> "NFElem":
        """zeta_k^power with zeta_k = zeta_N^(N/k)."""
        if not self.conductor or self.conductor % k:
            raise ValueError(f"{self.name} does not contain the primitive {k}-th roots of unity")
        e = (self.conductor // k) * power % self.conductor
        return self._zeta_power(e)

    def _zeta_power(self, e: int) -> "NFElem":
        return self.from_poly([0] * e + [1])

    def sqrt_rational(self, d) -> "NFElem":
        """A square root of the rational d inside a cyclotomic field, by Gauss sums."""
        d = Fraction(d)
        if d == 0:
            return self(0)
        num, den = d.numerator * d.denominator, d.denominator
        # sqrt(d) = sqrt(num) / den with num squarefree part times square
        sign = -1 if num < 0 else 1
        num = abs(num)
        sq, core = 1, 1
        k = 2
        while k * k <= num:
            while num % (k * k) == 0:
                num //= k * k
                sq *= k
            k += 1
        core = num
        out = self(Fraction(sq, den))
        # sqrt(sign * core) as product of prime square roots
        primes = []
        k, c = 2, core
        while k * k <= c:
            if c % k == 0:
                primes.append(k)
                c //= k
            k += 1
        if c > 1:
            primes.append(c)
        # sqrt(-1)^s * prod sqrt(p), with sqrt(p) built from sqrt(p*) for odd p
        minus = sign < 0
        for p in primes:
            if p == 2:
                out = out * (self.zeta(8) - self.zeta(8, 3))  # sqrt(2)
            else:
                g = self(0)
                for a in range(1, p):
                    g = g + self.zeta(p, a) * _legendre(a, p)
                out = out * g  # sqrt(p*) with p* = (-1)^((p-1)/2) p
                if p % 4 == 3:
                    minus = not minus
        if minus:
            out = out * self.zeta(4)
        assert out * out == self(d), "Gauss sum square root failed"
        return out

    def __repr__(self):
        return f"NumberFieldCtx({self.name}: {self.modulus})"


def _legendre(a, p):
    r = pow(a, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def _reduce(c: list, m: tuple) -> tuple:
    """Reduce an integer coefficient list modulo the monic integer polynomial m."""
    c = list(c)
    n = len(m) - 1
    for i in range(len(c) - 1, n - 1, -1):
        q = c[i]
        if q:
            base = i - n
            for j in range(n):
                if m[j]:
                    c[base + j] -= q * m[j]
            c[i] = 0
    c = c[:n]
    c += [0] * (n - len(c))
    return tuple(c)


class NFElem:
    __slots__ = ("ctx", "num", "den", "_hash")

    def __init__(self, ctx, num, den):
        self.ctx = ctx
        self.num = num
        self.den = den
        self._hash = None

    @staticmethod
    def _make(ctx, num, den) -> "NFElem":
        if den < 0:
            num, den = tuple(-c for c in num), -den
        g = den
        for c in num:
            if g == 1:
                break
            g = math.gcd(g, c)
        if g > 1:
            num, den = tuple(c // g for c in num), den // g
        if not any(num):
            den = 1
        return NFElem(ctx, tuple(num), den)

    # coercion

    def _lift(self, other) -> "NFElem":
        if isinstance(other, NFElem):
            if other.ctx is not self.ctx:
                raise ValueError("elements of different fields")
            return other
        return self.ctx(other)

    @property
    def coords(self) -> tuple:
        return tuple(Fraction(c, self.den) for c in self.num)

    def is_zero(self) -> bool:
        return not any(self.num)

    def __bool__(self):
        return not self.is_zero()

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return Fraction(self.num[0], self.den)

    # arithmetic

    def __add__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            num = (self.num[0] + other * self.den,) + self.num[1:]
            return NFElem._make(self.ctx, num, self.den)
        o = self._lift(other)
        d = self.den * o.den // math.gcd(self.den, o.den)
        a, b = d // self.den, d // o.den
        return NFElem._make(self.ctx, tuple(x * a + y * b for x, y in zip(self.num, o.num)), d)

    __radd__ = __add__

    def __neg__(self):
        return NFElem(self.ctx, tuple(-c for c in self.num), self.den)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            return NFElem._make(self.ctx, tuple(c * other for c in self.num), self.den)
        if isinstance(other, Fraction):
            return NFElem._make(
                self.ctx, tuple(c * other.numerator for c in self.num), self.den * other.denominator
            )
        o = self._lift(other)
        a, b = self.num, o.num
        n = len(a)
        prod = [0] * (2 * n - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        prod[i + j] += ai * bj
        return NFElem._make(self.ctx, _reduce(prod, self.ctx._mod_ints), self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "NFElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a number field")
        if self.is_rational():
            return self.ctx(1 / self.to_fraction())
        N = self.ctx.conductor
        if N:
            # product of the other Galois conjugates is norm / self
            prod = self.ctx(1)
            for k in range(2, N):
                if math.gcd(k, N) == 1:
                    prod = prod * self.galois(k)
            nrm = self * prod
            if not nrm.is_rational():
                raise ArithmeticError("norm is not rational; modulus is not cyclotomic")
            return prod / nrm.to_fraction()
        # extended Euclid over Q: s*e + t*m = 1
        e = RationalPoly(self.coords)
        m = self.ctx.modulus
        r0, r1 = m, e
        s0, s1 = RationalPoly(), RationalPoly([1])
        while r1.degree > 0:
            q, r = divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
        if r1.is_zero():
            raise ZeroDivisionError("element is a zero divisor (modulus reducible)")
        return self.ctx.from_poly((s1 * (1 / r1.coeffs[0])).coeffs)

    def galois(self, k: int) -> "NFElem":
        """Image under zeta_N -> zeta_N^k in a cyclotomic field."""
        N = self.ctx.conductor
        if not N or math.gcd(k, N) != 1:
            raise ValueError("galois action needs a cyclotomic field and k prime to N")
        vec = [0] * N
        for i, c in enumerate(self.num):
            if c:
                vec[i * k % N] += c
        return NFElem._make(self.ctx, _reduce(vec, self.ctx._mod_ints), self.den)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / Fraction(other))
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out, base = self.ctx(1), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, NFElem):
            return self.ctx is other.ctx and self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.to_fraction() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((id(self.ctx), self.num, self.den))
        return self._hash

    def substitute(self, image: "NFElem") -> "NFElem":
        """Image under the field map sending the generator to ``image``."""
        acc = image.ctx(0)
        for c in reversed(self.coords):
            acc = acc * image + c
        return acc

    def to_complex(self, root: complex | None = None) -> complex:
        """Complex value under an embedding; cyclotomic fields default to zeta_N = e^(2 pi i/N)."""
        if root is None:
            if not self.ctx.conductor:
                raise ValueError("specify the complex root of the modulus")
            root = cmath.exp(2j * math.pi / self.ctx.conductor)
        acc = 0j
        for c in reversed(self.num):
            acc = acc * root + c
        return acc / self.den

    def __repr__(self):
        return f"[{format_poly(self.coords, 'z')}]"

    def __str__(self):
        return format_poly(self.coords, "z")


def minimal_polynomial(e: NFElem) -> RationalPoly:
    """Minimal polynomial over Q, from the characteristic polynomial Res_y(m(y), T - e(y))."""
    if e.is_rational():
        return RationalPoly([-e.to_fraction(), 1])
    charpoly = resultant_elim(e.ctx.modulus, BivariatePoly.t_minus(RationalPoly(e.coords)))
    return squarefree_part(charpoly)


def is_algebraic_integer(e: NFElem) -> bool:
    return minimal_polynomial(e).is_integral()


def norm(e: NFElem) -> Fraction:
    charpoly = resultant_elim(e.ctx.modulus, BivariatePoly.t_minus(RationalPoly(e.coords)))
    n = charpoly.degree
    return charpoly[0] * (-1) ** n


@lru_cache(maxsize=None)
def cyclotomic_field(n: int) -> NumberFieldCtx:
    """Q(zeta_n) with generator zeta_n."""
    # cyclotomic polynomials are irreducible, so skip the sieve
    return NumberFieldCtx(cyclotomic(n), name=f"Q(zeta{n})", conductor=n)


@lru_cache(maxsize=None)
def quadratic_field(d: int) -> NumberFieldCtx:
    """Q(sqrt d) for a non-square integer d, generator sqrt d."""
    r = math.isqrt(abs(d))
    if d >= 0 and r * r == d:
        raise ValueError(f"{d} is a square")
    return NumberFieldCtx.create(RationalPoly([-d, 0, 1]), name=f"Q(sqrt{d})")


def phi(n: int) -> int:
    return euler_phi(n)


def root_of_unity_order(e: NFElem, max_order: int = 0) -> int:
    """Multiplicative order of e if it is a root of unity, else 0."""
    if e.is_zero():
        return 0
    limit = max_order or 2 * max(e.ctx.conductor, 1) * e.ctx.degree
    p = e
    for k in range(1, limit + 1):
        if p == 1:
            return k
        p = p * e
    return 0


class NFPoly:
    """Dense univariate polynomial with coefficients in a number field (ascending)."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: NumberFieldCtx, coeffs: Sequence = ()):
        cs = [ctx(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.ctx = ctx
        self.coeffs = tuple(cs)

    @classmethod
    def from_rational(cls, ctx: NumberFieldCtx, f: RationalPoly) -> "NFPoly":
        return cls(ctx, f.coeffs)

    @classmethod
    def x(cls, ctx) -> "NFPoly":
        return cls(ctx, [0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> NFElem:
        return self.coeffs[-1] if self.coeffs else self.ctx(0)

    def __getitem__(self, i) -> NFElem:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.ctx(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, NFPoly):
            return self.ctx is other.ctx and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def _coerce(self, other) -> "NFPoly":
        if isinstance(other, NFPoly):
            return other
        if isinstance(other, RationalPoly):
            return NFPoly.from_rational(self.ctx, other)
        return NFPoly(self.ctx, [other])

    def __add__(self, other):
        o = self._coerce(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return NFPoly(self.ctx, [self[i] + o[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return NFPoly(self.ctx, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, NFElem)) and not isinstance(other, bool):
            return NFPoly(self.ctx, [c * other for c in self.coeffs])
        o = self._coerce(other)
        if not self.coeffs or not o.coeffs:
            return NFPoly(self.ctx)
        zero = self.ctx(0)
        out = [zero] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(o.coeffs):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return NFPoly(self.ctx, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out, base = NFPoly(self.ctx, [1]), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __call__(self, t):
        acc = self.ctx(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __divmod__(self, other):
        o = self._coerce(other)
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        a = list(self.coeffs)
        inv = o.lc.inverse()
        nb = len(o.coeffs)
        q = [self.ctx(0)] * max(len(a) - nb + 1, 0)
        for shift in range(len(a) - nb, -1, -1):
            c = a[shift + nb - 1] * inv
            q[shift] = c
            if not c.is_zero():
                for j, bj in enumerate(o.coeffs):
                    a[shift + j] = a[shift + j] - c * bj
        return NFPoly(self.ctx, q), NFPoly(self.ctx, a[: nb - 1])

    def exact_div(self, other) -> "NFPoly":
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError("division is not exact")
        return q

    def derivative(self) -> "NFPoly":
        return NFPoly(self.ctx, [c * i for i, c in enumerate(self.coeffs) if i])

    def monic(self) -> "NFPoly":
        return self * self.lc.inverse()

    def is_rational(self) -> bool:
        return all(c.is_rational() for c in self.coeffs)

    def to_rational(self) -> RationalPoly:
        return RationalPoly(c.to_fraction() for c in self.coeffs)

    def subs_power(self, n: int) -> "NFPoly":
        """p(x^n)."""
        out = [self.ctx(0)] * (n * self.degree + 1) if self.coeffs else []
        for i, c in enumerate(self.coeffs):
            out[n * i] = c
        return NFPoly(self.ctx, out)

    def homogeneous_transform(self, a, b, c, d, N: int) -> "NFPoly":
        """sum_i p_i (a x + b)^i (c x + d)^(N - i) for a formal degree N >= deg p."""
        if N < self.degree:
            raise ValueError("formal degree below actual degree")
        ctx = self.ctx
        u = NFPoly(ctx, [b, a])
        v = NFPoly(ctx, [d, c])
        vpow = [NFPoly(ctx, [1])]
        for _ in range(N):
            vpow.append(vpow[-1] * v)
        acc = NFPoly(ctx)
        for i in range(N, -1, -1):
            acc = acc * u
            ci = self[i]
            if not ci.is_zero():
                acc = acc + vpow[N - i] * ci
        return acc

    def __repr__(self):
        return f"NFPoly({self})"

    def __str__(self):
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c.is_zero():
                continue
            cs = str(c)
            if not c.is_rational():
                cs = f"({cs})"
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and cs == "1":
                terms.append(mono)
            elif mono and cs == "-1":
                terms.append("-" + mono)
            else:
                terms.append(cs + ("*" + mono if mono else ""))
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"


def nf_gcd(f: NFPoly, g: NFPoly) -> NFPoly:
    """Monic gcd over the number field."""
    while g:
        f, g = g, divmod(f, g)[1]
    return f.monic() if f else f


def is_separable(f: NFPoly) -> bool:
    return nf_gcd(f, f.derivative()).degree == 0
