"""Finite groups of Moebius transformations over cyclotomic fields.

Each reduced group is realized by explicit SL2 matrices, closed up to the
binary group of order 2|G|, and validated by recomputing its exceptional
orbits on the projective line and matching them against the orbit
polynomials.  Points of P^1 are field elements, with ``None`` for infinity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

from .numfield import NFElem, NFPoly, NumberFieldCtx, cyclotomic_field

INF = None


@dataclass(frozen=True, eq=False)
class MobiusMap:
    """x -> (a x + b) / (c x + d); matrices multiply as maps compose."""

    a: NFElem
    b: NFElem
    c: NFElem
    d: NFElem

    @classmethod
    def identity(cls, ctx) -> "MobiusMap":
        return cls(ctx(1), ctx(0), ctx(0), ctx(1))

    @property
    def ctx(self) -> NumberFieldCtx:
        return self.a.ctx

    @property
    def det(self) -> NFElem:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> NFElem:
        return self.a + self.d

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def __matmul__(self, o: "MobiusMap") -> "MobiusMap":
        return MobiusMap(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def scaled(self, s) -> "MobiusMap":
        return MobiusMap(self.a * s, self.b * s, self.c * s, self.d * s)

    def __neg__(self):
        return self.scaled(-1)

    def adjugate(self) -> "MobiusMap":
        """Inverse up to the scalar det."""
        return MobiusMap(self.d, -self.b, -self.c, self.a)

    def inverse(self) -> "MobiusMap":
        return self.adjugate().scaled(self.det.inverse())

    def __pow__(self, k: int) -> "MobiusMap":
        if k < 0:
            return self.inverse() ** (-k)
        out, base = MobiusMap.identity(self.ctx), self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def __eq__(self, o):
        return isinstance(o, MobiusMap) and self.entries() == o.entries()

    def __hash__(self):
        return hash(self.entries())

    def key(self) -> tuple:
        """Projective class: entries divided by the first nonzero one."""
        for e in self.entries():
            if not e.is_zero():
                inv = e.inverse()
                return tuple(x * inv for x in self.entries())
        raise ValueError("zero matrix")

    def is_scalar(self) -> bool:
        return self.b.is_zero() and self.c.is_zero() and self.a == self.d

    def projective_order(self, limit: int = 240) -> int:
        p = self
        for k in range(1, limit + 1):
            if p.is_scalar():
                return k
            p = p @ self
        raise ValueError("element of infinite or very large order")

    def __call__(self, x):
        """Image of a point of P^1 (None is infinity)."""
        if x is INF:
            return INF if self.c.is_zero() else self.a / self.c
        den = self.c * x + self.d
        if den.is_zero():
            return INF
        return (self.a * x + self.b) / den

    def eigenvalues(self, roots_of_unity) -> list[NFElem]:
        """Eigenvalues (with multiplicity) among the supplied candidates.

        For finite-order matrices these are roots of unity; the characteristic
        polynomial T^2 - tr T + det is checked exactly.
        """
        tr, det = self.trace, self.det
        found = [m for m in roots_of_unity if m * m - tr * m + det == 0]
        if not found:
            raise ValueError("eigenvalues are not among the given roots of unity")
        mu = found[0]
        return [mu, det / mu]

    def eigenvector(self, mu: NFElem):
        """A fixed point of P^1 belonging to the eigenvalue mu, as an element or INF."""
        # kernel of [[a - mu, b], [c, d - mu]] applied to (X, Z)
        if not self.b.is_zero() or not (self.a - mu).is_zero():
            X, Z = -self.b, self.a - mu
            if X.is_zero() and Z.is_zero():
                X, Z = self.d - mu, -self.c
        else:
            X, Z = self.d - mu, -self.c
            if X.is_zero() and Z.is_zero():
                raise ValueError("scalar matrix has no isolated fixed point")
        return INF if Z.is_zero() else X / Z

    def __repr__(self):
        return f"Mobius[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


def point_key(x):
    return ("inf",) if x is INF else (x.num, x.den)


@dataclass
class Orbit:
    name: str
    poly: NFPoly  # finite points are its roots
    has_infinity: bool

    @property
    def size(self) -> int:
        return self.poly.degree + (1 if self.has_infinity else 0)

    def contains(self, x) -> bool:
        if x is INF:
            return self.has_infinity
        return self.poly(x).is_zero()


@dataclass
class RealizedGroup:
    label: str  # "C", "D", "A4", "S4", "A5"
    n: int  # order parameter for C_n and D_n, else 0
    ctx: NumberFieldCtx
    elements: list  # SL2 representatives, one per element of the reduced group
    words: list  # words[i] = (parent index, generator index), root is (-1, -1)
    generators: list
    orbits: list  # exceptional orbits as Orbit records, in table order
    roots_of_unity: list = field(repr=False, default_factory=list)

    @property
    def name(self) -> str:
        return f"{self.label}{self.n}" if self.label in ("C", "D") else self.label

    @property
    def order(self) -> int:
        return len(self.elements)

    def index_of(self, m: MobiusMap) -> int:
        k = m.key()
        for i, e in enumerate(self.elements):
            if e.key() == k:
                return i
        raise KeyError("map not in group")

    @property
    def conjugacy_classes(self) -> list[list[int]]:
        return _classes(self)


def _classes(G: RealizedGroup):
    cache = getattr(G, "_class_cache", None)
    if cache is not None:
        return cache
    keys = [e.key() for e in G.elements]
    lookup = {k: i for i, k in enumerate(keys)}
    seen, classes = set(), []
    invs = [e.adjugate() for e in G.elements]
    for i, e in enumerate(G.elements):
        if i in seen:
            continue
        cls = set()
        for h, hinv in zip(G.elements, invs):
            cls.add(lookup[(h @ e @ hinv).key()])
        seen |= cls
        classes.append(sorted(cls))
    G._class_cache = classes
    return classes


def _close(gens: list[MobiusMap], limit: int = 240):
    """Close SL2 generators to the binary group; keep one matrix per +-pair.

    Returns (elements, words) in breadth-first order.
    """
    ctx = gens[0].ctx
    ident = MobiusMap.identity(ctx)
    elems, words = [ident], [(-1, -1)]
    seen = {ident.entries(), (-ident).entries()}
    i = 0
    while i < len(elems):
        for gi, g in enumerate(gens):
            m = g @ elems[i]
            if m.entries() in seen:
                continue
            seen.add(m.entries())
            seen.add((-m).entries())
            elems.append(m)
            words.append((i, gi))
            if len(elems) > limit:
                raise ValueError("generators do not close to a small finite group")
        i += 1
    return elems, words


def _poly(ctx, coeffs_desc):
    return NFPoly(ctx, list(reversed(coeffs_desc)))


def orbit_polynomials(ctx: NumberFieldCtx) -> dict:
    """The invariant polynomials defining the exceptional orbits (over ctx)."""
    out = {}
    i3 = ctx.sqrt_rational(-3) if ctx.conductor % 3 == 0 else None
    out["t4"] = _poly(ctx, [1, 0, 0, 0, -1, 0])
    if i3 is not None:
        out["p4"] = _poly(ctx, [1, 0, i3 * 2, 0, 1])
        out["q4"] = _poly(ctx, [1, 0, i3 * -2, 0, 1])
    out["r4"] = _poly(ctx, [1, 0, 0, 0, -33, 0, 0, 0, -33, 0, 0, 0, 1])
    out["s4"] = _poly(ctx, [1, 0, 0, 0, 14, 0, 0, 0, 1])
    r5 = [0] * 21
    r5[20], r5[15], r5[10], r5[5], r5[0] = 1, -228, 494, 228, 1
    out["r5"] = NFPoly(ctx, r5)
    s5 = [0] * 12
    s5[11], s5[6], s5[1] = 1, 11, -1
    out["s5"] = NFPoly(ctx, s5)
    t5 = [0] * 31
    t5[30], t5[25], t5[20], t5[10], t5[5], t5[0] = 1, 522, -10005, -10005, -522, 1
    out["t5"] = NFPoly(ctx, t5)
    return out


def group_field(label: str, n: int = 0) -> NumberFieldCtx:
    """Cyclotomic field used for a realization of the reduced group."""
    if label in ("S4", "A4"):
        return cyclotomic_field(24)
    if label == "A5":
        return cyclotomic_field(60)
    if label == "C":
        return cyclotomic_field(4 * n)
    if label == "D":
        return cyclotomic_field(4 * n * 8 // math.gcd(4 * n, 8))
    raise ValueError(f"unknown group label {label!r}")


@lru_cache(maxsize=None)
def exceptional_orbits(label: str, n: int = 0) -> list[Orbit]:
    """Exceptional orbits of the reduced group, each as root set of a polynomial."""
    ctx = group_field(label, n)
    if label in ("C", "D"):
        xn1 = NFPoly(ctx, [-1] + [0] * (n - 1) + [1])
        if label == "C":
            return [Orbit("inf", NFPoly(ctx, [1]), True), Orbit("0", NFPoly.x(ctx), False)]
        xnp1 = NFPoly(ctx, [1] + [0] * (n - 1) + [1])
        return [
            Orbit("0inf", NFPoly.x(ctx), True),
            Orbit(f"x^{n}-1", xn1, False),
            Orbit(f"x^{n}+1", xnp1, False),
        ]
    polys = orbit_polynomials(ctx)
    names = {"A4": ("t4", "p4", "q4"), "S4": ("t4", "r4", "s4"), "A5": ("s5", "r5", "t5")}[label]
    return [Orbit(nm, polys[nm], i == 0) for i, nm in enumerate(names)]


@lru_cache(maxsize=None)
def realize_reduced_group(label: str, n: int = 0) -> RealizedGroup:
    """Explicit Moebius realization of C_n, D_n, A4, S4 or A5, orbit-validated."""
    if label in ("C", "D") and n < 2:
        raise ValueError("C_n and D_n need n >= 2")
    ctx = group_field(label, n)
    N = ctx.conductor
    one, zero = ctx(1), ctx(0)
    orbits = exceptional_orbits(label, n)
    if label in ("C", "D"):
        z = ctx.zeta(2 * n)
        gens = [MobiusMap(z, zero, zero, z.inverse())]
        if label == "D":
            i = ctx.zeta(4)
            gens.append(MobiusMap(zero, i, i, zero))
    elif label in ("S4", "A4"):
        z8 = ctx.zeta(8)
        r2 = z8 - ctx.zeta(8, 3)
        inv_r2 = r2.inverse()
        gens = [
            MobiusMap(z8, zero, zero, z8.inverse()),
            MobiusMap(inv_r2, inv_r2, -inv_r2, inv_r2),
        ]
    else:
        e = ctx.zeta(5)
        z10 = ctx.zeta(10)
        r5 = e - e**2 - e**3 + e**4
        inv5 = r5.inverse()
        gens = [
            MobiusMap(z10, zero, zero, z10.inverse()),
            MobiusMap(zero, -one, one, zero),
            MobiusMap(-(e - e**4) * inv5, (e**2 - e**3) * inv5, (e**2 - e**3) * inv5, (e - e**4) * inv5),
        ]
    for g in gens:
        if g.det != 1:
            raise AssertionError("generator is not in SL2")
    elems, words = _close(gens)
    if label == "A4":
        elems, words, gens = _stabilizer(elems, orbits[1].poly)
    roots = [ctx._zeta_power(k) for k in range(N)]
    G = RealizedGroup(label, n, ctx, elems, words, gens, orbits, roots)
    _validate_orbits(G)
    return G


def binary_form_factor(F: NFPoly, N: int, m: MobiusMap):
    """lambda with F(a x + b, c x + d) = lambda F(x, 1) for the degree-N form of F, else None."""
    G = F.homogeneous_transform(m.a, m.b, m.c, m.d, N)
    # compare at the leading index of F as a degree-N form
    idx = next(i for i in range(N, -1, -1) if not F[i].is_zero())
    lam = G[idx] / F[idx]
    if G != F * lam:
        return None
    return lam


def _stabilizer(elems, F: NFPoly):
    """Elements of a closed group whose action maps the form F to a multiple of itself."""
    keep = [m for m in elems if binary_form_factor(F, F.degree, m) is not None]
    # re-close from a small generating set to get consistent words
    gens = []
    for m in keep[1:]:
        if len(gens) >= 2:
            break
        gens.append(m)
    closed, words = _close(gens)
    if len(closed) != len(keep):
        gens = keep[1:]
        closed, words = _close(gens)
    return closed, words, gens


def fixed_points(m: MobiusMap, roots) -> list:
    mu1, mu2 = m.eigenvalues(roots)
    p = m.eigenvector(mu1)
    q = m.eigenvector(mu2)
    return [p, q]


def _validate_orbits(G: RealizedGroup) -> None:
    pts = {}
    for m in G.elements[1:]:
        for p in fixed_points(m, G.roots_of_unity):
            pts[point_key(p)] = p
    remaining = dict(pts)
    found = []
    while remaining:
        k, p = next(iter(remaining.items()))
        orb = {}
        for m in G.elements:
            q = m(p)
            orb[point_key(q)] = q
        for key in orb:
            if key not in pts:
                raise ValueError(f"{G.name}: orbit leaves the fixed-point set")
            remaining.pop(key, None)
        found.append(list(orb.values()))
    expected = sorted(o.size for o in G.orbits)
    if G.label == "C":
        expected = [1, 1]
    if sorted(len(o) for o in found) != expected:
        raise ValueError(f"{G.name}: orbit sizes {sorted(len(o) for o in found)} != {expected}")
    for orb in found:
        if not any(len(orb) == o.size and all(o.contains(x) for x in orb) for o in G.orbits):
            raise ValueError(f"{G.name}: an orbit does not match any orbit polynomial")
