"""Equations of quotients H\\X of a hyperelliptic curve by a lift H of a
solvable subgroup of the reduced automorphism group.

A cyclic step diagonalizes the generator by a Moebius change of coordinates
x = C(z) sending 0 and infinity to its fixed points.  The new right-hand side
has the shape z^k g(z^n) and the case analysis on (n mod 2, k) gives the
quotient polynomial in u = z^n.  Non-cyclic groups are handled one cyclic
factor at a time along a composition series, with the next generator acting
on the current quotient line through the induced Moebius map.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .curves import CurveSpec
from .mobius import INF, MobiusMap, RealizedGroup, fixed_points, point_key
from .numfield import NFElem, NFPoly, NumberFieldCtx, is_algebraic_integer, minimal_polynomial
from .polycore import RationalPoly, format_poly

# reduced subgroup and quotient genus for each row with a non-CM quotient
QUOTIENT_PLAN = {
    "X6": ("C2", 1),
    "X8": ("S3", 1),
    "X10": ("C4", 2),
    "X11": ("C3", 4),
    "X12": ("C5", 1),
    "X13": ("C5", 1),
    "X15": ("A4", 1),
    "X16": ("C5", 4),
    "X17": ("C5", 4),
    "X18": ("C5", 6),
}


class QuotientError(ValueError):
    pass


class QuotientObstruction(QuotientError):
    """An even-order step fixes a branch point: the hyperelliptic involution lies in H."""


class ShapeError(QuotientError):
    """The transformed equation is not of the form z^k g(z^n)."""


class NonSolvableError(QuotientError):
    pass


# single steps


def transform_equation(f, m: MobiusMap, g: int) -> NFPoly:
    """Right-hand side of the model v^2 = (c z + d)^(2g+2) f((a z + b)/(c z + d))."""
    if m.det.is_zero():
        raise QuotientError("degenerate Moebius map")
    if isinstance(f, RationalPoly):
        f = NFPoly.from_rational(m.ctx, f)
    return f.homogeneous_transform(m.a, m.b, m.c, m.d, 2 * g + 2)


@dataclass
class DiagonalForm:
    conj: MobiusMap
    poly: NFPoly  # z^k g(z^n)
    n: int
    k: int
    g: NFPoly


def diagonal_shape(ft: NFPoly, n: int) -> tuple[int, NFPoly]:
    """(k, g) with ft = z^k g(z^n), k in {0, 1}; ShapeError otherwise."""
    if ft.is_zero():
        raise ShapeError("zero polynomial")
    k = 0 if not ft[0].is_zero() else 1
    if k == 1 and ft.degree >= 1 and ft[1].is_zero():
        raise QuotientError("transformed equation is not separable at 0")
    for e in range(ft.degree + 1):
        if not ft[e].is_zero() and (e - k) % n:
            raise ShapeError(f"exponent {e} is not congruent to {k} mod {n}")
    g = NFPoly(ft.ctx, [ft[k + n * j] for j in range((ft.degree - k) // n + 1)])
    return k, g


def reduce_by_diagonal_cyclic(ft: NFPoly, n: int, k: int | None = None) -> list[tuple[NFPoly, int]]:
    """Quotient polynomials in u = z^n with the exponent e of the y-substitution
    w = v z^e.  One candidate, or two when n is even and k = 0."""
    k_found, g = diagonal_shape(ft, n)
    if k is not None and k != k_found:
        raise ShapeError(f"expected k = {k}, found {k_found}")
    k = k_found
    u_g = NFPoly(ft.ctx, [0] + list(g.coeffs))
    if n % 2:
        return [(g, 0)] if k == 0 else [(u_g, (n - 1) // 2)]
    if k == 1:
        raise QuotientObstruction(
            f"order-{n} step fixes a branch point: the hyperelliptic involution lies in H"
        )
    return [(g, 0), (u_g, n // 2)]


def genus_of_poly(q: NFPoly) -> int:
    return max((q.degree - 1) // 2, 0)


def _formal_degree(q: NFPoly) -> int:
    return 2 * genus_of_poly(q) + 2


# subgroups


def _is_diagonal(m: MobiusMap) -> bool:
    return m.b.is_zero() and m.c.is_zero()


class _GroupOps:
    def __init__(self, G: RealizedGroup):
        self.G = G
        self.keys = [e.key() for e in G.elements]
        self.lookup = {k: i for i, k in enumerate(self.keys)}
        self._orders = {}
        self._mul = {}

    def mul(self, i: int, j: int) -> int:
        if (i, j) not in self._mul:
            self._mul[(i, j)] = self.lookup[(self.G.elements[i] @ self.G.elements[j]).key()]
        return self._mul[(i, j)]

    def inv(self, i: int) -> int:
        return self.lookup[self.G.elements[i].adjugate().key()]

    def order(self, i: int) -> int:
        if i not in self._orders:
            self._orders[i] = self.G.elements[i].projective_order()
        return self._orders[i]

    def closure(self, gens) -> frozenset:
        out = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for a in frontier:
                for gi in gens:
                    b = self.mul(gi, a)
                    if b not in out:
                        out.add(b)
                        nxt.append(b)
            frontier = nxt
        return frozenset(out)


def find_subgroup(G: RealizedGroup, label: str) -> list[int]:
    """Indices of a subgroup of type C<n>, D<n>, S3 or A4, found by element
    orders; diagonal elements are preferred so that power substitutions in the
    given coordinates are used whenever possible.  The group's own label
    returns the whole group."""
    ops = _GroupOps(G)
    idx = range(1, G.order)
    if label == G.name:
        return list(range(G.order))

    def by_order(n):
        cands = [i for i in idx if ops.order(i) == n]
        return sorted(cands, key=lambda i: (not _is_diagonal(G.elements[i]), i))

    if label.startswith("C"):
        n = int(label[1:])
        for i in by_order(n):
            return sorted(ops.closure([i]))
        raise QuotientError(f"{G.name} has no element of order {n}")
    if label == "S3" or label.startswith("D"):
        n = 3 if label == "S3" else int(label[1:])
        for a in by_order(n):
            for b in by_order(2):
                H = ops.closure([a, b])
                if len(H) == 2 * n:
                    return sorted(H)
        raise QuotientError(f"{G.name} has no subgroup {label}")
    if label == "A4":
        for a in by_order(2):
            for b in by_order(3):
                H = ops.closure([a, b])
                if len(H) == 12:
                    return sorted(H)
        raise QuotientError(f"{G.name} has no subgroup A4")
    raise QuotientError(f"unsupported subgroup label {label!r}")


def composition_series(G: RealizedGroup, H) -> list[tuple[frozenset, int]]:
    """[(K_1, h_1), (K_2, h_2), ...] with 1 < K_1 < K_2 < ... = H, each K_i normal
    in K_{i+1} with cyclic quotient generated by the image of h_{i+1}."""
    ops = _GroupOps(G)
    H = frozenset(H)
    chain = []
    while len(H) > 1:
        comm = set()
        for a in H:
            for b in H:
                c = ops.mul(ops.mul(a, b), ops.mul(ops.inv(a), ops.inv(b)))
                comm.add(c)
        D = ops.closure(sorted(comm)) if comm - {0} else frozenset({0})
        if D == H:
            raise NonSolvableError("subgroup is not solvable")
        best = None
        extra = sorted(H - D)
        for r in (0, 1, 2):
            for add in itertools.combinations(extra, r):
                K = ops.closure(sorted(D | set(add))) if (D | set(add)) != {0} else frozenset({0})
                if K == H or not K <= H:
                    continue
                h = _cyclic_generator(ops, K, H)
                if h is None:
                    continue
                if best is None or len(K) > len(best[0]):
                    best = (K, h)
        if best is None:
            raise NonSolvableError("no normal subgroup with cyclic quotient")
        chain.append((H, best[1]))
        H = best[0]
    return list(reversed(chain))


def _cyclic_generator(ops, K, H):
    cands = sorted(H - K, key=lambda i: (not _is_diagonal(ops.G.elements[i]), i))
    for h in cands:
        if ops.closure(sorted(K | {h})) == H:
            return h
    return None


# the iterated construction


@dataclass
class QuotientStep:
    conj: MobiusMap  # previous coordinate = conj(z)
    N: int  # formal degree of the model before the step
    n: int
    k: int
    e: int  # w = v z^e


@dataclass
class Candidate:
    poly: NFPoly
    steps: list = field(default_factory=list)

    @property
    def genus(self) -> int:
        return genus_of_poly(self.poly)


def line_map(steps, x):
    """Image of a point of the original line on the current quotient line."""
    for s in steps:
        x = s.conj.inverse()(x) if not _is_identity(s.conj) else x
        if x is not INF:
            x = x**s.n
    return x


def _is_identity(m: MobiusMap) -> bool:
    return _is_diagonal(m) and m.a == m.d


def _mobius_from_points(src, dst) -> MobiusMap:
    """Moebius map sending three finite points src to dst."""

    def to_std(p):
        u1, u2, u3 = p
        return MobiusMap(u3 - u2, -u1 * (u3 - u2), u3 - u1, -u2 * (u3 - u1))

    return to_std(dst).adjugate() @ to_std(src)


def induced_map(steps, h: MobiusMap, ctx: NumberFieldCtx) -> MobiusMap:
    """Moebius map psi with psi(phi(x)) = phi(h x) on the current line, from
    three sample points and checked at a fourth."""
    src, dst = [], []
    t = 2
    while len(src) < 4:
        x = ctx(t)
        t += 1
        u, w = line_map(steps, x), line_map(steps, h(x))
        if u is INF or w is INF or any(u == s for s in src):
            continue
        src.append(u)
        dst.append(w)
        if t > 200:
            raise QuotientError("could not sample the induced map")
    psi = _mobius_from_points(src[:3], dst[:3])
    if psi(src[3]) != dst[3]:
        raise QuotientError("induced map is not a Moebius transformation (subgroup not normal)")
    return psi


def _conj_for(A, B, ctx) -> MobiusMap:
    """C with C(0) = A and C(infinity) = B."""
    one, zero = ctx(1), ctx(0)
    BX, BZ = (one, zero) if B is INF else (B, one)
    AX, AZ = (one, zero) if A is INF else (A, one)
    return MobiusMap(BX, AX, BZ, AZ)


def _is_branch(q: NFPoly, N: int, P) -> bool:
    if P is INF:
        return q.degree < N
    return q(P).is_zero()


def _step_fixed_points(G, ops, steps, K, h_idx):
    """Fixed points of the induced action of h on the current line: images of
    fixed points of the elements of the coset h K."""
    pts = {}
    for k_idx in sorted(K):
        e = G.elements[ops.mul(h_idx, k_idx)]
        if e.is_scalar():
            continue
        for P in fixed_points(e, G.roots_of_unity):
            u = line_map(steps, P)
            pts.setdefault(point_key(u), u)
        if len(pts) >= 2:
            break
    return list(pts.values())


def _advance(cand: Candidate, G, ops, K, h_idx, n: int) -> list[Candidate]:
    ctx = G.ctx
    h = G.elements[h_idx]
    fps = _step_fixed_points(G, ops, cand.steps, K, h_idx)
    if len(fps) != 2:
        raise QuotientError(f"expected two fixed points of the induced map, found {len(fps)}")
    if cand.steps:
        psi = induced_map(cand.steps, h, ctx)
        for P in fps:
            if psi(P) != P if P is not INF else psi(INF) is not INF:
                raise QuotientError("fixed point of the induced map is not fixed")
    N = _formal_degree(cand.poly)
    keys = {point_key(P) for P in fps}
    if keys == {point_key(INF), point_key(ctx(0))}:
        A, B = ctx(0), INF
    else:
        A, B = fps
        if not _is_branch(cand.poly, N, A) and _is_branch(cand.poly, N, B):
            A, B = B, A
    C = _conj_for(A, B, ctx)
    ft = cand.poly.homogeneous_transform(C.a, C.b, C.c, C.d, N)
    k, _ = diagonal_shape(ft, n)
    out = []
    for q, e in reduce_by_diagonal_cyclic(ft, n, k):
        if genus_of_poly(q) < 1:
            continue
        out.append(Candidate(q, cand.steps + [QuotientStep(C, N, n, k, e)]))
    return out


@dataclass
class QuotientResult:
    curve: str
    subgroup: str
    poly: NFPoly  # normalized
    raw_poly: NFPoly  # before normalization; the point map lands here
    scale: NFElem  # poly = raw_poly / scale
    genus: int
    steps: list
    candidates: list  # (poly string, genus) of every surviving candidate
    discarded: list  # reasons for dropped branches

    @property
    def is_rational(self) -> bool:
        return self.poly.is_rational()

    def rational_poly(self) -> RationalPoly:
        return self.poly.to_rational()

    def poly_string(self, var: str = "u") -> str:
        if self.is_rational:
            return format_poly(self.rational_poly().coeffs, var)
        return str(self.poly).replace("x", var)

    def branch_points(self) -> list:
        return quotient_branch_points(self)


def normalize_poly(q: NFPoly) -> tuple[NFPoly, NFElem]:
    """Primitive integral with positive leading coefficient over Q, monic otherwise."""
    ctx = q.ctx
    if q.is_rational():
        r = q.to_rational()
        s, prim = r.primitive()
        return NFPoly.from_rational(ctx, prim), ctx(s)
    s = q.lc
    return q.monic(), s


def quotient_by_subgroup(
    curve: CurveSpec,
    subgroup,
    label: str = "",
    expected_genus: int | None = None,
    reference: NFPoly | None = None,
) -> QuotientResult:
    """Quotient polynomial of X by a lift of the reduced subgroup ``subgroup``
    (element indices in the realized group, or a label such as "C5")."""
    G = curve.realized_group
    ops = _GroupOps(G)
    if isinstance(subgroup, str):
        label = label or subgroup
        subgroup = find_subgroup(G, subgroup)
    H = frozenset(subgroup)
    series = composition_series(G, H)
    cands = [Candidate(curve.poly)]
    discarded = []
    K = frozenset({0})
    for Knext, h_idx in series:
        n = len(Knext) // len(K)
        nxt = []
        for c in cands:
            try:
                nxt.extend(_advance(c, G, ops, K, h_idx, n))
            except (ShapeError, QuotientObstruction) as exc:
                discarded.append(f"{type(exc).__name__}: {exc}")
        cands = nxt
        if not cands:
            raise QuotientError("every candidate was discarded: " + "; ".join(discarded))
        K = Knext
    best = _select(cands, expected_genus, reference)
    poly, scale = normalize_poly(best.poly)
    return QuotientResult(
        curve.id,
        label or f"order {len(H)}",
        poly,
        best.poly,
        scale,
        best.genus,
        best.steps,
        [(str(c.poly), c.genus) for c in cands],
        discarded,
    )


def _select(cands, expected_genus, reference):
    def key(c):
        ref_match = reference is not None and normalize_poly(c.poly)[0] == normalize_poly(reference)[0]
        return (
            expected_genus is not None and c.genus != expected_genus,
            c.genus,
            not ref_match,
            c.poly.degree,
        )

    return min(cands, key=key)


def quotient_curve(curve: CurveSpec, reference: NFPoly | None = None) -> QuotientResult:
    """Quotient by the subgroup listed for the curve in QUOTIENT_PLAN."""
    if curve.id not in QUOTIENT_PLAN:
        raise QuotientError(f"no quotient is tabulated for {curve.id}")
    label, g = QUOTIENT_PLAN[curve.id]
    return quotient_by_subgroup(curve, label, label, expected_genus=g, reference=reference)


# point maps and branch points


def map_point(steps, x: NFElem, y: NFElem):
    """Image (u, w) of an affine point under the composite quotient map, or None
    when it passes through infinity."""
    for s in steps:
        C = s.conj
        if _is_identity(C):
            z = x
            v = y
        else:
            den = C.c * x - C.a
            if den.is_zero():
                return None
            z = (C.b - C.d * x) / den  # inverse of x = (a z + b)/(c z + d)
            v = y * (C.c * z + C.d) ** (s.N // 2)
        x = z**s.n
        y = v * z**s.e
    return x, y


def quotient_branch_points(res: QuotientResult) -> list:
    """Branch points of the quotient in the coefficient field: images of the
    fixed points of the reduced group elements that are roots of the quotient
    polynomial, plus infinity for odd degree."""
    from .curves import get_curve

    curve = get_curve(res.curve)
    G = curve.realized_group
    q = res.poly
    found = {}
    candidates = [INF]
    for m in G.elements[1:]:
        candidates.extend(fixed_points(m, G.roots_of_unity))
    for P in candidates:
        u = line_map(res.steps, P)
        if u is INF:
            continue
        if q(u).is_zero():
            found.setdefault(point_key(u), u)
    pts = list(found.values())
    if q.degree % 2:
        pts.append(INF)
    return pts


# j-invariants


def _cubic_j(a0, a1, a2, a3) -> NFElem:
    # v^2 = a3 u^3 + ... ; scale to x^3 + A2 x^2 + A4 x + A6
    A2, A4, A6 = a2 / a3, a1 / a3, a0 / a3
    b2, b4, b6 = A2 * 4, A4 * 2, A6 * 4
    b8 = A2 * A6 * 4 - A4 * A4
    c4 = b2 * b2 - b4 * 24
    disc = -(b2 * b2 * b8) - b4 * b4 * b4 * 8 - b6 * b6 * 27 + b2 * b4 * b6 * 9
    if disc.is_zero():
        raise QuotientError("singular cubic")
    return c4 * c4 * c4 / disc


def quartic_invariants(q: NFPoly):
    e, d, c, b, a = (q[i] for i in range(5))
    I = a * e * 12 - b * d * 3 + c * c
    J = a * c * e * 72 + b * c * d * 9 - a * d * d * 27 - e * b * b * 27 - c * c * c * 2
    return I, J


def quartic_to_cubic(q: NFPoly, root: NFElem) -> NFPoly:
    """Send the root to infinity: t^4 q(root + 1/t), a cubic in t."""
    ctx = q.ctx
    m = MobiusMap(root, ctx(1), ctx(1), ctx(0))
    out = q.homogeneous_transform(m.a, m.b, m.c, m.d, 4)
    if out.degree != 3:
        raise QuotientError("root did not produce a cubic model")
    return out


def weierstrass_j(q: NFPoly, point: NFElem | None = None, cross_check: bool = True) -> NFElem:
    """j-invariant of v^2 = q(u), deg q in {3, 4}, exact in the coefficient field.

    For a quartic with a known root the cubic model is used, checked against the
    invariant-theoretic value 6912 I^3 / (4 I^3 - J^2), which needs no point.
    """
    if isinstance(q, RationalPoly):
        from .numfield import cyclotomic_field

        q = NFPoly.from_rational(cyclotomic_field(1), q)
    if q.degree == 3:
        return _cubic_j(*(q[i] for i in range(4)))
    if q.degree != 4:
        raise QuotientError("weierstrass_j needs a cubic or quartic")
    I, J = quartic_invariants(q)
    den = I * I * I * 4 - J * J
    if den.is_zero():
        raise QuotientError("singular quartic")
    j_inv = I * I * I * 6912 / den
    if point is None:
        point = _rational_root(q)
    if point is not None:
        if not q(point).is_zero():
            raise QuotientError("supplied point is not a root of the quartic")
        j_root = weierstrass_j(quartic_to_cubic(q, point))
        if cross_check and j_root != j_inv:
            raise AssertionError("quartic j-invariant routes disagree")
        return j_root
    return j_inv


def _rational_root(q: NFPoly):
    if not q.is_rational():
        return None
    from .polycore import rational_roots

    roots = rational_roots(q.to_rational())
    return q.ctx(roots[0]) if roots else None


@dataclass
class JInvariant:
    value: NFElem
    minpoly: RationalPoly
    integral: bool

    def to_record(self) -> dict:
        v = self.value
        return {
            "j": str(v.to_fraction()) if v.is_rational() else str(v),
            "minpoly": format_poly(self.minpoly.coeffs, "T"),
            "algebraic_integer": self.integral,
        }


def j_of_quotient(res: QuotientResult) -> JInvariant:
    if res.genus != 1:
        raise QuotientError("j-invariant needs a genus-1 quotient")
    q = res.poly
    point = None
    if q.degree == 4:
        roots = [b for b in quotient_branch_points(res) if b is not INF]
        point = roots[0] if roots else None
    j = weierstrass_j(q, point)
    return JInvariant(j, minimal_polynomial(j), is_algebraic_integer(j))


# equivalence of two quotient equations


def _normalized_from_points(pts, triple, ctx):
    """Monic polynomial whose roots are the images of pts under the map sending
    triple to (0, 1, infinity), dropping the image at infinity."""
    b1, b2, b3 = triple
    T = _to_01inf(b1, b2, b3, ctx)
    out = NFPoly(ctx, [1])
    for P in pts:
        w = T(P)
        if w is INF:
            continue
        out = out * NFPoly(ctx, [-w, ctx(1)])
    return out


def _to_01inf(b1, b2, b3, ctx) -> MobiusMap:
    """Moebius map with b1 -> 0, b2 -> 1, b3 -> infinity (points may be infinite)."""
    one, zero = ctx(1), ctx(0)

    def col(P):
        return (one, zero) if P is INF else (P, one)

    (x1, z1), (x2, z2), (x3, z3) = col(b1), col(b2), col(b3)
    # T(X:Z) = ((X z1 - Z x1) * (x2 z3 - z2 x3) : (X z3 - Z x3) * (x2 z1 - z2 x1))
    s = x2 * z3 - z2 * x3
    t = x2 * z1 - z2 * x1
    return MobiusMap(z1 * s, -x1 * s, z3 * t, -x3 * t)


def rational_models(res: QuotientResult, limit: int = 3):
    """Monic models with rational coefficients obtained by sending three branch
    points of the quotient to 0, 1, infinity."""
    pts = quotient_branch_points(res)
    if len(pts) != 2 * res.genus + 2:
        return []
    ctx = res.poly.ctx
    out = []
    seen = set()
    for triple in itertools.permutations(range(len(pts)), 3):
        q = _normalized_from_points(pts, [pts[i] for i in triple], ctx)
        if q.is_rational():
            r = q.to_rational()
            if r not in seen:
                seen.add(r)
                out.append((triple, r))
                if len(out) >= limit:
                    break
    return out


def branch_sets_equivalent(pts, ref: NFPoly, ref_triple) -> bool:
    """Exact test for a Moebius map carrying the branch set ``pts`` onto the
    branch set of v^2 = ref(u).  ``ref_triple`` holds three known branch points
    of the reference; every ordered triple of ``pts`` is tried against it."""
    ctx = ref.ctx
    N = 2 * genus_of_poly(ref) + 2
    if len(pts) != N:
        return False
    T = _to_01inf(*ref_triple, ctx).adjugate()
    target = ref.homogeneous_transform(T.a, T.b, T.c, T.d, N).monic()
    for triple in itertools.permutations(pts, 3):
        if _normalized_from_points(pts, list(triple), ctx) == target:
            return True
    return False


def reference_branch_points(ref: NFPoly) -> list:
    """Branch points of v^2 = ref(u) that are rational, plus infinity for odd degree."""
    pts = []
    if ref.is_rational():
        from .polycore import rational_roots

        pts = [ref.ctx(r) for r in rational_roots(ref.to_rational()) or []]
    if ref.degree % 2:
        pts.append(INF)
    return pts


def transport_check(res: QuotientResult, curve: CurveSpec, p: int, samples: int = 200, seed: int = 0) -> int:
    """Map F_p-points of X (over a split prime of the coefficient field) to the
    quotient equation and check they land on it.  Returns the number of points
    checked; raises AssertionError on a failure."""

    ctx = curve.poly.ctx
    over_q = (
        curve.poly.is_rational()
        and res.raw_poly.is_rational()
        and all(all(e.is_rational() for e in s.conj.entries()) for s in res.steps)
    )
    sp = _RationalPrime(ctx, p) if over_q else _split_prime_at(ctx, p)
    if sp is None:
        raise ValueError(f"{p} is not a split prime of {ctx.name}")
    f = sp.reduce_poly(curve.poly)
    q = sp.reduce_poly(res.raw_poly)
    from .count import good_prime_poly_mod_p

    if len(f) - 1 != curve.poly.degree or len(q) - 1 != res.raw_poly.degree:
        raise ValueError(f"bad prime {p}")
    if not good_prime_poly_mod_p(f, p):
        raise ValueError(f"bad prime {p}")
    steps = [
        (
            [sp.reduce(e) for e in s.conj.entries()],
            _is_identity(s.conj),
            s.N,
            s.n,
            s.e,
        )
        for s in res.steps
    ]
    rng = random.Random(seed)
    xs = list(range(p))
    rng.shuffle(xs)
    checked = 0
    for x in xs:
        fx = _ev(f, x, p)
        ys = [y for y in range(p) if y * y % p == fx]
        for y in ys:
            img = _map_mod_p(steps, x, y, p)
            if img is None:
                continue
            u, w = img
            if w * w % p != _ev(q, u, p):
                raise AssertionError(f"point ({x}, {y}) mod {p} does not land on the quotient")
            checked += 1
        if checked >= samples:
            break
    return checked


class _RationalPrime:
    """Reduction of rational data at p, with the interface of SplitPrime."""

    def __init__(self, ctx, p):
        self.ctx, self.p = ctx, p

    def reduce(self, e: NFElem) -> int:
        c = e.to_fraction()
        if c.denominator % self.p == 0:
            raise ZeroDivisionError(f"element is not integral at {self.p}")
        return c.numerator * pow(c.denominator, -1, self.p) % self.p

    def reduce_poly(self, f: NFPoly) -> list[int]:
        from . import modp

        return modp.normalize([self.reduce(c) for c in f.coeffs], self.p)


def _split_prime_at(ctx, p):
    from .reduction import SplitPrime, _find_root

    m = [int(c) for c in ctx.modulus.coeffs]
    if ctx.conductor and p % ctx.conductor != 1 and ctx.conductor > 2:
        return None
    r = _find_root(m, p, ctx.conductor)
    return None if r is None else SplitPrime(ctx, p, r)


def _ev(c, x, p):
    acc = 0
    for a in reversed(c):
        acc = (acc * x + a) % p
    return acc


def _map_mod_p(steps, x, y, p):
    for (a, b, c, d), ident, N, n, e in steps:
        if ident:
            z, v = x, y
        else:
            den = (c * x - a) % p
            if den == 0:
                return None
            z = (b - d * x) * pow(den, -1, p) % p
            v = y * pow((c * z + d) % p, N // 2, p) % p
        x = pow(z, n, p)
        y = v * pow(z, e, p) % p
    return x, y


# certification of equivalence with a reference equation


@dataclass
class PrimeComparison:
    p: int
    ours: str
    reference: str
    relation: str  # "equal", "twist" or "different"


@dataclass
class EquivalenceCertificate:
    exact: bool  # branch sets (or j-invariants) related exactly
    exact_method: str
    model: str  # the model of the quotient used for counting
    comparisons: list
    ok: bool

    def to_record(self) -> dict:
        return {
            "exact": self.exact,
            "exact_method": self.exact_method,
            "model": self.model,
            "primes": [c.__dict__ for c in self.comparisons],
            "certified": self.ok,
        }


def _compare_lpolys(P1: RationalPoly, P2: RationalPoly) -> str:
    if P1 == P2:
        return "equal"
    if P1.scale_var(-1) == P2:
        return "twist"
    return "different"


def _lpoly_rational(q: RationalPoly, p: int, g: int) -> RationalPoly:
    from .count import GFContext, count_points, lpoly_from_counts

    counts = [count_points(q, GFContext.create(p, k)) for k in range(1, g + 1)]
    return lpoly_from_counts(counts, p, g)


def _lpoly_split(coeffs: list[int], p: int, g: int) -> RationalPoly:
    from .count import GFContext, count_points, lpoly_from_counts

    counts = [count_points(coeffs, GFContext.create(p, k)) for k in range(1, g + 1)]
    return lpoly_from_counts(counts, p, g)


def frobenius_compare(q1, q2, g: int, nprimes: int = 3, start: int = 3, qlimit: int = 10**7):
    """Characteristic polynomials of Frobenius of v^2 = q1 and v^2 = q2 at the
    first ``nprimes`` shared good primes.  Rational inputs use all primes, inputs
    over a number field use its degree-one primes.  A quadratic twist (T -> -T)
    counts as a match."""
    from .count import good_prime, good_prime_poly_mod_p
    from .reduction import split_primes

    out = []
    if isinstance(q1, RationalPoly) and isinstance(q2, RationalPoly):
        p = max(start, 3)
        while len(out) < nprimes:
            if all(p % d for d in range(2, int(p**0.5) + 1)) and good_prime(q1, p) and good_prime(q2, p):
                if p**g > qlimit:
                    break
                P1, P2 = _lpoly_rational(q1, p, g), _lpoly_rational(q2, p, g)
                out.append(PrimeComparison(p, str(P1), str(P2), _compare_lpolys(P1, P2)))
            p += 1
        return out
    ctx = q1.ctx if isinstance(q1, NFPoly) else q2.ctx
    a = q1 if isinstance(q1, NFPoly) else NFPoly.from_rational(ctx, q1)
    b = q2 if isinstance(q2, NFPoly) else NFPoly.from_rational(ctx, q2)
    for sp in split_primes(ctx, start=start):
        if len(out) >= nprimes or sp.p**g > qlimit:
            break
        try:
            ca, cb = sp.reduce_poly(a), sp.reduce_poly(b)
        except ZeroDivisionError:
            continue
        if len(ca) - 1 != a.degree or len(cb) - 1 != b.degree:
            continue
        if not (good_prime_poly_mod_p(ca, sp.p) and good_prime_poly_mod_p(cb, sp.p)):
            continue
        P1, P2 = _lpoly_split(ca, sp.p, g), _lpoly_split(cb, sp.p, g)
        out.append(PrimeComparison(sp.p, str(P1), str(P2), _compare_lpolys(P1, P2)))
    return out


def certify_equivalence(res: QuotientResult, ref: NFPoly, nprimes: int = 3) -> EquivalenceCertificate:
    """Certify that the quotient equation and the reference describe the same
    curve: an exact relation (equal j-invariants in genus 1, a Moebius map
    between branch sets otherwise) and matching Frobenius data at ``nprimes``
    shared good primes."""
    ctx = res.poly.ctx
    if ref.ctx is not ctx:
        ref = NFPoly(ctx, [ctx(c.to_fraction()) if c.is_rational() else c for c in ref.coeffs])
    g = res.genus
    if genus_of_poly(ref) != g:
        return EquivalenceCertificate(False, "genus", "", [], False)
    if g == 1:
        exact = j_of_quotient(res).value == weierstrass_j(ref)
        method = "j-invariant"
    else:
        known = reference_branch_points(ref)
        exact = len(known) >= 3 and branch_sets_equivalent(res.branch_points(), ref, known[:3])
        method = "branch-set cross-ratios"
    ref_q = ref.to_rational() if ref.is_rational() else ref
    models = []
    if res.is_rational:
        models.append(res.rational_poly())
    elif isinstance(ref_q, RationalPoly) and g > 1:
        models.extend(m for _, m in rational_models(res, limit=4))
    if not models:
        models.append(res.poly)
    comps = []
    for model in models:
        comps = frobenius_compare(model, ref_q, g, nprimes)
        if len(comps) == nprimes and all(c.relation != "different" for c in comps):
            return EquivalenceCertificate(exact, method, _model_str(model), comps, exact)
    return EquivalenceCertificate(exact, method, _model_str(models[-1]), comps, False)


def _model_str(m) -> str:
    if isinstance(m, RationalPoly):
        return format_poly(m.coeffs, "u")
    return str(m).replace("x", "u")


__all__ = [
    "QUOTIENT_PLAN",
    "QuotientError",
    "QuotientObstruction",
    "ShapeError",
    "NonSolvableError",
    "DiagonalForm",
    "transform_equation",
    "diagonal_shape",
    "reduce_by_diagonal_cyclic",
    "find_subgroup",
    "composition_series",
    "quotient_by_subgroup",
    "quotient_curve",
    "QuotientResult",
    "weierstrass_j",
    "quartic_invariants",
    "quartic_to_cubic",
    "j_of_quotient",
    "JInvariant",
    "rational_models",
    "branch_sets_equivalent",
    "reference_branch_points",
    "transport_check",
    "certify_equivalence",
    "frobenius_compare",
    "EquivalenceCertificate",
    "map_point",
]
