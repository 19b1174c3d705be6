"""Characters of the automorphism group on holomorphic differentials.

For y^2 = f(x) of genus g let F be the binary form of degree N = 2g+2 with
F(x, 1) = f(x).  A matrix M = (a b; c d) in SL2 preserving the branch locus
satisfies F(a x + b z, c x + d z) = lam(M) F(x, z), and lifts to

    (x, y) -> ((a x + b)/(c x + d), sqrt(lam) y / (c x + d)^(g+1)).

Pulling back x^j dx/y gives (1/sqrt(lam)) (a x + b)^j (c x + d)^(g-1-j) dx/y,
so the action is Sym^(g-1) of M scaled by 1/sqrt(lam).  Its eigenvalues are
mu1^i mu2^(g-1-i) / sqrt(lam), with mu1, mu2 the eigenvalues of M.

The symmetric-square character only needs lam itself:

    Sym2chi(M) = (h(M)^2 + h(M^2)) / (2 lam(M)),  h = complete symmetric
    polynomial of degree g-1 in the eigenvalues.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .curves import CurveSpec
from .mobius import INF, MobiusMap, RealizedGroup, binary_form_factor, fixed_points
from .numfield import NFElem, NFPoly, root_of_unity_order


class StreitError(ValueError):
    pass


def _form(curve: CurveSpec) -> tuple[NFPoly, int]:
    return curve.poly, 2 * curve.genus + 2


def _h(trace: NFElem, det: NFElem, k: int) -> NFElem:
    """Complete symmetric polynomial of degree k in the eigenvalues."""
    ctx = trace.ctx
    h0, h1 = ctx(1), trace
    if k == 0:
        return h0
    for _ in range(k - 1):
        h0, h1 = h1, trace * h1 - det * h0
    return h1


def lambda_values(curve: CurveSpec) -> list[NFElem]:
    """lam(M) for every element of the realized group.

    lam is a character of the binary group, so it is computed exactly on the
    generators and propagated along the closure words.  A few elements are
    re-verified against the full polynomial identity.
    """
    G = curve.realized_group
    F, N = _form(curve)
    gen_lams = []
    for g in G.generators:
        lam = binary_form_factor(F, N, g)
        if lam is None:
            raise StreitError(f"{curve.id}: generator does not preserve the branch locus")
        gen_lams.append(lam)
    lams = [G.ctx(1)] * G.order
    for i, (parent, gi) in enumerate(G.words):
        if parent >= 0:
            lams[i] = gen_lams[gi] * lams[parent]
    for i in range(1, G.order, max(1, G.order // 4)):
        direct = binary_form_factor(F, N, G.elements[i])
        if direct != lams[i]:
            raise StreitError(f"{curve.id}: character of the form is inconsistent")
    return lams


def sym2_value(m: MobiusMap, lam: NFElem, g: int) -> NFElem:
    tr, det = m.trace, m.det
    tr2 = tr * tr - det * 2
    hm = _h(tr, det, g - 1)
    hm2 = _h(tr2, det * det, g - 1)
    return (hm * hm + hm2) / (lam * 2)


def sym2_values(curve: CurveSpec) -> list[NFElem]:
    G = curve.realized_group
    lams = lambda_values(curve)
    return [sym2_value(m, lam, curve.genus) for m, lam in zip(G.elements, lams)]


@dataclass
class StreitResult:
    curve: str
    genus: int
    group: str
    inner_product: int
    class_values: list  # (class size, order, Sym2 value as string)

    def to_record(self) -> dict:
        return {
            "curve": self.curve,
            "genus": self.genus,
            "Gbar": self.group,
            "inner_product": self.inner_product,
            "per_class_values": [
                {"size": s, "order": o, "sym2": v} for s, o, v in self.class_values
            ],
        }


def sym2_inner_product(curve: CurveSpec) -> int:
    return streit(curve).inner_product


def streit(curve: CurveSpec) -> StreitResult:
    """<Sym^2 chi, 1> averaged over the reduced group."""
    G = curve.realized_group
    vals = sym2_values(curve)
    total = G.ctx(0)
    for v in vals:
        total = total + v
    if not total.is_rational():
        raise StreitError(f"{curve.id}: Sym^2 character sum is not rational")
    ip = total.to_fraction() / G.order
    if ip.denominator != 1 or ip < 0:
        raise StreitError(f"{curve.id}: inner product {ip} is not a non-negative integer")
    rows = []
    for cls in G.conjugacy_classes:
        v = vals[cls[0]]
        if any(vals[j] != v for j in cls):
            raise StreitError(f"{curve.id}: Sym^2 character is not a class function")
        rows.append((len(cls), G.elements[cls[0]].projective_order(), _fmt(v)))
    return StreitResult(curve.id, curve.genus, curve.group_name, int(ip), rows)


def _fmt(v: NFElem) -> str:
    return str(v.to_fraction()) if v.is_rational() else str(v)


# direct computation on the basis x^j dx/y


def _sqrt_root_of_unity(lam: NFElem, roots) -> NFElem:
    for r in roots:
        if r * r == lam:
            return r
    raise StreitError(
        "no square root of the form factor among the roots of unity of the field; "
        "a larger cyclotomic field is needed"
    )


def action_matrix(m: MobiusMap, g: int, scale: NFElem) -> list[list[NFElem]]:
    """Matrix of the pullback on x^j dx/y: column j holds (a x + b)^j (c x + d)^(g-1-j) * scale."""
    ctx = m.ctx
    u = NFPoly(ctx, [m.b, m.a])
    v = NFPoly(ctx, [m.d, m.c])
    upow, vpow = [NFPoly(ctx, [1])], [NFPoly(ctx, [1])]
    for _ in range(g - 1):
        upow.append(upow[-1] * u)
        vpow.append(vpow[-1] * v)
    cols = [(upow[j] * vpow[g - 1 - j]) * scale for j in range(g)]
    return [[cols[j][i] for j in range(g)] for i in range(g)]


@dataclass
class LiftData:
    eigenvalues: list  # g field elements
    lam: NFElem
    sqrt_lam: NFElem
    chi: NFElem
    chi_sq: NFElem  # chi(tau^2)
    sym2: NFElem


def lift_eigenvalues(curve: CurveSpec, m: MobiusMap, sign: int = 1, verify: str = "trace") -> LiftData:
    """Eigenvalues of a lift of m on x^j dx/y (0 <= j < g).

    ``sign`` = -1 selects the other lift (composition with the hyperelliptic
    involution).  ``verify`` = "trace" checks tr A and tr A^2 of the action
    matrix A against the eigenvalues, "full" checks all power sums up to g.
    """
    G: RealizedGroup = curve.realized_group
    F, N = _form(curve)
    g = curve.genus
    roots = G.roots_of_unity
    if m.det != 1:
        s = _sqrt_root_of_unity(m.det, roots)
        m = m.scaled(s.inverse())
    lam = binary_form_factor(F, N, m)
    if lam is None:
        raise StreitError(f"map does not preserve the branch locus of {curve.id}")
    sq = _sqrt_root_of_unity(lam, roots) * sign
    inv_sq = sq.inverse()
    mu1, mu2 = m.eigenvalues(roots)
    eig = [mu1**i * mu2 ** (g - 1 - i) * inv_sq for i in range(g)]
    chi = sum(eig[1:], eig[0])
    chi_sq = sum((e * e for e in eig[1:]), eig[0] * eig[0])
    sym2 = (chi * chi + chi_sq) / 2
    if verify:
        A = action_matrix(m, g, inv_sq)
        tr = sum((A[i][i] for i in range(1, g)), A[0][0])
        tr2 = G.ctx(0)
        for i in range(g):
            for j in range(g):
                tr2 = tr2 + A[i][j] * A[j][i]
        if tr != chi or tr2 != chi_sq:
            raise StreitError("action matrix disagrees with the eigenvalue formula")
        if verify == "full":
            P = A
            for k in range(3, g + 1):
                P = _matmul(P, A)
                trk = sum((P[i][i] for i in range(1, g)), P[0][0])
                if trk != sum((e**k for e in eig[1:]), eig[0] ** k):
                    raise StreitError("power sums of the action matrix disagree")
    return LiftData(eig, lam, sq, chi, chi_sq, sym2)


def _matmul(A, B):
    n = len(A)
    return [[sum((A[i][k] * B[k][j] for k in range(1, n)), A[i][0] * B[0][j]) for j in range(n)] for i in range(n)]


# closed forms in terms of (n, k, zeta)


def repchix_closed_form(n: int, k: int, zeta: NFElem, g: int):
    """(chi(tau), chi(tau^2), Sym2chi(tau)) from the order n of the reduced
    element, the branch indicator k of a fixed point and the tangent eigenvalue
    zeta there.  chi is returned for the + sign and, when k = 1, for one choice
    of the half power, so only chi^2 is canonical."""
    ctx = zeta.ctx
    if k not in (0, 1) or n < 1:
        raise ValueError("need n >= 1 and k in {0, 1}")
    if root_of_unity_order(zeta, max_order=max(n, 1)) != n:
        raise ValueError(f"zeta is not a primitive {n}-th root of unity")
    if n == 1:
        return ctx(g), ctx(g), ctx(Fraction(g * (g + 1), 2))
    if n == 2:
        sgn = (-1) ** k
        half = ctx.zeta(4) if k else ctx(1)
        chi = half * Fraction((-1) ** g - 1, 2)
        return chi, ctx(sgn * g), ctx(Fraction(sgn * (1 + (-1) ** (g + 1) + 2 * g), 4))
    if k:
        roots = [ctx._zeta_power(e) for e in range(ctx.conductor)]
        half = next(r for r in roots if r * r == zeta)  # zeta^(1/2)
    else:
        half = zeta
    chi = half * (zeta**g - 1) / (zeta - 1)
    base = zeta ** (2 - k)
    chi2 = base * (zeta ** (2 * g) - 1) / (zeta * zeta - 1)
    sym2 = base * (zeta**g - 1) * (zeta ** (g + 1) - 1) / ((zeta - 1) * (zeta * zeta - 1))
    return chi, chi2, sym2


@dataclass
class CrossCheck:
    element: int
    order: int
    fixed_point: str
    k: int
    match: bool


def closed_form_crosscheck(curve: CurveSpec, elements=None) -> list[CrossCheck]:
    """Compare the direct lift data with the closed forms at both fixed points
    of each non-identity element."""
    G = curve.realized_group
    F, N = _form(curve)
    g = curve.genus
    out = []
    idx = range(1, G.order) if elements is None else elements
    for i in idx:
        m = G.elements[i]
        direct = lift_eigenvalues(curve, m)
        n = m.projective_order()
        mu = m.eigenvalues(G.roots_of_unity)
        for a, b in ((0, 1), (1, 0)):
            P = m.eigenvector(mu[a])
            zeta = mu[b] / mu[a]
            if P is INF:
                k = 1 if F.degree < N else 0
            else:
                k = 1 if F(P).is_zero() else 0
            chi, chi2, sym2 = repchix_closed_form(n, k, zeta, g)
            ok = chi * chi == direct.chi * direct.chi and chi2 == direct.chi_sq and sym2 == direct.sym2
            out.append(CrossCheck(i, n, "inf" if P is INF else str(P), k, ok))
    return out


__all__ = [
    "StreitError",
    "StreitResult",
    "LiftData",
    "CrossCheck",
    "lambda_values",
    "sym2_values",
    "sym2_inner_product",
    "streit",
    "lift_eigenvalues",
    "repchix_closed_form",
    "closed_form_crosscheck",
    "fixed_points",
]
