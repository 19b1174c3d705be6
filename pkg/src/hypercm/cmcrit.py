"""Complex multiplication tests.

Frobenius side: for a good prime p the characteristic polynomial g_p of
Frobenius on the quotient jacobian gives f_p = squarefree part of g_p.  The
prime is very good when no ratio of two distinct roots of f_p is a root of
unity.  Very good primes with irreducible f_p and linearly disjoint fields
Q[T]/(f_p) whose degrees multiply to more than twice the dimension rule out CM.

The module also routes every catalog curve to its method and assembles the
evidence behind the verdict.
"""

from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import count as cnt
from .cache import CountCache, poly_hash
from .curves import CurveSpec, get_curve
from .polycore import (
    BivariatePoly,
    Irreducibility,
    RationalPoly,
    cyclotomic,
    euler_phi,
    format_poly,
    irreducible_over_Q,
    resultant_elim,
    squarefree_part,
)

log = logging.getLogger(__name__)

CITED = ("X1", "X2", "X3")
STREIT_ROWS = ("X4", "X5", "X7", "X9", "X14")
J_ROWS = ("X6", "X8", "X12", "X13", "X15")
FROBENIUS_ROWS = ("X10", "X11", "X16", "X17", "X18")

# primes listed for the Frobenius rows; X18's are beyond the counting limit
LISTED_PRIMES = {
    "X10": (37, 61, 157),
    "X11": (7, 73),
    "X16": (31, 151),
    "X17": (31, 41),
    "X18": (131, 211),
}

AUTO_PRIME_LIMIT = {"X18": 31}
DEFAULT_BUDGET = 25


# root ratios


def ratio_poly(f: RationalPoly) -> RationalPoly:
    """Monic polynomial whose roots are the ratios a/b of roots of f."""
    if f.is_zero():
        raise ValueError("ratio_poly of the zero polynomial")
    f = f.strip_t()
    return resultant_elim(f, BivariatePoly.scaled(f)).monic()


def _divides_mod(h_int, phi, prime):
    from . import modp

    hp = modp.normalize([c % prime for c in h_int], prime)
    pp = modp.normalize([int(c) % prime for c in phi.coeffs], prime)
    return not modp.rem(hp, pp, prime)


def n0_of(f: RationalPoly) -> int:
    """lcm of the n > 1 with Phi_n dividing the ratio polynomial, else 1."""
    h = squarefree_part(ratio_poly(f))
    den = 1
    for c in h.coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    h_int = [int(c * den) for c in h.coeffs]
    prime = (1 << 61) - 1
    deg = ratio_poly_degree(f)
    n0 = 1
    n = 2
    # phi(n) >= sqrt(n / 2), so n <= 2 deg^2 covers every n with phi(n) <= deg
    while n <= 2 * deg * deg + 2:
        if euler_phi(n) <= h.degree:
            phi = cyclotomic(n)
            if _divides_mod(h_int, phi, prime) and divmod(h, phi)[1].is_zero():
                n0 = n0 * n // math.gcd(n0, n)
        n += 1
    return n0


def ratio_poly_degree(f: RationalPoly) -> int:
    return f.strip_t().degree ** 2


def eprime_poly(f: RationalPoly) -> RationalPoly:
    """Squarefree polynomial g with E'_f = Q[T]/(g): the squarefree part of
    prod (T - a^n0) over the roots a of f."""
    f = f.strip_t()
    n0 = n0_of(f)
    k = resultant_elim(f, BivariatePoly.t_minus(RationalPoly.x() ** n0)).monic()
    return squarefree_part(k).monic()


def is_very_good(f: RationalPoly) -> bool:
    return n0_of(f.strip_t()) == 1


# compositum


@dataclass
class CompositumCertificate:
    degrees: tuple
    shift: int | None
    degree: int | None  # None when nothing was certified
    poly: RationalPoly | None = field(default=None, repr=False)

    @property
    def disjoint(self) -> bool:
        return self.degree is not None and self.degree == math.prod(self.degrees)


def _compositum(f1: RationalPoly, f2: RationalPoly, shifts=range(1, 11)):
    d1, d2 = f1.degree, f2.degree
    for c in shifts:
        r = resultant_elim(f1, BivariatePoly.shifted(f2, c))
        sq = squarefree_part(r)
        if sq.degree != d1 * d2:
            continue  # c * root sums collide, try another shift
        irr = irreducible_over_Q(sq.monic())
        if irr.status is Irreducibility.IRREDUCIBLE:
            return CompositumCertificate((d1, d2), c, d1 * d2, sq.monic())
        if irr.status is Irreducibility.REDUCIBLE:
            return CompositumCertificate((d1, d2), c, _smallest_factor_degree(sq), None)
    return CompositumCertificate((d1, d2), None, None)


def _smallest_factor_degree(f: RationalPoly) -> int:
    import flint

    from .polycore import _int_scaled

    a, _ = _int_scaled(f)
    _, factors = flint.fmpz_poly(a).factor()
    return min(fac.degree() for fac, _ in factors)


def compositum_degree(f1: RationalPoly, f2: RationalPoly) -> int | None:
    """Degree of the compositum of Q[T]/(f1) and Q[T]/(f2) certified through
    a primitive element root(f2) + c root(f1), or None."""
    for f in (f1, f2):
        if not irreducible_over_Q(f):
            raise ValueError("compositum_degree needs irreducible inputs")
    if f1.degree == 1:
        return f2.degree
    if f2.degree == 1:
        return f1.degree
    return _compositum(f1, f2).degree


def joint_disjointness(polys: list[RationalPoly]) -> CompositumCertificate:
    """Linear disjointness of several fields: the primitive element of the
    compositum so far is combined with the next field each time."""
    degrees = tuple(f.degree for f in polys)
    if not polys:
        return CompositumCertificate((), None, 1)
    acc = polys[0]
    shift = None
    for f in polys[1:]:
        if acc.degree == 1 or f.degree == 1:
            acc = f if acc.degree == 1 else acc
            continue
        cert = _compositum(acc, f)
        if cert.degree != acc.degree * f.degree or cert.poly is None:
            return CompositumCertificate(degrees, cert.shift, cert.degree)
        acc, shift = cert.poly, cert.shift
    return CompositumCertificate(degrees, shift, acc.degree)


# Frobenius data


@dataclass
class FrobeniusData:
    curve: str
    p: int
    counts: list
    charpoly: RationalPoly
    minpoly: RationalPoly
    very_good: bool
    irreducible: str
    degree: int
    n0: int
    seconds: float = 0.0

    def to_record(self) -> dict:
        return {
            "curve": self.curve,
            "p": self.p,
            "counts": self.counts,
            "g_p": format_poly(self.charpoly.coeffs, "T"),
            "g_p_coeffs": [int(c) for c in self.charpoly.coeffs],
            "f_p": format_poly(self.minpoly.coeffs, "T"),
            "very_good": self.very_good,
            "n0": self.n0,
            "f_p_irreducible": self.irreducible,
            "degree": self.degree,
            "seconds": round(self.seconds, 2),
        }


def _count_task(args):
    q, p, k = args
    return cnt.count_points(q, cnt.GFContext.create(p, k))


def count_all(q: RationalPoly, p: int, g: int, cache: CountCache | None = None, jobs: int = 1, progress=False):
    """N_1..N_g for v^2 = q(u) at p, reusing cached values."""
    coeffs = cnt._reduce_coeffs(q, p)
    h = poly_hash(coeffs, p)
    counts = [cache.get(h, p, k) if cache is not None else None for k in range(1, g + 1)]
    todo = [k for k in range(1, g + 1) if counts[k - 1] is None]
    if jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            for k, n in zip(todo, ex.map(_count_task, [(q, p, k) for k in todo])):
                counts[k - 1] = n
    else:
        for k in todo:
            counts[k - 1] = cnt.count_points(q, cnt.GFContext.create(p, k), progress=progress)
    if cache is not None:
        for k in todo:
            cache.put(h, p, k, counts[k - 1])
    return counts


def frobenius_data(
    q: RationalPoly,
    p: int,
    curve_id: str = "",
    cache: CountCache | None = None,
    qlimit: int = cnt.MAX_Q,
    jobs: int = 1,
    progress: bool = False,
) -> FrobeniusData:
    g = (q.degree - 1) // 2
    if not cnt.good_prime(q, p):
        raise cnt.BadPrimeError(f"{p} is a bad prime for {curve_id or 'the curve'}")
    if p**g > min(qlimit, cnt.MAX_Q):
        raise cnt.OutOfScaleError(f"counting over F_{p}^{g} (q = {p**g}) exceeds the limit")
    t0 = time.time()
    counts = count_all(q, p, g, cache, jobs, progress)
    gp = cnt.lpoly_from_counts(counts, p, g)
    fp = squarefree_part(gp).monic()
    n0 = n0_of(fp)
    irr = irreducible_over_Q(fp)
    return FrobeniusData(
        curve_id, p, counts, gp, fp, n0 == 1, irr.status.value, fp.degree, n0, time.time() - t0
    )


def cm_product_test(gbar: int, data: list[FrobeniusData]) -> tuple[str, dict]:
    """no-CM when all primes are very good with irreducible f_p, the fields are
    (pairwise and jointly) linearly disjoint and the degrees multiply to more
    than 2 gbar; otherwise inconclusive.  Returns (verdict, diagnostics)."""
    diag = {"problems": [], "pairwise": [], "joint": None, "product": None, "bound": 2 * gbar}
    if not data:
        diag["problems"].append("no primes")
        return "inconclusive", diag
    for d in data:
        if not d.very_good:
            diag["problems"].append(f"p={d.p} is not very good (n0={d.n0})")
        if d.irreducible != Irreducibility.IRREDUCIBLE.value:
            diag["problems"].append(f"f_p at p={d.p} is {d.irreducible}")
    if diag["problems"]:
        return "inconclusive", diag
    polys = [d.minpoly for d in data]
    for i in range(len(data)):
        for j in range(i + 1, len(data)):
            deg = compositum_degree(polys[i], polys[j])
            ok = deg == polys[i].degree * polys[j].degree
            diag["pairwise"].append(
                {"primes": [data[i].p, data[j].p], "compositum_degree": deg, "disjoint": ok}
            )
            if not ok:
                diag["problems"].append(f"disjointness of p={data[i].p}, p={data[j].p} not certified")
    if len(data) > 2 and not diag["problems"]:
        cert = joint_disjointness(polys)
        diag["joint"] = {"degree": cert.degree, "disjoint": cert.disjoint}
        if not cert.disjoint:
            diag["problems"].append("joint disjointness not certified")
    prod = math.prod(d.degree for d in data)
    diag["product"] = prod
    if diag["problems"]:
        return "inconclusive", diag
    if prod > 2 * gbar:
        return "no-CM", diag
    diag["problems"].append(f"product of degrees {prod} does not exceed {2 * gbar}")
    return "inconclusive", diag


# verdicts


@dataclass
class CMVerdict:
    curve: str
    verdict: str  # "CM", "no-CM", "inconclusive"
    method: str
    evidence: dict
    expected: str = ""
    seconds: float = 0.0

    @property
    def matches(self) -> bool | None:
        if self.verdict == "inconclusive":
            return None
        return (self.verdict == "CM") == (self.expected == "CM")

    def to_record(self) -> dict:
        return {
            "curve": self.curve,
            "verdict": self.verdict,
            "method": self.method,
            "expected": self.expected,
            "match": self.matches,
            "seconds": round(self.seconds, 2),
            "evidence": self.evidence,
        }


def frobenius_model(curve: CurveSpec, primes=()) -> tuple[RationalPoly, dict]:
    """A model over Q of the quotient used for the Frobenius test.  Rational
    quotient equations are used as they are; otherwise a rational model is
    obtained by moving three branch points to 0, 1, infinity, preferring one
    with good reduction at all requested primes."""
    from .quotient import quotient_curve, rational_models

    res = quotient_curve(curve)
    info = {"Hbar": res.subgroup, "quotient_genus": res.genus, "quotient_poly": res.poly_string()}
    if res.is_rational:
        return res.rational_poly(), info
    models = [m for _, m in rational_models(res, limit=6)]
    if not models:
        raise ValueError(f"no rational model of the {curve.id} quotient was found")
    for m in models:
        if all(cnt.good_prime(m, p) for p in primes):
            info["rational_model"] = format_poly(m.coeffs, "u")
            return m, info
    info["rational_model"] = format_poly(models[0].coeffs, "u")
    return models[0], info


def frobenius_verdict(
    curve: CurveSpec,
    primes=None,
    auto: bool = False,
    qlimit: int = cnt.MAX_Q,
    budget: int = DEFAULT_BUDGET,
    prime_limit: int | None = None,
    cache: CountCache | None = None,
    jobs: int = 1,
    progress: bool = False,
) -> CMVerdict:
    """Frobenius criterion on the quotient.  With explicit ``primes`` exactly
    those are used.  With ``auto`` odd good primes are scanned upward, keeping
    very good ones with irreducible f_p that stay disjoint from the ones kept,
    until the product bound is passed or the budget runs out."""
    t0 = time.time()
    if primes is None and not auto:
        primes = LISTED_PRIMES.get(curve.id, ())
    q, info = frobenius_model(curve, primes or ())
    g = (q.degree - 1) // 2
    ev = dict(info)
    ev["primes_requested"] = list(primes or [])
    skipped = []
    data: list[FrobeniusData] = []
    if not auto:
        for p in primes:
            if p**g > min(qlimit, cnt.MAX_Q):
                skipped.append({"p": p, "reason": f"out of desk scale: needs q = {p}^{g} = {p**g}"})
                continue
            try:
                data.append(frobenius_data(q, p, curve.id, cache, qlimit, jobs, progress))
            except cnt.BadPrimeError as exc:
                skipped.append({"p": p, "reason": str(exc)})
        verdict, diag = cm_product_test(g, data)
    else:
        limit = prime_limit or AUTO_PRIME_LIMIT.get(curve.id)
        verdict, diag = "inconclusive", {"problems": ["no prime examined"]}
        tried = 0
        p = 3
        while tried < budget:
            if limit is not None and p > limit:
                break
            if all(p % d for d in range(2, int(p**0.5) + 1)):
                if p**g > min(qlimit, cnt.MAX_Q):
                    skipped.append({"p": p, "reason": f"q = {p}^{g} exceeds the counting limit"})
                    break
                if cnt.good_prime(q, p):
                    tried += 1
                    fd = frobenius_data(q, p, curve.id, cache, qlimit, jobs, progress)
                    usable = fd.very_good and fd.irreducible == Irreducibility.IRREDUCIBLE.value
                    if usable and data:
                        usable = joint_disjointness([d.minpoly for d in data] + [fd.minpoly]).disjoint
                    if usable:
                        data.append(fd)
                        verdict, diag = cm_product_test(g, data)
                        if verdict == "no-CM":
                            break
                    else:
                        skipped.append({"p": p, "reason": _why_unusable(fd), "data": fd.to_record()})
            p += 2 if p > 2 else 1
        if not data:
            diag = {"problems": ["no usable prime found within the budget"]}
    ev["frobenius"] = [d.to_record() for d in data]
    ev["skipped"] = skipped
    ev["product_test"] = diag
    if any(d.degree == 2 * g and d.irreducible == "irreducible" for d in data):
        ev["note"] = "quotient jacobian simple"
    return CMVerdict(curve.id, verdict, "frobenius", ev, curve.expected, time.time() - t0)


def _why_unusable(fd: FrobeniusData) -> str:
    if not fd.very_good:
        return f"not very good (n0 = {fd.n0})"
    if fd.irreducible != "irreducible":
        return f"f_p {fd.irreducible}"
    return "field not disjoint from the ones already kept"


def streit_verdict(curve: CurveSpec) -> CMVerdict:
    from .streit import streit

    t0 = time.time()
    res = streit(curve)
    verdict = "CM" if res.inner_product == 0 else "inconclusive"
    return CMVerdict(curve.id, verdict, "streit", res.to_record(), curve.expected, time.time() - t0)


def j_verdict(curve: CurveSpec) -> CMVerdict:
    from .quotient import j_of_quotient, quotient_curve

    t0 = time.time()
    res = quotient_curve(curve)
    J = j_of_quotient(res)
    ev = {"Hbar": res.subgroup, "quotient_poly": res.poly_string(), **J.to_record()}
    verdict = "inconclusive" if J.integral else "no-CM"
    return CMVerdict(curve.id, verdict, "j-invariant", ev, curve.expected, time.time() - t0)


def cited_verdict(curve: CurveSpec) -> CMVerdict:
    ev = {"reason": "quotient of a Fermat curve", "genus": curve.genus}
    return CMVerdict(curve.id, "CM", "cited(Fermat-quotient)", ev, curve.expected)


def verdict(curve: CurveSpec | str, **frob_options) -> CMVerdict:
    if isinstance(curve, str):
        curve = get_curve(curve)
    if curve.id in CITED:
        return cited_verdict(curve)
    if curve.id in STREIT_ROWS:
        return streit_verdict(curve)
    if curve.id in J_ROWS:
        return j_verdict(curve)
    if curve.id in FROBENIUS_ROWS:
        if curve.id == "X18":
            return x18_verdict(**frob_options)
        return frobenius_verdict(curve, **frob_options)
    raise ValueError(f"no method for {curve.id}")


def x18_verdict(primes=None, auto=True, **options) -> CMVerdict:
    """The listed primes need counts over F_{p^6} with p >= 131, so they are
    reported as out of scale and small primes are searched instead."""
    curve = get_curve("X18")
    if primes:
        return frobenius_verdict(curve, primes=primes, auto=False, **options)
    out = frobenius_verdict(curve, auto=True, **options)
    out.evidence["listed_primes"] = [
        {"p": p, "status": "out of desk scale", "q": p**6} for p in LISTED_PRIMES["X18"]
    ]
    return out


__all__ = [
    "ratio_poly",
    "n0_of",
    "eprime_poly",
    "is_very_good",
    "compositum_degree",
    "joint_disjointness",
    "CompositumCertificate",
    "FrobeniusData",
    "frobenius_data",
    "cm_product_test",
    "CMVerdict",
    "verdict",
    "frobenius_verdict",
    "x18_verdict",
    "LISTED_PRIMES",
]
