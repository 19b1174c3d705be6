"""Catalog of hyperelliptic curves with many automorphisms, and the
enumeration of admissible branch loci that re-derives it.

A curve y^2 = f(x) is recorded by its reduced automorphism group, the
orbits making up its branch locus, and f over the cyclotomic field of the
group realization.  Branch points are the roots of f, plus infinity when
deg f is odd.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache

from .mobius import Orbit, RealizedGroup, exceptional_orbits, group_field, realize_reduced_group
from .numfield import NFPoly
from .polycore import RationalPoly, format_poly
from .reduction import separable_mod_split_prime


@dataclass(frozen=True)
class CurveSpec:
    id: str  # "X1" ... "X18"
    genus: int
    group: str  # "C", "D", "A4", "S4", "A5"
    n: int  # parameter of C_n / D_n, else 0
    branch: tuple  # orbit names whose union is the branch locus
    G_label: str  # full automorphism group, metadata only
    expected: str  # "CM" or "no CM" as tabulated

    @property
    def group_name(self) -> str:
        return f"{self.group}{self.n}" if self.group in ("C", "D") else self.group

    @property
    def realized_group(self) -> RealizedGroup:
        return realize_reduced_group(self.group, self.n)

    @property
    def orbits(self) -> list[Orbit]:
        by_name = {o.name: o for o in exceptional_orbits(self.group, self.n)}
        by_name.update(_free_orbits(self))
        return [by_name[b] for b in self.branch]

    @property
    def poly(self) -> NFPoly:
        return _curve_poly(self)

    @property
    def branch_size(self) -> int:
        return sum(o.size for o in self.orbits)

    @property
    def degree(self) -> int:
        return self.poly.degree

    @property
    def infinity_branch(self) -> bool:
        return any(o.has_infinity for o in self.orbits)

    def is_rational(self) -> bool:
        return self.poly.is_rational()

    def rational_poly(self) -> RationalPoly:
        return self.poly.to_rational()

    @property
    def equation(self) -> str:
        """Equation in terms of the orbit polynomial names, e.g. ``y^2 = r4*s4``."""
        if self.group in ("C", "D"):
            return "y^2 = " + format_poly(self.rational_poly().coeffs, "x")
        return "y^2 = " + "*".join(self.branch)

    def to_record(self) -> dict:
        poly = self.poly
        coeffs = (
            [str(c) for c in self.rational_poly().coeffs]
            if self.is_rational()
            else [str(c) for c in poly.coeffs]
        )
        return {
            "id": self.id,
            "genus": self.genus,
            "Gbar": self.group_name,
            "G": self.G_label,
            "equation": self.equation,
            "coefficients": coeffs,
            "field": poly.ctx.name,
            "expected": self.expected,
        }


def _free_orbits(c: CurveSpec) -> dict:
    if c.group != "C":
        return {}
    ctx = group_field(c.group, c.n)
    xn1 = NFPoly(ctx, [-1] + [0] * (c.n - 1) + [1])
    return {f"x^{c.n}-1": Orbit(f"x^{c.n}-1", xn1, False)}


@lru_cache(maxsize=None)
def _curve_poly(c: CurveSpec) -> NFPoly:
    ctx = group_field(c.group, c.n)
    f = NFPoly(ctx, [1])
    for o in c.orbits:
        f = f * o.poly
    return f


def genus_of(branch_size: int) -> int:
    if branch_size % 2 or branch_size < 6:
        raise ValueError("branch locus size must be even and at least 6")
    return (branch_size - 2) // 2


# tabulated rows: id -> (group, branch orbits, G label, expected verdict)
_FIXED = {
    "X4": ("A4", ("t4", "p4"), "SL2(3)", "CM"),
    "X5": ("S4", ("t4",), "GL2(3)", "CM"),
    "X6": ("S4", ("s4",), "C2xS4", "no CM"),
    "X7": ("S4", ("r4",), "W2", "CM"),
    "X8": ("S4", ("s4", "t4"), "GL2(3)", "no CM"),
    "X9": ("S4", ("r4", "t4"), "W3", "CM"),
    "X10": ("S4", ("r4", "s4"), "W2", "no CM"),
    "X11": ("S4", ("r4", "s4", "t4"), "W3", "no CM"),
    "X12": ("A5", ("s5",), "C2xA5", "no CM"),
    "X13": ("A5", ("r5",), "C2xA5", "no CM"),
    "X14": ("A5", ("t5",), "SL2(5)", "CM"),
    "X15": ("A5", ("r5", "s5"), "C2xA5", "no CM"),
    "X16": ("A5", ("s5", "t5"), "SL2(5)", "no CM"),
    "X17": ("A5", ("r5", "t5"), "SL2(5)", "no CM"),
    "X18": ("A5", ("r5", "s5", "t5"), "SL2(5)", "no CM"),
}

FAMILY_MIN_GENUS = {"X1": 2, "X2": 2, "X3": 3}
CURVE_IDS = ["X1", "X2", "X3"] + list(_FIXED)


def family(cid: str, g: int) -> CurveSpec:
    """Materialize one of the infinite families at genus g."""
    if cid not in FAMILY_MIN_GENUS:
        raise ValueError(f"{cid} is not a parameterized family")
    if g < FAMILY_MIN_GENUS[cid]:
        raise ValueError(f"{cid} needs genus >= {FAMILY_MIN_GENUS[cid]}")
    if cid == "X1":
        n = 2 * g + 1
        return CurveSpec("X1", g, "C", n, ("inf", f"x^{n}-1"), f"C{4 * g + 2}", "CM")
    if cid == "X2":
        n = 2 * g + 2
        return CurveSpec("X2", g, "D", n, (f"x^{n}-1",), f"V{2 * g + 2}", "CM")
    n = 2 * g
    return CurveSpec("X3", g, "D", n, ("0inf", f"x^{n}-1"), f"U{2 * g}", "CM")


def fixed_curve(cid: str) -> CurveSpec:
    group, branch, G, expected = _FIXED[cid]
    size = sum(o.size for o in exceptional_orbits(group) if o.name in branch)
    return CurveSpec(cid, genus_of(size), group, 0, branch, G, expected)


def get_curve(cid: str, g: int | None = None) -> CurveSpec:
    cid = cid.upper()
    if cid in FAMILY_MIN_GENUS:
        return family(cid, g if g is not None else FAMILY_MIN_GENUS[cid])
    if cid in _FIXED:
        if g is not None and g != fixed_curve(cid).genus:
            raise ValueError(f"{cid} has fixed genus {fixed_curve(cid).genus}")
        return fixed_curve(cid)
    raise ValueError(f"unknown curve id {cid!r}")


def catalog(family_genus: dict | None = None) -> list[CurveSpec]:
    """The 18 rows; families at their minimal genus unless given in ``family_genus``."""
    family_genus = family_genus or {}
    out = [family(c, family_genus.get(c, FAMILY_MIN_GENUS[c])) for c in FAMILY_MIN_GENUS]
    return out + [fixed_curve(c) for c in _FIXED]


def catalog_json(curves=None) -> str:
    return json.dumps([c.to_record() for c in (curves or catalog())], indent=2)


# classification engine


def _id_for(group: str, branch: tuple) -> str | None:
    for cid, (grp, br, _, _) in _FIXED.items():
        if grp == group and set(br) == set(branch):
            return cid
    return None


def enumerate_branch_loci(group: str, genus_bound: int) -> list[CurveSpec]:
    """All admissible branch loci for the reduced group ``group``.

    ``group`` is one of "C", "D" (all n), "A4", "S4", "A5".  For the cyclic and
    dihedral families only loci of genus strictly below ``genus_bound`` are
    produced; the polyhedral groups give finitely many loci and ignore it.
    """
    if genus_bound < 2:
        raise ValueError("genus_bound must be at least 2")
    if group in ("S4", "A5", "A4"):
        return _enumerate_polyhedral(group)
    if group == "D":
        return _enumerate_dihedral(genus_bound)
    if group == "C":
        return _enumerate_cyclic(genus_bound)
    raise ValueError(f"unknown group label {group!r}")


def _unions(orbits):
    for r in range(1, len(orbits) + 1):
        yield from itertools.combinations(orbits, r)


def _enumerate_polyhedral(group: str) -> list[CurveSpec]:
    out = []
    for combo in _unions(exceptional_orbits(group)):
        names = {o.name for o in combo}
        size = sum(o.size for o in combo)
        if size % 2 or size < 6:
            continue
        if group == "A4":
            # t4 (with infinity) and p4 u q4 are already S4-orbits: exactly one of
            # p4, q4 must occur, and S4 \ A4 swaps them, so keep p4
            if ("p4" in names) == ("q4" in names):
                continue
            if "q4" in names:
                continue
        branch = tuple(o.name for o in combo)
        cid = _id_for(group, branch)
        G_label, expected = (_FIXED[cid][2], _FIXED[cid][3]) if cid else ("?", "?")
        if cid:
            branch = _FIXED[cid][1]
        out.append(CurveSpec(cid or "?", genus_of(size), group, 0, branch, G_label, expected))
    return out


def _enumerate_dihedral(genus_bound: int) -> list[CurveSpec]:
    out = []
    n = 2
    while n <= 2 * genus_bound + 2:
        # {0, inf} and V(x^n-1) u V(x^n+1) are D_2n-orbits: exactly one of the
        # two size-n orbits, and D_2n \ D_n swaps them, so keep V(x^n - 1)
        for with_poles in (False, True):
            size = n + (2 if with_poles else 0)
            if size % 2 or size < 6:
                continue
            if with_poles and n == 4:
                continue  # V(x^4-1) u {0, inf} is the S4-orbit of t4
            g = genus_of(size)
            if g >= genus_bound:
                continue
            out.append(family("X3", g) if with_poles else family("X2", g))
        n += 1
    return sorted(out, key=lambda c: (c.genus, c.id))


def _enumerate_cyclic(genus_bound: int) -> list[CurveSpec]:
    out = []
    n = 2
    while n + 1 <= 2 * genus_bound + 2:
        # n even: the locus is also stable under x -> 1/x, so the group is dihedral.
        # n odd: V(x^n-1) u {inf} and u {0} are swapped by x -> 1/x; keep infinity.
        # n + 1 >= 6 forces n >= 5, and then no larger group occurs.
        if n % 2 == 1 and n + 1 >= 6:
            g = genus_of(n + 1)
            if g < genus_bound:
                out.append(family("X1", g))
        n += 1
    return out


def check_separable(c: CurveSpec) -> bool:
    """Exact separability certificate via reduction at a split prime."""
    return separable_mod_split_prime(c.poly)
