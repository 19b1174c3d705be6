import json

import pytest

from hypercm.curves import (
    CURVE_IDS,
    catalog,
    catalog_json,
    check_separable,
    enumerate_branch_loci,
    family,
    genus_of,
    get_curve,
)
from hypercm.mobius import exceptional_orbits, orbit_polynomials, realize_reduced_group
from hypercm.numfield import NFPoly
from hypercm.polycore import RationalPoly
from reference_data import CATALOG, ORBIT_POLYS

ORBIT_SIZES = {"A4": [4, 4, 6], "S4": [6, 8, 12], "A5": [12, 20, 30]}


def test_genus_of():
    assert genus_of(6) == 2
    assert genus_of(10) == 4
    assert genus_of(12 + 20 + 30) == 30
    for bad in (5, 4, 7):
        with pytest.raises(ValueError):
            genus_of(bad)


def test_catalog_has_every_row():
    rows = catalog()
    assert [c.id for c in rows] == CURVE_IDS
    assert len(rows) == 18
    for c in rows:
        group, genus, branch, G, verdict = CATALOG[c.id]
        assert c.group == group
        assert c.genus == genus
        assert c.expected == verdict
        if branch is not None:
            assert set(c.branch) == set(branch)
            assert c.G_label == G


@pytest.mark.parametrize("cid", [c for c in CURVE_IDS if CATALOG[c][2] is not None])
def test_fixed_row_equation_is_product_of_orbit_polynomials(cid):
    c = get_curve(cid)
    prod = RationalPoly([1])
    if "p4" in c.branch:
        # p4 has coefficients involving sqrt(-3); compare over the group field
        f = NFPoly(c.poly.ctx, [1])
        for o in c.orbits:
            f = f * o.poly
        assert f == c.poly
        return
    for name in c.branch:
        prod = prod * RationalPoly(ORBIT_POLYS[name])
    assert c.rational_poly() == prod
    assert len(c.poly.coeffs) - 1 + c.infinity_branch == 2 * c.genus + 2


def test_branch_size_matches_genus():
    for c in catalog({"X1": 4, "X2": 5, "X3": 6}):
        assert c.branch_size == 2 * c.genus + 2
        assert c.degree in (2 * c.genus + 1, 2 * c.genus + 2)
        assert c.infinity_branch == (c.degree == 2 * c.genus + 1)


def test_family_equations():
    assert get_curve("X1", 2).rational_poly() == RationalPoly([-1, 0, 0, 0, 0, 1])
    assert family("X2", 3).rational_poly() == RationalPoly([-1] + [0] * 7 + [1])
    assert family("X3", 3).rational_poly() == RationalPoly([0, -1] + [0] * 5 + [1])
    with pytest.raises(ValueError):
        family("X3", 2)
    with pytest.raises(ValueError):
        get_curve("X14", 3)
    with pytest.raises(ValueError):
        get_curve("X19")


def test_catalog_examples():
    assert get_curve("X14").genus == 14 and get_curve("X14").branch == ("t5",)
    assert get_curve("X10").genus == 9 and set(get_curve("X10").branch) == {"r4", "s4"}


def test_enumeration_s4_gives_seven_rows():
    ids = sorted((c.id for c in enumerate_branch_loci("S4", 2)), key=lambda s: int(s[1:]))
    assert ids == ["X5", "X6", "X7", "X8", "X9", "X10", "X11"]


def test_enumeration_a4_single_locus():
    rows = enumerate_branch_loci("A4", 2)
    assert len(rows) == 1
    assert rows[0].id == "X4" and rows[0].genus == 4
    assert set(rows[0].branch) == {"t4", "p4"}


def test_enumeration_a5_rows():
    ids = {c.id for c in enumerate_branch_loci("A5", 2)}
    assert ids == {f"X{i}" for i in range(12, 19)}


def test_enumeration_cyclic_small_bound():
    rows = enumerate_branch_loci("C", 3)
    assert [(c.id, c.genus) for c in rows] == [("X1", 2)]
    assert rows[0].rational_poly() == RationalPoly([-1, 0, 0, 0, 0, 1])


def test_enumeration_matches_catalog_up_to_genus():
    bound = 7
    cyc = {(c.id, c.genus) for c in enumerate_branch_loci("C", bound)}
    dih = {(c.id, c.genus) for c in enumerate_branch_loci("D", bound)}
    assert cyc == {("X1", g) for g in range(2, bound)}
    assert dih == {("X2", g) for g in range(2, bound)} | {("X3", g) for g in range(3, bound)}
    poly = {c.id for grp in ("A4", "S4", "A5") for c in enumerate_branch_loci(grp, bound)}
    assert poly == {f"X{i}" for i in range(4, 19)}
    with pytest.raises(ValueError):
        enumerate_branch_loci("S5", 3)
    with pytest.raises(ValueError):
        enumerate_branch_loci("S4", 1)


@pytest.mark.parametrize("label", ["A4", "S4", "A5"])
def test_orbit_sizes(label):
    orbits = exceptional_orbits(label)
    assert sorted(o.size for o in orbits) == ORBIT_SIZES[label]
    G = realize_reduced_group(label)
    assert G.order == {"A4": 12, "S4": 24, "A5": 60}[label]


def test_orbit_polynomials_match_table():
    for label in ("S4", "A5"):
        for o in exceptional_orbits(label):
            assert o.poly.to_rational() == RationalPoly(ORBIT_POLYS[o.name])


def test_p4_q4_product_is_s4():
    ctx = realize_reduced_group("S4").ctx
    polys = orbit_polynomials(ctx)
    assert polys["p4"] * polys["q4"] == NFPoly.from_rational(ctx, RationalPoly(ORBIT_POLYS["s4"]))


def test_every_polynomial_separable():
    for c in catalog({"X1": 3, "X2": 3, "X3": 4}):
        assert check_separable(c), c.id


def test_catalog_json_records():
    recs = json.loads(catalog_json())
    assert len(recs) == 18
    assert {"id", "genus", "Gbar", "G", "coefficients"} <= set(recs[0])
    x10 = next(r for r in recs if r["id"] == "X10")
    assert x10["Gbar"] == "S4" and x10["genus"] == 9
