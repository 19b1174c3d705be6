from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from hypercm.polycore import (
    BivariatePoly,
    Irreducibility,
    RationalPoly,
    cyclotomic,
    discriminant,
    euler_phi,
    gcd,
    irreducible_over_Q,
    rational_roots,
    resultant,
    resultant_elim,
    squarefree_part,
)

T = sympy.Symbol("T")


def P(*coeffs):
    return RationalPoly(coeffs)


def to_sympy(f: RationalPoly):
    return sympy.Poly(list(reversed([sympy.Rational(c.numerator, c.denominator) for c in f.coeffs])), T)


small_int = st.integers(min_value=-9, max_value=9)


def int_poly(min_deg=1, max_deg=5):
    return st.lists(small_int, min_size=min_deg + 1, max_size=max_deg + 1).filter(lambda c: c[-1] != 0)


# squarefree part


def test_squarefree_examples():
    assert squarefree_part(P(1, -1) * P(1, -1) * P(2, 1)) == P(-1, 1) * P(2, 1)
    assert squarefree_part(P(0, 0, 0, 1)) == P(0, 1)
    assert squarefree_part(P(9, 0, 6, 0, 1)) == P(3, 0, 1)


def test_squarefree_zero_raises():
    with pytest.raises(ValueError):
        squarefree_part(RationalPoly())


@given(int_poly(1, 4), int_poly(1, 3))
def test_squarefree_idempotent_and_coprime_to_derivative(a, b):
    f = P(*a) * P(*a) * P(*b)
    sf = squarefree_part(f)
    assert squarefree_part(sf) == sf
    assert gcd(sf, sf.derivative()).degree == 0
    assert sf.degree == to_sympy(f).sqf_part().degree()


# resultants


def test_resultant_elim_examples():
    square = BivariatePoly.t_minus(P(0, 0, 1))
    assert resultant_elim(P(-3, 1), square) == P(-9, 1)
    assert resultant_elim(P(-2, 0, 1), square) == P(-2, 1) * P(-2, 1)
    assert resultant_elim(P(6, -5, 1), square) == P(-4, 1) * P(-9, 1)


@settings(max_examples=40)
@given(int_poly(1, 3), int_poly(1, 3), int_poly(1, 3))
def test_resultant_multiplicative(a, b, c):
    f, g, h = P(*a), P(*b), P(*c)
    assert resultant(f * g, h) == resultant(f, h) * resultant(g, h)


def sylvester_det(f: RationalPoly, g: RationalPoly):
    m, n = f.degree, g.degree
    a, b = list(reversed(f.coeffs)), list(reversed(g.coeffs))
    rows = [[0] * i + a + [0] * (n - 1 - i) for i in range(n)]
    rows += [[0] * i + b + [0] * (m - 1 - i) for i in range(m)]
    return sympy.Matrix(rows).det()


@settings(max_examples=40)
@given(int_poly(1, 4), int_poly(1, 4))
def test_resultant_matches_sylvester_determinant(a, b):
    f, g = P(*a), P(*b)
    assert resultant(f, g) == Fraction(int(sylvester_det(f, g)))


@settings(max_examples=25)
@given(int_poly(1, 3))
def test_scaled_resultant_matches_sympy(a):
    f = P(*a).strip_t()
    if f.degree < 1:
        return
    y = sympy.Symbol("y")
    fy = sum(sympy.Integer(int(c)) * y**i for i, c in enumerate(f.coeffs))
    ref = sympy.Poly(sympy.resultant(fy, fy.subs(y, T * y), y), T)
    ours = resultant_elim(f, BivariatePoly.scaled(f))
    assert to_sympy(ours) == ref


def test_shifted_compositum_of_quadratics():
    r = resultant_elim(P(-2, 0, 1), BivariatePoly.shifted(P(-3, 0, 1), 1))
    assert squarefree_part(r) == P(1, 0, -10, 0, 1)


# cyclotomic polynomials


def test_cyclotomic_examples():
    assert cyclotomic(1) == P(-1, 1)
    assert cyclotomic(4) == P(1, 0, 1)
    assert cyclotomic(6) == P(1, -1, 1)
    with pytest.raises(ValueError):
        cyclotomic(0)


def test_cyclotomic_product_identity():
    for n in range(1, 201):
        prod = RationalPoly([1])
        for d in range(1, n + 1):
            if n % d == 0:
                prod = prod * cyclotomic(d)
        assert prod == RationalPoly([-1] + [0] * (n - 1) + [1]), n
        assert cyclotomic(n).degree == euler_phi(n)


# irreducibility


def test_irreducible_examples():
    assert irreducible_over_Q(P(1, 0, 1)).status is Irreducibility.IRREDUCIBLE
    assert irreducible_over_Q(P(-1, 0, 1)).status is Irreducibility.REDUCIBLE
    assert irreducible_over_Q(P(1, 0, -10, 0, 1)).status is Irreducibility.IRREDUCIBLE


def test_irreducible_swinnerton_dyer_needs_exact_fallback():
    # reducible modulo every prime, so the sieve alone cannot decide
    f = P(1, 0, -10, 0, 1)
    sieve = irreducible_over_Q(f, exact_fallback=False)
    assert sieve.status is Irreducibility.UNKNOWN
    assert irreducible_over_Q(f).status is Irreducibility.IRREDUCIBLE


def test_irreducible_rejects_repeated_factor():
    with pytest.raises(ValueError):
        irreducible_over_Q(P(1, 2, 1))


@settings(max_examples=60)
@given(int_poly(2, 6))
def test_irreducible_agrees_with_sympy(a):
    f = P(*a)
    if gcd(f, f.derivative()).degree > 0:
        return
    res = irreducible_over_Q(f, exact_fallback=False)
    expected = to_sympy(f).is_irreducible
    if res.status is Irreducibility.IRREDUCIBLE:
        assert expected
    elif res.status is Irreducibility.REDUCIBLE:
        assert not expected


@settings(max_examples=60)
@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=4), min_size=1, max_size=2), int_poly(1, 3))
def test_rational_root_never_irreducible(roots, a):
    f = RationalPoly.from_roots(roots) * P(*a)
    if f.degree < 2 or gcd(f, f.derivative()).degree > 0:
        return
    assert rational_roots(f)
    assert irreducible_over_Q(f).status is not Irreducibility.IRREDUCIBLE


# discriminants


def test_discriminant_examples():
    assert discriminant(P(1, 0, 1)) == -4
    assert discriminant(P(6, -5, 1)) == 1
    assert discriminant(P(0, -1, 0, 1)) == 4
    with pytest.raises(ValueError):
        discriminant(P(3))


@settings(max_examples=40)
@given(int_poly(1, 5))
def test_discriminant_matches_sympy(a):
    f = P(*a)
    assert discriminant(f) == Fraction(str(sympy.discriminant(to_sympy(f))))


def test_primitive_is_idempotent():
    f = P(Fraction(1, 2), Fraction(3, 4), 3)
    s, prim = f.primitive()
    assert prim * RationalPoly([s]) == f
    assert prim.primitive()[1] == prim
    assert all(c.denominator == 1 for c in prim.coeffs)
