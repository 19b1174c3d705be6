from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypercm.numfield import (
    NFPoly,
    NumberFieldCtx,
    cyclotomic_field,
    is_algebraic_integer,
    minimal_polynomial,
    norm,
    quadratic_field,
    root_of_unity_order,
)
from hypercm.polycore import RationalPoly, irreducible_over_Q


def test_arithmetic_examples():
    K = quadratic_field(-2)
    x = K.gen
    assert x * x == K(-2)
    assert (1 + x) / (1 + x) == K(1)
    L = quadratic_field(-1)
    i = L.gen
    assert (1 + i) * (1 - i) == L(2)


def test_division_by_zero():
    K = quadratic_field(-2)
    with pytest.raises(ZeroDivisionError):
        K.gen / K(0)


def test_reducible_modulus_rejected():
    with pytest.raises(ValueError):
        NumberFieldCtx.create(RationalPoly([-1, 0, 1]))


def test_minimal_polynomial_examples():
    K = quadratic_field(-2)
    assert minimal_polynomial(K.gen) == RationalPoly([2, 0, 1])
    assert minimal_polynomial(K(Fraction(3, 2))) == RationalPoly([Fraction(-3, 2), 1])
    R = quadratic_field(2)
    assert minimal_polynomial(1 + R.gen) == RationalPoly([-1, -2, 1])


def test_algebraic_integer_examples():
    K = quadratic_field(-2)
    assert not is_algebraic_integer(K(Fraction(1, 2)))
    assert is_algebraic_integer(K.gen)
    assert not is_algebraic_integer(K(Fraction(35152, 9)))
    # (1 + sqrt 5)/2 is integral although its coordinates are not
    Q5 = quadratic_field(5)
    assert is_algebraic_integer((1 + Q5.gen) / 2)


def test_sqrt_rational_in_cyclotomic_fields():
    K = cyclotomic_field(24)
    for d in (-1, 2, -2, 3, -3, 6, Fraction(-2, 9)):
        s = K.sqrt_rational(d)
        assert s * s == K(d)
    F = cyclotomic_field(20)
    assert F.sqrt_rational(5) ** 2 == F(5)


def test_zeta_orders():
    K = cyclotomic_field(60)
    for k in (2, 3, 4, 5, 6, 10, 12, 15, 20, 30, 60):
        assert root_of_unity_order(K.zeta(k)) == k
    assert root_of_unity_order(K(2)) == 0


def test_norm_multiplicative():
    K = cyclotomic_field(12)
    a, b = 1 + K.gen, 2 - K.gen**3
    assert norm(a * b) == norm(a) * norm(b)


def test_nfpoly_arithmetic():
    K = quadratic_field(-1)
    i = K.gen
    f = NFPoly(K, [1, 0, 1])
    g = NFPoly(K, [i, 1])
    q, r = divmod(f, g)
    assert r.is_zero()
    assert q * g == f
    assert f(i).is_zero()


small = st.integers(min_value=-3, max_value=3)
coords12 = st.lists(small, min_size=4, max_size=4)


@settings(max_examples=30, deadline=None)
@given(coords12)
def test_minimal_polynomial_annihilates(c):
    K = cyclotomic_field(12)
    e = K.from_coords(c)
    m = minimal_polynomial(e)
    acc = K(0)
    for a in reversed(m.coeffs):
        acc = acc * e + a
    assert acc.is_zero()
    assert K.degree % m.degree == 0
    assert irreducible_over_Q(m)


@settings(max_examples=30, deadline=None)
@given(coords12, coords12)
def test_integrality_closed_under_ring_operations(a, b):
    K = cyclotomic_field(12)
    x, y = K.from_coords(a), K.from_coords(b)
    assert is_algebraic_integer(x) and is_algebraic_integer(y)
    assert is_algebraic_integer(x + y)
    assert is_algebraic_integer(x * y)
