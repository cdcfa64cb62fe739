from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dqcalc import (
    I,
    ONE,
    ZERO,
    InsufficientDepth,
    LaurentScalar,
    Scalar,
    as_scalar,
    growth_check,
    k_inverse,
    k_mul,
    k_order,
    k_transpose,
    min_growth_constant,
)
from strategies import laurents, scalars

# -- Gaussian rationals ------------------------------------------------------


@pytest.mark.parametrize(
    "value, text",
    [
        (Scalar(Fraction(1, 2), Fraction(-3, 4)), "1/2-3/4*i"),
        (Scalar(0, 1), "i"),
        (Scalar(0, Fraction(-1, 2)), "-1/2*i"),
        (Scalar(-3), "-3"),
        (ZERO, "0"),
    ],
)
def test_scalar_rendering(value, text):
    assert str(value) == text
    assert as_scalar(text) == value


def test_i_squared():
    assert I * I == -ONE
    assert (Scalar(1, 1)).inverse() == Scalar(Fraction(1, 2), Fraction(-1, 2))


def test_zero_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        ZERO.inverse()


def test_scalar_immutable():
    with pytest.raises(AttributeError):
        ONE.re = 2


@given(scalars(allow_zero=True), scalars(allow_zero=True), scalars(allow_zero=True))
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == ZERO


@given(scalars())
def test_inverse_roundtrip(a):
    assert a * a.inverse() == ONE
    assert a.norm2() == (a * a.conjugate()).re


# -- Laurent coefficients ----------------------------------------------------


def test_laurent_render_with_floor():
    a = LaurentScalar({2: 3, 0: 1, -1: Fraction(-1, 2)}, -4)
    assert str(a) == "3*tau^2 + 1 - 1/2*tau^-1 (floor: -4)"


def test_exact_product():
    a = LaurentScalar({0: 1, -1: 1})
    b = LaurentScalar({0: 1, -1: -1})
    assert k_mul(a, b) == LaurentScalar({0: 1, -2: -1})


def test_product_floor_propagates():
    a = LaurentScalar({0: 1}, -3)
    b = LaurentScalar({1: 2})
    # unknown terms of a below tau^-3 move up by one degree
    assert k_mul(a, b).floor == -2


def test_inverse_of_geometric_series():
    a = LaurentScalar({0: 1, -1: -1})
    inv = k_inverse(a, 4)
    assert inv.floor == -4
    assert inv == LaurentScalar({0: 1, -1: 1, -2: 1, -3: 1, -4: 1}, -4)


def test_inverse_of_monomial_is_exact():
    inv = k_inverse(LaurentScalar({2: Scalar(0, 2)}), 3)
    assert inv.exact
    assert inv == LaurentScalar({-2: Scalar(0, Fraction(-1, 2))})


def test_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        k_inverse(LaurentScalar({}), 3)


@settings(max_examples=60)
@given(laurents(), st.integers(1, 6))
def test_inverse_times_self_is_one(a, depth):
    if a.is_zero():
        return
    prod = k_mul(a, k_inverse(a, depth))
    assert prod.agrees_with(LaurentScalar({0: 1}))


@given(laurents(), laurents())
def test_transpose_is_multiplicative_and_involutive(a, b):
    assert k_transpose(k_transpose(a)) == a
    assert k_transpose(k_mul(a, b)) == k_mul(k_transpose(a), k_transpose(b))


def test_transpose_flips_odd_degrees():
    assert k_transpose(LaurentScalar({1: 1, 2: 1})) == LaurentScalar({1: -1, 2: 1})


def test_order():
    assert k_order(LaurentScalar({-2: 1, 3: 4})) == 3
    assert k_order(LaurentScalar({})) == float("-inf")


# -- growth bound ------------------------------------------------------------


def test_growth_exponential_coefficients_pass():
    from math import factorial

    a = LaurentScalar({-j: Fraction(1, factorial(j)) for j in range(6)}, -6)
    assert growth_check(a, 1, 5).ok
    rep = growth_check(a, Fraction(1, 2), 5)
    assert not rep.ok and rep.first_failure == -1


def test_growth_needs_known_coefficients():
    with pytest.raises(InsufficientDepth):
        growth_check(LaurentScalar({0: 1}, -2), 1, 5)


def test_growth_uses_modulus_of_complex_coefficients():
    # |3 + 4i| = 5 so C = 5 passes at j = -1 and C = 4 does not
    a = LaurentScalar({-1: Scalar(3, 4)})
    assert growth_check(a, 5, 1).ok
    assert not growth_check(a, 4, 1).ok


def test_min_growth_constant():
    a = LaurentScalar({0: 1, -1: 2, -2: 4, -3: 8})
    c = min_growth_constant(a, 3)
    assert c == 2
    assert growth_check(a, c, 3).ok
    assert min_growth_constant(LaurentScalar({0: 2}), 2) is None


@settings(max_examples=40)
@given(laurents(lo=-4, hi=0), st.integers(1, 4))
def test_min_growth_constant_brackets_the_optimum(a, depth):
    c = min_growth_constant(a, depth, scale=1000)
    if c is None:
        assert a[0].norm2() > 1
        return
    step = Fraction(1, 1000)
    assert growth_check(a, c + step, depth).ok
    if c > 0:
        assert not growth_check(a, c - step, depth).ok
