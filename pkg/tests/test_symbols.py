from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dqcalc import (
    ESymbol,
    LaurentScalar,
    Poly,
    Scalar,
    WSymbol,
    ZeroSymbol,
    falling,
    homogeneity_check,
    poly_derive,
    principal_symbol,
)
from strategies import e_symbols, w_symbols

X = lambda n, i, p=1: WSymbol.var(n, f"x{i}", p)  # noqa: E731
U = lambda n, i, p=1: WSymbol.var(n, f"u{i}", p)  # noqa: E731


def test_falling_factorial_negative_base():
    assert falling(5, 2) == 20
    assert falling(-1, 3) == -6
    assert falling(3, 0) == 1


def test_poly_arithmetic_and_derivative():
    x = Poly.var(1, "x1")
    u = Poly.var(1, "u1")
    p = (x + u) ** 2
    assert p == x * x + x * u.scale(2) + u * u
    assert poly_derive(p, "x1") == x.scale(2) + u.scale(2)
    assert p.derive("u1", 3).is_zero()


def test_laurent_poly_derivative_power_rule():
    xi_inv = Poly.var(1, "xi1", -1, laurent=True)
    assert poly_derive(xi_inv, "xi1", 2) == Poly.var(1, "xi1", -3, laurent=True).scale(2)


def test_poly_rejects_negative_base_exponent():
    with pytest.raises(ValueError):
        Poly(1, {(-1, 0): 1})
    with pytest.raises(ValueError):
        Poly(1, {(0, -1): 1})


def test_poly_rejects_unknown_variable():
    with pytest.raises(ValueError):
        Poly.var(2, "x3")
    with pytest.raises(ValueError):
        Poly.var(2, "y1")


def test_w_rendering_order():
    n = 2
    s = X(n, 1) * U(n, 2) + X(n, 2, 2) + WSymbol.tau(n, -2, Fraction(1, 3)) + U(n, 1).shift(1)
    assert str(s) == "u1*tau + x2^2 + x1*u2 + 1/3*tau^-2"


def test_w_rendering_complex_coefficient():
    s = X(1, 1).shift(1).scale(Scalar(-1, -1))
    assert str(s) == "-(1+i)*x1*tau"


def test_zero_symbol_renders_as_zero():
    assert str(WSymbol.from_terms(2, {})) == "0"


def test_floor_annotation_and_truncation():
    s = WSymbol.tau(1, 0) + WSymbol.tau(1, -1) + WSymbol.tau(1, -3)
    t = s.truncate(-2)
    assert str(t) == "1 + tau^-1 (floor: -2)"
    assert t.agrees_with(s)
    assert not t.agrees_with(WSymbol.tau(1, 0))
    assert t.mismatch_degree(WSymbol.tau(1, 0)) == -1


def test_e_symbol_with_t_pair_renders_t_and_tau():
    s = ESymbol.var(2, "x2", has_t=True) * ESymbol.var(2, "xi2", has_t=True)
    assert str(s) == "t*tau"


def test_e_symbol_components_are_split_by_fiber_degree():
    p = Poly.var(1, "xi1", 2, laurent=True) + Poly.var(1, "x1", laurent=True)
    s = ESymbol.from_poly(p)
    assert s.order == 2
    assert set(s.comps) == {2, 0}


def test_homogeneity_check_finds_bad_term():
    good = ESymbol.from_terms(1, {(1, (2, 1)): Scalar(1)})
    bad = ESymbol.from_terms(1, {(0, (0, 1)): Scalar(1)})
    assert homogeneity_check(good)
    rep = homogeneity_check(bad)
    assert not rep and rep.degree == 0


def test_principal_symbol():
    s = X(1, 1).shift(2) + U(1, 1)
    m, p = principal_symbol(s)
    assert m == 2 and p == Poly.var(1, "x1")
    with pytest.raises(ZeroSymbol):
        principal_symbol(WSymbol.from_terms(1, {}))


def test_scalar_multiplication_by_laurent():
    a = LaurentScalar({1: 2})
    assert (X(1, 1) * a) == X(1, 1).shift(1).scale(2)
    assert (a * U(1, 1)) == U(1, 1).shift(1).scale(2)


def test_w_symbol_rejects_negative_fiber_exponent():
    with pytest.raises(ValueError):
        WSymbol(1, {0: Poly(1, {(0, -1): 1}, laurent=True)})


@given(w_symbols(), w_symbols())
def test_addition_is_commutative(p, q):
    if p.n != q.n:
        return
    assert p + q == q + p
    assert (p - q) + q == p


@given(w_symbols())
def test_hash_consistent_with_equality(p):
    q = WSymbol.from_terms(p.n, dict(p.terms))
    assert p == q and hash(p) == hash(q)


@given(e_symbols(), st.integers(-4, 2))
def test_truncate_agrees_with_original(p, floor):
    t = p.truncate(floor)
    assert t.agrees_with(p)
    assert all(j >= floor for j, _ in t.terms)
