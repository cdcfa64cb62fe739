from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dqcalc import (
    AffineLift,
    ESymbol,
    InnerAd,
    NonReducible,
    NotInvertible,
    OTauElement,
    Scalar,
    WAutomorphism,
    WSymbol,
    apply_otau,
    commutator,
    commutator_e,
    e_to_w,
    star_e,
    star_inverse,
    star_w,
    transpose_e,
    transpose_w,
)
from oracles import diff_apply, weyl_product, weyl_transpose
from strategies import e_pairs, e_symbols, w_pairs, w_symbols


def W(n, name, p=1):
    return WSymbol.var(n, name, p)


def E(n, name, p=1, has_t=False):
    return ESymbol.var(n, name, p, has_t=has_t)


def wsym(n, terms):
    return WSymbol.from_terms(n, {k: Scalar(v) for k, v in terms.items()})


# -- W product ----------------------------------------------------------------


def test_heisenberg_relation():
    assert str(star_w(W(1, "u1"), W(1, "x1"))) == "x1*u1 + tau^-1"
    assert commutator(W(1, "u1"), W(1, "x1")) == WSymbol.tau(1, -1)


def test_u_acts_as_scaled_derivative():
    assert commutator(W(1, "u1"), W(1, "x1", 2)) == W(1, "x1").shift(-1).scale(2)


def test_known_product_u2_x2():
    # u^2 x^2 = x^2 u^2 + 4 x u tau^-1 + 2 tau^-2
    got = star_w(W(1, "u1", 2), W(1, "x1", 2))
    assert got == wsym(1, {(0, (2, 2)): 1, (-1, (1, 1)): 4, (-2, (0, 0)): 2})


@settings(max_examples=80, deadline=None)
@given(w_pairs(max_deg=2))
def test_star_w_matches_rewriting_oracle(pq):
    p, q = pq
    expected = weyl_product(dict(p.terms), dict(q.terms), p.n)
    assert star_w(p, q) == WSymbol.from_terms(p.n, expected)


def test_floor_tracking_in_product():
    p = W(1, "u1").truncate(-1)  # u1 known modulo tau^-2
    q = W(1, "x1", 2)
    r = star_w(p, q)
    assert r.floor == -1
    assert r.agrees_with(star_w(W(1, "u1"), q))


def test_lower_discards_terms():
    r = star_w(W(1, "u1", 2), W(1, "x1", 2), lower=-1)
    assert r.floor == -1
    assert (-2, (0, 0)) not in r.terms


def test_mismatched_variable_counts():
    with pytest.raises(ValueError):
        star_w(W(1, "x1"), W(2, "x1"))


# -- transposition ------------------------------------------------------------


def test_transpose_fixes_generators_and_flips_tau():
    assert transpose_w(W(1, "x1")) == W(1, "x1")
    assert transpose_w(W(1, "u1")) == W(1, "u1")
    assert transpose_w(WSymbol.tau(1)) == WSymbol.tau(1, 1, -1)


def test_transpose_of_xu():
    # t(x u) = u o x = x u + tau^-1
    assert str(transpose_w(W(1, "x1") * W(1, "u1"))) == "x1*u1 + tau^-1"


@settings(max_examples=80, deadline=None)
@given(w_symbols(max_deg=3))
def test_transpose_w_matches_word_reversal_oracle(p):
    assert transpose_w(p) == WSymbol.from_terms(p.n, weyl_transpose(dict(p.terms), p.n))


@settings(max_examples=60, deadline=None)
@given(w_pairs(max_deg=3))
def test_transpose_w_is_an_involutive_anti_automorphism(pq):
    p, q = pq
    assert transpose_w(transpose_w(p)) == p
    assert transpose_w(star_w(p, q)) == star_w(transpose_w(q), transpose_w(p))


def test_transpose_e_on_first_order_operator():
    # t(x d) = -d o x = -x d - 1
    assert str(transpose_e(E(1, "x1") * E(1, "xi1"))) == "-x1*xi1 - 1"


@settings(max_examples=60, deadline=None)
@given(e_pairs())
def test_transpose_e_is_an_involutive_anti_automorphism(pq):
    p, q = pq
    assert transpose_e(transpose_e(p)) == p
    assert transpose_e(star_e(p, q)) == star_e(transpose_e(q), transpose_e(p))


@settings(max_examples=60, deadline=None)
@given(e_symbols(neg=False))
def test_transpose_e_matches_formal_adjoint(p):
    # the adjoint of a(x) d^b is (-d)^b o a(x)
    n = p.n
    expected = ESymbol.from_terms(n, {})
    for (j, e), c in p.terms.items():
        xs = ESymbol.from_terms(n, {(0, tuple(e[:n]) + (0,) * n): Scalar(1)})
        ds = ESymbol.from_terms(n, {(j, (0,) * n + tuple(e[n:])): c * (-1) ** j})
        expected = expected + star_e(ds, xs)
    assert transpose_e(p) == expected


# -- E product ----------------------------------------------------------------


def test_e_products():
    assert str(star_e(E(1, "xi1"), E(1, "x1"))) == "x1*xi1 + 1"
    assert str(star_e(E(1, "xi1", 2), E(1, "x1"))) == "x1*xi1^2 + 2*xi1"
    assert str(star_e(E(1, "xi1", -1), E(1, "x1"))) == "x1*xi1^-1 - xi1^-2"


def test_xi_inverse_is_a_two_sided_inverse():
    one = ESymbol.const(1)
    assert star_e(E(1, "xi1", -1), E(1, "xi1")) == one
    assert star_e(E(1, "xi1"), E(1, "xi1", -1)) == one


@settings(max_examples=60, deadline=None)
@given(e_pairs(neg=False), st.dictionaries(st.tuples(st.integers(0, 4), st.integers(0, 4)),
                                           st.integers(-3, 3), max_size=3))
def test_star_e_matches_operator_composition(pq, f):
    p, q = pq
    n = p.n
    poly = {k[:n] + (0,) * (n - len(k[:n])): Scalar(v) for k, v in f.items() if v}
    lhs = diff_apply(dict(star_e(p, q).terms), poly, n)
    rhs = diff_apply(dict(p.terms), diff_apply(dict(q.terms), poly, n), n)
    assert lhs == rhs


def test_commutator_e():
    assert commutator_e(E(1, "xi1"), E(1, "x1")) == ESymbol.const(1)


# -- action on O^tau ----------------------------------------------------------


def test_action_of_u_is_tau_inverse_derivative():
    f = OTauElement(W(1, "x1", 3))
    assert apply_otau(W(1, "u1"), f) == OTauElement(W(1, "x1", 2).shift(-1).scale(3))


def test_action_requires_u_free_section():
    with pytest.raises(ValueError):
        OTauElement(W(1, "u1"))


@settings(max_examples=60, deadline=None)
@given(w_pairs(max_deg=3), st.lists(st.tuples(st.integers(0, 4), st.integers(-2, 2)), max_size=3))
def test_action_is_a_module_structure(pq, mons):
    p, q = pq
    n = p.n
    f = OTauElement(WSymbol.from_terms(n, {(j, (a,) + (0,) * (2 * n - 1)): Scalar(1) for a, j in mons}))
    assert apply_otau(star_w(p, q), f) == apply_otau(p, apply_otau(q, f))


# -- E to W -------------------------------------------------------------------


def test_e_to_w_substitutes_tau_u():
    assert str(e_to_w(star_e(E(1, "xi1"), E(1, "x1")))) == "x1*u1*tau + 1"


def test_e_to_w_with_t_pair_maps_tau_to_tau():
    s = E(2, "x1", has_t=True) * E(2, "xi2", has_t=True)
    assert e_to_w(s) == W(1, "x1").shift(1)


def test_e_to_w_rejects_t_dependence_and_negative_powers():
    with pytest.raises(NonReducible):
        e_to_w(E(2, "x2", has_t=True))
    with pytest.raises(NonReducible):
        e_to_w(E(1, "xi1", -1))


@settings(max_examples=60, deadline=None)
@given(e_pairs(neg=False))
def test_e_to_w_is_a_homomorphism(pq):
    p, q = pq
    assert e_to_w(star_e(p, q)) == star_w(e_to_w(p), e_to_w(q))


# -- inverses and automorphisms ----------------------------------------------


def test_star_inverse_of_unit():
    a = WSymbol.const(1, 1) + W(1, "x1").shift(-1)
    inv = star_inverse(a, 3)
    assert inv.floor == -3
    assert star_w(a, inv).agrees_with(WSymbol.const(1, 1))
    assert star_w(inv, a).agrees_with(WSymbol.const(1, 1))


def test_star_inverse_of_tau_monomial_is_exact():
    inv = star_inverse(WSymbol.tau(1, 2, 4), 5)
    assert inv.exact and inv == WSymbol.tau(1, -2, Fraction(1, 4))


def test_star_inverse_needs_constant_top():
    with pytest.raises(NotInvertible):
        star_inverse(W(1, "x1"), 3)
    with pytest.raises(NotInvertible):
        star_inverse(WSymbol.from_terms(1, {}), 3)


@settings(max_examples=30, deadline=None)
@given(w_symbols(n=1, max_deg=2, tau=(-3, -1)), st.sampled_from([1, 2, -3, Fraction(1, 2)]),
       st.integers(1, 5))
def test_star_inverse_is_two_sided(r, c, depth):
    a = WSymbol.const(1, c) + r
    inv = star_inverse(a, depth)
    one = WSymbol.const(1, 1)
    assert star_w(a, inv).agrees_with(one)
    assert star_w(inv, a).agrees_with(one)


def test_affine_lift_shift():
    g = AffineLift([[1]], [1])
    assert str(g(W(1, "x1") * W(1, "u1"))) == "x1*u1 + u1"
    assert g.inverse()(g(W(1, "x1", 2))) == W(1, "x1", 2)


def test_affine_lift_contragredient_on_u():
    g = AffineLift([[2, 0], [0, 1]])
    assert g(W(2, "u1")) == W(2, "u1").scale(Fraction(1, 2))


@settings(max_examples=40, deadline=None)
@given(w_pairs(max_deg=2), st.integers(-2, 2), st.integers(1, 3))
def test_affine_lift_is_multiplicative(pq, shift, scale):
    p, q = pq
    n = p.n
    A = [[scale if i == j else (1 if j == i + 1 else 0) for j in range(n)] for i in range(n)]
    g = AffineLift(A, [shift] * n)
    assert g(star_w(p, q)) == star_w(g(p), g(q))


def test_inner_conjugation_of_u():
    a = WSymbol.const(1, 1) + W(1, "x1").shift(-1)
    got = InnerAd(a, 4)(W(1, "u1"))
    assert str(got) == "u1 - tau^-2 + x1*tau^-3 - x1^2*tau^-4 (floor: -4)"


def test_automorphism_composition_order():
    shift = WAutomorphism.affine([[1]], [1])
    scale = WAutomorphism.affine([[2]])
    x = W(1, "x1")
    # after(other) applies other first
    assert shift.after(scale)(x) == shift(scale(x))
    assert scale.after(shift)(x) == scale(shift(x))
    assert shift.after(scale)(x) != scale.after(shift)(x)
    assert WAutomorphism.identity()(x) == x
