"""Random generators shared by the property tests.

``rand_*`` functions take a seeded :class:`random.Random` (used by the
fixed-count acceptance suite); the hypothesis strategies wrap the same
shapes for shrinking-friendly unit tests.
"""
from __future__ import annotations

import itertools
import random
from fractions import Fraction

from hypothesis import strategies as st

from dqcalc import ESymbol, LaurentScalar, Nerve, Scalar, WSymbol

# --------------------------------------------------------------------------
# seeded generators


def rand_scalar(rng: random.Random, complex_: bool = True) -> Scalar:
    re = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
    im = Fraction(rng.randint(-3, 3), rng.randint(1, 3)) if complex_ and rng.random() < 0.3 else 0
    if not re and not im:
        re = Fraction(1)
    return Scalar(re, im)


def rand_w(rng, n, max_terms=3, max_deg=4, tau_range=(-3, 3)) -> WSymbol:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        e = tuple(rng.randint(0, max_deg) for _ in range(2 * n))
        terms[(rng.randint(*tau_range), e)] = rand_scalar(rng)
    return WSymbol.from_terms(n, terms)


def rand_e(rng, n, max_terms=3, max_deg=3, neg=True) -> ESymbol:
    """Homogeneous terms: a term stored at degree j has fiber degree j."""
    terms = {}
    lo = -2 if neg else 0
    for _ in range(rng.randint(1, max_terms)):
        xs = tuple(rng.randint(0, max_deg) for _ in range(n))
        fs = tuple(rng.randint(lo, max_deg) for _ in range(n))
        terms[(sum(fs), xs + fs)] = rand_scalar(rng)
    return ESymbol.from_terms(n, terms)


def rand_otau(rng, n, max_terms=3, max_deg=4) -> WSymbol:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        e = tuple(rng.randint(0, max_deg) for _ in range(n)) + (0,) * n
        terms[(rng.randint(-3, 3), e)] = rand_scalar(rng)
    return WSymbol.from_terms(n, terms)


def rand_unit(rng, n, max_deg=2, lower_terms=2) -> WSymbol:
    """Invertible symbol: nonzero constant top plus lower-order terms."""
    terms = {(0, (0,) * (2 * n)): Scalar(rng.choice([1, 2, 3, -1, Fraction(1, 2)]))}
    for _ in range(lower_terms):
        e = tuple(rng.randint(0, max_deg) for _ in range(2 * n))
        c = rng.randint(-3, 3)
        if c:
            terms[(rng.randint(-2, -1), e)] = Scalar(c)
    return WSymbol.from_terms(n, terms)


def rand_nerve(rng, max_indices=5) -> Nerve:
    """Random face-closed nerve: random triples and quads plus their faces."""
    k = rng.randint(3, max_indices)
    triples = [t for t in itertools.combinations(range(k), 3) if rng.random() < 0.6]
    quads = [q for q in itertools.combinations(range(k), 4)
             if all(t in triples for t in itertools.combinations(q, 3)) and rng.random() < 0.7]
    pairs = {p for t in triples for p in itertools.combinations(t, 2)}
    pairs |= {p for p in itertools.combinations(range(k), 2) if rng.random() < 0.3}
    return Nerve(k, list(pairs) + triples + quads)


# --------------------------------------------------------------------------
# hypothesis strategies

small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def scalars(draw, allow_zero=False):
    re = draw(small_fractions)
    im = draw(st.one_of(st.just(Fraction(0)), small_fractions))
    s = Scalar(re, im)
    if not allow_zero and not s:
        s = Scalar(1)
    return s


@st.composite
def laurents(draw, lo=-6, hi=3, exact=True):
    keys = draw(st.lists(st.integers(lo, hi), min_size=0, max_size=4, unique=True))
    coeffs = {k: draw(scalars()) for k in keys}
    floor = None if exact else draw(st.integers(lo - 3, lo))
    return LaurentScalar(coeffs, floor)


@st.composite
def w_symbols(draw, n=None, max_terms=3, max_deg=3, tau=(-3, 3)):
    n = n or draw(st.integers(1, 2))
    size = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(size):
        e = tuple(draw(st.integers(0, max_deg)) for _ in range(2 * n))
        terms[(draw(st.integers(*tau)), e)] = draw(scalars())
    return WSymbol.from_terms(n, terms)


@st.composite
def e_symbols(draw, n=None, max_terms=3, max_deg=3, neg=True):
    n = n or draw(st.integers(1, 2))
    size = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(size):
        xs = tuple(draw(st.integers(0, max_deg)) for _ in range(n))
        fs = tuple(draw(st.integers(-2 if neg else 0, max_deg)) for _ in range(n))
        terms[(sum(fs), xs + fs)] = draw(scalars())
    return ESymbol.from_terms(n, terms)


@st.composite
def w_pairs(draw, k=2, **kw):
    n = draw(st.integers(1, 2))
    return tuple(draw(w_symbols(n=n, **kw)) for _ in range(k))


@st.composite
def e_pairs(draw, k=2, **kw):
    n = draw(st.integers(1, 2))
    return tuple(draw(e_symbols(n=n, **kw)) for _ in range(k))
