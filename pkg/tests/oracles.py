"""Independent reference implementations used to freeze expected values.

None of these share code paths with the library's product formulas:
normal ordering is done by literal rewriting of words in the generators,
coboundaries by exhaustive enumeration.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

# --------------------------------------------------------------------------
# Weyl algebra by rewriting
#
# A word is a tuple of letters ("x", i) / ("u", i).  Normal order puts every
# x to the left of every u.  The only nontrivial swap is u_i x_i = x_i u_i + h
# with h = tau^-1; all other adjacent letters commute.


@lru_cache(maxsize=None)
def normal_order(word):
    """Return ``{(h_power, x_exps, u_exps): int}`` for a word of letters."""
    for pos in range(len(word) - 1):
        (a, i), (b, j) = word[pos], word[pos + 1]
        if a == "u" and b == "x":
            swapped = word[:pos] + (word[pos + 1], word[pos]) + word[pos + 2:]
            out = dict(normal_order(swapped))
            if i == j:
                for (h, xs, us), c in normal_order(word[:pos] + word[pos + 2:]).items():
                    key = (h + 1, xs, us)
                    out[key] = out.get(key, 0) + c
            return {k: v for k, v in out.items() if v}
    n = 1 + max((i for _, i in word), default=0)
    xs = [0] * n
    us = [0] * n
    for a, i in word:
        (xs if a == "x" else us)[i] += 1
    return {(0, tuple(xs), tuple(us)): 1}


def monomial_word(xs, us):
    return tuple(("x", i) for i, e in enumerate(xs) for _ in range(e)) + tuple(
        ("u", i) for i, e in enumerate(us) for _ in range(e)
    )


def _pad(t, n):
    return tuple(t) + (0,) * (n - len(t))


def word_to_terms(word, n, coeff=1, tau_shift=0):
    out = {}
    for (h, xs, us), c in normal_order(word).items():
        key = (tau_shift - h, _pad(xs, n) + _pad(us, n))
        out[key] = out.get(key, 0) + coeff * c
    return out


def weyl_product(p_terms, q_terms, n):
    """Product of ``{(tau_deg, exps): coeff}`` dicts by rewriting words."""
    out = {}
    for (j1, e1), c1 in p_terms.items():
        for (j2, e2), c2 in q_terms.items():
            w = monomial_word(e1[:n], e1[n:]) + monomial_word(e2[:n], e2[n:])
            for k, v in word_to_terms(w, n, c1 * c2, j1 + j2).items():
                out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v}


def weyl_transpose(p_terms, n):
    """``t(tau^j x^a u^b) = (-tau)^j u^b x^a``, reordered by rewriting."""
    out = {}
    for (j, e), c in p_terms.items():
        w = monomial_word((0,) * n, e[n:]) + monomial_word(e[:n], (0,) * n)
        sign = -1 if j % 2 else 1
        for k, v in word_to_terms(w, n, sign * c, j).items():
            out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v}


# --------------------------------------------------------------------------
# differential operators acting on polynomials (E-calculus oracle)


def diff_apply(op_terms, poly, n):
    """Apply ``sum c x^a d^b`` (keys ``(deg, a + b)``) to ``{exps: coeff}``."""
    out = {}
    for (_, e), c in op_terms.items():
        a, b = e[:n], e[n:]
        for g, d in poly.items():
            fac = 1
            for gi, bi in zip(g, b):
                for r in range(bi):
                    fac *= gi - r
            if not fac:
                continue
            ne = tuple(gi - bi + ai for gi, bi, ai in zip(g, b, a))
            out[ne] = out.get(ne, 0) + c * d * fac
    return {k: v for k, v in out.items() if v}


# --------------------------------------------------------------------------
# Cech cohomology by brute force


def delta1(triples, b, m):
    return {(i, j, k): (b[(j, k)] - b[(i, k)] + b[(i, j)]) % m for i, j, k in triples}


def coboundaries_mod(pairs, triples, m):
    """Set of all ``db`` for 1-cochains ``b`` with values in ``Z/m``."""
    seen = set()
    for vals in itertools.product(range(m), repeat=len(pairs)):
        b = dict(zip(pairs, vals))
        d = delta1(triples, b, m)
        seen.add(tuple(d[t] for t in triples))
    return seen


def is_cocycle_mod(triples, quads, c, m):
    for i, j, k, l in quads:
        if (c[(j, k, l)] - c[(i, k, l)] + c[(i, j, l)] - c[(i, j, k)]) % m:
            return False
    return True


# --------------------------------------------------------------------------
# scalar series


def exp_coefficients(depth):
    from math import factorial

    return [Fraction(1, factorial(d)) for d in range(depth + 1)]
