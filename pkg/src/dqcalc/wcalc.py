"""Star products, transpositions and automorphisms of total symbols.

Symbols are normal ordered: in a monomial ``x^a u^b tau^j`` the base
variables stand to the left of the derivatives, with ``u_i`` acting as
``tau^{-1} d/dx_i``.  Composition of normal-ordered symbols is the
bidifferential sum

    P o Q = sum_alpha tau^{-|alpha|} / alpha!  d_u^alpha P  d_x^alpha Q

and the E-calculus uses the same sum with ``xi`` in place of ``u`` and no
power of ``tau``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from fractions import Fraction
from math import comb, factorial, lcm

from . import _linalg as la
from .errors import NonReducible, NotInvertible
from .scalars import ZERO, Scalar, as_scalar, product_floor
from .symbols import ESymbol, Poly, WSymbol, falling

__all__ = [
    "star_w",
    "star_e",
    "transpose_w",
    "transpose_e",
    "commutator",
    "commutator_e",
    "OTauElement",
    "apply_otau",
    "e_to_w",
    "star_inverse",
    "AffineLift",
    "InnerAd",
    "WAutomorphism",
    "apply_automorphism",
]


def _gbinom(e: int, k: int) -> int:
    """Generalized binomial ``e choose k`` for any integer ``e``."""
    return falling(e, k) // factorial(k)


def _alphas(bounds, kmax=None):
    """Multi-indices ``0 <= alpha <= bounds``, with ``|alpha| <= kmax`` if given."""
    if kmax is None or kmax >= sum(bounds):
        return product(*(range(b + 1) for b in bounds))
    return _capped(bounds, 0, kmax)


def _capped(bounds, pos, budget):
    if pos == len(bounds):
        yield ()
        return
    for a in range(min(bounds[pos], budget) + 1):
        for rest in _capped(bounds, pos + 1, budget - a):
            yield (a,) + rest


def _lift(terms):
    """Scale coefficients to Gaussian integers: ``(D, {key: (re, im)})``."""
    D = 1
    for c in terms.values():
        D = lcm(D, c.re.denominator, c.im.denominator)
    return D, {k: (c.re.numerator * (D // c.re.denominator), c.im.numerator * (D // c.im.denominator))
               for k, c in terms.items()}


def _lower(acc, D):
    out = {}
    for k, (a, b) in acc.items():
        if a or b:
            out[k] = Scalar._make(Fraction(a, D), Fraction(b, D))
    return out


def _gauss_into(acc, key, a, b):
    v = acc.get(key)
    acc[key] = (a, b) if v is None else (v[0] + a, v[1] + b)


def _sum_into(out, key, c):
    v = out.get(key)
    v = c if v is None else v + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


def star_w(P: WSymbol, Q: WSymbol, lower: int | None = None) -> WSymbol:
    """Star product of W-symbols.

    ``lower`` optionally discards all output degrees below it; the result
    floor is then the larger of ``lower`` and the propagated floor.
    """
    if P.n != Q.n:
        raise ValueError("symbols over different variable counts")
    n = P.n
    floor, zero = product_floor(P.floor, P.order, Q.floor, Q.order)
    if lower is not None:
        floor = lower if floor is None else max(floor, lower)
    if zero:
        return WSymbol.from_terms(n, {}, floor)
    DP, pt = _lift(P.terms)
    DQ, qt = _lift(Q.terms)
    acc: dict = {}
    for (j1, e1), (a1, b1) in pt.items():
        x1, u1 = e1[:n], e1[n:]
        for (j2, e2), (a2, b2) in qt.items():
            x2, u2 = e2[:n], e2[n:]
            kmax = None if floor is None else j1 + j2 - floor
            if kmax is not None and kmax < 0:
                continue
            cr, ci = a1 * a2 - b1 * b2, a1 * b2 + b1 * a2
            bounds = [min(a, b) for a, b in zip(u1, x2)]
            for alpha in _alphas(bounds, kmax):
                k = sum(alpha)
                deg = j1 + j2 - k
                if floor is not None and deg < floor:
                    continue
                f = 1
                for a, b, al in zip(u1, x2, alpha):
                    if al:
                        f *= comb(a, al) * comb(b, al) * factorial(al)
                e = tuple(
                    [p + q - al for p, q, al in zip(x1, x2, alpha)]
                    + [p - al + q for p, q, al in zip(u1, u2, alpha)]
                )
                _gauss_into(acc, (deg, e), cr * f, ci * f)
    return WSymbol.from_terms(n, _lower(acc, DP * DQ), floor)


def star_e(P: ESymbol, Q: ESymbol, lower: int | None = None) -> ESymbol:
    """Composition of microdifferential symbols (Leibniz rule, no tau weight).

    Negative fiber exponents are allowed; the sum over ``alpha`` is finite
    because it is bounded by the base-variable degrees of ``Q``.
    """
    if P.n != Q.n:
        raise ValueError("symbols over different variable counts")
    n = P.n
    floor, zero = product_floor(P.floor, P.order, Q.floor, Q.order)
    if lower is not None:
        floor = lower if floor is None else max(floor, lower)
    has_t = P.has_t or Q.has_t
    if zero:
        return ESymbol.from_terms(n, {}, floor, has_t=has_t)
    DP, pt = _lift(P.terms)
    DQ, qt = _lift(Q.terms)
    acc: dict = {}
    for (j1, e1), (a1, b1) in pt.items():
        x1, f1 = e1[:n], e1[n:]
        for (j2, e2), (a2, b2) in qt.items():
            x2, f2 = e2[:n], e2[n:]
            kmax = None if floor is None else j1 + j2 - floor
            if kmax is not None and kmax < 0:
                continue
            cr, ci = a1 * a2 - b1 * b2, a1 * b2 + b1 * a2
            bounds = [min(a, b) if a >= 0 else b for a, b in zip(f1, x2)]
            for alpha in _alphas(bounds, kmax):
                k = sum(alpha)
                deg = j1 + j2 - k
                if floor is not None and deg < floor:
                    continue
                f = 1
                for a, b, al in zip(f1, x2, alpha):
                    if al:
                        f *= _gbinom(a, al) * falling(b, al)
                if not f:
                    continue
                e = tuple(
                    [p + q - al for p, q, al in zip(x1, x2, alpha)]
                    + [p - al + q for p, q, al in zip(f1, f2, alpha)]
                )
                _gauss_into(acc, (deg, e), cr * f, ci * f)
    return ESymbol.from_terms(n, _lower(acc, DP * DQ), floor, has_t=has_t)


def transpose_w(P: WSymbol) -> WSymbol:
    """Transposition: the anti-automorphism fixing ``x``, ``u`` with ``tau -> -tau``.

    On normal-ordered symbols it reads
    ``sum_alpha tau^{-|alpha|}/alpha! d_u^alpha d_x^alpha sigma(x; u, -tau)``.
    """
    n = P.n
    out: dict = {}
    for (j, e), c in P.terms.items():
        xs, us = e[:n], e[n:]
        c = -c if j % 2 else c
        for alpha in _alphas([min(a, b) for a, b in zip(xs, us)]):
            k = sum(alpha)
            if P.floor is not None and j - k < P.floor:
                continue
            f = 1
            for a, b, al in zip(xs, us, alpha):
                if al:
                    f *= comb(a, al) * falling(b, al)
            ne = tuple([a - al for a, al in zip(xs, alpha)] + [b - al for b, al in zip(us, alpha)])
            _sum_into(out, (j - k, ne), c * f if f != 1 else c)
    return WSymbol.from_terms(n, out, P.floor)


def transpose_e(P: ESymbol) -> ESymbol:
    """``sum_alpha (-1)^|alpha|/alpha! (d_xi^alpha d_x^alpha sigma)(x; -xi)``."""
    n = P.n
    out: dict = {}
    for (j, e), c in P.terms.items():
        xs, fs = e[:n], e[n:]
        if sum(fs) % 2:
            c = -c
        bounds = [min(a, b) if b >= 0 else a for a, b in zip(xs, fs)]
        for alpha in _alphas(bounds):
            k = sum(alpha)
            if P.floor is not None and j - k < P.floor:
                continue
            f = 1
            for a, b, al in zip(xs, fs, alpha):
                if al:
                    f *= comb(a, al) * falling(b, al)
            if not f:
                continue
            ne = tuple([a - al for a, al in zip(xs, alpha)] + [b - al for b, al in zip(fs, alpha)])
            _sum_into(out, (j - k, ne), c * f if f != 1 else c)
    return ESymbol.from_terms(n, out, P.floor, has_t=P.has_t)


def commutator(P: WSymbol, Q: WSymbol) -> WSymbol:
    return star_w(P, Q) - star_w(Q, P)


def commutator_e(P: ESymbol, Q: ESymbol) -> ESymbol:
    return star_e(P, Q) - star_e(Q, P)


class OTauElement:
    """A section ``f(x, tau) = sum_j f_j(x) tau^j`` of the module O^tau."""

    __slots__ = ("value",)

    def __init__(self, value: WSymbol):
        if not value.u_free():
            raise ValueError("O^tau elements cannot depend on u")
        self.value = value

    @classmethod
    def one(cls, n: int) -> "OTauElement":
        return cls(WSymbol.const(n, 1))

    @property
    def n(self) -> int:
        return self.value.n

    @property
    def floor(self):
        return self.value.floor

    def __eq__(self, other):
        if not isinstance(other, OTauElement):
            return NotImplemented
        return self.value == other.value

    def __hash__(self):
        return hash(self.value)

    def __str__(self):
        return str(self.value)

    def __repr__(self):
        return f"OTauElement({str(self)!r})"


def apply_otau(P: WSymbol, f: OTauElement) -> OTauElement:
    """Act by ``x^b u^a tau^j : g -> tau^(j-|a|) x^b d_x^a g``."""
    if P.n != f.n:
        raise ValueError("operator and section over different variable counts")
    n = P.n
    F = f.value
    floor, zero = product_floor(P.floor, P.order, F.floor, F.order)
    if zero:
        return OTauElement(WSymbol.from_terms(n, {}, floor))
    out: dict = {}
    for (j, e), c in P.terms.items():
        xs, us = e[:n], e[n:]
        k = sum(us)
        for (i, g), d in F.terms.items():
            deg = j + i - k
            if floor is not None and deg < floor:
                continue
            gx = g[:n]
            fac = 1
            for a, b in zip(gx, us):
                fac *= falling(a, b)
                if not fac:
                    break
            if not fac:
                continue
            ne = tuple([p + q - r for p, q, r in zip(xs, gx, us)] + [0] * n)
            _sum_into(out, (deg, ne), c * d * fac)
    return OTauElement(WSymbol.from_terms(n, out, floor))


def e_to_w(P: ESymbol) -> WSymbol:
    """Reduce a ``t``-independent E-symbol on ``X x C`` to a W-symbol on ``X``.

    Substitutes ``xi = tau*u`` and the fiber of ``t`` by ``tau``, so that the
    degree-``j`` component becomes ``tau^j p_j(x; u, 1)``.  When ``P`` has
    no ``t`` pair the fiber of ``t`` is taken to be absent.
    """
    if P.has_t:
        n = P.n - 1
        if any(e[n] for _, e in P.terms):
            raise NonReducible("symbol depends on t")
    else:
        n = P.n
    out: dict = {}
    nE = P.n
    for (j, e), c in P.terms.items():
        xs = e[:n]
        fs = e[nE:nE + n]
        if any(v < 0 for v in fs):
            raise NonReducible(f"negative xi exponent in degree {j} is not polynomial in u")
        deg = sum(e[nE:])
        if deg != j:
            raise NonReducible(f"degree-{j} component is not homogeneous")
        _sum_into(out, (j, tuple(xs) + tuple(fs)), c)
    return WSymbol.from_terms(n, out, P.floor)


def star_inverse(a: WSymbol, depth: int) -> WSymbol:
    """Star inverse of ``a`` to ``depth`` orders below its leading term.

    ``a`` must have a nonzero constant as its top component; the inverse is
    then ``c^-1 tau^-m sum_k (-r)^k`` with ``r`` of negative order.
    """
    if depth < 1:
        raise ValueError("depth must be positive")
    _require_invertible(a)
    n = a.n
    m = a.order
    zero = (0,) * (2 * n)
    c_inv = a.terms[(m, zero)].inverse()
    rest = {k: v for k, v in a.terms.items() if k[0] != m}
    if not rest and a.exact:
        return WSymbol.tau(n, -m, c_inv)
    floor = -m - depth
    if a.floor is not None:
        floor = max(floor, a.floor - 2 * m)
    rel = floor + m
    # -r, normalized so the leading part is 1
    neg_r = WSymbol.from_terms(n, {(j - m, e): -v * c_inv for (j, e), v in rest.items()})
    total = WSymbol.const(n, 1)
    power = total
    for _ in range(depth):
        power = star_w(power, neg_r, lower=rel)
        if power.is_zero():
            break
        total = total + power
    total = total.truncate(rel)
    return total.shift(-m).scale(c_inv)


def _require_invertible(a: WSymbol):
    if a.is_zero():
        raise NotInvertible("zero symbol is not invertible")
    m = a.order
    top = [e for (j, e) in a.terms if j == m]
    if len(top) != 1 or any(top[0]):
        raise NotInvertible(
            "star inverse needs a nonzero constant top component "
            f"(top component at degree {m} is {a.component(m)})"
        )


@dataclass(frozen=True)
class AffineLift:
    """The automorphism ``x -> A x + b``, ``u -> (A^T)^-1 u``."""

    A: tuple
    b: tuple

    def __init__(self, A, b=None):
        A = tuple(tuple(as_scalar(v) for v in row) for row in A)
        n = len(A)
        if any(len(row) != n for row in A):
            raise ValueError("A must be square")
        if b is None:
            b = (ZERO,) * n
        b = tuple(as_scalar(v) for v in b)
        if len(b) != n:
            raise ValueError("b has the wrong length")
        if la.rank([list(r) for r in A]) != n:
            raise NotInvertible("affine lift needs an invertible matrix")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @property
    def n(self) -> int:
        return len(self.A)

    def __call__(self, P: WSymbol) -> WSymbol:
        n = self.n
        if P.n != n:
            raise ValueError("automorphism and symbol over different variable counts")
        A = [list(r) for r in self.A]
        Ainv_T = la.transpose(la.inverse(A))
        images = []
        for i in range(n):
            terms = {}
            for k in range(n):
                if A[i][k]:
                    e = [0] * (2 * n)
                    e[k] = 1
                    terms[tuple(e)] = A[i][k]
            if self.b[i]:
                terms[(0,) * (2 * n)] = self.b[i]
            images.append(Poly(n, terms))
        for i in range(n):
            terms = {}
            for k in range(n):
                if Ainv_T[i][k]:
                    e = [0] * (2 * n)
                    e[n + k] = 1
                    terms[tuple(e)] = Ainv_T[i][k]
            images.append(Poly(n, terms))
        powers: dict = {}

        def pw(v, k):
            key = (v, k)
            if key not in powers:
                powers[key] = images[v] ** k
            return powers[key]

        out: dict = {}
        one = Poly.const(n, 1)
        for (j, e), c in P.terms.items():
            p = one
            for v, k in enumerate(e):
                if k:
                    p = p * pw(v, k)
            for pe, pc in p.terms.items():
                _sum_into(out, (j, pe), pc * c)
        return WSymbol.from_terms(n, out, P.floor)

    def inverse(self) -> "AffineLift":
        A = [list(r) for r in self.A]
        Ai = la.inverse(A)
        return AffineLift(Ai, [-v for v in la.matvec(Ai, list(self.b))])


@dataclass(frozen=True)
class InnerAd:
    """Conjugation ``P -> a o P o a^-1`` with the inverse taken to ``depth`` orders."""

    a: WSymbol
    depth: int
    a_inv: WSymbol = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _require_invertible(self.a)
        object.__setattr__(self, "a_inv", star_inverse(self.a, self.depth))

    @property
    def n(self) -> int:
        return self.a.n

    def __call__(self, P: WSymbol) -> WSymbol:
        return star_w(star_w(self.a, P), self.a_inv)


@dataclass(frozen=True)
class WAutomorphism:
    """Composite automorphism; ``steps`` are applied left to right."""

    steps: tuple = ()

    def __init__(self, steps=()):
        object.__setattr__(self, "steps", tuple(steps))

    @classmethod
    def identity(cls) -> "WAutomorphism":
        return cls(())

    @classmethod
    def ad(cls, a: WSymbol, depth: int) -> "WAutomorphism":
        return cls((InnerAd(a, depth),))

    @classmethod
    def affine(cls, A, b=None) -> "WAutomorphism":
        return cls((AffineLift(A, b),))

    def __call__(self, P: WSymbol) -> WSymbol:
        for step in self.steps:
            P = step(P)
        return P

    def after(self, other: "WAutomorphism") -> "WAutomorphism":
        """The composite ``self o other`` (apply ``other`` first)."""
        return WAutomorphism(other.steps + self.steps)

    def is_identity(self) -> bool:
        return not self.steps


def apply_automorphism(g: WAutomorphism, P: WSymbol) -> WSymbol:
    return g(P)
