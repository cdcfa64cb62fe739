"""Star powers, star exponentials and resolvents.

``TWElement`` is a polynomial in the central parameter ``t`` with W-symbol
coefficients, known up to ``t^t_floor``.  ``SSeries`` is the principal part
at ``s = oo`` of a W-valued function of ``s``: ``coeffs[k]`` multiplies
``s^(-k-1)``.  The Laplace correspondence sends ``s^(-n-1)`` to
``(t tau)^n / n!``.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

from .errors import OrderTooHigh
from .scalars import render_sum
from .symbols import WSymbol
from .wcalc import star_w

__all__ = [
    "TWElement",
    "SSeries",
    "star_power",
    "star_exp",
    "resolvent",
    "laplace",
    "res",
    "iota",
    "tw_two_parameter_product",
    "tw_shift",
    "s_linear_times",
]


def _clean(coeffs):
    return {int(k): v for k, v in sorted(coeffs.items()) if not v.is_zero() or v.floor is not None}


class TWElement:
    __slots__ = ("n", "coeffs", "t_floor")

    def __init__(self, n: int, coeffs=None, t_floor: int | None = None):
        coeffs = _clean(coeffs or {})
        if any(k < 0 for k in coeffs):
            raise ValueError("t-degrees must be non-negative")
        if t_floor is not None:
            coeffs = {k: v for k, v in coeffs.items() if k <= t_floor}
        self.n = n
        self.coeffs = coeffs
        self.t_floor = t_floor

    def __getitem__(self, d: int) -> WSymbol:
        return self.coeffs.get(d, WSymbol.from_terms(self.n, {}))

    def __eq__(self, other):
        if not isinstance(other, TWElement):
            return NotImplemented
        return (self.n, self.t_floor, self.coeffs) == (other.n, other.t_floor, other.coeffs)

    def __hash__(self):
        return hash((self.n, self.t_floor, frozenset(self.coeffs.items())))

    def render_terms(self):
        out = []
        for d, sym in sorted(self.coeffs.items()):
            tpart = "" if d == 0 else ("t" if d == 1 else f"t^{d}")
            for c, mono in sym.render_terms():
                out.append((c, "*".join(p for p in (mono, tpart) if p)))
        return out

    def __str__(self):
        text = render_sum(self.render_terms())
        floors = sorted({s.floor for s in self.coeffs.values() if s.floor is not None})
        if floors:
            text += f" (floor: {max(floors)})"
        return text

    def __repr__(self):
        return f"TWElement({self.n}, {str(self)!r})"


class SSeries:
    __slots__ = ("n", "coeffs", "s_floor")

    def __init__(self, n: int, coeffs=None, s_floor: int | None = None):
        coeffs = _clean(coeffs or {})
        if any(k < 0 for k in coeffs):
            raise ValueError("SSeries indices must be non-negative")
        if s_floor is not None:
            coeffs = {k: v for k, v in coeffs.items() if k <= s_floor}
        self.n = n
        self.coeffs = coeffs
        self.s_floor = s_floor

    def __getitem__(self, k: int) -> WSymbol:
        return self.coeffs.get(k, WSymbol.from_terms(self.n, {}))

    def __eq__(self, other):
        if not isinstance(other, SSeries):
            return NotImplemented
        return (self.n, self.s_floor, self.coeffs) == (other.n, other.s_floor, other.coeffs)

    def __hash__(self):
        return hash((self.n, self.s_floor, frozenset(self.coeffs.items())))

    def render_terms(self):
        out = []
        for k, sym in sorted(self.coeffs.items()):
            spart = f"s^{-k - 1}"
            for c, mono in sym.render_terms():
                out.append((c, "*".join(p for p in (mono, spart) if p)))
        return out

    def __str__(self):
        text = render_sum(self.render_terms())
        floors = sorted({s.floor for s in self.coeffs.values() if s.floor is not None})
        if floors:
            text += f" (floor: {max(floors)})"
        return text

    def __repr__(self):
        return f"SSeries({self.n}, {str(self)!r})"


def star_power(P: WSymbol, k: int) -> WSymbol:
    if k < 0:
        raise ValueError("star_power needs a non-negative exponent")
    out = WSymbol.const(P.n, 1)
    for _ in range(k):
        out = star_w(out, P)
    return out


def _check_order(P: WSymbol):
    if P.order is not None and P.order > 0:
        raise OrderTooHigh(f"needs order <= 0, got order {P.order}")


def star_exp(P: WSymbol, t_depth: int) -> TWElement:
    """``exp(t tau P) = sum_d t^d tau^d P^d / d!`` up to ``t^t_depth``."""
    if t_depth < 1:
        raise ValueError("t_depth must be positive")
    _check_order(P)
    coeffs = {}
    power = WSymbol.const(P.n, 1)
    for d in range(t_depth + 1):
        if d:
            power = star_w(power, P)
        coeffs[d] = power.shift(d).scale(Fraction(1, factorial(d)))
    return TWElement(P.n, coeffs, t_depth)


def resolvent(P: WSymbol, s_depth: int) -> SSeries:
    """Principal part of ``1/(s - P) = sum_k P^k s^(-k-1)`` up to ``k = s_depth``."""
    if s_depth < 1:
        raise ValueError("s_depth must be positive")
    _check_order(P)
    coeffs = {}
    power = WSymbol.const(P.n, 1)
    for k in range(s_depth + 1):
        if k:
            power = star_w(power, P)
        coeffs[k] = power
    return SSeries(P.n, coeffs, s_depth)


def laplace(F: SSeries) -> TWElement:
    return TWElement(
        F.n,
        {d: c.shift(d).scale(Fraction(1, factorial(d))) for d, c in F.coeffs.items()},
        F.s_floor,
    )


def res(F: TWElement) -> WSymbol:
    """Evaluation at ``t = 0``."""
    return F[0]


def iota(P: WSymbol) -> TWElement:
    return TWElement(P.n, {0: P}, None)


def tw_two_parameter_product(F: TWElement, G: TWElement, max_degree: int) -> dict:
    """``F(t) o G(t')`` as ``{(a, b): coefficient of t^a t'^b}`` for ``a+b <= max_degree``."""
    out = {}
    for a, fa in F.coeffs.items():
        for b, gb in G.coeffs.items():
            if a + b <= max_degree:
                v = star_w(fa, gb)
                if not v.is_zero():
                    out[(a, b)] = v
    return out


def tw_shift(F: TWElement, max_degree: int) -> dict:
    """``F(t + t')`` expanded as ``{(a, b): coefficient of t^a t'^b}``."""
    out = {}
    for d, fd in F.coeffs.items():
        if d > max_degree:
            continue
        for a in range(d + 1):
            v = fd.scale(comb(d, a))
            if not v.is_zero():
                out[(a, d - a)] = v
    return out


def s_linear_times(P: WSymbol, F: SSeries) -> dict:
    """``(s - P) o F`` as ``{power of s: coefficient}`` (s is central).

    Only powers ``s^-k`` with ``k <= F.s_floor`` are fully determined.
    """
    out = {}
    top = F.s_floor if F.s_floor is not None else max(F.coeffs, default=0)
    for k in range(top + 1):
        # s * s^(-k-1) contributes to s^(-k); -P o F_k to s^(-k-1)
        v = F[k]
        if k:
            v = v - star_w(P, F[k - 1])
        if not v.is_zero():
            out[-k] = v
    return out
