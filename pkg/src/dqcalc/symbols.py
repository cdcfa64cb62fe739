"""Sparse polynomials and total-symbol containers.

A :class:`Poly` in ``n`` base variables ``x1..xn`` and ``n`` fiber variables
(``u1..un`` for W-symbols, ``xi1..xin`` for E-symbols) stores its terms as a
dict from a length-``2n`` exponent tuple (base exponents first) to a
:class:`~dqcalc.scalars.Scalar`.

Total symbols store the same data flattened: a dict keyed by
``(degree, exponents)``.  For a :class:`WSymbol` the degree is the power of
``tau``; for an :class:`ESymbol` it is the homogeneity degree in the fiber
variables, which the E-calculus keeps equal to the fiber-exponent sum.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import ZeroSymbol
from .scalars import ZERO, LaurentScalar, as_scalar, render_sum, sum_floor

__all__ = [
    "Poly",
    "WSymbol",
    "ESymbol",
    "HomogeneityReport",
    "poly_derive",
    "homogeneity_check",
    "principal_symbol",
    "falling",
]


def falling(e: int, k: int) -> int:
    """Falling factorial ``e (e-1) ... (e-k+1)``; valid for negative ``e``."""
    out = 1
    for i in range(k):
        out *= e - i
    return out


def _mono_str(exps, n, fiber, t_pair=False) -> list[str]:
    names = []
    for i in range(n):
        names.append("t" if t_pair and i == n - 1 else f"x{i + 1}")
    for i in range(n):
        names.append("tau" if t_pair and i == n - 1 else f"{fiber}{i + 1}")
    out = []
    for name, e in zip(names, exps):
        if e == 1:
            out.append(name)
        elif e:
            out.append(f"{name}^{e}")
    return out


def _order_key(exps, n):
    a, b = exps[:n], exps[n:]
    return (-sum(a), tuple(-e for e in a), -sum(b), tuple(-e for e in b))


def _parse_var(var, n: int) -> int:
    """Map ``'x2'``/``'u1'``/``'xi1'`` or an int position to a tuple index."""
    if isinstance(var, int):
        if not 0 <= var < 2 * n:
            raise ValueError(f"variable position {var} out of range")
        return var
    name = var.rstrip("0123456789")
    idx = int(var[len(name):] or 0)
    if not 1 <= idx <= n:
        raise ValueError(f"variable {var!r} out of range for n={n}")
    if name == "x":
        return idx - 1
    if name in ("u", "xi"):
        return n + idx - 1
    raise ValueError(f"unknown variable {var!r}")


class Poly:
    """Sparse polynomial in ``x1..xn`` and ``n`` fiber variables.

    With ``laurent=True`` fiber exponents may be negative.
    """

    __slots__ = ("n", "terms", "laurent")

    def __init__(self, n: int, terms=None, laurent: bool = False):
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != 2 * n:
                raise ValueError(f"exponent tuple {exps} does not have length {2 * n}")
            if any(e < 0 for e in exps[:n]) or (not laurent and any(e < 0 for e in exps[n:])):
                raise ValueError(f"negative exponent in {exps}")
            c = as_scalar(c)
            if c:
                clean[exps] = clean.get(exps, ZERO) + c
                if not clean[exps]:
                    del clean[exps]
        self.n = n
        self.terms = clean
        self.laurent = laurent

    @classmethod
    def _raw(cls, n, terms, laurent=False):
        obj = object.__new__(cls)
        obj.n, obj.terms, obj.laurent = n, terms, laurent
        return obj

    @classmethod
    def const(cls, n: int, c=1, laurent=False) -> "Poly":
        return cls(n, {(0,) * (2 * n): c}, laurent)

    @classmethod
    def var(cls, n: int, name, power: int = 1, laurent=False) -> "Poly":
        exps = [0] * (2 * n)
        exps[_parse_var(name, n)] = power
        return cls(n, {tuple(exps): 1}, laurent)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def _check(self, other):
        if other.n != self.n:
            raise ValueError("polynomials over different variable counts")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, ZERO) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Poly._raw(self.n, out, self.laurent or other.laurent)

    def __neg__(self):
        return Poly._raw(self.n, {e: -c for e, c in self.terms.items()}, self.laurent)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "Poly":
        c = as_scalar(c)
        if not c:
            return Poly._raw(self.n, {}, self.laurent)
        return Poly._raw(self.n, {e: v * c for e, v in self.terms.items()}, self.laurent)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        self._check(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, ZERO) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return Poly._raw(self.n, out, self.laurent or other.laurent)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        out = Poly.const(self.n, 1, self.laurent)
        for _ in range(k):
            out = out * self
        return out

    def derive(self, var, times: int = 1) -> "Poly":
        return poly_derive(self, var, times)

    def fiber_degrees(self) -> set[int]:
        return {sum(e[self.n:]) for e in self.terms}

    def max_exponents(self) -> tuple[int, ...]:
        m = [0] * (2 * self.n)
        for e in self.terms:
            for i, v in enumerate(e):
                if v > m[i]:
                    m[i] = v
        return tuple(m)

    def render(self, fiber: str = "u", t_pair: bool = False) -> str:
        keys = sorted(self.terms, key=lambda e: _order_key(e, self.n))
        return render_sum(
            (self.terms[e], "*".join(_mono_str(e, self.n, fiber, t_pair))) for e in keys
        )

    def __repr__(self):
        return f"Poly({self.n}, {self.render()!r})"

    __str__ = render


def poly_derive(p: Poly, var, times: int = 1) -> Poly:
    """Iterated partial derivative; negative exponents follow the power rule."""
    if times < 0:
        raise ValueError("times must be non-negative")
    k = _parse_var(var, p.n)
    if times == 0:
        return p
    out = {}
    for e, c in p.terms.items():
        f = falling(e[k], times)
        if f:
            ne = list(e)
            ne[k] -= times
            out[tuple(ne)] = c * f
    return Poly._raw(p.n, out, p.laurent)


class _TotalSymbol:
    """Flattened ``{(degree, exponents): Scalar}`` storage shared by W and E."""

    __slots__ = ("n", "terms", "floor")
    _fiber = "u"
    _laurent = False

    def __init__(self, n: int, comps=None, floor: int | None = None):
        terms = {}
        for j, p in (comps or {}).items():
            if not isinstance(p, Poly):
                p = Poly.const(n, p, self._laurent)
            if p.n != n:
                raise ValueError("component has the wrong number of variables")
            if not self._laurent and any(v < 0 for e in p.terms for v in e[n:]):
                raise ValueError("negative fiber exponent in a W-symbol")
            if floor is not None and j < floor:
                continue
            for e, c in p.terms.items():
                terms[(int(j), e)] = terms.get((int(j), e), ZERO) + c
        self.n = n
        self.terms = {k: c for k, c in terms.items() if c}
        self.floor = floor

    @classmethod
    def from_terms(cls, n, terms, floor=None, **kw):
        """Build from a ``{(degree, exps): coeff}`` dict, dropping zeros and sub-floor terms."""
        obj = object.__new__(cls)
        obj.n = n
        obj.floor = floor
        clean = {}
        for (j, e), c in terms.items():
            if c and (floor is None or j >= floor):
                clean[(j, e)] = c
        obj.terms = clean
        obj._init_extra(**kw)
        return obj

    def _init_extra(self, **kw):
        pass

    def _like(self, terms, floor):
        return type(self).from_terms(self.n, terms, floor)

    # structure ------------------------------------------------------------
    @property
    def comps(self) -> dict[int, Poly]:
        out: dict[int, dict] = {}
        for (j, e), c in self.terms.items():
            out.setdefault(j, {})[e] = c
        return {j: Poly._raw(self.n, t, self._laurent) for j, t in sorted(out.items(), reverse=True)}

    @property
    def order(self):
        """Top stored degree, or None for the zero symbol."""
        return max(j for j, _ in self.terms) if self.terms else None

    @property
    def exact(self) -> bool:
        return self.floor is None

    def is_zero(self) -> bool:
        return not self.terms

    def component(self, j: int) -> Poly:
        return Poly._raw(
            self.n, {e: c for (d, e), c in self.terms.items() if d == j}, self._laurent
        )

    def truncate(self, floor: int | None):
        if floor is None:
            return self
        f = floor if self.floor is None else max(self.floor, floor)
        return self._like(self.terms, f)

    def exactify(self):
        """Drop the floor marker, keeping the known terms."""
        return self._like(self.terms, None)

    # equality -------------------------------------------------------------
    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.n == other.n and self.floor == other.floor and self.terms == other.terms

    def __hash__(self):
        return hash((type(self).__name__, self.n, self.floor, frozenset(self.terms.items())))

    def agrees_with(self, other, floor: int | None = None) -> bool:
        """Equality on the window where both are known (and at or above ``floor``)."""
        f = sum_floor(sum_floor(self.floor, other.floor), floor)
        a = self.truncate(f).terms if f is not None else self.terms
        b = other.truncate(f).terms if f is not None else other.terms
        return a == b

    def mismatch_degree(self, other, floor: int | None = None):
        """Highest degree where the two differ on the common window, or None."""
        f = sum_floor(sum_floor(self.floor, other.floor), floor)
        diff = (self - other)
        if f is not None:
            diff = diff.truncate(f)
        return diff.order

    # linear structure -----------------------------------------------------
    def _check(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} and {type(other).__name__}")
        if other.n != self.n:
            raise ValueError("symbols over different variable counts")

    def __add__(self, other):
        if not isinstance(other, _TotalSymbol):
            other = self.scalar(other)
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, ZERO) + c
        return self._like(out, sum_floor(self.floor, other.floor))

    __radd__ = __add__

    def __neg__(self):
        return self._like({k: -c for k, c in self.terms.items()}, self.floor)

    def __sub__(self, other):
        if not isinstance(other, _TotalSymbol):
            other = self.scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = as_scalar(c)
        return self._like({k: v * c for k, v in self.terms.items()}, self.floor)

    def scalar(self, c):
        raise NotImplementedError

    def max_exponents(self):
        m = [0] * (2 * self.n)
        for _, e in self.terms:
            for i, v in enumerate(e):
                if v > m[i]:
                    m[i] = v
        return tuple(m)

    def _sorted_keys(self):
        return sorted(self.terms, key=lambda k: (-k[0],) + _order_key(k[1], self.n))

    def __repr__(self):
        return f"{type(self).__name__}({self.n}, {str(self)!r})"


class WSymbol(_TotalSymbol):
    """Total symbol ``sum_j p_j(x; u) tau^j`` of a W-operator."""

    __slots__ = ()

    @classmethod
    def const(cls, n: int, c=1) -> "WSymbol":
        return cls.from_terms(n, {(0, (0,) * (2 * n)): as_scalar(c)})

    @classmethod
    def var(cls, n: int, name, power: int = 1) -> "WSymbol":
        return cls(n, {0: Poly.var(n, name, power)})

    @classmethod
    def tau(cls, n: int, power: int = 1, c=1) -> "WSymbol":
        return cls.from_terms(n, {(power, (0,) * (2 * n)): as_scalar(c)})

    @classmethod
    def from_laurent(cls, n: int, a: LaurentScalar) -> "WSymbol":
        zero = (0,) * (2 * n)
        return cls.from_terms(n, {(j, zero): c for j, c in a.coeffs.items()}, a.floor)

    def scalar(self, c) -> "WSymbol":
        if isinstance(c, LaurentScalar):
            return WSymbol.from_laurent(self.n, c)
        return WSymbol.const(self.n, c)

    def shift(self, k: int) -> "WSymbol":
        """Multiply by the central element ``tau^k``."""
        return WSymbol.from_terms(
            self.n,
            {(j + k, e): c for (j, e), c in self.terms.items()},
            None if self.floor is None else self.floor + k,
        )

    def times_laurent(self, a: LaurentScalar) -> "WSymbol":
        return self * WSymbol.from_laurent(self.n, a)

    def __mul__(self, other):
        if isinstance(other, WSymbol):
            from .wcalc import star_w

            return star_w(self, other)
        if isinstance(other, LaurentScalar):
            return self.times_laurent(other)
        return self.scale(other)

    def __rmul__(self, other):
        if isinstance(other, LaurentScalar):
            return WSymbol.from_laurent(self.n, other) * self
        return self.scale(other)

    def u_free(self) -> bool:
        n = self.n
        return all(not any(e[n:]) for _, e in self.terms)

    def render_terms(self):
        out = []
        for j, e in self._sorted_keys():
            parts = _mono_str(e, self.n, "u")
            if j == 1:
                parts.append("tau")
            elif j:
                parts.append(f"tau^{j}")
            out.append((self.terms[(j, e)], "*".join(parts)))
        return out

    def __str__(self):
        text = render_sum(self.render_terms())
        if self.floor is not None:
            text += f" (floor: {self.floor})"
        return text


class ESymbol(_TotalSymbol):
    """Total symbol ``sum_j p_j(x; xi)`` of a microdifferential operator.

    ``p_j`` should be homogeneous of degree ``j`` in ``xi``; fiber exponents
    may be negative.  ``has_t`` marks a symbol on ``X x C`` whose last base
    and fiber variables are printed as ``t`` and ``tau``.
    """

    __slots__ = ("has_t",)
    _fiber = "xi"
    _laurent = True

    def __init__(self, n: int, comps=None, floor=None, has_t: bool = False):
        super().__init__(n, comps, floor)
        self.has_t = has_t

    def _init_extra(self, has_t=False):
        self.has_t = has_t

    def _like(self, terms, floor):
        return ESymbol.from_terms(self.n, terms, floor, has_t=self.has_t)

    @classmethod
    def from_poly(cls, p: Poly, floor=None, has_t=False) -> "ESymbol":
        """Split a Laurent polynomial into its homogeneous components."""
        terms = {(sum(e[p.n:]), e): c for e, c in p.terms.items()}
        return cls.from_terms(p.n, terms, floor, has_t=has_t)

    @classmethod
    def const(cls, n: int, c=1, has_t=False) -> "ESymbol":
        return cls.from_terms(n, {(0, (0,) * (2 * n)): as_scalar(c)}, has_t=has_t)

    @classmethod
    def var(cls, n: int, name, power: int = 1, has_t=False) -> "ESymbol":
        return cls.from_poly(Poly.var(n, name, power, laurent=True), has_t=has_t)

    def scalar(self, c) -> "ESymbol":
        return ESymbol.const(self.n, c, self.has_t)

    def __mul__(self, other):
        if isinstance(other, ESymbol):
            from .wcalc import star_e

            return star_e(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def render_terms(self):
        return [
            (self.terms[k], "*".join(_mono_str(k[1], self.n, "xi", self.has_t)))
            for k in self._sorted_keys()
        ]

    def __str__(self):
        text = render_sum(self.render_terms())
        if self.floor is not None:
            text += f" (floor: {self.floor})"
        return text


@dataclass(frozen=True)
class HomogeneityReport:
    ok: bool
    degree: int | None = None
    term: Poly | None = None

    def __bool__(self):
        return self.ok


def homogeneity_check(s: ESymbol) -> HomogeneityReport:
    """True iff every term stored at degree ``j`` has fiber degree ``j``."""
    n = s.n
    for j, e in s._sorted_keys():
        if sum(e[n:]) != j:
            return HomogeneityReport(False, j, Poly._raw(n, {e: s.terms[(j, e)]}, True))
    return HomogeneityReport(True)


def principal_symbol(s: _TotalSymbol) -> tuple[int, Poly]:
    """``(order, top component)``; the image in the associated graded ring."""
    if s.is_zero():
        raise ZeroSymbol("the zero symbol has no principal symbol")
    m = s.order
    return m, s.component(m)
