"""Gaussian rationals and the coefficient field of Laurent series in 1/tau.

A :class:`LaurentScalar` is a finite sum ``sum a_j tau^j`` together with an
optional *floor* ``N``: when the floor is set, every degree below ``N`` is
unknown and arithmetic is carried out modulo ``tau^{<N}``.  ``floor=None``
marks an exact element of ``C[1/tau, tau]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from .errors import InsufficientDepth

__all__ = [
    "Scalar",
    "ZERO",
    "ONE",
    "I",
    "as_scalar",
    "LaurentScalar",
    "GrowthReport",
    "k_mul",
    "k_inverse",
    "k_transpose",
    "k_order",
    "growth_check",
    "min_growth_constant",
    "product_floor",
    "sum_floor",
    "render_sum",
]


class Scalar:
    """An element ``re + im*i`` of Q(i); both parts are reduced Fractions."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, Scalar):
            re, im = re.re, re.im + Fraction(im)
        elif isinstance(re, str):
            re, im = _parse_scalar(re), Fraction(im)
            re, im = re.re, re.im + im
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    @classmethod
    def _make(cls, re: Fraction, im: Fraction) -> "Scalar":
        obj = object.__new__(cls)
        object.__setattr__(obj, "re", re)
        object.__setattr__(obj, "im", im)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    def __reduce__(self):
        return (Scalar, (self.re, self.im))

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return Scalar._make(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return Scalar._make(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return Scalar._make(-self.re, -self.im)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not self.im and not other.im:
            return Scalar._make(self.re * other.re, _ZERO)
        return Scalar._make(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "Scalar":
        if not self.im:
            if not self.re:
                raise ZeroDivisionError("inverse of zero scalar")
            return Scalar._make(1 / self.re, _ZERO)
        n = self.norm2()
        return Scalar._make(self.re / n, -self.im / n)

    def conjugate(self) -> "Scalar":
        return Scalar._make(self.re, -self.im)

    def norm2(self) -> Fraction:
        """Squared modulus ``re^2 + im^2``."""
        return self.re * self.re + self.im * self.im

    # comparisons --------------------------------------------------------
    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return False
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def is_real(self) -> bool:
        return not self.im

    def sign(self) -> int:
        """Sign used when printing: that of the real part, else the imaginary part."""
        if self.re:
            return 1 if self.re > 0 else -1
        if self.im:
            return 1 if self.im > 0 else -1
        return 0

    def __repr__(self):
        return f"Scalar({str(self)!r})"

    def __str__(self):
        if not self.im:
            return _frac_str(self.re)
        if self.im == 1:
            im = "i"
        elif self.im == -1:
            im = "-i"
        else:
            im = _frac_str(self.im) + "*i"
        if not self.re:
            return im
        sep = "" if im.startswith("-") else "+"
        return _frac_str(self.re) + sep + im

    def needs_parens(self) -> bool:
        return bool(self.re) and bool(self.im)


_ZERO = Fraction(0)
ZERO = Scalar._make(_ZERO, _ZERO)
ONE = Scalar._make(Fraction(1), _ZERO)
I = Scalar._make(_ZERO, Fraction(1))


def _coerce(value):
    if isinstance(value, Scalar):
        return value
    if isinstance(value, (int, Fraction, Rational)):
        return Scalar._make(Fraction(value), _ZERO)
    return NotImplemented


def _frac_str(f: Fraction) -> str:
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def _parse_scalar(text: str) -> Scalar:
    """Parse ``p/q``, ``p/q*i``, ``p/q+r/s*i`` and plain ``i`` forms."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty scalar")
    if not s.endswith("i"):
        return Scalar._make(Fraction(s), _ZERO)
    body = s[:-1]
    if body.endswith("*"):
        body = body[:-1]
    # split the real part off at the last sign that is not leading
    cut = max(body.rfind("+"), body.rfind("-"))
    if cut > 0:
        re_txt, im_txt = body[:cut], body[cut:]
    else:
        re_txt, im_txt = "0", body
    if im_txt in ("", "+"):
        im = Fraction(1)
    elif im_txt == "-":
        im = Fraction(-1)
    else:
        im = Fraction(im_txt)
    return Scalar._make(Fraction(re_txt), im)


def as_scalar(value) -> Scalar:
    if isinstance(value, Scalar):
        return value
    if isinstance(value, str):
        return _parse_scalar(value)
    return Scalar(value)


def render_sum(terms) -> str:
    """Join ``(coeff, monomial_text)`` pairs as ``a*m + b*n - c``.

    The monomial text is empty for constants.  Zero coefficients must have
    been removed by the caller.
    """
    parts = []
    for coeff, mono in terms:
        sign = coeff.sign()
        mag = -coeff if sign < 0 else coeff
        if mono and mag == ONE:
            body = mono
        else:
            c = str(mag)
            if mag.needs_parens():
                c = f"({c})"
            body = f"{c}*{mono}" if mono else c
        if not parts:
            parts.append(("-" if sign < 0 else "") + body)
        else:
            parts.append((" - " if sign < 0 else " + ") + body)
    return "".join(parts) if parts else "0"


def product_floor(fa, top_a, fb, top_b):
    """Lowest degree at which a product of two truncated series is known.

    ``fa``/``fb`` are floors (None for exact), ``top_a``/``top_b`` the top
    stored degrees (None when nothing is stored).  The unknown tail of one
    factor, of degree ``< fa``, multiplies the whole of the other factor,
    whose degree is at most ``top_b`` (or ``fb - 1`` if nothing is stored).
    The second tuple entry is True when the product is known to be exactly 0.
    """
    eff_a = top_a if top_a is not None else (fa - 1 if fa is not None else None)
    eff_b = top_b if top_b is not None else (fb - 1 if fb is not None else None)
    if eff_a is None or eff_b is None:
        return None, True
    cands = []
    if fa is not None:
        cands.append(fa + eff_b)
    if fb is not None:
        cands.append(fb + eff_a)
    return (max(cands) if cands else None), False


def sum_floor(fa, fb):
    if fa is None:
        return fb
    if fb is None:
        return fa
    return max(fa, fb)


class LaurentScalar:
    """An element of the field ``k`` of Laurent series in ``1/tau``."""

    __slots__ = ("coeffs", "floor")

    def __init__(self, coeffs=None, floor: int | None = None):
        clean = {}
        for j, c in (coeffs or {}).items():
            c = as_scalar(c)
            if c and (floor is None or j >= floor):
                clean[int(j)] = c
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "floor", floor)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentScalar is immutable")

    @classmethod
    def monomial(cls, j: int, c=1) -> "LaurentScalar":
        return cls({j: c})

    @classmethod
    def const(cls, c) -> "LaurentScalar":
        return cls({0: c})

    @property
    def top(self):
        return max(self.coeffs) if self.coeffs else None

    @property
    def exact(self) -> bool:
        return self.floor is None

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, j: int) -> Scalar:
        return self.coeffs.get(j, ZERO)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            other = LaurentScalar.const(other)
        if not isinstance(other, LaurentScalar):
            return NotImplemented
        return self.floor == other.floor and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((frozenset(self.coeffs.items()), self.floor))

    def truncate(self, floor: int | None) -> "LaurentScalar":
        if floor is None:
            return self
        f = floor if self.floor is None else max(self.floor, floor)
        return LaurentScalar(self.coeffs, f)

    def agrees_with(self, other: "LaurentScalar") -> bool:
        """Equality on the window where both operands are known."""
        f = sum_floor(self.floor, other.floor)
        return self.truncate(f).coeffs == other.truncate(f).coeffs

    def __add__(self, other):
        other = _as_laurent(other)
        if other is NotImplemented:
            return other
        out = dict(self.coeffs)
        for j, c in other.coeffs.items():
            out[j] = out.get(j, ZERO) + c
        return LaurentScalar(out, sum_floor(self.floor, other.floor))

    __radd__ = __add__

    def __neg__(self):
        return LaurentScalar({j: -c for j, c in self.coeffs.items()}, self.floor)

    def __sub__(self, other):
        other = _as_laurent(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _as_laurent(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = _as_laurent(other)
        if other is NotImplemented:
            return other
        return k_mul(self, other)

    __rmul__ = __mul__

    def __repr__(self):
        return f"LaurentScalar({str(self)!r})"

    def __str__(self):
        terms = [(self.coeffs[j], _tau_str(j)) for j in sorted(self.coeffs, reverse=True)]
        text = render_sum(terms)
        if self.floor is not None:
            text += f" (floor: {self.floor})"
        return text


def _tau_str(j: int) -> str:
    if j == 0:
        return ""
    if j == 1:
        return "tau"
    return f"tau^{j}"


def _as_laurent(value):
    if isinstance(value, LaurentScalar):
        return value
    c = _coerce(value)
    if c is NotImplemented:
        return c
    return LaurentScalar.const(c)


def k_mul(a: LaurentScalar, b: LaurentScalar) -> LaurentScalar:
    floor, is_zero = product_floor(a.floor, a.top, b.floor, b.top)
    if is_zero:
        return LaurentScalar({}, floor)
    out: dict[int, Scalar] = {}
    for i, ci in a.coeffs.items():
        for j, cj in b.coeffs.items():
            d = i + j
            if floor is not None and d < floor:
                continue
            out[d] = out.get(d, ZERO) + ci * cj
    return LaurentScalar(out, floor)


def k_inverse(a: LaurentScalar, depth: int) -> LaurentScalar:
    """Inverse of ``a`` down to ``depth`` degrees below its leading term.

    The leading term is divided out and the remaining ``1 + r`` (``r`` of
    negative order) is inverted by the geometric series in ``-r``.  Exact
    monomials have exact inverses.
    """
    if depth < 1:
        raise ValueError("depth must be positive")
    if a.is_zero():
        raise ZeroDivisionError("inverse of zero in k")
    m = a.top
    lead_inv = a.coeffs[m].inverse()
    if a.exact and len(a.coeffs) == 1:
        return LaurentScalar({-m: lead_inv})
    floor = -m - depth
    if a.floor is not None:
        # a is only known to a.floor - m degrees below its leading term
        floor = max(floor, a.floor - 2 * m)
    # r = a / (a_m tau^m) - 1, of order <= -1
    r = {j - m: c * lead_inv for j, c in a.coeffs.items() if j != m}
    rser = LaurentScalar(r)
    # inverse of (1 + r) by the Neumann series sum (-r)^k
    total = LaurentScalar({0: ONE})
    power = LaurentScalar({0: ONE})
    neg_r = -rser
    span = floor + m  # relative floor
    for _ in range(depth):
        power = k_mul(power, neg_r).truncate(span)
        if power.is_zero():
            break
        total = total + power
    total = total.truncate(span)
    shifted = {j - m: c * lead_inv for j, c in total.coeffs.items()}
    return LaurentScalar(shifted, floor)


def k_transpose(a: LaurentScalar) -> LaurentScalar:
    return LaurentScalar(
        {j: (-c if j % 2 else c) for j, c in a.coeffs.items()}, a.floor
    )


def k_order(a: LaurentScalar):
    """Top degree with nonzero coefficient, ``-math.inf`` for zero."""
    return a.top if a.coeffs else -math.inf


@dataclass(frozen=True)
class GrowthReport:
    ok: bool
    first_failure: int | None = None
    checked_down_to: int = 0

    def __bool__(self):
        return self.ok


def _window(a: LaurentScalar, depth: int) -> range:
    if depth < 1:
        raise ValueError("depth must be positive")
    if a.floor is not None and a.floor > -depth:
        raise InsufficientDepth(
            f"series known only down to degree {a.floor}, need {-depth}"
        )
    return range(0, -depth - 1, -1)


def growth_check(a: LaurentScalar, C, depth: int) -> GrowthReport:
    """Check ``|a_j| <= C^{-j} (-j)!`` for ``-depth <= j <= 0``.

    Moduli are compared squared so the test stays in exact rationals.  This
    is a diagnostic on a finite window, not a membership proof.
    """
    C = Fraction(C)
    if C <= 0:
        raise ValueError("C must be positive")
    for j in _window(a, depth):
        m = -j
        bound = C ** m * math.factorial(m)
        if a[j].norm2() > bound * bound:
            return GrowthReport(False, j, -depth)
    return GrowthReport(True, None, -depth)


def _iroot_floor(value: Fraction, k: int, scale: int) -> Fraction:
    """Largest multiple of ``1/scale`` whose k-th power is ``<= value``."""
    num = value.numerator * scale ** k
    target = num // value.denominator
    lo, hi = 0, 1
    while hi ** k <= target:
        hi *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if mid ** k <= target:
            lo = mid
        else:
            hi = mid
    return Fraction(lo, scale)


def min_growth_constant(a: LaurentScalar, depth: int, scale: int = 10 ** 6):
    """Rational lower bound for the smallest admissible growth constant C.

    Returns None when the degree-0 condition ``|a_0| <= 1`` already fails,
    since no C can repair it.  The bound is accurate to ``1/scale``.
    """
    window = _window(a, depth)
    if a[0].norm2() > 1:
        return None
    best = Fraction(0)
    for j in window:
        m = -j
        if m == 0 or not a[j]:
            continue
        ratio = a[j].norm2() / (math.factorial(m) ** 2)
        # C^(2m) >= ratio
        cand = _iroot_floor(ratio, 2 * m, scale)
        if cand > best:
            best = cand
    return best
