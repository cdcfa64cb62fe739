"""Operator-expression parser.

Grammar::

    expr   := term (("+" | "-") term)*
    term   := factor ("*" factor)*
    factor := "-" factor | primary ("^" ["-"] integer)?
    primary:= atom | "(" expr ")"
    atom   := x<k> | u<k> | xi<k> | tau | t | s | i | integer ["/" integer]

``*`` is the star product of the active algebra, so ``u1*x1`` evaluates to
the normal-ordered symbol ``x1*u1 + tau^-1``.  ``t`` and ``s`` are central
parameters in the W algebra.  In the E algebra ``t`` and ``tau`` are the
extra base coordinate and its dual fiber variable.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import BadIndex, NegativePower, ParseError
from .scalars import I, ONE, Scalar
from .symbols import ESymbol, WSymbol, _TotalSymbol
from .wcalc import star_e, star_w

__all__ = ["Num", "Var", "Neg", "BinOp", "Pow", "parse_expr", "evaluate", "Value", "max_index"]


@dataclass(frozen=True)
class Num:
    value: Scalar
    offset: int


@dataclass(frozen=True)
class Var:
    name: str  # "x", "u", "xi", "tau", "t", "s"
    index: int  # 0 for unindexed atoms
    offset: int


@dataclass(frozen=True)
class Neg:
    operand: object
    offset: int


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object
    offset: int


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int
    offset: int


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^()]))"
)


def _tokenize(text: str):
    raw = text.encode("utf-8")
    if len(raw) != len(text):
        bad = next(k for k, ch in enumerate(text) if ord(ch) > 127)
        raise ParseError(f"unexpected character {text[bad]!r}", len(text[:bad].encode()))
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            k = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[k]!r}", k)
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


_IDENT = re.compile(r"^(x|u|xi)([0-9]+)$")


class _Parser:
    def __init__(self, text: str, mode: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.mode = mode

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, value):
        kind, val, off = self.take()
        if val != value:
            raise ParseError(f"expected {value!r}, found {val or 'end of input'!r}", off)

    def parse(self):
        node = self.expr()
        kind, val, off = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", off)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            _, op, off = self.take()
            node = BinOp(op, node, self.term(), off)
        return node

    def term(self):
        node = self.factor()
        while self.peek()[:2] == ("op", "*"):
            _, _, off = self.take()
            node = BinOp("*", node, self.factor(), off)
        return node

    def factor(self):
        kind, val, off = self.peek()
        if (kind, val) == ("op", "-"):
            self.take()
            return Neg(self.factor(), off)
        base = self.primary()
        if self.peek()[:2] == ("op", "^"):
            _, _, poff = self.take()
            sign = 1
            if self.peek()[:2] == ("op", "-"):
                self.take()
                sign = -1
            kind, val, eoff = self.take()
            if kind != "num" or "/" in val:
                raise ParseError("exponent must be an integer", eoff)
            exp = sign * int(val)
            if exp < 0 and not (isinstance(base, Var) and base.name in ("tau", "s", "xi")):
                raise NegativePower("negative powers are allowed only on tau, s and xi", poff)
            return Pow(base, exp, poff)
        return base

    def primary(self):
        kind, val, off = self.take()
        if kind == "num":
            return Num(Scalar(Fraction(val)), off)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect(")")
            return node
        if kind == "ident":
            if val == "i":
                return Num(I, off)
            if val in ("tau", "t", "s"):
                if val == "s" and self.mode == "e":
                    raise BadIndex("s is not available in the E algebra", off)
                return Var(val, 0, off)
            m = _IDENT.match(val)
            if not m:
                raise BadIndex(f"unknown identifier {val!r}", off)
            name, idx = m.group(1), int(m.group(2))
            if idx < 1 or m.group(2).startswith("0"):
                raise BadIndex(f"bad variable index in {val!r}", off)
            if name == "u" and self.mode == "e":
                raise BadIndex("u variables belong to the W algebra", off)
            if name == "xi" and self.mode == "w":
                raise BadIndex("xi variables belong to the E algebra", off)
            return Var(name, idx, off)
        if kind == "end":
            raise ParseError("unexpected end of input", off)
        raise ParseError(f"unexpected {val!r}", off)


def parse_expr(text: str, mode: str = "w"):
    if mode not in ("w", "e"):
        raise ValueError("mode must be 'w' or 'e'")
    return _Parser(text, mode).parse()


def _walk(node):
    yield node
    for child in ("operand", "left", "right", "base"):
        sub = getattr(node, child, None)
        if sub is not None:
            yield from _walk(sub)


def max_index(node) -> int:
    return max((v.index for v in _walk(node) if isinstance(v, Var)), default=0)


def _uses(node, names) -> bool:
    return any(isinstance(v, Var) and v.name in names for v in _walk(node))


class Value:
    """An evaluated expression: ``{(t_power, s_power): symbol}``.

    Plain symbols live at key ``(0, 0)``.
    """

    __slots__ = ("parts", "proto")

    def __init__(self, parts, proto):
        self.parts = {k: v for k, v in parts.items() if not v.is_zero() or v.floor is not None}
        self.proto = proto  # zero symbol of the right kind

    def _zero(self):
        return self.proto

    def __add__(self, other):
        out = dict(self.parts)
        for k, v in other.parts.items():
            out[k] = out[k] + v if k in out else v
        return Value(out, self.proto)

    def __neg__(self):
        return Value({k: -v for k, v in self.parts.items()}, self.proto)

    def __sub__(self, other):
        return self + (-other)

    def star(self, other):
        mul = star_e if isinstance(self.proto, ESymbol) else star_w
        out = {}
        for (a, b), p in self.parts.items():
            for (c, d), q in other.parts.items():
                k = (a + c, b + d)
                v = mul(p, q)
                out[k] = out[k] + v if k in out else v
        return Value(out, self.proto)

    def is_plain(self) -> bool:
        return set(self.parts) <= {(0, 0)}

    def symbol(self) -> _TotalSymbol:
        if not self.is_plain():
            raise ValueError("expression depends on t or s")
        return self.parts.get((0, 0), self.proto)

    def truncate(self, floor):
        return Value({k: v.truncate(floor) for k, v in self.parts.items()}, self.proto)

    def __eq__(self, other):
        if not isinstance(other, Value):
            return NotImplemented
        return self.parts == other.parts

    def render_terms(self):
        out = []
        for (a, b) in sorted(self.parts, key=lambda k: (k[0], -k[1])):
            extra = []
            if a:
                extra.append("t" if a == 1 else f"t^{a}")
            if b:
                extra.append("s" if b == 1 else f"s^{b}")
            for c, mono in self.parts[(a, b)].render_terms():
                out.append((c, "*".join(p for p in [mono] + extra if p)))
        return out

    def __str__(self):
        from .scalars import render_sum

        text = render_sum(self.render_terms())
        floors = [v.floor for v in self.parts.values() if v.floor is not None]
        if floors:
            text += f" (floor: {max(floors)})"
        return text


def evaluate(node, mode: str = "w", n: int | None = None) -> Value:
    """Evaluate a parsed expression in the W (``mode='w'``) or E algebra.

    ``n`` defaults to the largest variable index used (at least 1).  In the
    E algebra a use of ``t`` or ``tau`` adds one more variable pair.
    """
    need = max_index(node)
    if n is None:
        n = max(need, 1)
    elif need > n:
        bad = next(v for v in _walk(node) if isinstance(v, Var) and v.index > n)
        raise BadIndex(f"variable index {bad.index} exceeds --vars {n}", bad.offset)
    if mode == "e":
        has_t = _uses(node, ("t", "tau"))
        nn = n + 1 if has_t else n
        proto = ESymbol.from_terms(nn, {}, has_t=has_t)
    else:
        nn, has_t = n, False
        proto = WSymbol.from_terms(n, {})

    def const(c):
        if mode == "e":
            return Value({(0, 0): ESymbol.const(nn, c, has_t)}, proto)
        return Value({(0, 0): WSymbol.const(nn, c)}, proto)

    def atom(v: Var, power: int = 1):
        if mode == "w":
            if v.name == "tau":
                return Value({(0, 0): WSymbol.tau(nn, power)}, proto)
            if v.name == "t":
                return Value({(power, 0): WSymbol.const(nn, 1)}, proto)
            if v.name == "s":
                return Value({(0, power): WSymbol.const(nn, 1)}, proto)
            return Value({(0, 0): WSymbol.var(nn, f"{v.name}{v.index}", power)}, proto)
        if v.name == "t":
            name = f"x{nn}"
        elif v.name == "tau":
            name = f"xi{nn}"
        else:
            name = f"{v.name}{v.index}"
        return Value({(0, 0): ESymbol.var(nn, name, power, has_t=has_t)}, proto)

    def ev(node):
        if isinstance(node, Num):
            return const(node.value)
        if isinstance(node, Var):
            return atom(node)
        if isinstance(node, Neg):
            return -ev(node.operand)
        if isinstance(node, BinOp):
            a, b = ev(node.left), ev(node.right)
            if node.op == "+":
                return a + b
            if node.op == "-":
                return a - b
            return a.star(b)
        if isinstance(node, Pow):
            if isinstance(node.base, Var):
                # atoms commute with themselves, so powers are monomials
                return atom(node.base, node.exponent)
            base = ev(node.base)
            out = const(ONE)
            for _ in range(node.exponent):
                out = out.star(base)
            return out
        raise TypeError(f"unknown node {node!r}")

    return ev(node)
