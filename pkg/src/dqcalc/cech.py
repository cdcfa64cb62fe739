"""Cech cochains on finite nerves, descent data and module gluing data.

Faces of a nerve are strictly increasing index tuples.  Group-valued
cochains use additive notation: the coboundary of a 1-cochain is
``(db)_ijk = b_jk - b_ik + b_ij`` and that of a 2-cochain is
``(dc)_ijkl = c_jkl - c_ikl + c_ijl - c_ijk``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from ._smith import smith_normal_form
from .errors import MissingValue, RankMismatch
from .symbols import WSymbol
from .wcalc import InnerAd, WAutomorphism, star_inverse, star_w

__all__ = [
    "Nerve",
    "NerveReport",
    "AbelianGroup",
    "CechCochain",
    "CocycleReport",
    "NotCoboundary",
    "validate_nerve",
    "coboundary1",
    "check_cocycle2",
    "coboundary_solve",
    "DescentDatum",
    "DescentReport",
    "GlueDatum",
    "GlueReport",
    "check_descent",
    "check_glue",
    "generators",
    "ad_generated_datum",
    "ad_generated_glue",
]


@dataclass(frozen=True)
class Nerve:
    index_count: int
    faces: frozenset

    def __init__(self, index_count: int, faces=()):
        object.__setattr__(self, "index_count", int(index_count))
        object.__setattr__(self, "faces", frozenset(tuple(int(i) for i in f) for f in faces))

    @classmethod
    def full(cls, index_count: int, max_len: int = 4) -> "Nerve":
        faces = []
        for k in range(2, max_len + 1):
            faces.extend(itertools.combinations(range(index_count), k))
        return cls(index_count, faces)

    @classmethod
    def tetrahedron_boundary(cls) -> "Nerve":
        """All pairs and triples on four indices, no 4-fold overlap."""
        return cls.full(4, max_len=3)

    def of_length(self, k: int) -> list[tuple]:
        return sorted(f for f in self.faces if len(f) == k)

    @property
    def pairs(self):
        return self.of_length(2)

    @property
    def triples(self):
        return self.of_length(3)

    @property
    def quads(self):
        return self.of_length(4)


@dataclass(frozen=True)
class NerveReport:
    ok: bool
    problems: tuple = ()

    def __bool__(self):
        return self.ok


def validate_nerve(nv: Nerve) -> NerveReport:
    problems = []
    for f in sorted(nv.faces, key=lambda f: (len(f), f)):
        if not 2 <= len(f) <= 4:
            problems.append((f, "face length must be 2, 3 or 4"))
            continue
        if any(i < 0 or i >= nv.index_count for i in f):
            problems.append((f, "index out of range"))
            continue
        if any(a >= b for a, b in zip(f, f[1:])):
            problems.append((f, "face is not strictly increasing"))
            continue
        if len(f) > 2:
            for sub in itertools.combinations(f, len(f) - 1):
                if sub not in nv.faces:
                    problems.append((f, f"missing subface {sub}"))
    return NerveReport(not problems, tuple(problems))


class AbelianGroup:
    """Finitely generated abelian group ``Z^a + Z/n1 + ...``.

    ``factors`` holds the modulus of each cyclic factor, 0 standing for Z.
    Elements are integer tuples reduced into ``[0, n)`` on torsion factors.
    """

    def __init__(self, factors):
        mods = []
        for f in factors:
            if isinstance(f, str):
                f = f.strip()
                if f == "Z":
                    mods.append(0)
                elif f.startswith("Z/"):
                    mods.append(int(f[2:]))
                else:
                    raise ValueError(f"unknown group factor {f!r}")
            else:
                mods.append(int(f))
        if any(m < 0 or m == 1 for m in mods):
            raise ValueError("cyclic factors need modulus 0 (for Z) or >= 2")
        self.mods = tuple(mods)

    def __eq__(self, other):
        return isinstance(other, AbelianGroup) and self.mods == other.mods

    def __hash__(self):
        return hash(self.mods)

    def __repr__(self):
        return "AbelianGroup(%s)" % ", ".join("Z" if m == 0 else f"Z/{m}" for m in self.mods)

    def reduce(self, elem) -> tuple:
        elem = tuple(int(v) for v in elem)
        if len(elem) != len(self.mods):
            raise ValueError(f"element {elem} has the wrong length")
        return tuple(v % m if m else v for v, m in zip(elem, self.mods))

    def zero(self) -> tuple:
        return (0,) * len(self.mods)

    def add(self, a, b) -> tuple:
        return self.reduce(x + y for x, y in zip(a, b))

    def neg(self, a) -> tuple:
        return self.reduce(-x for x in a)

    def sub(self, a, b) -> tuple:
        return self.reduce(x - y for x, y in zip(a, b))

    def is_finite(self) -> bool:
        return all(self.mods)

    def elements(self):
        if not self.is_finite():
            raise ValueError("group is infinite")
        return itertools.product(*(range(m) for m in self.mods))


@dataclass(frozen=True)
class CechCochain:
    degree: int
    group: AbelianGroup
    values: dict = field(hash=False)

    def __init__(self, degree: int, group: AbelianGroup, values):
        if degree not in (1, 2):
            raise ValueError("only degree 1 and 2 cochains are supported")
        vals = {tuple(k): group.reduce(v) for k, v in values.items()}
        if any(len(k) != degree + 1 for k in vals):
            raise ValueError(f"degree-{degree} cochain needs faces of length {degree + 1}")
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "values", vals)

    @classmethod
    def zero(cls, nv: Nerve, degree: int, group: AbelianGroup) -> "CechCochain":
        return cls(degree, group, {f: group.zero() for f in nv.of_length(degree + 1)})

    def __getitem__(self, face):
        try:
            return self.values[tuple(face)]
        except KeyError:
            raise MissingValue(f"no value on face {tuple(face)}") from None


def coboundary1(nv: Nerve, b: CechCochain) -> CechCochain:
    G = b.group
    out = {}
    for i, j, k in nv.triples:
        out[(i, j, k)] = G.add(G.sub(b[(j, k)], b[(i, k)]), b[(i, j)])
    return CechCochain(2, G, out)


def _delta2(G, c, quad):
    i, j, k, l = quad
    v = G.sub(c[(j, k, l)], c[(i, k, l)])
    v = G.add(v, c[(i, j, l)])
    return G.sub(v, c[(i, j, k)])


@dataclass(frozen=True)
class CocycleReport:
    ok: bool
    face: tuple | None = None
    value: tuple | None = None

    def __bool__(self):
        return self.ok


def check_cocycle2(nv: Nerve, c: CechCochain) -> CocycleReport:
    """``dc = 0`` on every declared 4-fold overlap."""
    for t in nv.triples:
        if t not in c.values:
            raise MissingValue(f"no value on declared triple {t}")
    G = c.group
    for q in nv.quads:
        v = _delta2(G, c, q)
        if v != G.zero():
            return CocycleReport(False, q, v)
    return CocycleReport(True)


@dataclass(frozen=True)
class NotCoboundary:
    """Obstruction: a rational functional ``lam`` on triples for one group factor.

    ``lam . d(e_pair)`` is an integer for every pair and ``m * lam`` is
    integral (``m`` the factor modulus), yet ``lam . c`` is not an integer.
    Any 1-cochain ``b`` with ``db = c`` would make it one.
    """

    factor: int
    functional: dict

    def __bool__(self):
        return False

    def verify(self, nv: Nerve, c: CechCochain) -> bool:
        m = c.group.mods[self.factor]
        D, triples, pairs = _delta_matrix(nv)
        lam = [Fraction(self.functional.get(t, 0)) for t in triples]
        for col in range(len(pairs)):
            if sum(lam[r] * D[r][col] for r in range(len(triples))).denominator != 1:
                return False
        if m and any((m * v).denominator != 1 for v in lam):
            return False
        val = sum(lam[r] * c[t][self.factor] for r, t in enumerate(triples))
        return val.denominator != 1


@dataclass(frozen=True)
class SolveResult:
    witness: CechCochain | None
    certificate: NotCoboundary | None = None

    @property
    def solvable(self) -> bool:
        return self.witness is not None

    def __bool__(self):
        return self.solvable


def _delta_matrix(nv: Nerve):
    triples, pairs = nv.triples, nv.pairs
    pidx = {p: k for k, p in enumerate(pairs)}
    D = [[0] * len(pairs) for _ in triples]
    for r, (i, j, k) in enumerate(triples):
        D[r][pidx[(j, k)]] += 1
        D[r][pidx[(i, k)]] -= 1
        D[r][pidx[(i, j)]] += 1
    return D, triples, pairs


def coboundary_solve(nv: Nerve, c: CechCochain) -> SolveResult:
    """Find ``b`` with ``db = c`` factor by factor via the Smith normal form of d."""
    G = c.group
    D, triples, pairs = _delta_matrix(nv)
    if not pairs:
        for f, m in enumerate(G.mods):
            for t in triples:
                if c[t][f]:
                    lam = Fraction(1, m) if m else Fraction(1, 2 * c[t][f])
                    return SolveResult(None, NotCoboundary(f, {t: lam}))
        return SolveResult(CechCochain(1, G, {}))
    S, U, V = smith_normal_form(D)
    rank = sum(1 for i in range(min(len(S), len(pairs))) if S[i][i])
    solution = [[0] * len(G.mods) for _ in pairs]
    for f, m in enumerate(G.mods):
        w = [sum(U[r][t] * c[triples[t]][f] for t in range(len(triples))) for r in range(len(triples))]
        y = [0] * len(pairs)
        for r in range(len(triples)):
            s = S[r][r] if r < rank else 0
            if r >= rank:
                if (w[r] % m if m else w[r]) != 0:
                    scale = m if m else 2 * w[r]
                    lam = {triples[t]: Fraction(U[r][t], scale) for t in range(len(triples))}
                    return SolveResult(None, NotCoboundary(f, _nonzero(lam)))
                continue
            if m:
                g = gcd(s, m)
                if w[r] % g:
                    lam = {triples[t]: Fraction(U[r][t], g) for t in range(len(triples))}
                    return SolveResult(None, NotCoboundary(f, _nonzero(lam)))
                # solve s*y = w (mod m)
                s_, w_, m_ = s // g, (w[r] // g), m // g
                y[r] = (w_ * pow(s_, -1, m_)) % m_ if m_ > 1 else 0
            else:
                if w[r] % s:
                    lam = {triples[t]: Fraction(U[r][t], s) for t in range(len(triples))}
                    return SolveResult(None, NotCoboundary(f, _nonzero(lam)))
                y[r] = w[r] // s
        for p in range(len(pairs)):
            solution[p][f] = sum(V[p][q] * y[q] for q in range(len(pairs)))
    b = CechCochain(1, G, {pairs[p]: solution[p] for p in range(len(pairs))})
    return SolveResult(b)


def _nonzero(lam):
    return {k: v for k, v in lam.items() if v}


# --------------------------------------------------------------------------
# descent data


def generators(n: int) -> list[tuple[str, WSymbol]]:
    """The test set ``x_i, u_i, tau`` on which automorphisms are compared."""
    out = [(f"x{i}", WSymbol.var(n, f"x{i}")) for i in range(1, n + 1)]
    out += [(f"u{i}", WSymbol.var(n, f"u{i}")) for i in range(1, n + 1)]
    out.append(("tau", WSymbol.tau(n)))
    return out


@dataclass
class DescentDatum:
    """Algebras on a common chart glued by automorphisms ``f`` and twists ``a``.

    ``f`` maps ordered pairs to :class:`WAutomorphism`, ``a`` maps ordered
    triples to invertible W-symbols.  ``depth`` is the number of orders
    below zero to which every identity is verified.
    """

    nerve: Nerve
    n: int
    f: dict
    a: dict
    depth: int

    def __post_init__(self):
        for key, sym in self.a.items():
            if sym.n != self.n:
                raise ValueError(f"a{key} has the wrong variable count")
            star_inverse(sym, 1)  # raises NotInvertible

    def f_of(self, i, j) -> WAutomorphism:
        try:
            return self.f[(i, j)]
        except KeyError:
            raise MissingValue(f"no automorphism f{(i, j)}") from None

    def a_of(self, i, j, k) -> WSymbol:
        try:
            return self.a[(i, j, k)]
        except KeyError:
            raise MissingValue(f"no section a{(i, j, k)}") from None


@dataclass(frozen=True)
class Failure:
    condition: int
    face: tuple
    detail: str


@dataclass(frozen=True)
class DescentReport:
    ok: bool
    verified_floor: int | None
    failures: tuple = ()

    def __bool__(self):
        return self.ok

    def failed_conditions(self) -> set[int]:
        return {f.condition for f in self.failures}


def _compare(lhs: WSymbol, rhs: WSymbol, depth: int):
    """Return ``(agrees, floor used)``; comparison is modulo ``tau^{<floor}``."""
    floor = -depth
    for s in (lhs, rhs):
        if s.floor is not None and s.floor > floor:
            floor = s.floor
    return lhs.agrees_with(rhs, floor), floor


def check_descent(dd: DescentDatum) -> DescentReport:
    """Verify both algebroid conditions on every increasing triple and quadruple.

    Condition 1, ``f_ij f_jk = Ad(a_ijk) f_ik``, is tested on the generators
    ``x_i, u_i, tau``; condition 2, ``a_ijk a_ikl = f_ij(a_jkl) a_ijl``, is a
    star-product identity.  Both are compared modulo ``tau^{<-depth}`` or the
    tracked floor, whichever is higher.
    """
    rep = validate_nerve(dd.nerve)
    if not rep:
        raise ValueError(f"invalid nerve: {rep.problems}")
    failures = []
    worst = -dd.depth
    inner = dd.depth + 2
    gens = generators(dd.n)
    for i, j, k in dd.nerve.triples:
        fij, fjk, fik = dd.f_of(i, j), dd.f_of(j, k), dd.f_of(i, k)
        ad = InnerAd(dd.a_of(i, j, k), inner)
        for name, g in gens:
            lhs = fij(fjk(g))
            rhs = ad(fik(g))
            ok, fl = _compare(lhs, rhs, dd.depth)
            worst = max(worst, fl)
            if not ok:
                deg = lhs.mismatch_degree(rhs, fl)
                failures.append(Failure(1, (i, j, k), f"differs on {name} at tau^{deg}"))
                break
    for i, j, k, l in dd.nerve.quads:
        lhs = star_w(dd.a_of(i, j, k), dd.a_of(i, k, l))
        rhs = star_w(dd.f_of(i, j)(dd.a_of(j, k, l)), dd.a_of(i, j, l))
        ok, fl = _compare(lhs, rhs, dd.depth)
        worst = max(worst, fl)
        if not ok:
            deg = lhs.mismatch_degree(rhs, fl)
            failures.append(Failure(2, (i, j, k, l), f"differs at tau^{deg}"))
    return DescentReport(not failures, worst, tuple(failures))


@dataclass
class GlueDatum:
    """Free modules ``M_i`` of rank ``ranks[i]`` glued along a descent datum.

    The transition ``xi_ij : M_j -> M_i`` sends a row vector ``m`` to
    ``f_ij(m) . X_ij`` where ``X_ij = xi[(i, j)]`` is a ``ranks[j] x ranks[i]``
    matrix of W-symbols and ``f_ij`` acts entrywise.
    """

    nerve: Nerve
    ranks: dict
    xi: dict
    parent: DescentDatum

    def __post_init__(self):
        for (i, j), X in self.xi.items():
            rows, cols = self.ranks.get(j), self.ranks.get(i)
            if rows is None or cols is None:
                raise RankMismatch(f"no rank declared for index {i if cols is None else j}")
            if len(X) != rows or any(len(r) != cols for r in X):
                raise RankMismatch(f"xi{(i, j)} must be {rows}x{cols}")

    def transition(self, i, j, vec):
        try:
            X = self.xi[(i, j)]
        except KeyError:
            raise MissingValue(f"no transition xi{(i, j)}") from None
        f = self.parent.f_of(i, j)
        img = [f(v) for v in vec]
        return _rowvec_times(img, X, self.parent.n)


def _rowvec_times(vec, X, n):
    cols = len(X[0]) if X else 0
    out = []
    for c in range(cols):
        acc = WSymbol.from_terms(n, {})
        for r, v in enumerate(vec):
            acc = acc + star_w(v, X[r][c])
        out.append(acc)
    return out


@dataclass(frozen=True)
class GlueReport:
    ok: bool
    verified_floor: int | None
    failure: tuple | None = None

    def __bool__(self):
        return self.ok


def check_glue(gd: GlueDatum) -> GlueReport:
    """Verify ``xi_ij(xi_jk(u)) = xi_ik(a_kji^-1 u)`` on every increasing triple.

    ``u`` runs over ``g e_l`` for the basis vectors ``e_l`` of ``M_k`` and
    ``g`` in ``1, x_i, u_i``.
    """
    dd = gd.parent
    n = dd.n
    depth = dd.depth
    worst = -depth
    one = WSymbol.const(n, 1)
    zero = WSymbol.from_terms(n, {})
    mults = [("1", one)] + [(nm, g) for nm, g in generators(n) if nm != "tau"]
    for i, j, k in gd.nerve.triples:
        rk = gd.ranks[k]
        if gd.ranks.get(i) is None or gd.ranks.get(j) is None:
            raise RankMismatch(f"no rank declared on triple {(i, j, k)}")
        a_inv = star_inverse(dd.a_of(k, j, i), depth + 2)
        for l in range(rk):
            for name, g in mults:
                u = [g if c == l else zero for c in range(rk)]
                lhs = gd.transition(i, j, gd.transition(j, k, u))
                rhs = gd.transition(i, k, [star_w(a_inv, v) for v in u])
                for c, (p, q) in enumerate(zip(lhs, rhs)):
                    ok, fl = _compare(p, q, depth)
                    worst = max(worst, fl)
                    if not ok:
                        deg = p.mismatch_degree(q, fl)
                        return GlueReport(
                            False, worst, ((i, j, k), f"entry {c} of image of {name}*e{l} differs at tau^{deg}")
                        )
    return GlueReport(True, worst)


# --------------------------------------------------------------------------
# generated examples


def ad_generated_datum(nerve: Nerve, b: dict, depth: int) -> DescentDatum:
    """Descent datum with ``f_ij = Ad(b_ij)`` and ``a_ijk = b_ij b_jk b_ik^-1``.

    ``b`` gives invertible symbols on increasing pairs; ``b_ji`` is taken to
    be the star inverse of ``b_ij``.  Values are produced for every ordering
    of every declared pair and triple.
    """
    n = next(iter(b.values())).n if b else 1
    inner = depth + 2
    full_b = {}
    for (i, j), s in b.items():
        full_b[(i, j)] = s
        full_b[(j, i)] = star_inverse(s, inner)
    f = {key: WAutomorphism((InnerAd(s, inner),)) for key, s in full_b.items()}
    a = {}
    for t in nerve.triples:
        for i, j, k in itertools.permutations(t):
            bik_inv = full_b[(k, i)]
            a[(i, j, k)] = star_w(star_w(full_b[(i, j)], full_b[(j, k)]), bik_inv)
    return DescentDatum(nerve, n, f, a, depth)


def ad_generated_glue(dd: DescentDatum, b: dict, rank: int = 1, frames=None) -> GlueDatum:
    """Gluing datum ``X_ij = b_ij C_ij`` with constant ``C_ij = G_j^-1 G_i``.

    ``frames`` maps each index to an invertible constant ``rank x rank``
    matrix ``G_i`` (identity when omitted); ``C`` then satisfies
    ``C_jk C_ij = C_ik`` and the gluing condition holds.
    """
    from . import _linalg as la

    inner = dd.depth + 2
    full_b = {}
    for (i, j), s in b.items():
        full_b[(i, j)] = s
        full_b[(j, i)] = star_inverse(s, inner)
    idx = range(dd.nerve.index_count)
    G = {i: la.matrix(frames[i]) if frames else la.identity(rank) for i in idx}
    xi = {}
    for (i, j), s in full_b.items():
        C = la.matmul(la.inverse(G[j]), G[i])
        xi[(i, j)] = [[s.scale(C[r][c]) for c in range(rank)] for r in range(rank)]
    return GlueDatum(dd.nerve, {i: rank for i in idx}, xi, dd)
