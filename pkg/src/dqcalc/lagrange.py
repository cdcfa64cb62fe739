"""Linear symplectic spaces, Lagrangian subspaces and their correspondences.

Vectors of a ``2n``-dimensional space are listed in the coordinate order
``(x1..xn, u1..un)``; the standard form is ``J = [[0, I], [-I, 0]]`` so that
``omega(e_xi, e_ui) = 1``.  Subspaces are stored by a canonical basis: the
nonzero rows of the reduced row echelon form of any spanning set.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import _linalg as la
from .errors import DimensionMismatch, SpaceMismatch
from .scalars import ONE, ZERO, Scalar, as_scalar

__all__ = [
    "SymplecticSpace",
    "LinearLagrangian",
    "Correspondence",
    "LagrangianReport",
    "standard_form",
    "is_lagrangian",
    "opposite",
    "product_space",
    "compose_correspondence",
    "graph",
    "diagonal",
    "product_correspondence",
    "is_symplectic_matrix",
]


def standard_form(n: int):
    J = la.zeros(2 * n, 2 * n)
    for i in range(n):
        J[i][n + i] = ONE
        J[n + i][i] = -ONE
    return J


def _freeze(m):
    return tuple(tuple(as_scalar(v) for v in row) for row in m)


@dataclass(frozen=True)
class SymplecticSpace:
    n: int
    form: tuple
    sign: int = 1

    def __init__(self, n: int, form=None, sign: int = 1):
        form = standard_form(n) if form is None or form == "standard" else form
        form = _freeze(form)
        if len(form) != 2 * n or any(len(r) != 2 * n for r in form):
            raise DimensionMismatch(f"form must be {2 * n}x{2 * n}")
        for i in range(2 * n):
            for j in range(2 * n):
                if form[i][j] != -form[j][i]:
                    raise ValueError("form is not skew-symmetric")
        if la.rank([list(r) for r in form]) != 2 * n:
            raise ValueError("form is degenerate")
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "form", form)
        object.__setattr__(self, "sign", sign)

    @classmethod
    def standard(cls, n: int) -> "SymplecticSpace":
        return cls(n)

    @property
    def dim(self) -> int:
        return 2 * self.n

    def omega(self, v, w) -> Scalar:
        return sum(
            (v[i] * self.form[i][j] * w[j] for i in range(self.dim) for j in range(self.dim) if self.form[i][j]),
            ZERO,
        )


def opposite(S: SymplecticSpace) -> SymplecticSpace:
    """Same space with the form ``-omega``."""
    return SymplecticSpace(S.n, la.neg([list(r) for r in S.form]), -S.sign)


def product_space(left: SymplecticSpace, right: SymplecticSpace) -> SymplecticSpace:
    """``left x right^a``: the form ``omega_left (+) -omega_right``."""
    form = la.block_diag([list(r) for r in left.form], la.neg([list(r) for r in right.form]))
    return SymplecticSpace(left.n + right.n, form)


@dataclass(frozen=True)
class LinearLagrangian:
    """A subspace of ``space`` given by basis vectors (each of length ``2n``)."""

    space: SymplecticSpace
    basis: tuple

    def __init__(self, space: SymplecticSpace, basis):
        vecs = [tuple(as_scalar(v) for v in vec) for vec in basis]
        if any(len(v) != space.dim for v in vecs):
            raise DimensionMismatch(f"basis vectors must have length {space.dim}")
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "basis", tuple(la.column_space_canonical([list(v) for v in vecs], space.dim)))

    @property
    def dim(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class LagrangianReport:
    ok: bool
    rank: int
    violation: tuple | None = None

    def __bool__(self):
        return self.ok


def is_lagrangian(L: LinearLagrangian) -> LagrangianReport:
    """Rank ``n`` and ``omega`` vanishing on every pair of basis vectors."""
    S = L.space
    r = L.dim
    for a in range(r):
        for b in range(a + 1, r):
            w = S.omega(L.basis[a], L.basis[b])
            if w:
                return LagrangianReport(False, r, (a, b, w))
    return LagrangianReport(r == S.n, r, None)


@dataclass(frozen=True)
class Correspondence:
    """A Lagrangian subspace of ``left x right^a``."""

    left: SymplecticSpace
    right: SymplecticSpace
    subspace: LinearLagrangian

    def __init__(self, left, right, basis):
        if isinstance(basis, LinearLagrangian):
            basis = basis.basis
        space = product_space(left, right)
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        object.__setattr__(self, "subspace", LinearLagrangian(space, basis))

    @property
    def basis(self):
        return self.subspace.basis


def compose_correspondence(L2: Correspondence, L1: Correspondence) -> Correspondence:
    """``p31(p32^-1 L2 & p21^-1 L1)`` for ``L2 in V3 x V2^a``, ``L1 in V2 x V1^a``."""
    if L2.right != L1.left:
        raise SpaceMismatch("L2.right and L1.left differ")
    d3, d2, d1 = L2.left.dim, L2.right.dim, L1.right.dim
    B2 = [list(v) for v in L2.basis]  # vectors (v3, v2)
    B1 = [list(v) for v in L1.basis]  # vectors (v2, v1)
    # (s, t) with sum s_a B2[a][v2] = sum t_b B1[b][v2]
    system = []
    for row in range(d2):
        system.append([v[d3 + row] for v in B2] + [-v[row] for v in B1])
    ker = la.kernel(system, len(B2) + len(B1))
    out = []
    for vec in ker:
        s, t = vec[: len(B2)], vec[len(B2):]
        v3 = [sum((s[a] * B2[a][r] for a in range(len(B2))), ZERO) for r in range(d3)]
        v1 = [sum((t[b] * B1[b][d2 + r] for b in range(len(B1))), ZERO) for r in range(d1)]
        out.append(v3 + v1)
    return Correspondence(L2.left, L1.right, out)


def is_symplectic_matrix(A, S: SymplecticSpace) -> bool:
    J = [list(r) for r in S.form]
    return la.matmul(la.matmul(la.transpose(A), J), A) == J


def graph(A, S: SymplecticSpace) -> Correspondence:
    """``{(A v, v)}`` inside ``S x S^a``."""
    A = la.matrix(A)
    vecs = []
    for k in range(S.dim):
        e = [ONE if i == k else ZERO for i in range(S.dim)]
        vecs.append(la.matvec(A, e) + e)
    return Correspondence(S, S, vecs)


def diagonal(S: SymplecticSpace) -> Correspondence:
    return graph(la.identity(S.dim), S)


def product_correspondence(Lc: LinearLagrangian, Ld: LinearLagrangian) -> Correspondence:
    """``Lc x Ld`` as a correspondence ``Lc.space <- Ld.space``."""
    d3, d2 = Lc.space.dim, Ld.space.dim
    vecs = [list(v) + [ZERO] * d2 for v in Lc.basis] + [[ZERO] * d3 + list(v) for v in Ld.basis]
    return Correspondence(Lc.space, Ld.space, vecs)
