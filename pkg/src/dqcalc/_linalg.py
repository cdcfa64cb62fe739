"""Dense exact linear algebra over Q(i).

Matrices are lists of row lists of :class:`~dqcalc.scalars.Scalar`.
"""
from __future__ import annotations

from .scalars import ONE, ZERO, Scalar, as_scalar


def matrix(rows) -> list[list[Scalar]]:
    return [[as_scalar(v) for v in row] for row in rows]


def identity(n: int) -> list[list[Scalar]]:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> list[list[Scalar]]:
    return [[ZERO] * c for _ in range(r)]


def transpose(m):
    if not m:
        return []
    return [list(col) for col in zip(*m)]


def matmul(a, b):
    bt = transpose(b)
    out = []
    for row in a:
        out.append([sum((x * y for x, y in zip(row, col)), ZERO) for col in bt])
    return out


def matvec(a, v):
    return [sum((x * y for x, y in zip(row, v)), ZERO) for row in a]


def neg(m):
    return [[-v for v in row] for row in m]


def block_diag(a, b):
    ra, ca = len(a), len(a[0]) if a else 0
    rb, cb = len(b), len(b[0]) if b else 0
    out = zeros(ra + rb, ca + cb)
    for i in range(ra):
        out[i][:ca] = a[i]
    for i in range(rb):
        out[ra + i][ca:] = b[i]
    return out


def rref(m):
    """Reduced row echelon form and pivot columns."""
    a = [list(row) for row in m]
    rows = len(a)
    cols = len(a[0]) if a else 0
    pivots = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = a[r][c].inverse()
        a[r] = [v * inv for v in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank(m) -> int:
    return len(rref(m)[1]) if m else 0


def inverse(m):
    n = len(m)
    aug = [list(row) + e for row, e in zip(m, identity(n))]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def kernel(m, ncols: int | None = None):
    """Basis (list of vectors) of the right null space of ``m``."""
    cols = ncols if ncols is not None else (len(m[0]) if m else 0)
    if not m:
        return [[ONE if i == j else ZERO for i in range(cols)] for j in range(cols)]
    red, piv = rref(m)
    free = [c for c in range(cols) if c not in piv]
    basis = []
    for f in free:
        v = [ZERO] * cols
        v[f] = ONE
        for r, p in enumerate(piv):
            v[p] = -red[r][f]
        basis.append(v)
    return basis


def column_space_canonical(vectors, dim: int):
    """Canonical basis of ``span(vectors)``: rows of the reduced echelon form."""
    if not vectors:
        return []
    red, piv = rref(vectors)
    return [tuple(red[i]) for i in range(len(piv))]
