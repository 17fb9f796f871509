"""Elimination-based linear algebra over Q and GF(p).

Everything is exact and deterministic: pivots are always the first row with a
nonzero entry in the leftmost remaining column.
"""

from __future__ import annotations

from typing import Sequence

from ..errors import DimensionError
from .fields import FieldScalar
from .matrix import Matrix
from .poly import Polynomial
from .subspace import Subspace, _rref_rows


def rref(m: Matrix) -> tuple[Matrix, int, list[int]]:
    """Reduced row echelon form, rank and pivot columns."""
    rows, pivots = _rref_rows(m.field, [list(r) for r in m.raw_rows], m.ncols)
    return Matrix._raw(m.field, tuple(map(tuple, rows)), m.ncols), len(pivots), pivots


def rank(m: Matrix) -> int:
    return rref(m)[1]


def kernel_basis(m: Matrix) -> Subspace:
    """Null space {v : m v = 0} as a canonical subspace of F^ncols."""
    f = m.field
    rows, pivots = _rref_rows(f, [list(r) for r in m.raw_rows], m.ncols)
    pivot_set = set(pivots)
    vectors = []
    for free in range(m.ncols):
        if free in pivot_set:
            continue
        v = [f.zero] * m.ncols
        v[free] = f.one
        for r, c in enumerate(pivots):
            v[c] = f.rneg(rows[r][free])
        vectors.append(v)
    return Subspace._from_raw(f, m.ncols, vectors)


def column_space(m: Matrix) -> Subspace:
    """Image of m as a subspace of F^nrows."""
    return Subspace._from_raw(m.field, m.nrows, m.T.raw_rows)


def solve_linear(m: Matrix, c: Sequence) -> tuple | None:
    """One solution of m w = c (free variables set to zero), or None."""
    if len(c) != m.nrows:
        raise DimensionError(f"right-hand side of length {len(c)} for {m.shape} system")
    f = m.field
    rhs = [f.raw(x) for x in c]
    rows = [list(r) + [b] for r, b in zip(m.raw_rows, rhs)]
    rows, pivots = _rref_rows(f, rows, m.ncols + 1)
    if pivots and pivots[-1] == m.ncols:
        return None
    w = [f.zero] * m.ncols
    for r, col in enumerate(pivots):
        w[col] = rows[r][m.ncols]
    return tuple(map(f.scalar, w))


def det(m: Matrix) -> FieldScalar:
    if not m.is_square():
        raise DimensionError(f"determinant of a non-square {m.shape} matrix")
    f = m.field
    rows = [list(r) for r in m.raw_rows]
    n = m.nrows
    d = f.one
    for c in range(n):
        p = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if p is None:
            return f.scalar(f.zero)
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            d = f.rneg(d)
        piv = rows[c][c]
        d = f.rmul(d, piv)
        inv = f.rinv(piv)
        for i in range(c + 1, n):
            factor = f.rmul(rows[i][c], inv)
            if factor != 0:
                rows[i] = [f.rsub(x, f.rmul(factor, y)) for x, y in zip(rows[i], rows[c])]
    return f.scalar(d)


def inverse(m: Matrix) -> Matrix | None:
    """Exact inverse, or None when m is singular."""
    if not m.is_square():
        raise DimensionError(f"inverse of a non-square {m.shape} matrix")
    n = m.nrows
    f = m.field
    aug = [list(r) + [f.one if i == j else f.zero for j in range(n)]
           for i, r in enumerate(m.raw_rows)]
    rows, pivots = _rref_rows(f, aug, 2 * n)
    if len(pivots) < n or pivots[n - 1] != n - 1:
        return None
    return Matrix._raw(f, tuple(tuple(r[n:]) for r in rows), n)


def char_poly(m: Matrix) -> Polynomial:
    """det(xI - m) by the division-free Berkowitz recurrence."""
    if not m.is_square():
        raise DimensionError(f"characteristic polynomial of a non-square {m.shape} matrix")
    f = m.field
    a = m.raw_rows
    n = m.nrows
    # coefficient vectors are kept in descending degree order
    poly = [f.one]
    for r in range(n):
        # leading (r+1)x(r+1) block = [[A_r, S], [R, a_rr]]
        row_r = a[r][:r]
        col_s = [a[i][r] for i in range(r)]
        toeplitz = [f.one, f.rneg(a[r][r])]
        vec = col_s
        for _ in range(r):
            toeplitz.append(f.rneg(f.rdot(row_r, vec)))
            vec = [f.rdot(a[i][:r], vec) for i in range(r)]
        new = []
        for i in range(r + 2):
            acc = f.zero
            for j in range(min(i + 1, r + 1)):
                acc = f.radd(acc, f.rmul(toeplitz[i - j], poly[j]))
            new.append(acc)
        poly = new
    return Polynomial._raw(f, list(reversed(poly)))
