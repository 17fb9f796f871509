"""Integer matrices: Smith normal form and integer linear systems."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

IntMatrix = list[list[int]]


@dataclass(frozen=True)
class SmithDecomposition:
    """U @ M @ V == D with U, V unimodular and D diagonal with d_i | d_(i+1)."""

    U: tuple[tuple[int, ...], ...]
    D: tuple[tuple[int, ...], ...]
    V: tuple[tuple[int, ...], ...]

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


@dataclass(frozen=True)
class IntegerSolution:
    """All integer solutions: particular + integer span of kernel."""

    particular: tuple[int, ...]
    kernel: tuple[tuple[int, ...], ...]


def int_matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> IntMatrix:
    cols = list(zip(*b))
    return [[sum(x * y for x, y in zip(r, c)) for c in cols] for r in a]


def int_identity(n: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def int_det(m: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def smith_normal_form(m: Sequence[Sequence[int]], ncols: int | None = None) -> SmithDecomposition:
    """Smith normal form with transforms.

    Pivot choice: smallest nonzero absolute value in the remaining block,
    ties broken by row, then column.
    """
    a = [list(r) for r in m]
    nr = len(a)
    nc = len(a[0]) if a else (ncols or 0)
    U = int_identity(nr)
    V = int_identity(nc)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for row in a:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for t in range(min(nr, nc)):
        while True:
            best = None
            for i in range(t, nr):
                for j in range(t, nc):
                    x = a[i][j]
                    if x != 0 and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                break
            _, i, j = best
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
            p = a[t][t]
            for i in range(t + 1, nr):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
            for j in range(t + 1, nc):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
            if any(a[i][t] for i in range(t + 1, nr)) or any(a[t][j] for j in range(t + 1, nc)):
                continue
            bad = next(((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc)
                        if a[i][j] % p), None)
            if bad is not None:
                add_row(t, bad[0], 1)
                continue
            break
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
    freeze = lambda mat: tuple(tuple(r) for r in mat)  # noqa: E731
    return SmithDecomposition(freeze(U), freeze(a), freeze(V))


def solve_integer_system(m: Sequence[Sequence[int]], c: Sequence[int],
                         ncols: int | None = None) -> IntegerSolution | None:
    """Every integer z with m z = c, or None if there is none."""
    nr = len(m)
    nc = len(m[0]) if m else (ncols or 0)
    if len(c) != nr:
        raise ValueError(f"right-hand side of length {len(c)} for a {nr}-row system")
    snf = smith_normal_form(m, ncols=nc)
    uc = [sum(u * x for u, x in zip(row, c)) for row in snf.U]
    d = snf.diagonal
    y = [0] * nc
    for i in range(nr):
        di = d[i] if i < len(d) else 0
        if di == 0:
            if uc[i] != 0:
                return None
        else:
            if uc[i] % di:
                return None
            y[i] = uc[i] // di
    z = tuple(sum(v * yy for v, yy in zip(row, y)) for row in snf.V)
    r = snf.rank
    kernel = tuple(tuple(snf.V[i][j] for i in range(nc)) for j in range(r, nc))
    return IntegerSolution(z, kernel)
