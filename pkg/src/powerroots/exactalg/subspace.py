"""Subspaces of F^n stored by their canonical reduced echelon basis."""

from __future__ import annotations

from typing import Iterable, Sequence

from ..errors import DimensionError, FieldMismatchError
from .fields import Field


def _rref_rows(field: Field, rows: list[list], ncols: int) -> tuple[list[list], list[int]]:
    """In-place Gauss-Jordan elimination on raw rows; first-nonzero-column pivoting."""
    rinv, rmul, rsub = field.rinv, field.rmul, field.rsub
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = rinv(rows[r][c])
        if inv != 1:
            rows[r] = [rmul(inv, x) for x in rows[r]]
        pivot_row = rows[r]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f != 0:
                    rows[i] = [rsub(x, rmul(f, y)) for x, y in zip(rows[i], pivot_row)]
        pivots.append(c)
        r += 1
    return rows, pivots


class Subspace:
    """A linear subspace of ``field^ambient``.

    The basis is the nonzero part of the reduced row echelon form of any
    spanning set, so equal subspaces have identical stored bases and
    ``==`` is a plain data comparison.
    """

    __slots__ = ("field", "ambient", "_basis", "pivots")

    def __init__(self, field: Field, ambient: int, vectors: Iterable[Sequence] = ()):
        rows = []
        for v in vectors:
            if len(v) != ambient:
                raise DimensionError(f"vector of length {len(v)} in {ambient}-dim space")
            rows.append([field.raw(x) for x in v])
        rows, pivots = _rref_rows(field, rows, ambient)
        self.field = field
        self.ambient = ambient
        self._basis = tuple(tuple(r) for r in rows[:len(pivots)])
        self.pivots = tuple(pivots)

    @classmethod
    def _from_raw(cls, field, ambient, raw_rows) -> "Subspace":
        s = object.__new__(cls)
        rows, pivots = _rref_rows(field, [list(r) for r in raw_rows], ambient)
        s.field = field
        s.ambient = ambient
        s._basis = tuple(tuple(r) for r in rows[:len(pivots)])
        s.pivots = tuple(pivots)
        return s

    @classmethod
    def zero(cls, field: Field, ambient: int) -> "Subspace":
        return cls(field, ambient)

    @classmethod
    def full(cls, field: Field, ambient: int) -> "Subspace":
        return cls._from_raw(field, ambient, [[field.one if i == j else field.zero
                                               for j in range(ambient)] for i in range(ambient)])

    @property
    def dim(self) -> int:
        return len(self._basis)

    @property
    def raw_basis(self) -> tuple:
        return self._basis

    @property
    def basis(self) -> list[tuple]:
        sc = self.field.scalar
        return [tuple(map(sc, b)) for b in self._basis]

    def is_zero(self) -> bool:
        return not self._basis

    def _raw_vec(self, v) -> list:
        if len(v) != self.ambient:
            raise DimensionError(f"vector of length {len(v)} in {self.ambient}-dim space")
        return [self.field.raw(x) for x in v]

    def _reduce(self, v: list) -> list:
        rsub, rmul = self.field.rsub, self.field.rmul
        for b, c in zip(self._basis, self.pivots):
            f = v[c]
            if f != 0:
                v = [rsub(x, rmul(f, y)) for x, y in zip(v, b)]
        return v

    def contains(self, v: Sequence) -> bool:
        return all(x == 0 for x in self._reduce(self._raw_vec(v)))

    __contains__ = contains

    def coordinates(self, v: Sequence) -> tuple:
        """Coefficients of ``v`` in the echelon basis.  Raises if v is outside."""
        raw = self._raw_vec(v)
        if any(x != 0 for x in self._reduce(list(raw))):
            raise ValueError("vector is not in the subspace")
        sc = self.field.scalar
        return tuple(sc(raw[c]) for c in self.pivots)

    def combination(self, coeffs: Sequence) -> tuple:
        """The vector sum(coeffs[i] * basis[i])."""
        if len(coeffs) != self.dim:
            raise DimensionError(f"{len(coeffs)} coefficients for a {self.dim}-dim subspace")
        f = self.field
        out = [f.zero] * self.ambient
        for c, b in zip(coeffs, self._basis):
            c = f.raw(c)
            if c != 0:
                out = [f.radd(x, f.rmul(c, y)) for x, y in zip(out, b)]
        return tuple(map(f.scalar, out))

    def _check(self, other: "Subspace"):
        if other.field != self.field:
            raise FieldMismatchError("subspaces over different fields")
        if other.ambient != self.ambient:
            raise DimensionError("subspaces of different ambient spaces")

    def __le__(self, other: "Subspace") -> bool:
        self._check(other)
        return all(all(x == 0 for x in other._reduce(list(b))) for b in self._basis)

    def __ge__(self, other: "Subspace") -> bool:
        return other <= self

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace._from_raw(self.field, self.ambient, self._basis + other._basis)

    def intersection(self, other: "Subspace") -> "Subspace":
        self._check(other)
        from .linalg import kernel_basis
        from .matrix import Matrix
        # solve sum a_i s_i - sum b_j o_j = 0, keep sum a_i s_i
        if self.is_zero() or other.is_zero():
            return Subspace.zero(self.field, self.ambient)
        f = self.field
        cols = list(self._basis) + [tuple(f.rneg(x) for x in o) for o in other._basis]
        m = Matrix._raw(f, tuple(zip(*cols)), len(cols))
        ker = kernel_basis(m)
        vecs = [self.combination(k[:self.dim]) for k in ker.basis]
        return Subspace(f, self.ambient, vecs)

    def annihilator(self) -> "Subspace":
        """All y with <y, s> = 0 for every s in the subspace."""
        from .linalg import kernel_basis
        from .matrix import Matrix
        if self.is_zero():
            return Subspace.full(self.field, self.ambient)
        return kernel_basis(Matrix._raw(self.field, self._basis, self.ambient))

    def basis_matrix(self):
        """Basis vectors as the rows of a matrix."""
        from .matrix import Matrix
        return Matrix._raw(self.field, self._basis, self.ambient)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.field == other.field and self.ambient == other.ambient
                and self._basis == other._basis)

    def __hash__(self):
        return hash((self.field, self.ambient, self._basis))

    def __repr__(self):
        vecs = ", ".join("(" + ",".join(self.field.fmt(x) for x in b) + ")" for b in self._basis)
        return f"Subspace(dim={self.dim}/{self.ambient}, span[{vecs}])"
