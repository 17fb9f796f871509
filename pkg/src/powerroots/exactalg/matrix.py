"""Immutable dense matrices over an exact field."""

from __future__ import annotations

from typing import Iterable, Sequence

from ..errors import DimensionError, FieldMismatchError
from .fields import Field, FieldScalar


class Matrix:
    """A dense matrix with entries in ``field``.

    Entries are stored as raw field values in a tuple of row tuples, which is
    also the canonical hashing key: two matrices are equal iff they have the
    same field and the same entries.
    """

    __slots__ = ("field", "nrows", "ncols", "_rows", "_hash")

    def __init__(self, rows: Iterable[Sequence], field: Field, ncols: int | None = None):
        conv = field.raw
        data = tuple(tuple(conv(x) for x in row) for row in rows)
        if data:
            width = len(data[0])
            if any(len(r) != width for r in data):
                raise DimensionError("ragged rows")
            if ncols is not None and ncols != width:
                raise DimensionError(f"expected {ncols} columns, got {width}")
        else:
            width = ncols or 0
        self.field = field
        self.nrows = len(data)
        self.ncols = width
        self._rows = data
        self._hash = None

    @classmethod
    def _raw(cls, field: Field, rows: tuple, ncols: int | None = None) -> "Matrix":
        m = object.__new__(cls)
        m.field = field
        m.nrows = len(rows)
        m.ncols = len(rows[0]) if rows else (ncols or 0)
        m._rows = rows
        m._hash = None
        return m

    # -- constructors -----------------------------------------------------

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        one, zero = field.one, field.zero
        return cls._raw(field, tuple(tuple(one if i == j else zero for j in range(n))
                                     for i in range(n)), n)

    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int) -> "Matrix":
        return cls._raw(field, tuple((field.zero,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def diag(cls, field: Field, entries: Sequence) -> "Matrix":
        d = [field.raw(x) for x in entries]
        n = len(d)
        return cls._raw(field, tuple(tuple(d[i] if i == j else field.zero for j in range(n))
                                     for i in range(n)), n)

    @classmethod
    def from_columns(cls, field: Field, columns: Sequence[Sequence], nrows: int) -> "Matrix":
        cols = [tuple(field.raw(x) for x in c) for c in columns]
        return cls._raw(field, tuple(tuple(c[i] for c in cols) for i in range(nrows)), len(cols))

    @classmethod
    def unit(cls, field: Field, n: int, i: int, j: int) -> "Matrix":
        """The matrix unit E_ij (0-based indices)."""
        rows = [[field.zero] * n for _ in range(n)]
        rows[i][j] = field.one
        return cls._raw(field, tuple(map(tuple, rows)), n)

    # -- access -----------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def raw_rows(self) -> tuple:
        return self._rows

    @property
    def key(self) -> tuple:
        return (self.field, self._rows)

    def __getitem__(self, ij) -> FieldScalar:
        i, j = ij
        return self.field.scalar(self._rows[i][j])

    def row(self, i: int) -> tuple:
        return tuple(map(self.field.scalar, self._rows[i]))

    def column(self, j: int) -> tuple:
        return tuple(self.field.scalar(r[j]) for r in self._rows)

    def rows(self) -> list[tuple]:
        return [self.row(i) for i in range(self.nrows)]

    def diagonal(self) -> tuple:
        return tuple(self.field.scalar(self._rows[i][i]) for i in range(min(self.shape)))

    def to_strings(self) -> list[list[str]]:
        fmt = self.field.fmt
        return [[fmt(x) for x in r] for r in self._rows]

    # -- predicates -------------------------------------------------------

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._rows for x in r)

    def is_identity(self) -> bool:
        return self.is_square() and all(
            x == (1 if i == j else 0) for i, r in enumerate(self._rows) for j, x in enumerate(r))

    def is_upper_triangular(self) -> bool:
        return self.is_square() and all(
            self._rows[i][j] == 0 for i in range(self.nrows) for j in range(i))

    def is_strictly_upper(self) -> bool:
        return self.is_square() and all(
            self._rows[i][j] == 0 for i in range(self.nrows) for j in range(i + 1))

    def is_unitriangular(self) -> bool:
        return self.is_upper_triangular() and all(
            self._rows[i][i] == 1 for i in range(self.nrows))

    # -- arithmetic -------------------------------------------------------

    def _check_same_field(self, other: "Matrix"):
        if other.field != self.field:
            raise FieldMismatchError(f"{self.field!r} matrix combined with {other.field!r} matrix")

    def __add__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check_same_field(other)
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        f = self.field.radd
        return Matrix._raw(self.field, tuple(tuple(map(f, a, b)) for a, b in zip(self._rows, other._rows)),
                           self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check_same_field(other)
        if self.shape != other.shape:
            raise DimensionError(f"cannot subtract {other.shape} from {self.shape}")
        f = self.field.rsub
        return Matrix._raw(self.field, tuple(tuple(map(f, a, b)) for a, b in zip(self._rows, other._rows)),
                           self.ncols)

    def __neg__(self) -> "Matrix":
        f = self.field.rneg
        return Matrix._raw(self.field, tuple(tuple(map(f, r)) for r in self._rows), self.ncols)

    def scale(self, c) -> "Matrix":
        c = self.field.raw(c)
        f = self.field.rmul
        return Matrix._raw(self.field, tuple(tuple(f(c, x) for x in r) for r in self._rows), self.ncols)

    def __mul__(self, c):
        if isinstance(c, Matrix):
            raise TypeError("use '@' for matrix products")
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check_same_field(other)
        if self.ncols != other.nrows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        cols = tuple(zip(*other._rows)) if other._rows else ()
        dot = self.field.rdot
        if not cols:
            return Matrix._raw(self.field, tuple(() for _ in self._rows), other.ncols)
        return Matrix._raw(self.field, tuple(tuple(dot(r, c) for c in cols) for r in self._rows),
                           other.ncols)

    def __pow__(self, k: int) -> "Matrix":
        if not self.is_square():
            raise DimensionError("power of a non-square matrix")
        if k < 0:
            inv = self.inverse()
            if inv is None:
                raise ZeroDivisionError("negative power of a singular matrix")
            return inv ** (-k)
        result = Matrix.identity(self.field, self.nrows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    def apply(self, vec: Sequence) -> tuple:
        """Matrix-vector product; returns a tuple of scalars."""
        if len(vec) != self.ncols:
            raise DimensionError(f"vector of length {len(vec)} for {self.shape} matrix")
        v = [self.field.raw(x) for x in vec]
        dot = self.field.rdot
        return tuple(self.field.scalar(dot(r, v)) for r in self._rows)

    @property
    def T(self) -> "Matrix":
        if not self._rows:
            return Matrix._raw(self.field, tuple(() for _ in range(self.ncols)), 0)
        return Matrix._raw(self.field, tuple(zip(*self._rows)), self.nrows)

    def hstack(self, other: "Matrix") -> "Matrix":
        self._check_same_field(other)
        if self.nrows != other.nrows:
            raise DimensionError("hstack needs equal row counts")
        return Matrix._raw(self.field, tuple(a + b for a, b in zip(self._rows, other._rows)),
                           self.ncols + other.ncols)

    def det(self) -> FieldScalar:
        from .linalg import det
        return det(self)

    def inverse(self) -> "Matrix | None":
        from .linalg import inverse
        return inverse(self)

    def commutator(self, other: "Matrix") -> "Matrix":
        """Group commutator ``self * other * self^-1 * other^-1``."""
        return self @ other @ self.inverse() @ other.inverse()

    # -- protocol ---------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.shape, self._rows))
        return self._hash

    def __repr__(self):
        return f"Matrix({self.to_strings()}, {self.field!r})"

    def __str__(self):
        cells = self.to_strings()
        if not cells:
            return "[]"
        width = max((len(c) for r in cells for c in r), default=1)
        return "\n".join("[" + " ".join(c.rjust(width) for c in r) + "]" for r in cells)
