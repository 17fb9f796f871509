"""Univariate polynomials over an exact field."""

from __future__ import annotations

from typing import Sequence

from ..errors import FieldMismatchError
from .fields import Field, FieldScalar


class Polynomial:
    """Dense polynomial, coefficients in ascending degree.

    The zero polynomial has an empty coefficient tuple; otherwise the
    leading coefficient is nonzero.
    """

    __slots__ = ("field", "_c")

    def __init__(self, coeffs: Sequence, field: Field):
        self.field = field
        self._c = _trim([field.raw(x) for x in coeffs])

    @classmethod
    def _raw(cls, field, coeffs) -> "Polynomial":
        p = object.__new__(cls)
        p.field = field
        p._c = _trim(list(coeffs))
        return p

    @classmethod
    def x(cls, field: Field) -> "Polynomial":
        return cls._raw(field, [field.zero, field.one])

    @classmethod
    def constant(cls, c, field: Field) -> "Polynomial":
        return cls([c], field)

    @classmethod
    def geometric(cls, k: int, field: Field) -> "Polynomial":
        """1 + x + ... + x^(k-1), whose roots are the k-th roots of unity other than 1."""
        return cls._raw(field, [field.one] * k)

    @property
    def coeffs(self) -> tuple:
        return tuple(map(self.field.scalar, self._c))

    @property
    def raw_coeffs(self) -> tuple:
        return self._c

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self._c) - 1

    def is_zero(self) -> bool:
        return not self._c

    def is_one(self) -> bool:
        return self._c == (self.field.one,)

    def leading(self) -> FieldScalar:
        return self.field.scalar(self._c[-1])

    def monic(self) -> "Polynomial":
        if not self._c:
            return self
        f = self.field
        inv = f.rinv(self._c[-1])
        return Polynomial._raw(f, [f.rmul(inv, x) for x in self._c])

    def _check(self, other):
        if not isinstance(other, Polynomial):
            raise TypeError("expected a Polynomial")
        if other.field != self.field:
            raise FieldMismatchError("polynomials over different fields")

    def __add__(self, other):
        self._check(other)
        f = self.field
        n = max(len(self._c), len(other._c))
        a = list(self._c) + [f.zero] * (n - len(self._c))
        b = list(other._c) + [f.zero] * (n - len(other._c))
        return Polynomial._raw(f, [f.radd(x, y) for x, y in zip(a, b)])

    def __neg__(self):
        return Polynomial._raw(self.field, [self.field.rneg(x) for x in self._c])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        f = self.field
        if not self._c or not other._c:
            return Polynomial._raw(f, [])
        out = [f.zero] * (len(self._c) + len(other._c) - 1)
        for i, a in enumerate(self._c):
            if a == 0:
                continue
            for j, b in enumerate(other._c):
                out[i + j] = f.radd(out[i + j], f.rmul(a, b))
        return Polynomial._raw(f, out)

    def __pow__(self, k: int):
        result = Polynomial._raw(self.field, [self.field.one])
        for _ in range(k):
            result = result * self
        return result

    def __divmod__(self, other):
        self._check(other)
        if not other._c:
            raise ZeroDivisionError("polynomial division by zero")
        f = self.field
        rem = list(self._c)
        dq = len(rem) - len(other._c)
        if dq < 0:
            return Polynomial._raw(f, []), self
        quo = [f.zero] * (dq + 1)
        inv_lead = f.rinv(other._c[-1])
        for i in range(dq, -1, -1):
            c = f.rmul(rem[i + len(other._c) - 1], inv_lead)
            quo[i] = c
            if c != 0:
                for j, b in enumerate(other._c):
                    rem[i + j] = f.rsub(rem[i + j], f.rmul(c, b))
        return Polynomial._raw(f, quo), Polynomial._raw(f, rem[:len(other._c) - 1])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x) -> FieldScalar:
        """Horner evaluation at a field element."""
        f = self.field
        xr = f.raw(x)
        acc = f.zero
        for c in reversed(self._c):
            acc = f.radd(f.rmul(acc, xr), c)
        return f.scalar(acc)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.field == other.field and self._c == other._c

    def __hash__(self):
        return hash((self.field, self._c))

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        if not self._c:
            return "0"
        f = self.field
        terms = []
        for d in range(len(self._c) - 1, -1, -1):
            c = self._c[d]
            if c == 0:
                continue
            neg = f.characteristic == 0 and c < 0
            mag = -c if neg else c
            cs = f.fmt(mag)
            if d == 0:
                body = cs
            else:
                mono = "x" if d == 1 else f"x^{d}"
                body = mono if mag == 1 else (f"{cs}*{mono}" if "/" in cs else f"{cs}{mono}")
            terms.append(("-" if neg else "+", body))
        sign, body = terms[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def _trim(c: list) -> tuple:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def poly_gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    """Monic gcd by the Euclidean algorithm; gcd(0, 0) is the zero polynomial."""
    p._check(q)
    a, b = p, q
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()
