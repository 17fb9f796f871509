"""Exact scalar fields: the rationals and prime fields.

Rationals are plain :class:`fractions.Fraction` values.  Prime field elements
are :class:`GFElement`.  Matrices and polynomials keep *raw* values internally
(``Fraction`` for Q, ``int`` residues for GF(p)) and hand out scalars at their
public boundary; the :class:`Field` objects translate between the two.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from typing import Union

from ..errors import FieldMismatchError

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*([+-]?\d+))?\s*$")


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class GFElement:
    """An element of the prime field GF(p)."""

    __slots__ = ("value", "modulus")

    def __init__(self, value: int, modulus: int):
        self.value = value % modulus
        self.modulus = modulus

    def _other(self, other):
        if isinstance(other, GFElement):
            if other.modulus != self.modulus:
                raise FieldMismatchError(
                    f"cannot combine GF({self.modulus}) and GF({other.modulus}) elements")
            return other.value
        if isinstance(other, bool):
            return NotImplemented
        if isinstance(other, int):
            return other % self.modulus
        if isinstance(other, (Fraction, float)):
            raise FieldMismatchError(
                f"cannot combine GF({self.modulus}) element with {type(other).__name__}")
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return GFElement(self.value + o, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return GFElement(self.value - o, self.modulus)

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return GFElement(o - self.value, self.modulus)

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return GFElement(self.value * o, self.modulus)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        if o == 0:
            raise ZeroDivisionError("division by zero in GF(%d)" % self.modulus)
        return GFElement(self.value * pow(o, -1, self.modulus), self.modulus)

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return GFElement(o, self.modulus) / self

    def __neg__(self):
        return GFElement(-self.value, self.modulus)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return GFElement(pow(self.value, k, self.modulus), self.modulus)

    def inverse(self) -> "GFElement":
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse in GF(%d)" % self.modulus)
        return GFElement(pow(self.value, -1, self.modulus), self.modulus)

    def __eq__(self, other):
        if isinstance(other, GFElement):
            return self.modulus == other.modulus and self.value == other.value
        if isinstance(other, int) and not isinstance(other, bool):
            # residues compare equal only to their canonical representative
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __lt__(self, other):
        if isinstance(other, GFElement) and other.modulus == self.modulus:
            return self.value < other.value
        return NotImplemented

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"GF({self.modulus})({self.value})"

    def __str__(self):
        return str(self.value)


FieldScalar = Union[Fraction, GFElement]


class Field:
    """Common interface of :data:`QQ` and :func:`GF` fields.

    Methods prefixed ``r`` work on raw values and skip all validation.
    """

    characteristic: int
    name: str

    def __call__(self, x) -> FieldScalar:
        return self.scalar(self.raw(x))

    def is_finite(self) -> bool:
        return self.characteristic != 0

    def descriptor(self):
        raise NotImplementedError


class RationalField(Field):
    characteristic = 0
    name = "Q"
    zero = Fraction(0)
    one = Fraction(1)

    def raw(self, x) -> Fraction:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, bool):
            raise TypeError("booleans are not field elements")
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, str):
            return parse_rational(x)
        if isinstance(x, GFElement):
            raise FieldMismatchError(f"cannot use {x!r} as a rational")
        raise TypeError(f"cannot interpret {type(x).__name__} {x!r} as an exact rational")

    def scalar(self, r):
        return r

    def fmt(self, r) -> str:
        return str(r)

    def radd(self, a, b):
        return a + b

    def rsub(self, a, b):
        return a - b

    def rmul(self, a, b):
        return a * b

    def rneg(self, a):
        return -a

    def rinv(self, a):
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return 1 / a

    def rdot(self, xs, ys):
        return sum(map(_mul, xs, ys), Fraction(0))

    def rnormalize(self, a):
        return a

    def descriptor(self):
        return "Q"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "QQ"


class PrimeField(Field):
    zero = 0
    one = 1

    def __init__(self, p: int):
        if not isinstance(p, int) or not is_prime(p):
            raise ValueError(f"modulus {p!r} is not prime")
        self.p = p
        self.characteristic = p
        self.name = f"GF({p})"

    def raw(self, x) -> int:
        p = self.p
        if isinstance(x, GFElement):
            if x.modulus != p:
                raise FieldMismatchError(f"{x!r} does not belong to GF({p})")
            return x.value
        if isinstance(x, bool):
            raise TypeError("booleans are not field elements")
        if isinstance(x, int):
            return x % p
        if isinstance(x, str):
            q = parse_rational(x)
            if q.denominator % p == 0:
                raise ValueError(f"{x!r} has a denominator divisible by {p}")
            return q.numerator * pow(q.denominator, -1, p) % p
        if isinstance(x, Fraction):
            raise FieldMismatchError(f"cannot use rational {x} in GF({p})")
        raise TypeError(f"cannot interpret {type(x).__name__} {x!r} in GF({p})")

    def scalar(self, r):
        return GFElement(r, self.p)

    def fmt(self, r) -> str:
        return str(r)

    def radd(self, a, b):
        return (a + b) % self.p

    def rsub(self, a, b):
        return (a - b) % self.p

    def rmul(self, a, b):
        return a * b % self.p

    def rneg(self, a):
        return -a % self.p

    def rinv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError(f"0 has no inverse in GF({self.p})")
        return pow(a, -1, self.p)

    def rdot(self, xs, ys):
        return sum(map(_mul, xs, ys)) % self.p

    def rnormalize(self, a):
        return a % self.p

    def descriptor(self):
        return {"Fp": self.p}

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"


def _mul(a, b):
    return a * b


def parse_rational(text: str) -> Fraction:
    """Parse ``"n"`` or ``"n/d"``.  Decimal and exponent notation is refused."""
    m = _RATIONAL_RE.match(text)
    if not m:
        raise ValueError(f"not an exact integer or 'p/q' rational: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ZeroDivisionError(f"zero denominator in {text!r}")
    return Fraction(num, den)


QQ = RationalField()


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_descriptor(desc) -> Field:
    """``"Q"`` -> QQ, ``{"Fp": p}`` -> GF(p)."""
    if desc == "Q" or desc == "QQ":
        return QQ
    if isinstance(desc, dict) and set(desc) == {"Fp"}:
        return GF(int(desc["Fp"]))
    raise ValueError(f"unknown field descriptor {desc!r}; expected \"Q\" or {{\"Fp\": p}}")


def scalar_field(x) -> Field | None:
    """The field a scalar belongs to, or None for plain ints."""
    if isinstance(x, GFElement):
        return GF(x.modulus)
    if isinstance(x, Fraction):
        return QQ
    return None
