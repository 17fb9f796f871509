"""The abelian quotient A = G/N, realised on diagonal vectors.

Over GF(p) the quotient is finite and enumerated.  Over Q a diagonal vector is
encoded by a sign bit and prime exponents per position, which turns
``b^k = a`` into an integer linear system solved through the Smith form; the
only torsion is in the signs, so every root set is finite.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import UnsupportedOperationError, ValidationError
from .exactalg import Field, Matrix, solve_integer_system

DiagClass = tuple


def class_mul(a: DiagClass, b: DiagClass) -> DiagClass:
    return tuple(x * y for x, y in zip(a, b))


def class_pow(a: DiagClass, k: int) -> DiagClass:
    return tuple(x ** k for x in a)


@dataclass(frozen=True)
class RootSet:
    """B = {b in A : b^k = a} in a deterministic order."""

    base: DiagClass
    k: int
    roots: tuple[DiagClass, ...]
    particular: DiagClass | None = None
    torsion: tuple[DiagClass, ...] = ()

    @property
    def empty(self) -> bool:
        return not self.roots

    def __iter__(self):
        return iter(self.roots)

    def __len__(self):
        return len(self.roots)

    def __contains__(self, b):
        return tuple(b) in self.roots


def _factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


class LatticeEncoding:
    """Injective homomorphism from diagonal vectors over Q* to (signs mod 2, exponents)."""

    def __init__(self, n: int, primes: Sequence[int], generators: Sequence[DiagClass]):
        self.n = n
        self.primes = tuple(primes)
        self.generators = [tuple(Fraction(x) for x in g) for g in generators]
        self.gen_codes = []
        for g in self.generators:
            code = self.encode(g)
            if code is None:
                raise ValidationError("generator diagonal has a zero entry")
            self.gen_codes.append(code)

    @classmethod
    def from_generators(cls, field: Field, n: int, diags: Sequence[DiagClass]) -> "LatticeEncoding":
        primes = set()
        for d in diags:
            for x in d:
                x = Fraction(x)
                if x == 0:
                    raise ValidationError("generator diagonal has a zero entry")
                primes.update(_factor(abs(x.numerator)))
                primes.update(_factor(x.denominator))
        return cls(n, sorted(primes), diags)

    def encode(self, d: DiagClass):
        """(sign bits, exponent vector) or None if d leaves the prime support."""
        signs, exps = [], []
        for x in d:
            x = Fraction(x)
            if x == 0:
                return None
            signs.append(1 if x < 0 else 0)
            num, den = abs(x.numerator), x.denominator
            for p in self.primes:
                e = 0
                while num % p == 0:
                    num //= p
                    e += 1
                while den % p == 0:
                    den //= p
                    e -= 1
                exps.append(e)
            if num != 1 or den != 1:
                return None
        return tuple(signs), tuple(exps)

    def decode_word(self, z: Sequence[int]) -> DiagClass:
        out = [Fraction(1)] * self.n
        for g, e in zip(self.generators, z):
            if e:
                out = [x * y ** e for x, y in zip(out, g)]
        return tuple(out)

    def _system(self, k: int):
        m = len(self.generators)
        rows = []
        for r in range(self.n * len(self.primes)):
            rows.append([k * self.gen_codes[i][1][r] for i in range(m)] + [0] * self.n)
        for pos in range(self.n):
            rows.append([k * self.gen_codes[i][0][pos] for i in range(m)]
                        + [-2 if t == pos else 0 for t in range(self.n)])
        return rows, m + self.n

    def solve(self, target: DiagClass, k: int = 1):
        """Exponent vectors z with decode_word(z)^k == target: (particular, kernel) or None."""
        code = self.encode(target)
        if code is None:
            return None
        signs, exps = code
        rows, ncols = self._system(k)
        sol = solve_integer_system(rows, list(exps) + list(signs), ncols=ncols)
        if sol is None:
            return None
        m = len(self.generators)
        return sol.particular[:m], [v[:m] for v in sol.kernel]

    def relation_lattice(self) -> list[tuple[int, ...]]:
        """Generators of {z : decode_word(z) == 1}."""
        sol = self.solve(tuple([1] * self.n))
        return [tuple(v) for v in sol[1] if any(v)]

    def exponent_rank(self) -> int:
        from .exactalg import smith_normal_form
        m = len(self.generators)
        rows = [[self.gen_codes[i][1][r] for i in range(m)] for r in range(self.n * len(self.primes))]
        if not rows or m == 0:
            return 0
        return smith_normal_form(rows).rank

    def sort_key(self, d: DiagClass):
        return self.encode(d)


class FiniteQuotient:
    """A = G/N for an enumerated group over GF(p)."""

    mode = "finite"

    def __init__(self, ctx):
        self.ctx = ctx
        self.reps: dict[DiagClass, Matrix] = {}
        self.rep_index: dict[DiagClass, int] = {}
        for idx, x in enumerate(ctx.elements):
            d = x.diagonal()
            if d not in self.reps:
                self.reps[d] = x
                self.rep_index[d] = idx
        self.classes: list[DiagClass] = list(self.reps)
        self.identity: DiagClass = ctx.identity.diagonal()

    @property
    def words(self) -> dict[DiagClass, list[int]]:
        """Generator-index word of each class representative (breadth-first)."""
        return {d: self.ctx.word_of(i) for d, i in self.rep_index.items()}

    def order(self) -> int:
        return len(self.classes)

    def is_finite(self) -> bool:
        return True

    def contains_class(self, d) -> bool:
        return tuple(d) in self.reps

    def project(self, g: Matrix) -> DiagClass:
        return g.diagonal()

    def class_order(self, d: DiagClass) -> int:
        k, x = 1, tuple(d)
        while x != self.identity:
            x = class_mul(x, d)
            k += 1
        return k

    def kth_root_classes(self, a: DiagClass, k: int) -> RootSet:
        if k < 1:
            raise ValueError("k must be a positive integer")
        a = tuple(a)
        if a not in self.reps:
            raise ValidationError(f"class {a} is not in the quotient")
        roots = sorted(b for b in self.classes if class_pow(b, k) == a)
        return RootSet(a, k, tuple(roots))

    def lift_class(self, b: DiagClass) -> Matrix:
        b = tuple(b)
        if b not in self.reps:
            raise ValidationError(f"class {b} is not in the quotient")
        return self.reps[b]

    def all_classes(self) -> list[DiagClass]:
        return sorted(self.classes)


class LatticeQuotient:
    """A = G/N over Q: a finitely generated subgroup of the diagonal group."""

    mode = "lattice"

    def __init__(self, ctx):
        self.ctx = ctx
        self.encoding = LatticeEncoding.from_generators(ctx.field, ctx.n,
                                                        [g.diagonal() for g in ctx.generators])
        self.identity: DiagClass = tuple([Fraction(1)] * ctx.n)

    @property
    def primes(self) -> tuple[int, ...]:
        return self.encoding.primes

    def generator_exponents(self) -> list[tuple[int, ...]]:
        return [code[1] for code in self.encoding.gen_codes]

    def rank(self) -> int:
        return self.encoding.exponent_rank()

    def is_finite(self) -> bool:
        return self.rank() == 0

    def order(self) -> int:
        if not self.is_finite():
            raise UnsupportedOperationError("the quotient has positive rank (infinite)")
        return len(self.all_classes())

    def contains_class(self, d) -> bool:
        return self.encoding.solve(tuple(d)) is not None

    def project(self, g: Matrix) -> DiagClass:
        return g.diagonal()

    def _torsion(self) -> list[DiagClass]:
        """All elements of order dividing 2 (sign patterns with trivial exponents)."""
        enc = self.encoding
        m = len(enc.generators)
        rows = [[enc.gen_codes[i][1][r] for i in range(m)] for r in range(enc.n * len(enc.primes))]
        if m == 0:
            return [self.identity]
        if rows:
            sol = solve_integer_system(rows, [0] * len(rows), ncols=m)
            kernel = sol.kernel
        else:
            kernel = [tuple(1 if i == j else 0 for i in range(m)) for j in range(m)]
        sign_vecs = []
        for z in kernel:
            s = tuple(sum(z[i] * enc.gen_codes[i][0][pos] for i in range(m)) % 2 for pos in range(enc.n))
            sign_vecs.append(s)
        span = {tuple([0] * enc.n)}
        for s in sign_vecs:
            span |= {tuple((a + b) % 2 for a, b in zip(v, s)) for v in span}
        return [tuple(Fraction(-1) if bit else Fraction(1) for bit in v) for v in span]

    def all_classes(self) -> list[DiagClass]:
        if not self.is_finite():
            raise UnsupportedOperationError("the quotient has positive rank (infinite)")
        return sorted(self._torsion(), key=self.encoding.sort_key)

    @property
    def classes(self) -> list[DiagClass]:
        return self.all_classes()

    def kth_root_classes(self, a: DiagClass, k: int) -> RootSet:
        if k < 1:
            raise ValueError("k must be a positive integer")
        a = tuple(Fraction(x) for x in a)
        if not self.contains_class(a):
            raise ValidationError(f"class {a} is not in the quotient")
        sol = self.encoding.solve(a, k)
        if sol is None:
            return RootSet(a, k, ())
        b0 = self.encoding.decode_word(sol[0])
        torsion = self._torsion() if k % 2 == 0 else [self.identity]
        roots = sorted({class_mul(b0, t) for t in torsion}, key=self.encoding.sort_key)
        return RootSet(a, k, tuple(roots), particular=b0,
                       torsion=tuple(sorted(torsion, key=self.encoding.sort_key)))

    def word_for(self, b: DiagClass) -> tuple[int, ...]:
        sol = self.encoding.solve(tuple(b))
        if sol is None:
            raise ValidationError(f"class {tuple(b)} is not in the quotient")
        return tuple(sol[0])

    def lift_class(self, b: DiagClass) -> Matrix:
        z = self.word_for(b)
        return self.ctx.word([(i, e) for i, e in enumerate(z) if e])


def build_quotient(ctx):
    return FiniteQuotient(ctx) if ctx.finite else LatticeQuotient(ctx)
