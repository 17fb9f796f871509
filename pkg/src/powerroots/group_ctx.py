"""Validated contexts for groups of invertible upper-triangular matrices.

The unipotent part N is the kernel of the diagonal map, so G/N is abelian by
construction.  Over GF(p) the whole group is enumerated once (breadth-first
from the generators).  Over Q, N must be given as the exponential of a
nilpotent Lie algebra spanned by strictly upper-triangular matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from math import factorial
from typing import Sequence

from .errors import (CapExceededError, PreconditionError, UnsupportedOperationError,
                     ValidationError)
from .exactalg import Field, Matrix, Subspace

DEFAULT_CAP = 10 ** 6
STRATEGIES = ("superdiag", "refined", "lower")


@dataclass(frozen=True)
class GroupSpec:
    """Unvalidated description of G = <generators> (and N = exp(lie_algebra) over Q)."""

    field: Field
    dim: int
    generators: tuple[Matrix, ...]
    names: tuple[str, ...] | None = None
    lie_algebra: tuple[Matrix, ...] | None = None
    cap: int = DEFAULT_CAP
    unipotent_coords: tuple[tuple[int, int], ...] | None = None
    label: str = ""
    extras: dict = dc_field(default_factory=dict, compare=False, hash=False)


def _flatten(m: Matrix) -> tuple:
    return tuple(x for row in m.raw_rows for x in row)


def _unflatten(field: Field, n: int, vec: Sequence) -> Matrix:
    raw = [field.raw(x) for x in vec]
    return Matrix._raw(field, tuple(tuple(raw[i * n:(i + 1) * n]) for i in range(n)), n)


def _require_exp_log_field(field: Field, n: int):
    p = field.characteristic
    if p != 0 and p <= n:
        raise UnsupportedOperationError(
            f"exp/log of {n}x{n} matrices needs characteristic 0 or > {n}, not {p}")


def exp_nilpotent(x: Matrix) -> Matrix:
    """exp of a strictly upper-triangular matrix (the series terminates)."""
    if not x.is_strictly_upper():
        raise PreconditionError("exp_nilpotent expects a strictly upper-triangular matrix")
    n = x.nrows
    _require_exp_log_field(x.field, n)
    f = x.field
    result = Matrix.identity(f, n)
    term = Matrix.identity(f, n)
    for m in range(1, n):
        term = term @ x
        if term.is_zero():
            break
        result = result + term.scale(f.rinv(f.raw(factorial(m))) if f.characteristic
                                     else Fraction(1, factorial(m)))
    return result


def log_unipotent(u: Matrix) -> Matrix:
    """log of a unitriangular matrix (the series terminates)."""
    if not u.is_unitriangular():
        raise PreconditionError("log_unipotent expects a unitriangular matrix")
    n = u.nrows
    _require_exp_log_field(u.field, n)
    f = u.field
    y = u - Matrix.identity(f, n)
    result = Matrix.zeros(f, n, n)
    power = Matrix.identity(f, n)
    for m in range(1, n):
        power = power @ y
        if power.is_zero():
            break
        coeff = f.raw(Fraction((-1) ** (m + 1), m)) if f.characteristic == 0 else \
            f.rmul(f.raw((-1) ** (m + 1)), f.rinv(m % f.characteristic))
        result = result + power.scale(coeff)
    return result


def lie_bracket(x: Matrix, y: Matrix) -> Matrix:
    return x @ y - y @ x


class TriangularGroup:
    """A validated group context.  Build with :func:`validate_spec`."""

    def __init__(self, spec: GroupSpec, names: tuple[str, ...]):
        self.spec = spec
        self.field = spec.field
        self.n = spec.dim
        self.generators = spec.generators
        self.names = names
        self.finite = spec.field.characteristic != 0
        self.identity = Matrix.identity(self.field, self.n)
        self._series: dict = {}
        # filled by validate_spec
        self.elements: list[Matrix] = []
        self.index: dict[Matrix, int] = {}
        self.parents: list = []
        self.unipotent: list[Matrix] = []
        self.unipotent_set: frozenset = frozenset()
        self.lie: Subspace | None = None

    # -- element handling -------------------------------------------------

    def diag_class(self, g: Matrix) -> tuple:
        """The diagonal of g; equal for two elements iff they share an N-coset."""
        return g.diagonal()

    def unipotent_membership(self, m: Matrix) -> bool:
        if m.field != self.field or m.shape != (self.n, self.n) or not m.is_upper_triangular():
            return False
        if not all(m.raw_rows[i][i] == 1 for i in range(self.n)):
            return False
        if self.finite:
            return m in self.unipotent_set
        return self.lie.contains(_flatten(log_unipotent(m)))

    def contains(self, x: Matrix) -> bool:
        if x.field != self.field or x.shape != (self.n, self.n) or not x.is_upper_triangular():
            return False
        if self.finite:
            return x in self.index
        q = self.quotient
        d = x.diagonal()
        if not q.contains_class(d):
            return False
        rep = q.lift_class(d)
        return self.unipotent_membership(rep.inverse() @ x)

    def require_element(self, x: Matrix, what: str = "element"):
        if not self.contains(x):
            raise ValidationError(f"{what} is not in the group", where=what)

    def word(self, factors: Sequence[tuple[int, int]]) -> Matrix:
        """Product of generator powers ``[(generator_index, exponent), ...]``."""
        out = self.identity
        for gi, e in factors:
            out = out @ (self.generators[gi] ** e)
        return out

    def word_of(self, idx: int) -> list[int]:
        """Generator indices whose product (left to right) is ``elements[idx]``."""
        out = []
        while self.parents[idx] is not None:
            idx, gi = self.parents[idx]
            out.append(gi)
        return out[::-1]

    def order(self) -> int:
        if not self.finite:
            raise UnsupportedOperationError("group order is only available over GF(p)")
        return len(self.elements)

    def unipotent_order(self) -> int:
        if not self.finite:
            raise UnsupportedOperationError("|N| is only available over GF(p)")
        return len(self.unipotent)

    # -- derived structures -----------------------------------------------

    @cached_property
    def quotient(self):
        from .abelian import build_quotient
        return build_quotient(self)

    def series(self, strategy: str = "superdiag"):
        if strategy not in STRATEGIES:
            raise ValueError(f"unknown series strategy {strategy!r}; choose from {STRATEGIES}")
        if strategy not in self._series:
            from .series import central_series
            self._series[strategy] = central_series(self, strategy)
        return self._series[strategy]

    def central_series(self, strategy: str = "superdiag"):
        return self.series(strategy)

    def layer_action(self, g: Matrix, j: int, strategy: str = "superdiag"):
        return self.series(strategy).layer_action(g, j)

    def fixed_subspace(self, g: Matrix, j: int, strategy: str = "superdiag") -> Subspace:
        return self.series(strategy).fixed_subspace(g, j)

    def __repr__(self):
        kind = f"|G|={len(self.elements)}" if self.finite else f"dim N={self.lie.dim}"
        return f"TriangularGroup({self.spec.label or 'unnamed'}, {self.field!r}, n={self.n}, {kind})"


def closure(ctx, gens: list[Matrix]) -> set:
    """Subgroup generated by ``gens`` inside a finite group (right multiplication)."""
    elems = {ctx.identity}
    frontier = [ctx.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x @ g
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
        frontier = nxt
    return elems


def generating_set(ctx, elements: list[Matrix]) -> list[Matrix]:
    """Greedy generating set: keep each element not yet in the span of earlier picks."""
    gens: list[Matrix] = []
    span = {ctx.identity}
    for x in elements:
        if x not in span:
            gens.append(x)
            span = closure(ctx, gens)
    return gens


def _enumerate(ctx: TriangularGroup, cap: int):
    identity = ctx.identity
    elements = [identity]
    index = {identity: 0}
    parents = [None]
    gens = ctx.generators
    i = 0
    while i < len(elements):
        x = elements[i]
        for gi, g in enumerate(gens):
            y = x @ g
            if y not in index:
                if len(elements) >= cap:
                    raise CapExceededError(f"group has more than {cap} elements", where="cap")
                index[y] = len(elements)
                elements.append(y)
                parents.append((i, gi))
        i += 1
    ctx.elements = elements
    ctx.index = index
    ctx.parents = parents
    ctx.unipotent = [x for x in elements if all(x.raw_rows[k][k] == 1 for k in range(ctx.n))]
    ctx.unipotent_set = frozenset(ctx.unipotent)


def validate_spec(spec: GroupSpec) -> TriangularGroup:
    """Check every hypothesis the root criterion relies on and build the context."""
    f, n = spec.field, spec.dim
    if not isinstance(n, int) or n < 1:
        raise ValidationError("dimension must be a positive integer", where="dim")
    names = tuple(spec.names) if spec.names else tuple(f"g{i + 1}" for i in range(len(spec.generators)))
    if len(names) != len(spec.generators) or len(set(names)) != len(names):
        raise ValidationError("generator names must be unique, one per generator", where="names")
    for nm in names:
        if nm in ("e", "n", "I") or not nm.isidentifier():
            raise ValidationError(f"invalid generator name {nm!r}", where="names")
    for i, g in enumerate(spec.generators):
        where = f"generators[{i}]"
        if g.field != f:
            raise ValidationError(f"entries are over {g.field!r}, expected {f!r}", where=where)
        if g.shape != (n, n):
            raise ValidationError(f"shape {g.shape}, expected {(n, n)}", where=where)
        if not g.is_upper_triangular():
            raise ValidationError("generator is not upper-triangular", where=where)
        if any(g.raw_rows[k][k] == 0 for k in range(n)):
            raise ValidationError("generator is singular", where=where)
    if spec.unipotent_coords is not None:
        seen = set()
        for pos in spec.unipotent_coords:
            i, j = pos
            if not (0 <= i < j < n) or pos in seen:
                raise ValidationError(f"bad unipotent coordinate position {pos}", where="n_coords")
            seen.add(pos)
    if spec.cap < 1:
        raise ValidationError("cap must be positive", where="cap")

    ctx = TriangularGroup(spec, names)
    if ctx.finite:
        if spec.lie_algebra is not None:
            raise ValidationError("lie_algebra is only meaningful over Q; over GF(p) N is enumerated",
                                  where="lie_algebra")
        _enumerate(ctx, spec.cap)
        return ctx

    if spec.lie_algebra is None:
        raise ValidationError("a Q-group needs the Lie algebra of its unipotent part", where="lie_algebra")
    vecs = []
    for i, x in enumerate(spec.lie_algebra):
        where = f"lie_algebra[{i}]"
        if x.field != f or x.shape != (n, n):
            raise ValidationError("Lie algebra element has wrong field or shape", where=where)
        if not x.is_strictly_upper():
            raise ValidationError("Lie algebra element is not strictly upper-triangular", where=where)
        vecs.append(_flatten(x))
    lie = Subspace(f, n * n, vecs)
    ctx.lie = lie
    basis = [_unflatten(f, n, b) for b in lie.raw_basis]
    for a in range(len(basis)):
        for b in range(a + 1, len(basis)):
            if not lie.contains(_flatten(lie_bracket(basis[a], basis[b]))):
                raise ValidationError(f"Lie algebra is not closed under brackets "
                                      f"(basis elements {a}, {b})", where="lie_algebra")
    for i, g in enumerate(spec.generators):
        gi = g.inverse()
        for b in basis:
            if not lie.contains(_flatten(g @ b @ gi)):
                raise ValidationError("conjugation by this generator does not preserve the Lie algebra",
                                      where=f"generators[{i}]")
    _check_unipotent_kernel(ctx)
    return ctx


def _check_unipotent_kernel(ctx: TriangularGroup):
    """Every unipotent element of <generators> must lie in exp(lie)."""
    gens = ctx.generators
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            if not ctx.unipotent_membership(gens[i].commutator(gens[j])):
                raise ValidationError(f"commutator of generators {i} and {j} lies outside exp(lie)",
                                      where="lie_algebra")
    from .abelian import LatticeEncoding
    enc = LatticeEncoding.from_generators(ctx.field, ctx.n, [g.diagonal() for g in gens])
    for z in enc.relation_lattice():
        w = ctx.word([(i, e) for i, e in enumerate(z) if e])
        if not ctx.unipotent_membership(w):
            raise ValidationError(f"the generator word with exponents {list(z)} is unipotent but lies "
                                  f"outside exp(lie)", where="lie_algebra")
