"""Central series of the unipotent part and the linear actions on its layers.

Layer ``j`` (1-based) is the vector space N_(j-1)/N_j.  Each layer knows how
to test membership in N_(j-1), read coordinates of such an element, and lift a
coordinate vector back to a group element.  The action of g on layer j is the
matrix of ``v -> coords(g * lift(v) * g^-1)``.

Strategies
----------
superdiag
    N_j = N ∩ {first j superdiagonals vanish}.  Coordinates are the entries
    of the next superdiagonal, which is additive on that level.
refined
    Each superdiagonal layer split into lines along the echelon flag of its
    coordinate subspace.  Conjugation acts diagonally on superdiagonal
    entries, so every flag member is invariant.
lower
    The lower central series of N.  Over Q via Lie-algebra brackets; over
    GF(p) by enumeration (rejected when a quotient is not elementary abelian).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvariantBreachError, UnsupportedOperationError
from .exactalg import Matrix, Subspace, kernel_basis, solve_linear
from .group_ctx import (_flatten, _unflatten, closure, exp_nilpotent, generating_set, lie_bracket,
                        log_unipotent)


@dataclass(frozen=True)
class LayerAction:
    element: Matrix
    layer: int
    matrix: Matrix


class Layer:
    index: int
    dim: int
    kind: str
    basis: Subspace

    def __init__(self, ctx):
        self.ctx = ctx
        self.field = ctx.field

    def contains(self, u: Matrix) -> bool:
        raise NotImplementedError

    def coords(self, u: Matrix) -> tuple:
        raise NotImplementedError

    def lift(self, v) -> Matrix:
        raise NotImplementedError

    def unit(self, i: int) -> tuple:
        f = self.field
        return tuple(f.scalar(f.one if t == i else f.zero) for t in range(self.dim))

    def action(self, g: Matrix, g_inv: Matrix | None = None) -> Matrix:
        if g_inv is None:
            g_inv = g.inverse()
        cols = []
        for i in range(self.dim):
            u = self.lift(self.unit(i))
            cols.append(self.coords(g @ u @ g_inv))
        return Matrix.from_columns(self.field, cols, self.dim)

    def descriptor(self) -> dict:
        return {"index": self.index, "kind": self.kind, "dim": self.dim}

    def __repr__(self):
        return f"<{type(self).__name__} j={self.index} dim={self.dim}>"


class SuperdiagLayer(Layer):
    """Pivot slice [lo, hi) of the coordinate subspace of superdiagonal d."""

    kind = "superdiag"

    def __init__(self, ctx, d: int, space: Subspace, lo: int, hi: int, lifter):
        super().__init__(ctx)
        self.d = d
        self.space = space
        self.lo, self.hi = lo, hi
        self.dim = hi - lo
        self._lifter = lifter
        self._pivots = space.pivots
        self.basis = Subspace._from_raw(self.field, space.ambient, space.raw_basis[lo:hi])
        self.index = 0

    def superdiag_vector(self, u: Matrix) -> tuple:
        d = self.d
        return tuple(u.raw_rows[i][i + d] for i in range(self.ctx.n - d))

    def contains(self, u: Matrix) -> bool:
        if not self.ctx.unipotent_membership(u):
            return False
        rows = u.raw_rows
        n = self.ctx.n
        if any(rows[i][i + e] != 0 for e in range(1, self.d) for i in range(n - e)):
            return False
        return all(rows[p][p + self.d] == 0 for p in self._pivots[:self.lo])

    def coords(self, u: Matrix) -> tuple:
        sc = self.field.scalar
        return tuple(sc(u.raw_rows[p][p + self.d]) for p in self._pivots[self.lo:self.hi])

    def lift(self, v) -> Matrix:
        f = self.field
        coeffs = [f.zero] * self.space.dim
        for t, x in enumerate(v):
            coeffs[self.lo + t] = x
        s = self.space.combination(coeffs)
        return self._lifter(self.d, tuple(f.raw(x) for x in s))

    def descriptor(self) -> dict:
        pos = lambda p: [p + 1, p + self.d + 1]  # noqa: E731
        return {
            "index": self.index,
            "kind": "superdiag",
            "dim": self.dim,
            "superdiagonal": self.d,
            "zero_positions": [pos(p) for p in self._pivots[:self.lo]],
            "quotient_positions": [pos(p) for p in self._pivots[self.lo:self.hi]],
        }


class LieLayer(Layer):
    """gamma_j / gamma_(j+1) for Lie subspaces over a field where log is defined."""

    kind = "lie"

    def __init__(self, ctx, top: Subspace, bottom: Subspace):
        super().__init__(ctx)
        self.top, self.bottom = top, bottom
        f = self.field
        comp = []
        span = bottom
        for b in top.raw_basis:
            if not span.contains(b):
                comp.append(b)
                span = span + Subspace._from_raw(f, top.ambient, [b])
        self._comp = comp
        self._adapted = list(bottom.raw_basis) + comp
        self._solver = Matrix._raw(f, tuple(zip(*self._adapted)), len(self._adapted)) if self._adapted else None
        self.dim = len(comp)
        self.basis = Subspace._from_raw(f, top.ambient, comp)
        self.index = 0

    def contains(self, u: Matrix) -> bool:
        return (u.is_unitriangular() and u.field == self.field
                and self.top.contains(_flatten(log_unipotent(u))))

    def coords(self, u: Matrix) -> tuple:
        c = solve_linear(self._solver, _flatten(log_unipotent(u)))
        if c is None:
            raise InvariantBreachError("element is not in this layer's level subgroup")
        return tuple(c[self.bottom.dim:])

    def lift(self, v) -> Matrix:
        f = self.field
        vec = [f.zero] * self.top.ambient
        for x, b in zip(v, self._comp):
            x = f.raw(x)
            vec = [f.radd(a, f.rmul(x, y)) for a, y in zip(vec, b)]
        return exp_nilpotent(_unflatten(f, self.ctx.n, vec))


class EnumeratedLayer(Layer):
    """Quotient of two enumerated subgroups, coordinates by table lookup."""

    kind = "enumerated"

    def __init__(self, ctx, top: list[Matrix], bottom: frozenset):
        super().__init__(ctx)
        f = self.field
        p = f.characteristic
        self.top_set = frozenset(top)
        table = {m: () for m in bottom}
        basis = []
        for u in top:
            if u in table:
                continue
            if (u ** p) not in bottom:
                raise UnsupportedOperationError(
                    "a lower-central quotient is not elementary abelian; use the superdiag series")
            basis.append(u)
            powers = [ctx.identity]
            for _ in range(p - 1):
                powers.append(powers[-1] @ u)
            new = {}
            for s, c in table.items():
                for t in range(1, p):
                    new[s @ powers[t]] = c + (t,)
            table = {s: c + (0,) for s, c in table.items()}
            table.update(new)
        if len(table) != len(self.top_set):
            raise InvariantBreachError("layer coordinate table does not cover the level subgroup")
        self._table = table
        self._basis_elems = basis
        self.dim = len(basis)
        self.basis = Subspace.full(f, self.dim)
        self.index = 0

    def contains(self, u: Matrix) -> bool:
        return u in self.top_set

    def coords(self, u: Matrix) -> tuple:
        sc = self.field.scalar
        return tuple(sc(x) for x in self._table[u])

    def lift(self, v) -> Matrix:
        out = self.ctx.identity
        for x, b in zip(v, self._basis_elems):
            out = out @ (b ** self.field.raw(x))
        return out


class CentralSeries:
    """Ordered layers N_0/N_1, N_1/N_2, ... of a central series of N."""

    def __init__(self, ctx, strategy: str, layers: list[Layer]):
        self.ctx = ctx
        self.strategy = strategy
        self.layers = layers
        for j, layer in enumerate(layers, start=1):
            layer.index = j

    def __len__(self):
        return len(self.layers)

    def __iter__(self):
        return iter(self.layers)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(layer.dim for layer in self.layers)

    def layer(self, j: int) -> Layer:
        if not 1 <= j <= len(self.layers):
            raise IndexError(f"layer index {j} out of range 1..{len(self.layers)}")
        return self.layers[j - 1]

    def layer_action(self, g: Matrix, j: int) -> LayerAction:
        return LayerAction(g, j, self.layer(j).action(g))

    def actions(self, g: Matrix) -> list[Matrix]:
        g_inv = g.inverse()
        return [layer.action(g, g_inv) for layer in self.layers]

    def fixed_subspace(self, g: Matrix, j: int) -> Subspace:
        m = self.layer(j).action(g)
        return kernel_basis(m - Matrix.identity(m.field, m.nrows))

    def validate(self, samples: list[Matrix] | None = None):
        """Spot-check homomorphism, invariance and centrality on generators."""
        ctx = self.ctx
        gens = list(ctx.generators) if samples is None else samples
        for layer in self.layers:
            for g in gens:
                gi = g.inverse()
                for i in range(layer.dim):
                    u = layer.lift(layer.unit(i))
                    if not layer.contains(u) or layer.coords(u) != layer.unit(i):
                        raise InvariantBreachError(f"lift/coords mismatch on layer {layer.index}")
                    if not layer.contains(g @ u @ gi):
                        raise InvariantBreachError(f"layer {layer.index} level not normal")
            for g in gens:
                for h in gens:
                    if layer.action(g @ h) != layer.action(g) @ layer.action(h):
                        raise InvariantBreachError(f"layer {layer.index} action is not multiplicative")
        return True


def central_series(ctx, strategy: str = "superdiag") -> CentralSeries:
    if strategy in ("superdiag", "refined"):
        layers = _superdiag_layers(ctx, refined=(strategy == "refined"))
    elif strategy == "lower":
        layers = _lower_layers(ctx)
    else:
        raise ValueError(f"unknown series strategy {strategy!r}")
    series = CentralSeries(ctx, strategy, layers)
    series.validate()
    return series


def _superdiag_layers(ctx, refined: bool) -> list[Layer]:
    n, f = ctx.n, ctx.field
    layers = []
    if ctx.finite:
        tables: dict[int, dict] = {d: {} for d in range(1, n)}
        for u in ctx.unipotent:
            rows = u.raw_rows
            for d in range(1, n):
                tables[d].setdefault(tuple(rows[i][i + d] for i in range(n - d)), u)
                if any(rows[i][i + d] != 0 for i in range(n - d)):
                    break
        spaces = {d: Subspace._from_raw(f, n - d, [s for s in tables[d]]) for d in range(1, n)}

        def lifter(d, s):
            try:
                return tables[d][s]
            except KeyError:
                raise InvariantBreachError(f"no element of N realises superdiagonal vector {s}")
    else:
        lie_basis = [_unflatten(f, n, b) for b in ctx.lie.raw_basis]
        level_bases, projections, spaces = {}, {}, {}
        for d in range(1, n):
            lower = [(i, i + e) for e in range(1, d) for i in range(n - e)]
            if lie_basis and lower:
                cons = Matrix._raw(f, tuple(tuple(x.raw_rows[i][j] for x in lie_basis) for i, j in lower),
                                   len(lie_basis))
                combos = kernel_basis(cons).raw_basis
            else:
                combos = [tuple(f.one if t == s else f.zero for t in range(len(lie_basis)))
                          for s in range(len(lie_basis))]
            level = []
            for c in combos:
                m = Matrix.zeros(f, n, n)
                for coef, x in zip(c, lie_basis):
                    if coef != 0:
                        m = m + x.scale(coef)
                level.append(m)
            level_bases[d] = level
            proj = tuple(tuple(x.raw_rows[i][i + d] for x in level) for i in range(n - d))
            projections[d] = Matrix._raw(f, proj, len(level))
            spaces[d] = Subspace._from_raw(f, n - d, list(zip(*proj)) if level else [])

        def lifter(d, s):
            c = solve_linear(projections[d], s)
            if c is None:
                raise InvariantBreachError(f"superdiagonal vector {s} is not realised by the Lie algebra")
            m = Matrix.zeros(f, n, n)
            for coef, x in zip(c, level_bases[d]):
                if coef != 0:
                    m = m + x.scale(coef)
            return exp_nilpotent(m)

    for d in range(1, n):
        space = spaces[d]
        if space.dim == 0:
            continue
        if refined:
            for t in range(space.dim):
                layers.append(SuperdiagLayer(ctx, d, space, t, t + 1, lifter))
        else:
            layers.append(SuperdiagLayer(ctx, d, space, 0, space.dim, lifter))
    return layers


def _lower_layers(ctx) -> list[Layer]:
    f, n = ctx.field, ctx.n
    if not ctx.finite:
        gammas = [ctx.lie]
        basis = [_unflatten(f, n, b) for b in ctx.lie.raw_basis]
        while not gammas[-1].is_zero():
            cur = [_unflatten(f, n, b) for b in gammas[-1].raw_basis]
            gammas.append(Subspace(f, n * n, [_flatten(lie_bracket(x, y)) for x in basis for y in cur]))
        return [LieLayer(ctx, gammas[i], gammas[i + 1]) for i in range(len(gammas) - 1)]

    gens_n = generating_set(ctx, ctx.unipotent)
    levels = [list(ctx.unipotent)]
    current_gens = gens_n
    while len(levels[-1]) > 1:
        seeds = [x.commutator(y) for x in gens_n for y in current_gens]
        elems, current_gens = _normal_closure(ctx, seeds, gens_n)
        order = {m: i for i, m in enumerate(ctx.unipotent)}
        levels.append(sorted(elems, key=order.__getitem__))
    return [EnumeratedLayer(ctx, levels[i], frozenset(levels[i + 1])) for i in range(len(levels) - 1)]


def _normal_closure(ctx, seeds: list[Matrix], conjugators: list[Matrix]):
    gens: list[Matrix] = []
    span = {ctx.identity}
    pending = list(seeds)
    conj = [(c, c.inverse()) for c in conjugators]
    while pending:
        s = pending.pop(0)
        if s in span:
            continue
        gens.append(s)
        span = closure(ctx, gens)
        for g in list(gens):
            for c, ci in conj:
                t = c @ g @ ci
                if t not in span:
                    pending.append(t)
    return span, gens
