"""Ground truth by exhaustion for groups over GF(p).

Nothing here consults the decision procedure: enumeration, power images and
centralizers are computed from the generators with plain matrix products.
``compare_all`` is the one place where both sides meet.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import CapExceededError, UnsupportedOperationError
from .exactalg import Matrix


@dataclass(frozen=True)
class EnumeratedGroup:
    elements: tuple
    index: dict
    depth: tuple
    cap: int
    generators: tuple

    def __len__(self):
        return len(self.elements)

    def __contains__(self, m):
        return m in self.index

    @property
    def identity(self) -> Matrix:
        return self.elements[0]

    @property
    def p(self) -> int:
        return self.identity.field.characteristic


@dataclass(frozen=True)
class PowerImage:
    k: int
    bits: int
    multiplicity: tuple

    def __contains__(self, i: int) -> bool:
        return bool(self.bits >> i & 1)

    def __len__(self):
        return bin(self.bits).count("1")

    def members(self) -> list[int]:
        return [i for i, m in enumerate(self.multiplicity) if m]


def enumerate_group(generators, identity: Matrix | None = None, cap: int = 10**6) -> EnumeratedGroup:
    """Breadth-first closure under right multiplication by the generators.

    Accepts a group context or a sequence of generator matrices.  In a
    finite group the monoid closure is already the group.
    """
    if hasattr(generators, "generators"):
        identity = generators.identity
        generators = generators.generators
    gens = tuple(generators)
    if identity is None:
        if not gens:
            raise ValueError("need the identity when there are no generators")
        identity = Matrix.identity(gens[0].field, gens[0].nrows)
    if identity.field.characteristic == 0:
        raise UnsupportedOperationError("exhaustive enumeration needs a finite field")
    elements = [identity]
    index = {identity: 0}
    depth = [0]
    queue = deque([0])
    while queue:
        i = queue.popleft()
        x = elements[i]
        for g in gens:
            y = x @ g
            if y not in index:
                if len(elements) >= cap:
                    raise CapExceededError(f"enumeration exceeded cap {cap}")
                index[y] = len(elements)
                elements.append(y)
                depth.append(depth[i] + 1)
                queue.append(index[y])
    return EnumeratedGroup(tuple(elements), index, tuple(depth), cap, gens)


def _power(x: Matrix, k: int) -> Matrix:
    out = x
    for _ in range(k - 1):
        out = out @ x
    return out


def power_image(E: EnumeratedGroup, k: int) -> PowerImage:
    if k < 1:
        raise ValueError("k must be positive")
    mult = [0] * len(E)
    for x in E.elements:
        mult[E.index[_power(x, k)]] += 1
    bits = 0
    for i, m in enumerate(mult):
        if m:
            bits |= 1 << i
    return PowerImage(k, bits, tuple(mult))


def unipotent_elements(E: EnumeratedGroup) -> list[Matrix]:
    n = E.identity.nrows
    return [x for x in E.elements if all(x[i, i] == 1 for i in range(n))]


def coset(E: EnumeratedGroup, x: Matrix) -> list[Matrix]:
    """Elements with the same diagonal as x, i.e. the coset xN."""
    d = x.diagonal()
    return [y for y in E.elements if y.diagonal() == d]


def coset_coverage_truth(E: EnumeratedGroup, x: Matrix, k: int, image: PowerImage | None = None) -> bool:
    image = image or power_image(E, k)
    return all(E.index[y] in image for y in coset(E, x))


def centralizer(E: EnumeratedGroup, x: Matrix) -> list[Matrix]:
    return [h for h in E.elements if h @ x == x @ h]


def center(E: EnumeratedGroup) -> list[Matrix]:
    return [z for z in E.elements if all(z @ g == g @ z for g in E.generators)]


def center_of(elements: list[Matrix]) -> list[Matrix]:
    """Center of a subgroup given by its full element list (quadratic)."""
    return [z for z in elements if all(z @ h == h @ z for h in elements)]


def class_representatives(E: EnumeratedGroup) -> list[Matrix]:
    seen, reps = set(), []
    for x in E.elements:
        d = x.diagonal()
        if d not in seen:
            seen.add(d)
            reps.append(x)
    return reps


@dataclass(frozen=True)
class ComparisonRow:
    cls: tuple
    k: int
    criterion: bool | None
    oracle: bool | None
    match: bool
    image_size: int | None
    note: str = ""


@dataclass(frozen=True)
class ComparisonReport:
    rows: tuple

    @property
    def mismatches(self) -> list[ComparisonRow]:
        return [r for r in self.rows if not r.match]

    @property
    def ok(self) -> bool:
        return not self.mismatches

    @property
    def compared(self) -> int:
        return sum(1 for r in self.rows if r.criterion is not None)


def compare_all(ctx, k_range, strategy: str = "superdiag", E: EnumeratedGroup | None = None) -> ComparisonReport:
    """Criterion decision against enumeration for every class and every k."""
    from .roots import decide

    E = E or enumerate_group(ctx.generators, ctx.identity, ctx.spec.cap)
    p = E.p
    reps = sorted(class_representatives(E), key=lambda m: m.diagonal())
    rows = []
    for k in k_range:
        if k % p == 0:
            for x in reps:
                rows.append(ComparisonRow(x.diagonal(), k, None, None, True, None, "not coprime"))
            continue
        image = power_image(E, k)
        for x in reps:
            truth = coset_coverage_truth(E, x, k, image)
            crit = decide(ctx, x, k, strategy)
            rows.append(ComparisonRow(x.diagonal(), k, crit, truth, crit == truth, len(image)))
    return ComparisonReport(tuple(rows))
