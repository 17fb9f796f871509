"""A fixed corpus of small triangular groups over GF(p) used by the test suites.

Families: abelian unipotent part, Heisenberg unipotent part, full
unitriangular, mixed diagonal weights, generators that are not split into a
diagonal and a unipotent factor, and degenerate edge cases.
"""

from __future__ import annotations

from functools import lru_cache

from .exactalg import GF, Matrix
from .group_ctx import GroupSpec, TriangularGroup, validate_spec


def _m(p, rows):
    return Matrix(tuple(tuple(r) for r in rows), GF(p))


def _d(p, *entries):
    return Matrix.diag(GF(p), entries)


def _e(p, n, *pos, diag=None):
    """Identity (or a diagonal) plus ones at the given 1-based positions."""
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = 1 if diag is None else diag[i]
    for i, j in pos:
        rows[i - 1][j - 1] = 1
    return _m(p, rows)


def _spec(label, p, n, gens, names=None, coords=None):
    return GroupSpec(GF(p), n, tuple(gens), names=names, unipotent_coords=coords, label=label)


def g5() -> GroupSpec:
    p = 5
    return _spec("G5", p, 3, [_d(p, 4, 2, 1), _e(p, 3, (1, 3)), _e(p, 3, (2, 3))],
                 names=("g1", "g2", "g3"), coords=((0, 2), (1, 2)))


def heisenberg(p: int, diag=None) -> GroupSpec:
    gens = [_e(p, 3, (1, 2)), _e(p, 3, (2, 3))]
    if diag:
        gens.insert(0, _d(p, *diag))
    label = f"heis_F{p}" + ("" if not diag else "_d" + "".join(map(str, diag)))
    return _spec(label, p, 3, gens)


def _specs() -> list[GroupSpec]:
    out: list[GroupSpec] = [g5()]
    add = out.append
    # n = 2, abelian N
    for p, a, b in [(3, 2, 1), (5, 2, 1), (5, 4, 1), (7, 3, 1), (7, 2, 1), (7, 6, 1), (11, 2, 1),
                    (11, 10, 1), (5, 2, 3), (7, 2, 4)]:
        add(_spec(f"B2_F{p}_d{a}{b}", p, 2, [_d(p, a, b), _e(p, 2, (1, 2))]))
    # n = 3, abelian N in the last column (G5-shaped)
    for p, a, b in [(3, 2, 1), (5, 2, 4), (7, 6, 1), (7, 2, 4), (11, 10, 10)]:
        add(_spec(f"col3_F{p}_d{a}{b}", p, 3, [_d(p, a, b, 1), _e(p, 3, (1, 3)), _e(p, 3, (2, 3))]))
    # n = 3, Heisenberg N
    add(heisenberg(3))
    add(heisenberg(5))
    add(heisenberg(7))
    add(heisenberg(3, (2, 1, 1)))
    add(heisenberg(3, (2, 1, 2)))
    add(heisenberg(3, (1, 2, 1)))
    add(heisenberg(5, (4, 1, 4)))
    add(heisenberg(5, (2, 1, 1)))
    add(heisenberg(5, (4, 1, 1)))
    add(heisenberg(7, (6, 1, 1)))
    add(heisenberg(11, (10, 1, 10)))
    add(heisenberg(11, (3, 1, 1)))
    # n = 3, mixed weights with two diagonal generators
    add(_spec("mixed3_F3", 3, 3, [_d(3, 2, 1, 1), _d(3, 1, 1, 2), _e(3, 3, (1, 2)), _e(3, 3, (2, 3))]))
    add(_spec("mixed3_F5", 5, 3, [_d(5, 4, 1, 1), _d(5, 1, 4, 1), _e(5, 3, (1, 2)), _e(5, 3, (2, 3))]))
    # n = 3, non-split generators (diagonal part carries translations)
    add(_spec("nonsplit3_F5", 5, 3, [_e(5, 3, (2, 3), diag=(4, 2, 1)), _e(5, 3, (1, 3))]))
    add(_spec("nonsplit3_F7", 7, 3, [_e(7, 3, (1, 2), (2, 3), diag=(6, 1, 6))]))
    add(_spec("nonsplit3_F3", 3, 3, [_e(3, 3, (1, 2), diag=(2, 1, 1)), _e(3, 3, (2, 3), diag=(1, 1, 2))]))
    # n = 3, one-dimensional N, the corner only
    add(_spec("corner3_F7", 7, 3, [_d(7, 3, 1, 1), _d(7, 1, 2, 1), _e(7, 3, (1, 3))]))
    add(_spec("corner3_F11", 11, 3, [_d(11, 10, 1, 1), _e(11, 3, (1, 3))]))
    # n = 4
    add(_spec("U4_F3", 3, 4, [_e(3, 4, (1, 2)), _e(3, 4, (2, 3)), _e(3, 4, (3, 4))]))
    add(_spec("U4_F3_d", 3, 4, [_d(3, 2, 1, 2, 1), _e(3, 4, (1, 2)), _e(3, 4, (2, 3)), _e(3, 4, (3, 4))]))
    add(_spec("U4_F3_d2", 3, 4, [_d(3, 2, 2, 1, 1), _e(3, 4, (1, 2)), _e(3, 4, (2, 3)), _e(3, 4, (3, 4))]))
    add(_spec("block4_F3", 3, 4, [_d(3, 2, 1, 1, 2), _e(3, 4, (1, 3)), _e(3, 4, (1, 4)),
                                    _e(3, 4, (2, 3)), _e(3, 4, (2, 4))]))
    add(_spec("block4_F5", 5, 4, [_d(5, 4, 1, 1, 1), _e(5, 4, (1, 3)), _e(5, 4, (1, 4)),
                                    _e(5, 4, (2, 3)), _e(5, 4, (2, 4))]))
    add(_spec("chain4_F5", 5, 4, [_d(5, 2, 1, 4, 1), _e(5, 4, (1, 4)), _e(5, 4, (2, 4)), _e(5, 4, (3, 4))]))
    add(_spec("heis4_F7", 7, 4, [_d(7, 6, 1, 1, 1), _e(7, 4, (1, 2)), _e(7, 4, (2, 4))]))
    # degenerate
    add(_spec("trivial_F5", 5, 2, []))
    add(_spec("torus_F7", 7, 3, [_d(7, 3, 2, 1)]))
    add(_spec("unip2_F11", 11, 2, [_e(11, 2, (1, 2))]))
    return out


@lru_cache(maxsize=1)
def corpus_specs() -> tuple[GroupSpec, ...]:
    return tuple(_specs())


_CTX_CACHE: dict = {}


def corpus_groups() -> list[TriangularGroup]:
    out = []
    for spec in corpus_specs():
        if spec.label not in _CTX_CACHE:
            _CTX_CACHE[spec.label] = validate_spec(spec)
        out.append(_CTX_CACHE[spec.label])
    return out


def corpus_group(label: str) -> TriangularGroup:
    for ctx in corpus_groups():
        if ctx.spec.label == label:
            return ctx
    raise KeyError(label)
