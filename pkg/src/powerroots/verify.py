"""Independent re-check of certificate files.

Only the exact-algebra layer, the spec parser and plain enumeration are used
here; no code from the decision procedure is imported.  The recheck relies
on one structural fact: conjugation by an upper-triangular g multiplies the
(i, i+d) entry of an element of the d-th superdiagonal level by
g_ii / g_(i+d)(i+d), so every layer action is diagonal in pivot coordinates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .exactalg import Matrix, Polynomial, Subspace, poly_gcd, solve_integer_system
from .group_ctx import GroupSpec
from .io import TOOL, default_coords, matrix_from_json, spec_digest
from .oracle import enumerate_group, power_image


@dataclass
class VerifyResult:
    ok: bool = True
    checks: list = dc_field(default_factory=list)
    unverifiable: bool = False

    def check(self, name: str, ok: bool, detail: str = ""):
        self.checks.append((name, bool(ok), detail))
        if not ok:
            self.ok = False
        return ok

    def lines(self) -> list[str]:
        return [f"[{'ok' if ok else 'FAIL'}] {name}" + (f": {detail}" if detail else "")
                for name, ok, detail in self.checks]


# -- an independent view of the group --------------------------------------


def _flat(m: Matrix) -> tuple:
    return tuple(x for r in m.raw_rows for x in r)


def _log(u: Matrix) -> Matrix:
    f, n = u.field, u.nrows
    x = u - Matrix.identity(f, n)
    out, power = Matrix.zeros(f, n, n), Matrix.identity(f, n)
    for i in range(1, n):
        power = power @ x
        term = power.scale(f.raw(Fraction((-1) ** (i + 1), i)))
        out = out + term
    return out


def _primes_of(values) -> list[int]:
    ps = set()
    for v in values:
        for m in (abs(v.numerator), v.denominator):
            d = 2
            while d * d <= m:
                while m % d == 0:
                    ps.add(d)
                    m //= d
                d += 1
            if m > 1:
                ps.add(m)
    return sorted(ps)


class GroupView:
    def __init__(self, spec: GroupSpec):
        self.spec = spec
        self.field = spec.field
        self.n = spec.dim
        self.identity = Matrix.identity(self.field, self.n)
        self.finite = self.field.characteristic != 0
        if self.finite:
            self.E = enumerate_group(spec.generators, self.identity, spec.cap)
            self.N = [x for x in self.E.elements if all(x.raw_rows[i][i] == 1 for i in range(self.n))]
            self.N_set = frozenset(self.N)
            self.classes = {x.diagonal() for x in self.E.elements}
        else:
            self.lie = Subspace(self.field, self.n * self.n, [_flat(x) for x in spec.lie_algebra or ()])

    # diagonal classes over Q: sign bits plus prime exponents
    def _solve_power(self, target, k: int):
        """Integer z with prod_i diag(g_i)^(k z_i) = target, or None."""
        gens = [g.diagonal() for g in self.spec.generators]
        if any(x == 0 for x in target):
            return None
        primes = _primes_of([x for g in gens for x in g] + list(target))
        m = len(gens)

        def code(d):
            signs = [1 if x < 0 else 0 for x in d]
            exps = []
            for x in d:
                for p in primes:
                    e, a, b = 0, abs(x.numerator), x.denominator
                    while a % p == 0:
                        a //= p
                        e += 1
                    while b % p == 0:
                        b //= p
                        e -= 1
                    exps.append(e)
            return signs, exps

        gcodes = [code(g) for g in gens]
        ts, te = code(target)
        rows, rhs = [], []
        for r in range(len(te)):
            rows.append([k * gcodes[i][1][r] for i in range(m)] + [0] * self.n)
            rhs.append(te[r])
        for pos in range(self.n):
            rows.append([k * gcodes[i][0][pos] for i in range(m)]
                        + [(-2 if t == pos else 0) for t in range(self.n)])
            rhs.append(ts[pos])
        if m == 0:
            return () if all(x == 1 for x in target) else None
        sol = solve_integer_system(rows, rhs, ncols=m + self.n)
        return None if sol is None else tuple(sol.particular[:m])

    def in_class_group(self, d) -> bool:
        if self.finite:
            return tuple(d) in self.classes
        return self._solve_power(tuple(d), 1) is not None

    def class_roots(self, a, k: int) -> set:
        a = tuple(a)
        if self.finite:
            return {b for b in self.classes if tuple(x ** k for x in b) == a}
        z = self._solve_power(a, k)
        if z is None:
            return set()
        b0 = tuple(Fraction(1) for _ in range(self.n))
        for g, e in zip(self.spec.generators, z):
            b0 = tuple(x * y ** e for x, y in zip(b0, g.diagonal()))
        out = set()
        for signs in itertools.product((1, -1), repeat=self.n):
            b = tuple(x * s for x, s in zip(b0, signs))
            if tuple(x ** k for x in b) == a and self.in_class_group(b):
                out.add(b)
        return out

    def in_N(self, u: Matrix) -> bool:
        if not u.is_unitriangular():
            return False
        if self.finite:
            return u in self.N_set
        return self.lie.contains(_flat(_log(u)))

    def contains(self, y: Matrix) -> bool:
        if y.shape != (self.n, self.n) or not y.is_upper_triangular():
            return False
        if self.finite:
            return y in self.E
        z = self._solve_power(y.diagonal(), 1)
        if z is None:
            return False
        rep = self.identity
        for g, e in zip(self.spec.generators, z):
            rep = rep @ (g ** e)
        return self.in_N(rep.inverse() @ y)

    def superdiag_spaces(self) -> dict:
        f, n = self.field, self.n
        spaces = {}
        for d in range(1, n):
            if self.finite:
                vecs = [tuple(u.raw_rows[i][i + d] for i in range(n - d)) for u in self.N
                        if all(u.raw_rows[i][i + e] == 0 for e in range(1, d) for i in range(n - e))]
            else:
                allowed = [i * n + j for i in range(n) for j in range(n) if j - i >= d]
                coord = Subspace(f, n * n, [tuple(f.one if t == c else f.zero for t in range(n * n))
                                            for c in allowed])
                level = self.lie.intersection(coord)
                vecs = [tuple(b[i * n + i + d] for i in range(n - d)) for b in level.raw_basis]
            spaces[d] = Subspace._from_raw(f, n - d, vecs) if vecs else Subspace.zero(f, n - d)
        return spaces

    def expected_layers(self, strategy: str) -> list[dict]:
        out = []
        for d, S in self.superdiag_spaces().items():
            piv = list(S.pivots)
            pos = lambda p: [p + 1, p + d + 1]  # noqa: E731
            if not piv:
                continue
            if strategy == "refined":
                cuts = [(t, t + 1) for t in range(len(piv))]
            else:
                cuts = [(0, len(piv))]
            for lo, hi in cuts:
                out.append({"kind": "superdiag", "dim": hi - lo, "superdiagonal": d,
                            "zero_positions": [pos(p) for p in piv[:lo]],
                            "quotient_positions": [pos(p) for p in piv[lo:hi]]})
        for j, layer in enumerate(out, start=1):
            layer["index"] = j
        return out


def layer_ratios(g: Matrix, layer: dict) -> list:
    f = g.field
    rows = g.raw_rows
    return [f.scalar(f.rmul(rows[i - 1][i - 1], f.rinv(rows[j - 1][j - 1])))
            for i, j in layer["quotient_positions"]]


def _mat(view: GroupView, data, where: str) -> Matrix:
    return matrix_from_json(view.field, data, view.n, where)


def _cls(view: GroupView, data) -> tuple:
    f = view.field
    return tuple(f.scalar(f.raw(x)) for x in data)


# -- checks per certificate kind ------------------------------------------


def verify_certificate(doc: dict, spec: GroupSpec) -> VerifyResult:
    res = VerifyResult()
    if not res.check("tool", doc.get("tool") == TOOL, str(doc.get("tool"))):
        return res
    res.check("spec digest", doc.get("spec_sha256") == spec_digest(spec))
    view = GroupView(spec)
    kind = doc.get("kind")
    if kind in ("coset-decision", "root", "element-decision"):
        _verify_decision(doc, view, res)
    elif kind == "regularity":
        _verify_regularity(doc, view, res)
    elif kind == "oracle-comparison":
        _verify_comparison(doc, view, res)
    else:
        res.check("kind", False, f"unknown certificate kind {kind!r}")
    return res


def _verify_layers(doc, view, res) -> list[dict] | None:
    strategy = doc["query"].get("series", "superdiag")
    if strategy not in ("superdiag", "refined"):
        res.check("series", False, f"cannot recheck series {strategy!r}")
        return None
    expected = view.expected_layers(strategy)
    res.check("layers", doc.get("layers") == expected, f"{len(expected)} layers")
    return expected


def _verify_decision(doc, view, res):
    q = doc["query"]
    k = q["k"]
    x = _mat(view, q["x"], "query.x")
    p = view.field.characteristic
    res.check("k coprime to characteristic", not p or k % p)
    res.check("x in G", view.contains(x))
    a = x.diagonal()
    res.check("class of x", _cls(view, doc["class"]) == a)
    B = {_cls(view, b) for b in doc["B"]}
    layers = _verify_layers(doc, view, res)
    if layers is None:
        return
    if q["mode"] == "coset":
        res.check("B complete", B == view.class_roots(a, k), f"|B| = {len(B)}")
    ra = [layer_ratios(x, layer) for layer in layers]

    def survives(b):
        g = Matrix.diag(view.field, b)
        for la, layer in zip(ra, layers):
            for sa, sb in zip(la, layer_ratios(g, layer)):
                if sa == 1 and sb != 1:
                    return False
        return True

    if doc["decision"]:
        w = _cls(view, doc["witness"])
        if q["mode"] == "coset":
            res.check("witness in B", w in B)
            res.check("witness fixes what a fixes", survives(w))
        res.check("at least one root", bool(doc["roots"]))
        for i, r in enumerate(doc["roots"]):
            n = _mat(view, r["n"], f"roots[{i}].n")
            y = _mat(view, r["y"], f"roots[{i}].y")
            res.check(f"root {i}: n in N", view.in_N(n))
            res.check(f"root {i}: y^k = x n", y ** k == x @ n)
            res.check(f"root {i}: class of y", y.diagonal() == w)
            res.check(f"root {i}: y in G", view.contains(y))
        return
    if q["mode"] == "element":
        if not B:
            res.check("class of x has no k-th root", not view.class_roots(a, k))
        elif view.finite:
            res.check("no k-th root by exhaustion", all(y ** k != x for y in view.E.elements))
        else:
            res.unverifiable = True
            res.check("negative element-level claim over Q", False,
                      "not independently recheckable; rerun with a finite field or the coset mode")
        return
    covered = set()
    for i, ob in enumerate(doc["obstructions"]):
        b = _cls(view, ob["b"])
        layer = layers[ob["layer"] - 1]
        v = _cls(view, ob["vector"])
        u = _mat(view, ob["element"], f"obstructions[{i}].element")
        d = layer["superdiagonal"]
        rows = u.raw_rows
        in_level = (view.in_N(u)
                    and all(rows[r][r + e] == 0 for e in range(1, d) for r in range(view.n - e))
                    and all(u[i0 - 1, j0 - 1] == 0 for i0, j0 in layer["zero_positions"]))
        coords = tuple(u[i0 - 1, j0 - 1] for i0, j0 in layer["quotient_positions"])
        sa = layer_ratios(x, layer)
        sb = layer_ratios(Matrix.diag(view.field, b), layer)
        fixed_a = all(c == 0 or s == 1 for c, s in zip(v, sa))
        moved_b = any(c != 0 and s != 1 for c, s in zip(v, sb))
        res.check(f"obstruction {i}: element realises the vector", in_level and coords == v and any(v))
        res.check(f"obstruction {i}: a fixes v, b moves v", fixed_a and moved_b)
        covered.add(b)
    res.check("every candidate obstructed", covered == B)
    res.check("no survivor", not any(survives(b) for b in B))


def _verify_regularity(doc, view, res):
    q = doc["query"]
    k = q["k"]
    g = _mat(view, q["x"], "query.x")
    res.check("element in G", view.contains(g))
    layers = _verify_layers(doc, view, res)
    if layers is None:
        return
    f = view.field
    geo = Polynomial.geometric(k, f)
    gcds = []
    for layer in layers:
        cp = Polynomial.constant(f.one, f)
        for r in layer_ratios(g, layer):
            cp = cp * (Polynomial.x(f) - Polynomial.constant(r, f))
        gcds.append(poly_gcd(cp, geo))
    res.check("gcds", [str(d) for d in gcds] == doc["gcds"])
    res.check("verdict", doc["regular"] == all(d.degree == 0 for d in gcds))


def _verify_comparison(doc, view, res):
    if not view.finite:
        res.check("finite field", False, "comparison tables exist only over GF(p)")
        return
    E = view.E
    images = {}
    mism = 0
    for i, r in enumerate(doc["rows"]):
        if r["note"]:
            continue
        k = r["k"]
        if k not in images:
            images[k] = power_image(E, k)
        img = images[k]
        a = _cls(view, r["class"])
        truth = all(E.index[y] in img for y in E.elements if y.diagonal() == a)
        res.check(f"row {i}: oracle column", truth == r["oracle"] and r["image_size"] == len(img))
        res.check(f"row {i}: match flag", r["match"] == (r["criterion"] == r["oracle"]))
        mism += not r["match"]
    res.check("mismatch count", mism == doc["mismatches"])


__all__ = ["GroupView", "VerifyResult", "verify_certificate", "default_coords"]
