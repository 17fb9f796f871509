"""Deciding coset coverage by k-th powers and constructing explicit roots.

Notation used throughout: ``a`` is the diagonal class of the query element x,
``B`` the classes b with b^k = a, and ``sigma_j(g)`` the action of g on
layer j of the chosen central series.  A candidate b survives into ``B*``
when every vector fixed by ``sigma_j(a)`` is also fixed by ``sigma_j(b)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .abelian import RootSet, class_pow
from .errors import InvariantBreachError, PreconditionError, UnsupportedOperationError
from .exactalg import (Matrix, Polynomial, Subspace, char_poly, column_space, kernel_basis, poly_gcd,
                       solve_linear)
from .group_ctx import TriangularGroup, generating_set


# -- result types ---------------------------------------------------------


@dataclass(frozen=True)
class LayerVerdict:
    layer: int
    fixed_a: Subspace
    fixed_b: Subspace
    contained: bool
    violation: tuple | None = None  # basis vector of F_j(a) outside F_j(b)


@dataclass(frozen=True)
class BStarResult:
    x: Matrix
    k: int
    a: tuple
    roots: RootSet
    verdicts: dict
    survivors: tuple
    method: str = "fixed-space"

    @property
    def B(self) -> tuple:
        return self.roots.roots

    @property
    def bstar(self) -> tuple:
        return self.survivors


@dataclass(frozen=True)
class ThetaOperator:
    b: tuple
    representative: Matrix
    layer: int
    k: int
    sigma: Matrix
    matrix: Matrix
    det: object
    inverse: Matrix | None

    @property
    def singular(self) -> bool:
        return self.inverse is None

    def solve(self, v) -> tuple:
        if self.inverse is None:
            raise PreconditionError(f"theta is singular on layer {self.layer} for class {_fmt_class(self.b)}")
        return self.inverse.apply(v)


@dataclass
class Certificate:
    x: Matrix
    k: int
    mode: str
    strategy: str
    decision: bool
    a: tuple
    B: tuple
    bstar: tuple = ()
    witness: tuple | None = None
    roots: list = dc_field(default_factory=list)        # [(n, y)]
    obstructions: list = dc_field(default_factory=list)  # [{"b", "layer", "vector", "element"}]
    layers: list = dc_field(default_factory=list)
    transcript: list = dc_field(default_factory=list)
    verified: bool = False

    def verify(self, ctx: TriangularGroup) -> bool:
        """Recheck every claim with exact products inside ``ctx``."""
        log = []
        q = ctx.quotient
        if self.mode == "coset":
            if tuple(q.kth_root_classes(self.a, self.k)) != tuple(self.B):
                raise InvariantBreachError("recomputed root classes differ from the certificate")
        if self.decision:
            if self.mode == "coset" and self.witness not in self.bstar:
                raise InvariantBreachError("witness class is not in B*")
            for n, y in self.roots:
                target = self.x @ n
                ok_pow = (y ** self.k) == target
                ok_cls = self.witness is None or q.project(y) == tuple(self.witness)
                ok_mem = ctx.contains(y)
                log.append({"check": "root", "n": n, "y": y, "y^k": y ** self.k,
                            "power_ok": ok_pow, "class_ok": ok_cls, "member_ok": ok_mem})
                if not (ok_pow and ok_cls and ok_mem):
                    raise InvariantBreachError("an emitted root fails its own recheck")
            if not self.roots:
                raise InvariantBreachError("positive certificate without any root")
        else:
            series = ctx.series(self.strategy)
            blocked = set()
            for ob in self.obstructions:
                layer = series.layer(ob["layer"])
                u = ob["element"]
                g = q.lift_class(ob["b"])
                v = tuple(ob["vector"])
                ok_in = layer.contains(u) and layer.coords(u) == v and any(c != 0 for c in v)
                ok_a = layer.coords(self.x @ u @ self.x.inverse()) == v
                ok_b = layer.coords(g @ u @ g.inverse()) != v
                log.append({"check": "obstruction", "b": ob["b"], "layer": ob["layer"],
                            "fixed_by_a": ok_a, "moved_by_b": ok_b, "in_layer": ok_in})
                if not (ok_in and ok_a and ok_b):
                    raise InvariantBreachError("an obstruction vector fails its own recheck")
                blocked.add(tuple(ob["b"]))
            if self.mode == "coset" and blocked != set(self.B):
                raise InvariantBreachError("not every candidate class carries an obstruction")
        self.transcript = log
        self.verified = True
        return True


@dataclass(frozen=True)
class RegularityReport:
    element: Matrix
    k: int
    char_polys: tuple
    gcds: tuple
    regular: bool
    note: str = "spectrum taken over the layer actions of the unipotent part"


@dataclass(frozen=True)
class ObstructionSubspace:
    layer: int
    b: tuple
    image_theta: Subspace
    image_a: Subspace
    fixed_quotient_dim: int
    U: Subspace


@dataclass(frozen=True)
class SurjectivityReport:
    k: int
    surjective: bool
    failing_class: tuple | None
    decisions: dict


@dataclass(frozen=True)
class CentralizerRoot:
    root: Matrix | None
    decision: bool
    centralizer_order: int
    center_order: int

    @property
    def found(self) -> bool:
        return self.root is not None


@dataclass(frozen=True)
class ProbeResult:
    k: int
    member: bool | None
    root: Matrix | None = None
    note: str = ""


# -- helpers --------------------------------------------------------------


def _fmt_class(b) -> str:
    return "(" + ",".join(str(x) for x in b) + ")"


def require_coprime(ctx: TriangularGroup, k: int):
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    p = ctx.field.characteristic
    if p and k % p == 0:
        raise PreconditionError(f"k not coprime to characteristic (k={k}, p={p})")


def _prepare(ctx, x, k):
    require_coprime(ctx, k)
    ctx.require_element(x, "x")
    q = ctx.quotient
    a = q.project(x)
    return a, q.kth_root_classes(a, k)


def _fixed(sigma: Matrix) -> Subspace:
    return kernel_basis(sigma - Matrix.identity(sigma.field, sigma.nrows))


def theta_matrix(sigma: Matrix, k: int) -> Matrix:
    """sum_{i=0}^{k-1} sigma^{-i}."""
    s_inv = sigma.inverse()
    acc = Matrix.identity(sigma.field, sigma.nrows)
    power = acc
    for _ in range(k - 1):
        power = power @ s_inv
        acc = acc + power
    return acc


# -- criterion ------------------------------------------------------------


def bstar_filter(ctx: TriangularGroup, x: Matrix, k: int, strategy: str = "superdiag") -> BStarResult:
    """Literal fixed-space comparison on every layer for every candidate class."""
    a, B = _prepare(ctx, x, k)
    series = ctx.series(strategy)
    fixed_a = [_fixed(s) for s in series.actions(x)]
    verdicts, survivors = {}, []
    for b in B:
        g = ctx.quotient.lift_class(b)
        rows, ok = [], True
        for j, (fa, sb) in enumerate(zip(fixed_a, series.actions(g)), start=1):
            fb = _fixed(sb)
            contained = fa <= fb
            violation = None
            if not contained:
                violation = next(v for v in fa.basis if not fb.contains(v))
                ok = False
            rows.append(LayerVerdict(j, fa, fb, contained, violation))
        verdicts[b] = rows
        if ok:
            survivors.append(b)
    return BStarResult(x, k, a, B, verdicts, tuple(survivors))


def theta_operator(ctx: TriangularGroup, b, j: int, k: int, strategy: str = "superdiag") -> ThetaOperator:
    b = tuple(b)
    g = ctx.quotient.lift_class(b)
    sigma = ctx.series(strategy).layer(j).action(g)
    th = theta_matrix(sigma, k)
    return ThetaOperator(b, g, j, k, sigma, th, th.det(), th.inverse())


def bstar_via_theta(ctx: TriangularGroup, x: Matrix, k: int, strategy: str = "superdiag") -> BStarResult:
    """b survives iff theta_j(b) is invertible on every layer."""
    a, B = _prepare(ctx, x, k)
    series = ctx.series(strategy)
    verdicts, survivors = {}, []
    for b in B:
        ops = [theta_operator(ctx, b, j, k, strategy) for j in range(1, len(series) + 1)]
        verdicts[b] = ops
        if all(not op.singular for op in ops):
            survivors.append(b)
    return BStarResult(x, k, a, B, verdicts, tuple(survivors), method="theta")


def _sample_ns(ctx, strategy) -> list[Matrix]:
    ns = [ctx.identity]
    for layer in ctx.series(strategy):
        for i in range(layer.dim):
            u = layer.lift(layer.unit(i))
            if u not in ns:
                ns.append(u)
    return ns


def coset_root_decision(ctx: TriangularGroup, x: Matrix, k: int, strategy: str = "superdiag",
                        ns: list[Matrix] | None = None) -> Certificate:
    """Is every element of xN a k-th power?  The answer comes with a self-checked certificate."""
    res = bstar_filter(ctx, x, k, strategy)
    series = ctx.series(strategy)
    cert = Certificate(x=x, k=k, mode="coset", strategy=strategy, decision=bool(res.survivors),
                       a=res.a, B=tuple(res.B), bstar=res.survivors,
                       layers=[layer.descriptor() for layer in series])
    if cert.decision:
        cert.witness = min(res.survivors)
        for n in (ns if ns is not None else _sample_ns(ctx, strategy)):
            cert.roots.append((n, construct_root(ctx, x, n, cert.witness, k, strategy)))
    else:
        for b in res.B:
            bad = next(v for v in res.verdicts[b] if not v.contained)
            layer = series.layer(bad.layer)
            cert.obstructions.append({"b": b, "layer": bad.layer, "vector": tuple(bad.violation),
                                      "element": layer.lift(bad.violation)})
    cert.verify(ctx)
    return cert


def decide(ctx: TriangularGroup, x: Matrix, k: int, strategy: str = "superdiag") -> bool:
    """Bare decision without certificate assembly."""
    return bool(bstar_filter(ctx, x, k, strategy).survivors)


# -- construction ---------------------------------------------------------


def _descend(ctx, target, b, k, strategy, strict=True):
    """Layer-by-layer correction of lift(b) towards a k-th root of ``target``.

    Returns (y or None, definitive) where ``definitive`` says whether a
    failure rules out every root in the class b.
    """
    series = ctx.series(strategy)
    y = ctx.quotient.lift_class(b)
    all_invertible = True
    for layer in series:
        op = theta_operator(ctx, b, layer.index, k, strategy)
        d = (y ** k).inverse() @ target
        if not layer.contains(d):
            raise InvariantBreachError(f"defect left the level subgroup at layer {layer.index}")
        v = layer.coords(d)
        if op.singular:
            if strict:
                raise PreconditionError(
                    f"class {_fmt_class(b)} is not in B*: theta singular on layer {layer.index}")
            w = solve_linear(op.matrix, v)
            if w is None:
                return None, all_invertible
            all_invertible = False
        else:
            w = op.inverse.apply(v)
        y = y @ layer.lift(w)
    if y ** k != target:
        if strict:
            raise InvariantBreachError("layer descent ended with y^k != xn")
        return None, False
    return y, True


def construct_root(ctx: TriangularGroup, x: Matrix, n: Matrix, b, k: int,
                   strategy: str = "superdiag") -> Matrix:
    """The unique y in the class b, determined by the theta solves, with y^k = x n."""
    require_coprime(ctx, k)
    b = tuple(b)
    q = ctx.quotient
    if not ctx.unipotent_membership(n):
        raise PreconditionError("n is not in the unipotent part")
    if class_pow(b, k) != q.project(x):
        raise PreconditionError(f"class {_fmt_class(b)} is not a k-th root of the class of x")
    target = x @ n
    y, _ = _descend(ctx, target, b, k, strategy, strict=True)
    if y ** k != target or q.project(y) != b:
        raise InvariantBreachError("constructed root fails exact recheck")
    return y


def solve_fixed_point(sigma: Matrix, v) -> tuple:
    """w with (sigma^-1 - I) w = v; needs sigma to fix no nonzero vector."""
    m = sigma.inverse() - Matrix.identity(sigma.field, sigma.nrows)
    if not kernel_basis(m).is_zero():
        raise PreconditionError("the action fixes a nonzero vector; the conjugator is not unique")
    return m.inverse().apply(v)


def fixed_point_conjugator(ctx: TriangularGroup, x: Matrix, v, j: int,
                           strategy: str = "superdiag") -> Matrix:
    """Element w of layer j with x * n_v = w x w^-1 (returned as the lifted matrix)."""
    layer = ctx.series(strategy).layer(j)
    coords = solve_fixed_point(layer.action(x), v)
    return layer.lift(coords)


def obstruction_subspace(ctx: TriangularGroup, x: Matrix, b, j: int, k: int,
                         strategy: str = "superdiag") -> ObstructionSubspace:
    require_coprime(ctx, k)
    b = tuple(b)
    series = ctx.series(strategy)
    layer = series.layer(j)
    sa = layer.action(x)
    op = theta_operator(ctx, b, j, k, strategy)
    sb = op.sigma
    f = ctx.field
    eye = Matrix.identity(f, layer.dim)
    if _fixed(sa) == _fixed(sb):
        raise PreconditionError(f"F_{j}(a) = F_{j}(b); the obstruction subspace is not defined")
    R = column_space(sa - eye)
    ann = R.annihilator()
    if ann.dim:
        cond = Matrix(ann.basis, f) @ (sb - eye)
        U = kernel_basis(cond)
    else:
        U = Subspace.full(f, layer.dim)
    image_theta = column_space(op.matrix)
    if not image_theta <= U:
        raise InvariantBreachError(f"Im theta escapes U on layer {j}")
    # b has no fixed vector on V/U
    uann = U.annihilator()
    if uann.dim:
        free = kernel_basis(Matrix(uann.basis, f) @ (sb - eye))
        if free != U:
            raise InvariantBreachError(f"b keeps a fixed vector modulo U on layer {j}")
    return ObstructionSubspace(j, b, image_theta, R, U.dim - R.dim, U)


# -- regularity and global questions --------------------------------------


def pk_regularity(ctx: TriangularGroup, g: Matrix, k: int, strategy: str = "superdiag") -> RegularityReport:
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    geo = Polynomial.geometric(k, ctx.field)
    polys, gcds = [], []
    for sigma in ctx.series(strategy).actions(g):
        cp = char_poly(sigma)
        polys.append(cp)
        gcds.append(poly_gcd(cp, geo))
    regular = all(d.degree == 0 for d in gcds)
    return RegularityReport(g, k, tuple(polys), tuple(gcds), regular)


def group_pk_surjective(ctx: TriangularGroup, k: int, strategy: str = "superdiag") -> SurjectivityReport:
    require_coprime(ctx, k)
    q = ctx.quotient
    if not q.is_finite():
        raise UnsupportedOperationError(
            "the class group has positive rank, so coverage cannot be checked class by class")
    decisions, failing = {}, None
    for a in q.all_classes():
        ok = decide(ctx, q.lift_class(a), k, strategy)
        decisions[a] = ok
        if not ok and failing is None:
            failing = a
    return SurjectivityReport(k, failing is None, failing, decisions)


def _require_finite(ctx, what):
    if not ctx.finite:
        raise UnsupportedOperationError(f"{what} needs an enumerated (GF(p)) group")


def center_elements(ctx: TriangularGroup) -> list[Matrix]:
    _require_finite(ctx, "the center")
    return [z for z in ctx.elements if all(z @ g == g @ z for g in ctx.generators)]


def center_pk_surjective(ctx: TriangularGroup, k: int) -> bool:
    _require_finite(ctx, "center_pk_surjective")
    Z = center_elements(ctx)
    return {z ** k for z in Z} == set(Z)


def center_of_centralizer_root(ctx: TriangularGroup, x: Matrix, k: int,
                               strategy: str = "superdiag") -> CentralizerRoot:
    """Search Z(Z_G(x)) for a k-th root of a diagonal x."""
    _require_finite(ctx, "center_of_centralizer_root")
    require_coprime(ctx, k)
    ctx.require_element(x, "x")
    n = ctx.n
    if any(x.raw_rows[i][j] != 0 for i in range(n) for j in range(n) if i != j):
        raise UnsupportedOperationError("x is not diagonal, so its semisimplicity is not established")
    cent = [h for h in ctx.elements if h @ x == x @ h]
    gens = generating_set(ctx, cent)
    zz = [z for z in cent if all(z @ h == h @ z for h in gens)]
    root = next((y for y in zz if y ** k == x), None)
    return CentralizerRoot(root, decide(ctx, x, k, strategy), len(cent), len(zz))


def _finite_root(ctx, x, k):
    return next((y for y in ctx.elements if y ** k == x), None)


def multi_k_probe(ctx: TriangularGroup, x: Matrix, ks, strategy: str = "superdiag") -> dict:
    """Element-level membership x in P_k(G) for each k.

    A finite stand-in for "roots of all orders"; it says nothing about the
    exponential map itself.
    """
    ctx.require_element(x, "x")
    out = {}
    for k in ks:
        if ctx.finite:
            p = ctx.field.characteristic
            y = _finite_root(ctx, x, k)
            note = "exhaustive search" + ("" if k % p else "; k not coprime to characteristic")
            out[k] = ProbeResult(k, y is not None, y, note)
            continue
        a, B = _prepare(ctx, x, k)
        if B.empty:
            out[k] = ProbeResult(k, False, None, "class of x has no k-th root")
            continue
        definitive = True
        found = None
        for b in B:
            y, final = _descend(ctx, x, b, k, strategy, strict=False)
            if y is not None:
                found = y
                break
            definitive = definitive and final
        if found is not None:
            out[k] = ProbeResult(k, True, found, "layer descent")
        elif definitive:
            out[k] = ProbeResult(k, False, None, "layer descent inconsistent with invertible theta")
        else:
            out[k] = ProbeResult(k, None, None, "unsupported: singular theta above an inconsistent layer")
    return out


def element_root_certificate(ctx: TriangularGroup, x: Matrix, k: int,
                             strategy: str = "superdiag") -> tuple[Certificate, ProbeResult]:
    """Certificate for the single element x (not its coset)."""
    require_coprime(ctx, k)
    res = multi_k_probe(ctx, x, [k], strategy)[k]
    q = ctx.quotient
    a = q.project(x)
    B = tuple(q.kth_root_classes(a, k))
    cert = Certificate(x=x, k=k, mode="element", strategy=strategy, decision=bool(res.member),
                       a=a, B=B, layers=[layer.descriptor() for layer in ctx.series(strategy)])
    if res.member:
        cert.witness = q.project(res.root)
        cert.roots.append((ctx.identity, res.root))
        cert.verify(ctx)
    elif res.member is False:
        cert.verify(ctx)
    return cert, res


def power_preimages(ctx: TriangularGroup, k: int) -> dict:
    """x -> all y with y^k = x, in enumeration order (one pass over G)."""
    _require_finite(ctx, "exhaustive root search")
    out: dict = {}
    for y in ctx.elements:
        out.setdefault(y ** k, []).append(y)
    return out


def regular_root_survey(ctx: TriangularGroup, k: int, strategy: str = "superdiag") -> dict:
    """For every x in P_k(G): the first P_k-regular root, or None if every root is singular.

    Regularity is evaluated once per diagonal class: the layer actions of y
    only depend on the coset yN.
    """
    cache: dict = {}

    def regular(y):
        d = y.diagonal()
        if d not in cache:
            cache[d] = pk_regularity(ctx, y, k, strategy).regular
        return cache[d]

    return {x: next((y for y in ys if regular(y)), None) for x, ys in power_preimages(ctx, k).items()}


def exhaustive_regular_root(ctx: TriangularGroup, x: Matrix, k: int, strategy: str = "superdiag"):
    """(all k-th roots of x, first regular one or None) by exhaustive search."""
    _require_finite(ctx, "exhaustive root search")
    roots = [y for y in ctx.elements if y ** k == x]
    reg = next((y for y in roots if pk_regularity(ctx, y, k, strategy).regular), None)
    return roots, reg


__all__ = [
    "BStarResult", "Certificate", "CentralizerRoot", "LayerVerdict", "ObstructionSubspace", "ProbeResult",
    "RegularityReport", "SurjectivityReport", "ThetaOperator",
    "bstar_filter", "bstar_via_theta", "center_elements", "center_of_centralizer_root",
    "center_pk_surjective", "construct_root", "coset_root_decision", "decide", "element_root_certificate",
    "exhaustive_regular_root", "fixed_point_conjugator", "group_pk_surjective", "multi_k_probe",
    "obstruction_subspace", "power_preimages", "regular_root_survey", "pk_regularity", "require_coprime", "solve_fixed_point", "theta_matrix",
    "theta_operator",
]
