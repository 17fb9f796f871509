import random
from fractions import Fraction

import pytest

from powerroots import roots as R
from powerroots.corpus import corpus_group, corpus_groups
from powerroots.errors import InvariantBreachError, PreconditionError, UnsupportedOperationError
from powerroots.exactalg import GF, QQ, Matrix, Polynomial, poly_gcd, char_poly
from powerroots.group_ctx import exp_nilpotent, validate_spec, GroupSpec
from powerroots.oracle import centralizer, center_of, enumerate_group

F5 = GF(5)


def cls(*xs, f=F5):
    return tuple(f.scalar(f.raw(x)) for x in xs)


def n_g5(s, t):
    return Matrix([[1, 0, s], [0, 1, t], [0, 0, 1]], F5)


def ks_for(ctx):
    p = ctx.field.characteristic
    return [k for k in range(1, 7) if not p or k % p]


# -- B* -------------------------------------------------------------------


def test_bstar_g5_k2(g5):
    g = g5.generators[0]
    res = R.bstar_filter(g5, g ** 2, 2)
    assert res.B == (cls(4, 2, 1), cls(4, 3, 1))
    assert res.bstar == ()
    for b in res.B:
        bad = [v for v in res.verdicts[b] if not v.contained]
        # the e1 direction, i.e. the (1,3) entry, is fixed by a and scaled by 4 under b
        assert [v.layer for v in bad] == [2] and bad[0].violation == (1,)


def test_bstar_g5_k3(g5):
    g = g5.generators[0]
    res = R.bstar_filter(g5, g ** 3, 3)
    assert res.B == (cls(4, 2, 1),) and res.bstar == res.B
    assert all(v.fixed_a.dim == 0 for v in res.verdicts[cls(4, 2, 1)])


def test_bstar_identity(g5):
    for k in (1, 2, 3, 4, 6):
        assert cls(1, 1, 1) in R.bstar_filter(g5, g5.identity, k).bstar


def test_bstar_via_theta_examples(g5):
    g = g5.generators[0]
    assert R.bstar_via_theta(g5, g ** 2, 2).bstar == ()
    assert R.bstar_via_theta(g5, g ** 3, 3).bstar == (cls(4, 2, 1),)
    triv = validate_spec(GroupSpec(F5, 2, ()))
    assert R.bstar_via_theta(triv, triv.identity, 3).bstar == (cls(1, 1),)


def test_coprimality_guard(g5):
    with pytest.raises(PreconditionError, match="not coprime"):
        R.bstar_filter(g5, g5.generators[0], 5)
    with pytest.raises(PreconditionError):
        R.coset_root_decision(g5, g5.identity, 10)


def test_x_outside_group_rejected(g5):
    with pytest.raises(Exception):
        R.bstar_filter(g5, Matrix.diag(F5, [2, 2, 1]), 2)


# -- theta ----------------------------------------------------------------


def test_theta_merged_layer_k2(g5):
    op = R.theta_operator(g5, cls(4, 2, 1), 1, 2, strategy="lower")
    assert op.matrix == Matrix.diag(F5, [0, 4]) and op.singular and op.det == 0


def test_theta_merged_layer_k3(g5):
    op = R.theta_operator(g5, cls(4, 2, 1), 1, 3, strategy="lower")
    assert op.matrix == Matrix.diag(F5, [1, 3]) and not op.singular


def test_theta_trivial_class_is_k_identity(g5):
    for k in (1, 2, 3, 4):
        for j in (1, 2):
            op = R.theta_operator(g5, cls(1, 1, 1), j, k)
            assert op.matrix == Matrix.identity(F5, 1).scale(k)


def test_theta_commutes_with_sigma():
    for ctx in corpus_groups()[:20]:
        for b in ctx.quotient.all_classes():
            for j in range(1, len(ctx.series()) + 1):
                op = R.theta_operator(ctx, b, j, 3 if ctx.field.characteristic != 3 else 2)
                assert op.matrix @ op.sigma == op.sigma @ op.matrix


def test_theta_singularity_law_on_corpus():
    for ctx in corpus_groups():
        for strategy in ("superdiag", "refined"):
            for b in ctx.quotient.all_classes():
                for k in ks_for(ctx):
                    for j in range(1, len(ctx.series(strategy)) + 1):
                        op = R.theta_operator(ctx, b, j, k, strategy)
                        g = poly_gcd(char_poly(op.sigma), Polynomial.geometric(k, ctx.field))
                        assert (op.det == 0) == (g.degree > 0)


def test_criterion_forms_agree_on_corpus():
    for ctx in corpus_groups():
        q = ctx.quotient
        for a in q.all_classes():
            x = q.lift_class(a)
            for k in ks_for(ctx):
                assert R.bstar_filter(ctx, x, k).bstar == R.bstar_via_theta(ctx, x, k).bstar


def test_split_product_identity_randomised(heis_q_diag):
    rng = random.Random(20240601)
    groups = [corpus_group(lbl) for lbl in ("G5", "heis_F7_d611", "U4_F3_d", "mixed3_F5", "chain4_F5",
                                            "block4_F5", "heis4_F7")]
    checked = 0
    while checked < 200:
        ctx = rng.choice(groups + [heis_q_diag])
        s = ctx.series()
        j = rng.randint(1, len(s))
        layer = s.layer(j)
        f = ctx.field
        k = rng.choice(ks_for(ctx))
        if ctx.finite:
            g = rng.choice(ctx.elements)
            w = tuple(f.scalar(rng.randrange(f.characteristic)) for _ in range(layer.dim))
        else:
            z = [rng.randint(-2, 2) for _ in ctx.generators]
            g = ctx.word([(i, e) for i, e in enumerate(z) if e])
            w = tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(layer.dim))
        theta = R.theta_matrix(layer.action(g), k)
        lhs = (g @ layer.lift(w)) ** k
        d = (g ** k).inverse() @ lhs
        assert layer.contains(d)
        assert layer.coords(d) == theta.apply(w)
        checked += 1


# -- decisions and construction -------------------------------------------


def test_decision_g5_k2_obstruction(g5):
    cert = R.coset_root_decision(g5, g5.generators[0] ** 2, 2)
    assert cert.decision is False and cert.verified
    assert [(ob["layer"], ob["vector"]) for ob in cert.obstructions] == [(2, (1,)), (2, (1,))]


def test_decision_g5_k3_witness(g5):
    cert = R.coset_root_decision(g5, g5.generators[0] ** 3, 3)
    assert cert.decision and cert.witness == cls(4, 2, 1) and cert.verified


def test_decision_identity(g5, heis_q):
    for ctx in (g5, heis_q):
        cert = R.coset_root_decision(ctx, ctx.identity, 3)
        assert cert.decision and cert.witness == ctx.identity.diagonal()


def test_construct_root_g5():
    g5 = corpus_group("G5")
    g = g5.generators[0]
    y = R.construct_root(g5, g ** 3, n_g5(1, 1), cls(4, 2, 1), 3)
    # [DERIVED] g * n_(1,2)
    assert y == g @ n_g5(1, 2) == Matrix([[4, 0, 4], [0, 2, 4], [0, 0, 1]], F5)
    assert y ** 3 == Matrix([[4, 0, 4], [0, 3, 3], [0, 0, 1]], F5)


def test_construct_root_heisenberg_q(heis_q):
    n = Matrix([[1, 1, 1], [0, 1, 1], [0, 0, 1]], QQ)
    y = R.construct_root(heis_q, heis_q.identity, n, cls(1, 1, 1, f=QQ), 2)
    assert y == Matrix([[1, "1/2", "3/8"], [0, 1, "1/2"], [0, 0, 1]], QQ)


def test_construct_root_zero_defect(g5):
    g = g5.generators[0]
    assert R.construct_root(g5, g ** 3, g5.identity, cls(4, 2, 1), 3) == g


def test_construct_root_rejects_non_bstar(g5):
    with pytest.raises(PreconditionError, match="not in B"):
        R.construct_root(g5, g5.generators[0] ** 2, g5.identity, cls(4, 2, 1), 2)
    with pytest.raises(PreconditionError):
        R.construct_root(g5, g5.generators[0] ** 2, g5.identity, cls(1, 1, 1), 2)


@pytest.mark.parametrize("label", ["G5", "heis_F3_d211", "mixed3_F3", "nonsplit3_F5", "block4_F3",
                                   "heis_F5_d414", "U4_F3_d", "corner3_F7"])
def test_witness_totality_exhaustive(label):
    ctx = corpus_group(label)
    q = ctx.quotient
    for a in q.all_classes():
        x = q.lift_class(a)
        for k in ks_for(ctx):
            res = R.bstar_filter(ctx, x, k)
            if not res.bstar:
                continue
            b = min(res.bstar)
            for n in ctx.unipotent:
                y = R.construct_root(ctx, x, n, b, k)
                assert y ** k == x @ n and q.project(y) == b


def test_witness_totality_q_random(heis_q, heis_q_diag):
    rng = random.Random(7)
    count = 0
    for ctx in (heis_q, heis_q_diag):
        basis = [Matrix.unit(QQ, 3, 0, 1), Matrix.unit(QQ, 3, 1, 2), Matrix.unit(QQ, 3, 0, 2)]
        while count < (60 if ctx is heis_q else 120):
            z = [rng.randint(-2, 2) for _ in ctx.generators]
            x = ctx.word([(i, e) for i, e in enumerate(z) if e])
            k = rng.randint(1, 6)
            res = R.bstar_filter(ctx, x, k)
            if not res.bstar:
                continue
            X = Matrix.zeros(QQ, 3, 3)
            for e in basis:
                X = X + e.scale(Fraction(rng.randint(-20, 20), rng.randint(1, 6)))
            n = exp_nilpotent(X)
            y = R.construct_root(ctx, x, n, min(res.bstar), k)
            assert y ** k == x @ n and ctx.quotient.project(y) == min(res.bstar)
            count += 1
    assert count >= 100


# -- conjugators and obstruction subspaces ---------------------------------


def test_solve_fixed_point_example():
    assert R.solve_fixed_point(Matrix.diag(F5, [4, 2]), (1, 1)) == cls(2, 3)
    assert R.solve_fixed_point(Matrix.diag(F5, [4, 2]), (0, 0)) == cls(0, 0)
    with pytest.raises(PreconditionError):
        R.solve_fixed_point(Matrix.diag(F5, [1, 2]), (1, 1))


def test_fixed_point_conjugator_in_group(g5):
    g = g5.generators[0]
    layer = g5.series().layer(1)
    v = cls(1)
    w = R.fixed_point_conjugator(g5, g, v, 1)
    assert layer.coords(g @ layer.lift(v)) == layer.coords(w @ g @ w.inverse())
    assert g @ layer.lift(v) == w @ g @ w.inverse()


def test_obstruction_subspace_merged_layer(g5):
    x = g5.generators[0] ** 2
    ob = R.obstruction_subspace(g5, x, cls(4, 2, 1), 1, 2, strategy="lower")
    e2 = (F5.scalar(0), F5.scalar(1))
    assert ob.image_a.basis == [e2] and ob.U.basis == [e2] and ob.image_theta.basis == [e2]
    assert ob.fixed_quotient_dim == 0


def test_obstruction_subspace_line(g5):
    # a trivial on the (1,3) line, b acts by 4 with 4^2 = 1: U = 0 and theta = 0
    ob = R.obstruction_subspace(g5, g5.generators[0] ** 2, cls(4, 3, 1), 2, 2)
    assert ob.U.dim == 0 and ob.image_theta.dim == 0


def test_obstruction_subspace_precondition(g5):
    with pytest.raises(PreconditionError):
        R.obstruction_subspace(g5, g5.generators[0] ** 3, cls(4, 2, 1), 1, 3)


def test_reachability_bound_against_enumeration(g5):
    # every y in class b with y^2 in xN has its defect inside Im theta on the merged layer
    x = g5.generators[0] ** 2
    layer = g5.series("lower").layer(1)
    for b in (cls(4, 2, 1), cls(4, 3, 1)):
        ob = R.obstruction_subspace(g5, x, b, 1, 2, strategy="lower")
        for y in g5.elements:
            if y.diagonal() == b:
                v = layer.coords(x.inverse() @ y ** 2)
                assert ob.image_theta.contains(v) and ob.U.contains(v)


def test_reachability_bound_on_corpus():
    for ctx in corpus_groups():
        q = ctx.quotient
        for a in q.all_classes():
            x = q.lift_class(a)
            for k in ks_for(ctx):
                res = R.bstar_filter(ctx, x, k)
                for b in res.B:
                    for v in res.verdicts[b]:
                        if v.fixed_a != v.fixed_b:
                            ob = R.obstruction_subspace(ctx, x, b, v.layer, k)
                            assert ob.image_theta <= ob.U


# -- regularity, surjectivity, centralizers --------------------------------


def test_regularity_examples(g5):
    g = g5.generators[0]
    rep = R.pk_regularity(g5, g, 2)
    assert not rep.regular and [str(p) for p in rep.gcds] == ["1", "x + 1"]
    assert R.pk_regularity(g5, g, 3).regular
    for u in g5.unipotent:
        assert R.pk_regularity(g5, u, 4).regular


def test_group_surjectivity(g5):
    assert R.group_pk_surjective(g5, 3).surjective
    rep = R.group_pk_surjective(g5, 2)
    assert not rep.surjective and rep.failing_class == cls(1, 4, 1)
    triv = validate_spec(GroupSpec(F5, 2, ()))
    assert all(R.group_pk_surjective(triv, k).surjective for k in (1, 2, 3, 4))


def test_group_surjectivity_unsupported_for_infinite_class_group(heis_q_diag):
    with pytest.raises(UnsupportedOperationError):
        R.group_pk_surjective(heis_q_diag, 2)


def test_center_surjectivity(g5):
    assert R.center_elements(g5) == [g5.identity]
    assert all(R.center_pk_surjective(g5, k) for k in (1, 2, 3))
    heis7 = corpus_group("heis_F7")
    assert len(R.center_elements(heis7)) == 7 and R.center_pk_surjective(heis7, 2)


def test_center_of_centralizer_root_examples(g5):
    g = g5.generators[0]
    r = R.center_of_centralizer_root(g5, g ** 2, 2)
    assert r.root is None and r.decision is False
    assert r.centralizer_order == 20 and r.center_order == 2
    r = R.center_of_centralizer_root(g5, g ** 3, 3)
    assert r.root == g and r.decision and r.centralizer_order == 4
    assert R.center_of_centralizer_root(g5, g5.identity, 4).root == g5.identity


def test_center_of_centralizer_matches_oracle(g5):
    E = enumerate_group(g5)
    x = g5.generators[0] ** 2
    cent = centralizer(E, x)
    assert len(cent) == 20 and sorted(map(repr, center_of(cent))) == sorted(map(repr, [g5.identity, x]))


def test_center_of_centralizer_needs_diagonal(g5):
    with pytest.raises(UnsupportedOperationError):
        R.center_of_centralizer_root(g5, n_g5(1, 0), 2)


# -- element-level probe --------------------------------------------------


def test_multi_k_probe_g5(g5):
    g = g5.generators[0]
    out = R.multi_k_probe(g5, g ** 2, [2, 3])
    assert out[2].member and out[2].root ** 2 == g ** 2
    assert out[3].member
    assert R.multi_k_probe(g5, g ** 2 @ n_g5(1, 0), [2])[2].member is False
    assert all(r.member for r in R.multi_k_probe(g5, g5.identity, range(1, 7)).values())


def test_multi_k_probe_q(heis_q_diag):
    g1, g2 = heis_q_diag.generators[:2]
    out = R.multi_k_probe(heis_q_diag, g1 ** 2, [2, 3])
    assert out[2].member and out[2].root ** 2 == g1 ** 2
    assert out[3].member is False


def test_certificate_recheck_catches_tampering(g5):
    cert = R.coset_root_decision(g5, g5.generators[0] ** 3, 3)
    n, y = cert.roots[0]
    cert.roots[0] = (n, y @ n_g5(0, 1))
    with pytest.raises(InvariantBreachError):
        cert.verify(g5)


def test_covered_cosets_have_regular_roots():
    # the restricted form of the regular-root property that does hold on finite groups
    for ctx in corpus_groups():
        q = ctx.quotient
        for a in q.all_classes():
            x = q.lift_class(a)
            for k in ks_for(ctx):
                cert = R.coset_root_decision(ctx, x, k)
                if cert.decision:
                    assert all(R.pk_regularity(ctx, y, k).regular for _, y in cert.roots)
