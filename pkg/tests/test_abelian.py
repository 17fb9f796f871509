import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from powerroots.abelian import LatticeEncoding, class_pow
from powerroots.corpus import corpus_groups
from powerroots.errors import UnsupportedOperationError, ValidationError
from powerroots.exactalg import QQ, GF, Matrix
from powerroots.group_ctx import GroupSpec, validate_spec

F5 = GF(5)


def cls(*xs):
    return tuple(F5.scalar(F5.raw(x)) for x in xs)


def test_g5_square_roots_of_g_squared(g5):
    # [DERIVED] 2m = 2 mod 4 forces the classes of g and g^3
    roots = g5.quotient.kth_root_classes(cls(1, 4, 1), 2)
    assert tuple(roots) == (cls(4, 2, 1), cls(4, 3, 1))


def test_g5_cube_root_of_g_cubed(g5):
    assert tuple(g5.quotient.kth_root_classes(cls(4, 3, 1), 3)) == (cls(4, 2, 1),)


def test_identity_class_always_has_itself(g5):
    for k in range(1, 7):
        assert cls(1, 1, 1) in g5.quotient.kth_root_classes(cls(1, 1, 1), k)


def test_lift_class_projects_back(g5):
    q = g5.quotient
    for b in q.all_classes():
        assert q.project(q.lift_class(b)) == b
    assert q.lift_class(cls(1, 4, 1)) == g5.generators[0] ** 2


def test_unknown_class_rejected(g5):
    with pytest.raises(ValidationError):
        g5.quotient.kth_root_classes(cls(2, 2, 1), 2)


def test_finite_root_sets_match_brute_force():
    for ctx in corpus_groups():
        q = ctx.quotient
        classes = q.all_classes()
        for k in (2, 3):
            for a in classes:
                brute = sorted(b for b in classes if class_pow(b, k) == a)
                assert list(q.kth_root_classes(a, k)) == brute


# -- lattice quotient over Q ----------------------------------------------


def torus_q(*diags):
    gens = tuple(Matrix.diag(QQ, d) for d in diags)
    return validate_spec(GroupSpec(QQ, len(diags[0]), gens, lie_algebra=()))


def brute_classes(diags, box):
    """All products prod d_i^{z_i} with |z_i| <= box."""
    n = len(diags[0])
    out = set()
    for z in itertools.product(range(-box, box + 1), repeat=len(diags)):
        c = [Fraction(1)] * n
        for d, e in zip(diags, z):
            c = [x * Fraction(y) ** e for x, y in zip(c, d)]
        out.add(tuple(c))
    return out


def test_lattice_rank_and_torsion():
    ctx = torus_q((2, 1), (-1, 1))
    q = ctx.quotient
    assert q.rank() == 1 and not q.is_finite()
    with pytest.raises(UnsupportedOperationError):
        q.all_classes()
    # squares of diag(2,1) have two square roots: +-diag(2,1) up to sign torsion
    roots = q.kth_root_classes((Fraction(4), Fraction(1)), 2)
    assert set(roots) == {(Fraction(2), Fraction(1)), (Fraction(-2), Fraction(1))}
    assert tuple(q.kth_root_classes((Fraction(2), Fraction(1)), 2)) == ()


def test_lattice_odd_k_has_unique_root():
    q = torus_q((2, 3), (-1, 1)).quotient
    roots = q.kth_root_classes((Fraction(-8), Fraction(27)), 3)
    assert tuple(roots) == ((Fraction(-2), Fraction(3)),)


def test_finite_sign_group_over_q():
    q = torus_q((-1, 1), (1, -1)).quotient
    assert q.is_finite() and q.order() == 4
    one = (Fraction(1), Fraction(1))
    assert len(q.kth_root_classes(one, 2)) == 4
    assert len(q.kth_root_classes(one, 3)) == 1


def test_membership_and_lift():
    ctx = torus_q((2, "1/3"), (-1, 1))
    q = ctx.quotient
    b = (Fraction(-4), Fraction(1, 9))
    assert q.contains_class(b)
    assert q.lift_class(b).diagonal() == b
    assert not q.contains_class((Fraction(3), Fraction(1)))


diag_entries = st.sampled_from([1, -1, 2, -2, 3, "1/2", "-1/3", 6, "2/3", 4])


@given(st.lists(st.tuples(diag_entries, diag_entries), min_size=1, max_size=3), st.integers(1, 4),
       st.data())
def test_lattice_roots_match_boxed_brute_force(diags, k, data):
    ctx = torus_q(*diags)
    q = ctx.quotient
    fd = [tuple(Fraction(x) for x in d) for d in diags]
    box = brute_classes(fd, 2)
    target = data.draw(st.sampled_from(sorted(box)))
    roots = set(q.kth_root_classes(target, k))
    for b in roots:
        assert class_pow(b, k) == target and q.contains_class(b)
    # anything found by brute force inside a larger box must be reported
    brute = {b for b in brute_classes(fd, 3) if class_pow(b, k) == target}
    assert brute <= roots


def test_encoding_roundtrip():
    enc = LatticeEncoding.from_generators(QQ, 2, [(Fraction(2), Fraction(-3)), (Fraction(-1), Fraction(1))])
    z = enc.solve((Fraction(-4), Fraction(9)))[0]
    assert enc.decode_word(z) == (Fraction(-4), Fraction(9))
