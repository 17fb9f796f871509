import pytest
from hypothesis import given, settings, strategies as st

from powerroots.corpus import corpus_group, corpus_groups
from powerroots.errors import CapExceededError, UnsupportedOperationError
from powerroots.exactalg import GF, Matrix
from powerroots.oracle import (center, class_representatives, compare_all, coset, coset_coverage_truth,
                               enumerate_group, power_image, unipotent_elements)

SMALL = [c for c in corpus_groups() if c.order() <= 400]


@pytest.fixture(scope="module")
def E5(g5):
    return enumerate_group(g5)


def test_enumeration_size_and_identity(E5):
    assert len(E5) == 100 and E5.identity == Matrix.identity(GF(5), 3)
    assert len(unipotent_elements(E5)) == 25


def test_enumeration_is_deterministic(g5, E5):
    assert enumerate_group(g5).elements == E5.elements
    assert enumerate_group(list(g5.generators)).elements == E5.elements


def test_enumeration_cap(g5):
    with pytest.raises(CapExceededError):
        enumerate_group(g5.generators, cap=10)


def test_enumeration_needs_finite_field(heis_q):
    with pytest.raises(UnsupportedOperationError):
        enumerate_group(heis_q)


def test_power_image_sizes_g5(E5):
    # [DERIVED] set comprehension over the element list
    for k in range(1, 7):
        brute = {E5.index[x ** k] for x in E5.elements}
        assert set(power_image(E5, k).members()) == brute
    assert len(power_image(E5, 2)) == 30 and len(power_image(E5, 3)) == 100


def test_power_image_multiplicities_sum_to_order(E5):
    for k in (2, 3, 4):
        assert sum(power_image(E5, k).multiplicity) == len(E5)


def test_coset_truth_g5(g5, E5):
    g = g5.generators[0]
    assert not coset_coverage_truth(E5, g ** 2, 2)
    assert coset_coverage_truth(E5, g ** 3, 3)
    assert coset_coverage_truth(E5, E5.identity, 2)
    assert len(coset(E5, g)) == 25


def test_center_and_classes(g5, E5):
    assert center(E5) == [E5.identity]
    assert len(class_representatives(E5)) == 4
    heis = enumerate_group(corpus_group("heis_F7"))
    assert len(center(heis)) == 7


def test_power_image_full_for_k1():
    for ctx in SMALL:
        E = enumerate_group(ctx)
        assert len(power_image(E, 1)) == len(E)


def test_monotone_in_multiples():
    for ctx in SMALL:
        E = enumerate_group(ctx)
        for k in (2, 3):
            for m in (2, 3):
                big, small = power_image(E, k * m), power_image(E, k)
                assert set(big.members()) <= set(small.members())


def test_coverage_depends_on_class_only():
    for ctx in SMALL:
        E = enumerate_group(ctx)
        for k in (2, 3):
            img = power_image(E, k)
            for x in class_representatives(E):
                members = [E.index[y] in img for y in coset(E, x)]
                # coverage is a property of the coset, and truth is computed on the whole coset
                assert coset_coverage_truth(E, x, k, img) == all(members)
                assert all(coset_coverage_truth(E, y, k, img) == all(members) for y in coset(E, x)[:5])


def test_compare_all_g5(g5):
    rep = compare_all(g5, range(1, 7))
    assert rep.ok and rep.compared == 20
    assert [r.note for r in rep.rows if r.k == 5] == ["not coprime"] * 4
    row = next(r for r in rep.rows if r.k == 2 and r.cls == g5.quotient.project(g5.generators[0] ** 2))
    assert row.criterion is False and row.oracle is False and row.image_size == 30


@settings(max_examples=25)
@given(st.sampled_from([c.spec.label for c in SMALL]), st.integers(1, 6))
def test_compare_property(label, k):
    ctx = corpus_group(label)
    assert compare_all(ctx, [k]).ok
