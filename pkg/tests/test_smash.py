import pytest

from gradpi.algebra import ShapeMismatch, make_group_algebra, total_algebra, match_matrix_structure
from gradpi.catalog import build, group_algebra_grading
from gradpi.grading import Grading
from gradpi.groups import cyclic, symmetric_group
from gradpi.smash import (
    InfiniteWithoutRadius,
    NotConnected,
    certify_free_smash_rigidity,
    certify_schurian_simply_connected,
    certify_truncated_rigidity,
    check_smash_connectedness_equivalence,
    is_connected_category,
    smash_product,
    verify_covering,
    verify_galois,
)


def test_smash_of_group_algebra_is_schurian(Q):
    s = smash_product(group_algebra_grading(cyclic(3), Q))
    assert len(s.objects) == 3
    assert verify_galois(s)
    cert = certify_schurian_simply_connected(s)
    assert cert.objects == 3


def test_hom_orientation_in_truncated_smash():
    # hom((*, i), (*, j)) is nonzero exactly when 0 <= i - j < p
    s = smash_product(build("trunc-Z-3"), radius=4)
    R = s.realization
    for (_, i) in R.objects:
        for (_, j) in R.objects:
            d = len(R.hom(("*", i), ("*", j)))
            ii = sum(i)
            jj = sum(j)
            assert d == (1 if 0 <= ii - jj < 3 else 0)


def test_infinite_needs_radius():
    with pytest.raises(InfiniteWithoutRadius):
        smash_product(build("good-M2-free"))


def test_disconnected_smash(Q):
    A = make_group_algebra(cyclic(2), Q)
    g = Grading(A, cyclic(4), {"1": (0,), "t": (2,)})
    s = smash_product(g)
    assert not is_connected_category(s)
    with pytest.raises(NotConnected):
        verify_galois(s)
    assert check_smash_connectedness_equivalence(g) is False


def test_covering_interior_and_boundary():
    s = smash_product(build("good-M3-free"), radius=2)
    rep = verify_covering(s)
    assert rep.checked and rep.boundary
    assert all(v[0] == v[2] == 9 and v[1] == v[3] == 9 for v in rep.stars.values())


def test_truncated_smash_is_not_schurian():
    s = smash_product(build("trunc-Z-3"), radius=3)
    with pytest.raises(ShapeMismatch):
        certify_schurian_simply_connected(s)


def test_symmetric_group_smash_is_a_matrix_algebra(Q):
    s = smash_product(group_algebra_grading(symmetric_group(3), Q))
    assert verify_galois(s)
    assert match_matrix_structure(total_algebra(s.realization), 6).is_bijective()


@pytest.mark.parametrize("n,radius,vacuous", [(2, 1, True), (2, 3, False), (3, 2, False), (3, 3, False)])
def test_free_rigidity(n, radius, vacuous):
    cert = certify_free_smash_rigidity(n, radius)
    assert cert.vacuous is vacuous


@pytest.mark.parametrize("p", [2, 3, 5])
def test_truncated_rigidity(p):
    cert = certify_truncated_rigidity(p, 4)
    assert not cert.vacuous and cert.closed_walks > 0
