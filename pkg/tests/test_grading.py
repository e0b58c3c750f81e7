import random

import pytest

from gradpi.algebra import make_diagonal, make_group_algebra, make_matrix_algebra, unit_name
from gradpi.catalog import build, ergodic_diagonal_grading, truncated_Z_grading
from gradpi.grading import (
    BrokenChain,
    Grading,
    GradingDiagram,
    NotSurjective,
    Walk,
    closed_walk_degrees,
    distinguish,
    is_connected,
    quotient_grading,
    same_components,
    support,
    verify_grading,
    walk_degree,
    walk_search_connected,
)
from gradpi.groups import FiniteAbelian, Free, Homomorphism, cyclic
from gradpi.scalars import Field


def test_good_grading_of_m2(Q):
    M = make_matrix_algebra(2, Q)
    g = Grading(M, cyclic(2), {"E1,1": (0,), "E2,2": (0,), "E1,2": (1,), "E2,1": (1,)})
    assert verify_grading(g)
    assert g.trivial_dim() == 2
    assert is_connected(g) is True


def test_idempotent_forced_trivial(Q):
    M = make_matrix_algebra(2, Q)
    g = Grading(M, cyclic(2), {"E1,1": (1,), "E2,2": (0,), "E1,2": (1,), "E2,1": (0,)})
    cert = verify_grading(g)
    assert not cert
    assert cert.violation is not None


def test_disconnected_grading(Q):
    # k C2 graded through C2 -> C4, t -> t^2: support misses t
    A = make_group_algebra(cyclic(2), Q)
    g = Grading(A, cyclic(4), {"1": (0,), "t": (2,)})
    assert verify_grading(g)
    assert is_connected(g) is False
    assert walk_search_connected(g) is False


@pytest.mark.parametrize("name", ["group-C3", "fine-M2", "ergodic-C4", "specific-k4-C2", "trunc-C3"])
def test_connectedness_agrees_with_walk_search(name):
    g = build(name)
    assert is_connected(g) is walk_search_connected(g) is True


def test_walk_degree(Q):
    M = make_matrix_algebra(2, Q)
    g = Grading(M, Free(1), {"E1,1": (), "E2,2": (), "E2,1": (1,), "E1,2": (-1,)})
    w = Walk([("E2,1", 1), ("E1,2", 1)])
    assert walk_degree(g, w).is_identity()
    w2 = Walk([("E2,1", 1), ("E1,2", -1)])
    assert walk_degree(g, w2).nf == (1, 1)


def test_walk_breaks(Q):
    from gradpi.algebra import LinearCategory

    one = Q.one()
    C = LinearCategory(
        Q,
        ("a", "b"),
        {"ida": ("a", "a"), "idb": ("b", "b"), "f": ("a", "b")},
        {("ida", "ida"): {"ida": one}, ("idb", "idb"): {"idb": one}, ("f", "ida"): {"f": one}, ("idb", "f"): {"f": one}},
        {"a": {"ida": one}, "b": {"idb": one}},
    )
    g = Grading(C, cyclic(2), {"ida": (0,), "idb": (0,), "f": (1,)})
    with pytest.raises(BrokenChain):
        walk_degree(g, Walk([("f", 1), ("f", 1)]))
    degs, exhaustive = closed_walk_degrees(g)
    assert exhaustive and degs == {(0,)}
    assert is_connected(g) is False


def test_quotient_support_is_image():
    g = build("fine-M3")
    phi = Homomorphism(g.group, cyclic(3), ((1,), (0,)))
    q = quotient_grading(g, phi)
    assert {x.nf for x in support(q)} == {phi.apply(x.nf) for x in support(g)}
    with pytest.raises(NotSurjective):
        quotient_grading(g, Homomorphism(g.group, cyclic(3), ((0,), (0,))))


def test_same_components_across_bases(Q12):
    a = ergodic_diagonal_grading(cyclic(2), Q12)
    b = ergodic_diagonal_grading(cyclic(2), Q12)
    assert same_components(a, b)


def test_json_roundtrip():
    g = build("good-M3-free")
    h = Grading.from_json(g.to_json())
    assert h.degrees == g.degrees and h.group == g.group


def test_distinguish_order_of_invariants():
    F3 = Field.prime(3)
    a = build("trunc-C3")
    b = truncated_Z_grading(3, F3)
    rep = distinguish(a, b)
    assert rep.first_difference == "invertible_nontrivial_homogeneous"
    assert distinguish(build("ergodic-C4"), build("ergodic-C2xC2")).first_difference == "group_class"
    assert not distinguish(build("group-C2"), build("group-C2")).distinguished


def test_grading_diagram_summary():
    g = build("fine-M2")
    V = g.group
    h = quotient_grading(g, Homomorphism(V, cyclic(2), ((1,), (0,))))
    d = GradingDiagram([g, h], [(0, 1, Homomorphism(V, cyclic(2), ((1,), (0,))))], "test")
    assert d.validate()
    assert d.summary()["nodes"][1]["group"] == "C2"
