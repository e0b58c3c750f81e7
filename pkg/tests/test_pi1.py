import pytest

from gradpi.groups import DirectProduct, Free, FreeProductCyclic, abelian_invariant_factors, cyclic
from gradpi.pi1 import check_no_universal, fundamental_group, pi1_reference


@pytest.mark.parametrize(
    "tag,name",
    [
        ("k2", "C2"),
        ("k3", "C2 x C3"),
        ("k4", "(C2*C2) x C6 x C4 x C2"),
        ("M2", "Z x C2"),
        ("M3", "F2 x C3"),
        ("Mp:5", "F4 x C5"),
        ("T3", "F2"),
        ("trunc:5", "Z x C5"),
    ],
)
def test_reference_names(tag, name):
    assert pi1_reference(tag).name() == name


def test_k4_reference_regrouping():
    # C3 x C2 x C2 x C4 from the disjoint nodes regroups into C6 x C4 x C2
    lhs = DirectProduct((cyclic(3), cyclic(2), cyclic(2), cyclic(4)))
    rhs = DirectProduct((cyclic(6), cyclic(4), cyclic(2)))
    assert abelian_invariant_factors(lhs) == abelian_invariant_factors(rhs)


@pytest.mark.parametrize("tag,method", [("k2", "exact"), ("k3", "exact"), ("Tn:2", "exact (initial)"), ("Tn:4", "exact (initial)")])
def test_exact_cases(tag, method):
    res = fundamental_group(tag)
    assert res.method == method
    assert all(res.projections_surjective.values())


@pytest.mark.parametrize("tag,radius", [("M2", 6), ("trunc:2", 5), ("trunc:3", 5), ("k4", 4)])
def test_bounded_cases(tag, radius):
    res = fundamental_group(tag, radius=radius)
    assert res.method == "bounded"
    c = res.certificate
    assert c["candidate_elements"] == c["compatible_tuples"] > 0
    assert res.to_json()["schema"] == 1


def test_limit_shapes():
    assert [case for _, case in fundamental_group("M2").limit_methods] == ["fibre_product"]
    cases = sorted(case for _, case in fundamental_group("k4", radius=2).limit_methods)
    assert cases == ["finite", "finite", "finite", "initial"]


@pytest.mark.parametrize(
    "tag,invariant",
    [("M2", "trivial_component_dim"), ("trunc:3", "invertible_nontrivial_homogeneous"), ("k4", "group_class")],
)
def test_no_universal_cover(tag, invariant):
    r = check_no_universal(tag)
    assert r.invariant == invariant
    assert r.conclusive


def test_no_universal_values():
    assert check_no_universal("M2").values == (1, 2)
    with pytest.raises(ValueError):
        check_no_universal("k3")
