import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gradpi.algebra import (
    AssociativityError,
    LinearCategory,
    ShapeMismatch,
    ZeroElement,
    group_algebra_to_diagonal,
    is_invertible,
    make_diagonal,
    make_group_algebra,
    make_matrix_algebra,
    make_matrix_xy,
    make_triangular,
    make_truncated_poly,
    match_matrix_structure,
    quiver_presentation_matrix,
    total_algebra,
    unit_name,
    valuation,
    xy_name,
)
from gradpi.groups import FiniteAbelian, cyclic
from gradpi.scalars import BadCharacteristic, Field


def _matmul(a, b, K):
    n = len(a)
    return [[sum((a[i][k] * b[k][j] for k in range(n)), K.zero()) for j in range(n)] for i in range(n)]


def _unit(n, row, col, K):
    return [[K.one() if (i, j) == (row - 1, col - 1) else K.zero() for j in range(n)] for i in range(n)]


def _combo(coords, mats, n, K):
    out = [[K.zero()] * n for _ in range(n)]
    for f, c in coords.items():
        for i in range(n):
            for j in range(n):
                out[i][j] = out[i][j] + c * mats[f][i][j]
    return out


@pytest.mark.parametrize("n", [2, 3])
def test_matrix_units_against_explicit_matrices(n, Q):
    M = make_matrix_algebra(n, Q)
    mats = {unit_name(r, c): _unit(n, r, c, Q) for r in range(1, n + 1) for c in range(1, n + 1)}
    for g in M.names:
        for f in M.names:
            assert _combo(M.compose_basis(g, f), mats, n, Q) == _matmul(mats[g], mats[f], Q)


@pytest.mark.parametrize("n,field", [(2, Field.rational()), (3, Field.cyclotomic(3))])
def test_xy_basis_against_explicit_matrices(n, field):
    K = field
    q = K.primitive_root(n)
    C = make_matrix_xy(n, K)
    mats = {}
    for i in range(n):
        for j in range(n):
            m = [[K.zero()] * n for _ in range(n)]
            for k in range(n):
                m[(k + i) % n][k] = q ** (j * (k + 1))
            mats[xy_name(i, j)] = m
    for g in C.names:
        for f in C.names:
            assert _combo(C.compose_basis(g, f), mats, n, K) == _matmul(mats[g], mats[f], K)
    # y x = q x y
    assert C["y"] * C["x"] == C["x*y"].scale(q)


def test_triangular_dimension_and_products(Q):
    T = make_triangular(3, Q)
    assert T.dim == 6
    assert T[unit_name(3, 2)] * T[unit_name(2, 1)] == T[unit_name(3, 1)]
    assert (T[unit_name(2, 1)] * T[unit_name(3, 2)]).is_zero()


def test_diagonal_and_truncated(Q):
    D = make_diagonal(3, Q)
    assert D["d1"] * D["d1"] == D["d1"]
    assert (D["d1"] * D["d2"]).is_zero()
    A = make_truncated_poly(3, Field.prime(3))
    x = A["x"]
    assert (x * x * x).is_zero()
    assert valuation(x * x) == 2
    with pytest.raises(ZeroElement):
        valuation(A.zero())


def test_invertibility():
    A = make_truncated_poly(3, Field.prime(3))
    assert is_invertible(A["1"] + A["x"])
    assert not is_invertible(A["x"])


def test_nonassociative_table_rejected(Q):
    one = Q.one()
    basis = {"1": ("*", "*"), "a": ("*", "*"), "b": ("*", "*")}
    compose = {
        ("1", "1"): {"1": one}, ("1", "a"): {"a": one}, ("a", "1"): {"a": one},
        ("1", "b"): {"b": one}, ("b", "1"): {"b": one},
        ("a", "a"): {"b": one}, ("a", "b"): {"1": one}, ("b", "a"): {"a": one},
    }
    with pytest.raises(AssociativityError):
        LinearCategory(Q, ("*",), basis, compose, {"*": {"1": one}})


def test_json_roundtrip(Q):
    C = make_matrix_xy(2, Q)
    D = LinearCategory.from_json(C.to_json())
    assert D.names == C.names
    assert all(D.compose_basis(g, f) == C.compose_basis(g, f) for g in C.names for f in C.names)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_quiver_presentation(n, Q):
    pres = quiver_presentation_matrix(n, Q)
    assert pres.phi("y1*x1") == pres.matrices[unit_name(1, 1)]


@pytest.mark.parametrize("G", [cyclic(2), cyclic(3), cyclic(4), FiniteAbelian((2, 2)), cyclic(6)])
def test_group_algebra_is_diagonal(G, Q12):
    phi = group_algebra_to_diagonal(G, Q12)
    assert phi.is_bijective()


def test_group_algebra_bad_characteristic():
    with pytest.raises(BadCharacteristic):
        group_algebra_to_diagonal(cyclic(2), Field.prime(2))


def test_match_matrix_structure_rejects_a_non_matrix_category(Q):
    # the diagonal algebra is not a total algebra of anything
    with pytest.raises(ShapeMismatch):
        match_matrix_structure(make_diagonal(2, Q), 2)


coef = st.integers(-3, 3)


@settings(max_examples=40, deadline=None)
@given(st.lists(coef, min_size=4, max_size=4), st.lists(coef, min_size=4, max_size=4))
def test_group_algebra_commutative(a, b):
    K = Field.rational()
    A = make_group_algebra(cyclic(4), K)
    x = A.element({f: K(c) for f, c in zip(A.names, a) if c})
    y = A.element({f: K(c) for f, c in zip(A.names, b) if c})
    assert x * y == y * x
