import cmath
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gradpi.scalars import (
    BadCharacteristic,
    Field,
    FieldMismatch,
    NoSuchRoot,
    cyclotomic_polynomial,
    euler_phi,
    inverse_matrix,
    mat_vec,
    multiplicative_order,
    parse_field,
    rank,
)


def _numeric_cyclotomic(m):
    # oracle: expand prod (x - w) over primitive m-th roots numerically
    coeffs = [complex(1)]
    for k in range(1, m + 1):
        if __import__("math").gcd(k, m) != 1:
            continue
        w = cmath.exp(2j * cmath.pi * k / m)
        new = [0j] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            new[i + 1] += c
            new[i] -= w * c
        coeffs = new
    return tuple(round(c.real) for c in coeffs)


@pytest.mark.parametrize("m", list(range(1, 31)) + [36, 60])
def test_cyclotomic_polynomial_matches_numeric_roots(m):
    assert cyclotomic_polynomial(m) == _numeric_cyclotomic(m)
    assert len(cyclotomic_polynomial(m)) - 1 == euler_phi(m)


def test_phi4_and_phi12():
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)


def test_prime_field_inverses_by_brute_force():
    F = Field.prime(5)
    for a in range(1, 5):
        (b,) = [b for b in range(1, 5) if a * b % 5 == 1]
        assert F(a).inverse() == F(b)
        assert F(a) / F(b) == F(a * a)
    assert multiplicative_order(F(2)) == 4
    assert len(F.elements()) == 5


def test_prime_field_roots():
    F = Field.prime(5)
    z = F.primitive_root(4)
    assert multiplicative_order(z) == 4
    with pytest.raises(NoSuchRoot):
        F.primitive_root(3)
    with pytest.raises(BadCharacteristic):
        F(Fraction(1, 5))


def test_cyclotomic_generator_orders():
    K = Field.cyclotomic(12)
    z = K.gen()
    assert z ** 12 == K.one()
    assert z ** 6 == K(-1)
    assert multiplicative_order(z) == 12
    assert multiplicative_order(K.primitive_root(3)) == 3
    assert multiplicative_order(K.primitive_root(4)) == 4
    assert K.has_root(6) and not K.has_root(5)


def test_field_mismatch():
    with pytest.raises(FieldMismatch):
        Field.prime(3)(1) + Field.prime(5)(1)


@pytest.mark.parametrize(
    "text,expected",
    [("Q", Field.rational()), ("Q(z12)", Field.cyclotomic(12)), ("F5", Field.prime(5)), ("GF(7)", Field.prime(7))],
)
def test_parse_field(text, expected):
    assert parse_field(text) == expected
    assert parse_field(str(expected)) == expected
    assert Field.from_json(expected.to_json()) == expected


def test_parse_field_rejects_nonsense():
    with pytest.raises(ValueError):
        parse_field("F4")
    with pytest.raises(ValueError):
        parse_field("R")


small = st.integers(min_value=-6, max_value=6)
q12 = st.lists(small, min_size=4, max_size=4)


@settings(max_examples=60, deadline=None)
@given(q12, q12, q12)
def test_q12_field_axioms(a, b, c):
    K = Field.cyclotomic(12)
    x, y, w = (K.from_coefficients(v) for v in (a, b, c))
    assert x * (y + w) == x * y + x * w
    assert (x * y) * w == x * (y * w)
    assert x * y == y * x
    if not x.is_zero():
        assert x * x.inverse() == K.one()


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 6), st.integers(0, 6))
def test_prime_field_distributes(a, b):
    F = Field.prime(7)
    assert (F(a) + F(b)) ** 2 == F(a) ** 2 + F(2) * F(a) * F(b) + F(b) ** 2


def test_linear_algebra_helpers(Q):
    m = [[Q(2), Q(1)], [Q(1), Q(1)]]
    inv = inverse_matrix(m)
    assert inv == [[Q(1), Q(-1)], [Q(-1), Q(2)]]
    assert mat_vec(m, [Q(1), Q(0)]) == [Q(2), Q(1)]
    assert rank([[Q(1), Q(2)], [Q(2), Q(4)]]) == 1
