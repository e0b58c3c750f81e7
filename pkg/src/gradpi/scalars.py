"""Exact scalars over Q, cyclotomic fields Q(z_m) and prime fields F_p.

Cyclotomic elements are kept reduced modulo the m-th cyclotomic polynomial,
so equality is a comparison of coefficient tuples.

>>> K = Field.cyclotomic(4)
>>> z = K.gen()
>>> z * z == K(-1)
True
>>> Field.prime(5)(3).inverse()
Scalar(F5, 2)
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence


class FieldMismatch(ValueError):
    pass


class NoSuchRoot(ValueError):
    pass


class BadCharacteristic(ValueError):
    pass


# ---------------------------------------------------------------------------
# integer polynomials (coefficient lists, lowest degree first)


def _poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_divexact(num: Sequence[int], den: Sequence[int]) -> list[int]:
    """Divide integer polynomials; ``den`` must be monic and divide ``num``."""
    num = list(num)
    assert den[-1] == 1
    q = [0] * (len(num) - len(den) + 1)
    for k in range(len(q) - 1, -1, -1):
        c = num[k + len(den) - 1]
        q[k] = c
        if c:
            for j, d in enumerate(den):
                num[k + j] -= c * d
    if any(num):
        raise ArithmeticError("polynomial division is not exact")
    return q


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Coefficients of the m-th cyclotomic polynomial, constant term first."""
    if m < 1:
        raise ValueError("m must be positive")
    xm1 = [-1] + [0] * (m - 1) + [1]
    den = [1]
    for d in _divisors(m)[:-1]:
        den = _poly_mul(den, cyclotomic_polynomial(d))
    return tuple(_poly_divexact(xm1, den))


def euler_phi(m: int) -> int:
    return sum(1 for k in range(1, m + 1) if gcd(k, m) == 1)


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p**0.5) + 1))


# ---------------------------------------------------------------------------
# fields


@dataclass(frozen=True)
class Field:
    """Descriptor of an exact field.

    ``kind`` is one of ``"rational"``, ``"cyclotomic"`` (with conductor ``m``)
    or ``"prime"`` (with characteristic ``p``).
    """

    kind: str
    m: int = 1
    p: int = 0
    _reduction: tuple = dc_field(default=(), repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.kind == "rational":
            return
        if self.kind == "cyclotomic":
            if self.m < 1:
                raise ValueError("conductor must be positive")
            phi = self.minimal_polynomial
            deg = len(phi) - 1
            # x^k mod Phi_m for deg <= k <= 2*deg - 2
            table = []
            cur = [Fraction(-c) for c in phi[:-1]]  # x^deg
            for _ in range(max(deg - 1, 0)):
                table.append(tuple(cur))
                top = cur[-1]
                cur = [Fraction(0)] + cur[:-1]
                if top:
                    for i in range(deg):
                        cur[i] -= top * phi[i]
            object.__setattr__(self, "_reduction", tuple(table))
            return
        if self.kind == "prime":
            if not is_prime(self.p):
                raise ValueError(f"{self.p} is not prime")
            return
        raise ValueError(f"unknown field kind {self.kind!r}")

    @classmethod
    def rational(cls) -> "Field":
        return cls("rational")

    @classmethod
    def cyclotomic(cls, m: int) -> "Field":
        return cls("cyclotomic", m=m)

    @classmethod
    def prime(cls, p: int) -> "Field":
        return cls("prime", p=p)

    @property
    def minimal_polynomial(self) -> tuple[int, ...]:
        if self.kind != "cyclotomic":
            raise AttributeError("only cyclotomic fields carry a minimal polynomial")
        return cyclotomic_polynomial(self.m)

    @property
    def degree(self) -> int:
        return len(self.minimal_polynomial) - 1 if self.kind == "cyclotomic" else 1

    @property
    def characteristic(self) -> int:
        return self.p if self.kind == "prime" else 0

    def __str__(self) -> str:
        if self.kind == "rational":
            return "Q"
        if self.kind == "cyclotomic":
            return f"Q(z{self.m})"
        return f"F{self.p}"

    # -- element construction ------------------------------------------------

    def __call__(self, value=0) -> "Scalar":
        if isinstance(value, Scalar):
            if value.field != self:
                raise FieldMismatch(f"{value.field} vs {self}")
            return value
        if self.kind == "prime":
            if isinstance(value, Fraction):
                num = value.numerator % self.p
                den = value.denominator % self.p
                if den == 0:
                    raise BadCharacteristic(f"denominator divisible by {self.p}")
                return Scalar(self, num * pow(den, -1, self.p) % self.p)
            return Scalar(self, int(value) % self.p)
        if self.kind == "rational":
            return Scalar(self, Fraction(value))
        zero = Fraction(0)
        return Scalar(self, (Fraction(value),) + (zero,) * (self.degree - 1))

    def zero(self) -> "Scalar":
        return self(0)

    def one(self) -> "Scalar":
        return self(1)

    def gen(self) -> "Scalar":
        """The distinguished generator z of a cyclotomic field."""
        if self.kind != "cyclotomic":
            raise AttributeError("only cyclotomic fields have a generator")
        if self.degree == 1:
            # Q(z1) = Q(z2) = Q, z is the root of x - 1 or x + 1
            return self(-self.minimal_polynomial[0])
        return self.from_coefficients([0, 1])

    def from_coefficients(self, coeffs: Iterable) -> "Scalar":
        """Element sum(c_i z^i) reduced modulo the cyclotomic polynomial."""
        if self.kind != "cyclotomic":
            raise AttributeError("only cyclotomic fields take coefficient lists")
        return Scalar(self, self._reduce([Fraction(c) for c in coeffs]))

    def _reduce(self, coeffs: list) -> tuple:
        deg = self.degree
        if len(coeffs) > 2 * deg - 1:
            phi = self.minimal_polynomial
            coeffs = list(coeffs)
            for top in range(len(coeffs) - 1, 2 * deg - 2, -1):
                c = coeffs[top]
                if c:
                    for i, d in enumerate(phi):
                        coeffs[top - deg + i] -= c * d
            coeffs = coeffs[: 2 * deg - 1]
        out = list(coeffs[:deg]) + [Fraction(0)] * (deg - len(coeffs[:deg]))
        for k, c in enumerate(coeffs[deg:]):
            if c:
                row = self._reduction[k] if deg > 1 else (Fraction(-self.minimal_polynomial[0]) ** (k + 1),)
                for i in range(deg):
                    out[i] += c * row[i]
        return tuple(out)

    def elements(self) -> list["Scalar"]:
        if self.kind != "prime":
            raise ValueError("only prime fields are enumerable")
        return [Scalar(self, r) for r in range(self.p)]

    # -- roots of unity -------------------------------------------------------

    def primitive_root(self, n: int) -> "Scalar":
        """A primitive n-th root of unity, chosen deterministically.

        Cyclotomic fields return z^(m/n) (or a power of -z when m is odd),
        prime fields the smallest residue of order n.
        """
        if n < 1:
            raise ValueError("n must be positive")
        if n == 1:
            return self.one()
        if self.kind == "prime":
            if (self.p - 1) % n:
                raise NoSuchRoot(f"F{self.p} has no primitive {n}-th root of unity")
            for a in range(2, self.p):
                if multiplicative_order(self(a)) == n:
                    return self(a)
            raise NoSuchRoot(f"F{self.p} has no primitive {n}-th root of unity")
        if n == 2:
            return self(-1)
        if self.kind == "rational":
            raise NoSuchRoot(f"Q has no primitive {n}-th root of unity")
        if self.m % n == 0:
            return self.gen() ** (self.m // n)
        if self.m % 2 and (2 * self.m) % n == 0:
            return (-self.gen()) ** (2 * self.m // n)
        raise NoSuchRoot(f"{self} has no primitive {n}-th root of unity")

    def roots_of_unity(self, n: int) -> list["Scalar"]:
        q = self.primitive_root(n)
        return [q**j for j in range(n)]

    def has_root(self, n: int) -> bool:
        try:
            self.primitive_root(n)
        except NoSuchRoot:
            return False
        return True

    # -- text ----------------------------------------------------------------

    def to_json(self) -> dict:
        if self.kind == "rational":
            return {"kind": "rational"}
        if self.kind == "cyclotomic":
            return {"kind": "cyclotomic", "m": self.m}
        return {"kind": "prime", "p": self.p}

    @classmethod
    def from_json(cls, data) -> "Field":
        if isinstance(data, str):
            return parse_field(data)
        kind = data["kind"]
        if kind == "rational":
            return cls.rational()
        if kind == "cyclotomic":
            return cls.cyclotomic(int(data["m"]))
        if kind == "prime":
            return cls.prime(int(data["p"]))
        raise ValueError(f"unknown field kind {kind!r}")

    def parse(self, text: str) -> "Scalar":
        text = text.strip()
        if self.kind == "prime":
            return self(Fraction(text))
        if self.kind == "rational":
            return self(Fraction(text))
        return self.from_coefficients(_parse_z_poly(text))


_FIELD_RE = re.compile(r"^(?:Q\((?:z|zeta)_?(\d+)\)|F_?(\d+)|GF\((\d+)\)|Q|QQ)$")


def parse_field(text: str) -> Field:
    """Parse ``Q``, ``Q(z12)``, ``F5``, ``GF(5)``, or a JSON object."""
    text = text.strip()
    if text.startswith("{"):
        import json

        return Field.from_json(json.loads(text))
    m = _FIELD_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse field descriptor {text!r}")
    if m.group(1):
        return Field.cyclotomic(int(m.group(1)))
    if m.group(2) or m.group(3):
        return Field.prime(int(m.group(2) or m.group(3)))
    return Field.rational()


_TERM_RE = re.compile(r"([+-])?\s*([^+-]+)")


def _parse_z_poly(text: str) -> list[Fraction]:
    coeffs: dict[int, Fraction] = {}
    for sign, body in _TERM_RE.findall(text.replace(" ", "")):
        body = body.strip()
        if not body:
            continue
        if "z" in body:
            coef_part, _, pow_part = body.partition("z")
            coef_part = coef_part.rstrip("*")
            coef = Fraction(coef_part) if coef_part else Fraction(1)
            k = int(pow_part[1:]) if pow_part.startswith("^") else 1
        else:
            coef, k = Fraction(body), 0
        if sign == "-":
            coef = -coef
        coeffs[k] = coeffs.get(k, Fraction(0)) + coef
    top = max(coeffs, default=0)
    return [coeffs.get(i, Fraction(0)) for i in range(top + 1)]


# ---------------------------------------------------------------------------
# scalars


class Scalar:
    """An immutable field element.  ``v`` is a Fraction, a residue, or a
    tuple of Fractions (cyclotomic coefficients, lowest degree first)."""

    __slots__ = ("field", "v")

    def __init__(self, field: Field, v):
        self.field = field
        self.v = v

    def _check(self, other) -> "Scalar":
        if not isinstance(other, Scalar):
            return self.field(other)
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        return other

    def __add__(self, other):
        other = self._check(other)
        K = self.field
        if K.kind == "prime":
            return Scalar(K, (self.v + other.v) % K.p)
        if K.kind == "rational":
            return Scalar(K, self.v + other.v)
        return Scalar(K, tuple(a + b for a, b in zip(self.v, other.v)))

    __radd__ = __add__

    def __neg__(self):
        K = self.field
        if K.kind == "prime":
            return Scalar(K, (-self.v) % K.p)
        if K.kind == "rational":
            return Scalar(K, -self.v)
        return Scalar(K, tuple(-a for a in self.v))

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) + (-self)

    def __mul__(self, other):
        other = self._check(other)
        K = self.field
        if K.kind == "prime":
            return Scalar(K, self.v * other.v % K.p)
        if K.kind == "rational":
            return Scalar(K, self.v * other.v)
        a, b = self.v, other.v
        prod = [Fraction(0)] * (2 * len(a) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return Scalar(K, K._reduce(prod))

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        K = self.field
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if K.kind == "prime":
            return Scalar(K, pow(self.v, -1, K.p))
        if K.kind == "rational":
            return Scalar(K, 1 / self.v)
        return Scalar(K, _cyclotomic_inverse(self.v, K.minimal_polynomial))

    def __truediv__(self, other):
        return self * self._check(other).inverse()

    def __rtruediv__(self, other):
        return self._check(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_zero(self) -> bool:
        if self.field.kind == "cyclotomic":
            return not any(self.v)
        return not self.v

    def is_one(self) -> bool:
        return self == self.field.one()

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field == other.field and self.v == other.v
        if isinstance(other, (int, Fraction)):
            return self == self.field(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.v))

    def __repr__(self):
        return f"Scalar({self.field}, {self})"

    def __str__(self):
        K = self.field
        if K.kind == "prime":
            return str(self.v)
        if K.kind == "rational":
            return _frac_str(self.v)
        terms = []
        for k in range(len(self.v) - 1, -1, -1):
            c = self.v[k]
            if not c:
                continue
            if k == 0:
                body = _frac_str(abs(c))
            else:
                mono = "z" if k == 1 else f"z^{k}"
                body = mono if abs(c) == 1 else f"{_frac_str(abs(c))}*{mono}"
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            return "0"
        out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def _frac_str(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _cyclotomic_inverse(a: tuple, phi: Sequence[int]) -> tuple:
    # extended Euclid in Q[x]: find u with u*a = 1 mod phi
    def trim(p):
        p = list(p)
        while p and not p[-1]:
            p.pop()
        return p

    def divmod_(n, d):
        n = list(n)
        q = [Fraction(0)] * max(len(n) - len(d) + 1, 1)
        while len(n) >= len(d) and n:
            c = n[-1] / d[-1]
            k = len(n) - len(d)
            q[k] = c
            for i, x in enumerate(d):
                n[k + i] -= c * x
            n = trim(n)
        return q, n

    def sub_mul(x, q, y):
        prod = [Fraction(0)] * (len(q) + len(y))
        for i, c in enumerate(q):
            for j, d in enumerate(y):
                prod[i + j] += c * d
        size = max(len(x), len(prod))
        out = [(x[i] if i < len(x) else 0) - (prod[i] if i < len(prod) else 0) for i in range(size)]
        return trim(out)

    r0, r1 = [Fraction(c) for c in phi], trim(a)
    s0, s1 = [], [Fraction(1)]
    while len(r1) > 1:
        q, r = divmod_(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub_mul(s0, q, s1)
    c = r1[0]
    deg = len(phi) - 1
    u = [x / c for x in s1] + [Fraction(0)] * deg
    return tuple(u[:deg])


def multiplicative_order(a: Scalar, bound: int = 10_000) -> int:
    if a.is_zero():
        raise ZeroDivisionError("zero has no multiplicative order")
    one = a.field.one()
    x = a
    for k in range(1, bound + 1):
        if x == one:
            return k
        x = x * a
    raise ValueError("element has infinite (or very large) order")


# ---------------------------------------------------------------------------
# exact linear algebra on lists of scalars


def row_reduce(rows: Sequence[Sequence[Scalar]]) -> tuple[list[list[Scalar]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [list(r) for r in rows]
    pivots: list[int] = []
    if not m:
        return m, pivots
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if not m[i][c].is_zero()), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and not m[i][c].is_zero():
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence[Scalar]]) -> int:
    return len(row_reduce(rows)[1])


def inverse_matrix(mat: Sequence[Sequence[Scalar]]) -> list[list[Scalar]]:
    n = len(mat)
    if n == 0:
        return []
    K = mat[0][0].field
    aug = [list(row) + [K.one() if i == j else K.zero() for j in range(n)] for i, row in enumerate(mat)]
    red, pivots = row_reduce(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in red[:n]]


def mat_vec(mat: Sequence[Sequence[Scalar]], vec: Sequence[Scalar]) -> list[Scalar]:
    out = []
    for row in mat:
        acc = vec[0].field.zero() if vec else None
        for a, b in zip(row, vec):
            if not a.is_zero() and not b.is_zero():
                acc = acc + a * b
        out.append(acc)
    return out
