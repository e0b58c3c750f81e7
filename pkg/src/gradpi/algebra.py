"""Linear categories (and algebras) given by structure constants.

A :class:`LinearCategory` has named objects and a named basis of morphisms;
``compose[(g, f)]`` holds the coordinates of ``g o f`` for composable basis
morphisms ``f: x -> y``, ``g: y -> z``.  A one-object category is an algebra
and ``g o f`` is the product ``g * f``.

A category may carry a *frame*: an injective linear map into a root category
with the same objects, given by the root coordinates of each basis vector.
Gradings on different bases of the same algebra are compared through it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Optional, Sequence

from .groups import FiniteAbelian, Group
from .scalars import BadCharacteristic, Field, NoSuchRoot, Scalar, inverse_matrix, rank


class AssociativityError(ValueError):
    pass


class ShapeMismatch(ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ZeroElement(ValueError):
    pass


Coords = dict  # basis name -> Scalar, zero entries omitted


def _axpy(acc: dict, coef: Scalar, vec: Mapping):
    for k, v in vec.items():
        s = acc.get(k)
        s = coef * v if s is None else s + coef * v
        if s.is_zero():
            acc.pop(k, None)
        else:
            acc[k] = s


@dataclass(eq=False)
class LinearCategory:
    field: Field
    objects: tuple
    basis: dict  # name -> (source, target), insertion order is the basis order
    compose: dict  # (g, f) -> Coords, only nonzero products
    identities: dict  # object -> Coords
    name: str = "C"
    frame: Optional[tuple] = None  # (root category, {name: root Coords})
    origin: Optional[dict] = None  # total algebras: name -> (source, target)
    check: bool = True

    def __post_init__(self):
        self.objects = tuple(self.objects)
        for f, (x, y) in self.basis.items():
            if x not in self.objects or y not in self.objects:
                raise ValueError(f"basis vector {f} has unknown endpoints")
        if self.check:
            self.verify()

    # -- shape ---------------------------------------------------------------
    @cached_property
    def names(self) -> tuple:
        return tuple(self.basis)

    @cached_property
    def index(self) -> dict:
        return {f: i for i, f in enumerate(self.names)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def _hom(self) -> dict:
        out: dict = {}
        for f, (x, y) in self.basis.items():
            out.setdefault((x, y), []).append(f)
        return out

    def hom(self, x, y) -> list:
        """Basis names of hom(x, y), morphisms from x to y."""
        return self._hom.get((x, y), [])

    @cached_property
    def _from(self) -> dict:
        out: dict = {x: [] for x in self.objects}
        for f, (x, _) in self.basis.items():
            out[x].append(f)
        return out

    @cached_property
    def _into(self) -> dict:
        out: dict = {x: [] for x in self.objects}
        for f, (_, y) in self.basis.items():
            out[y].append(f)
        return out

    def morphisms_from(self, x) -> list:
        return self._from[x]

    def morphisms_into(self, y) -> list:
        return self._into[y]

    def source(self, f):
        return self.basis[f][0]

    def target(self, f):
        return self.basis[f][1]

    @property
    def is_algebra(self) -> bool:
        return len(self.objects) == 1

    # -- arithmetic on coordinate dicts ----------------------------------------
    def compose_basis(self, g, f) -> Coords:
        if self.basis[f][1] != self.basis[g][0]:
            return {}
        return self.compose.get((g, f), {})

    def compose_coords(self, a: Mapping, b: Mapping) -> Coords:
        """Coordinates of a o b (bilinear extension)."""
        out: dict = {}
        for g, cg in a.items():
            for f, cf in b.items():
                prod = self.compose_basis(g, f)
                if prod:
                    _axpy(out, cg * cf, prod)
        return out

    def verify(self):
        """Associativity on all basis triples and the identity laws."""
        K = self.field
        one = K.one()
        for x, ident in self.identities.items():
            for f in ident:
                if self.basis[f] != (x, x):
                    raise ValueError(f"identity of {x} uses {f}")
        for f, (x, y) in self.basis.items():
            if self.compose_coords(self.identities[y], {f: one}) != {f: one}:
                raise AssociativityError(f"left identity fails on {f}")
            if self.compose_coords({f: one}, self.identities[x]) != {f: one}:
                raise AssociativityError(f"right identity fails on {f}")
        for e, (w, x) in self.basis.items():
            for f in self.morphisms_from(x):
                fe = self.compose_basis(f, e)
                y = self.target(f)
                for g in self.morphisms_from(y):
                    left = self.compose_coords({g: one}, fe)
                    right = self.compose_coords(self.compose_basis(g, f), {e: one})
                    if left != right:
                        raise AssociativityError(f"({g} {f}) {e} != {g} ({f} {e})")

    # -- elements ------------------------------------------------------------
    def element(self, coords: Mapping | str, source=None, target=None) -> "AlgebraElement":
        if isinstance(coords, str):
            coords = {coords: self.field.one()}
        coords = {k: self.field(v) for k, v in coords.items() if not self.field(v).is_zero()}
        if coords:
            ends = {self.basis[k] for k in coords}
            if len(ends) != 1:
                raise ValueError("element mixes different hom spaces")
            (source, target) = ends.pop()
        elif source is None:
            source = target = self.objects[0]
        return AlgebraElement(self, source, target, coords)

    def zero(self, x=None, y=None) -> "AlgebraElement":
        x = self.objects[0] if x is None else x
        y = x if y is None else y
        return AlgebraElement(self, x, y, {})

    def one(self, x=None) -> "AlgebraElement":
        x = self.objects[0] if x is None else x
        return AlgebraElement(self, x, x, dict(self.identities[x]))

    def basis_element(self, f) -> "AlgebraElement":
        x, y = self.basis[f]
        return AlgebraElement(self, x, y, {f: self.field.one()})

    def __getitem__(self, f) -> "AlgebraElement":
        return self.basis_element(f)

    # -- frames --------------------------------------------------------------
    @property
    def root(self) -> "LinearCategory":
        return self if self.frame is None else self.frame[0]

    def root_coords(self, coords: Mapping) -> Coords:
        if self.frame is None:
            return dict(coords)
        out: dict = {}
        for f, c in coords.items():
            _axpy(out, c, self.frame[1][f])
        return out

    def verify_frame(self):
        """The frame map is unital and multiplicative on basis pairs."""
        if self.frame is None:
            return
        root = self.root
        one = self.field.one()
        for x in self.objects:
            if self.root_coords(self.identities[x]) != root.identities[x]:
                raise ValueError("frame is not unital")
        for f in self.names:
            for g in self.morphisms_from(self.target(f)):
                lhs = self.root_coords(self.compose_basis(g, f))
                rhs = root.compose_coords(self.root_coords({g: one}), self.root_coords({f: one}))
                if lhs != rhs:
                    raise ValueError(f"frame is not multiplicative on ({g}, {f})")

    # -- serialization -------------------------------------------------------
    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "field": self.field.to_json(),
            "objects": [str(x) for x in self.objects],
            "homs": {
                "basis": [[f, str(x), str(y)] for f, (x, y) in self.basis.items()],
            },
            "compose": [
                [f, g, h, str(c)] for (g, f), prod in self.compose.items() for h, c in prod.items()
            ],
            "identities": {str(x): {f: str(c) for f, c in v.items()} for x, v in self.identities.items()},
        }
        if self.frame is not None:
            out["frame"] = {
                "root": self.frame[0].to_json(),
                "coordinates": {f: {h: str(c) for h, c in v.items()} for f, v in self.frame[1].items()},
            }
        return out

    @classmethod
    def from_json(cls, data) -> "LinearCategory":
        K = Field.from_json(data["field"])
        objects = tuple(data["objects"])
        basis = {f: (x, y) for f, x, y in data["homs"]["basis"]}
        compose: dict = {}
        for f, g, h, c in data["compose"]:
            s = K.parse(c)
            if not s.is_zero():
                compose.setdefault((g, f), {})[h] = s
        identities = {x: {f: K.parse(c) for f, c in v.items()} for x, v in data["identities"].items()}
        frame = None
        if "frame" in data:
            root = cls.from_json(data["frame"]["root"])
            coords = {
                f: {h: K.parse(c) for h, c in v.items()} for f, v in data["frame"]["coordinates"].items()
            }
            frame = (root, coords)
        return cls(K, objects, basis, compose, identities, name=data.get("name", "C"), frame=frame)


@dataclass
class AlgebraElement:
    category: LinearCategory
    source: object
    target: object
    coords: dict

    def _same(self, other: "AlgebraElement"):
        if other.category is not self.category:
            raise ValueError("elements of different categories")

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._same(other)
        if not other.coords:
            return self
        if self.coords and (self.source, self.target) != (other.source, other.target):
            raise ValueError("adding elements of different hom spaces")
        out = dict(self.coords)
        _axpy(out, self.category.field.one(), other.coords)
        return AlgebraElement(self.category, other.source, other.target, out)

    def __neg__(self) -> "AlgebraElement":
        return self.scale(-self.category.field.one())

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def scale(self, c) -> "AlgebraElement":
        c = self.category.field(c)
        return AlgebraElement(
            self.category, self.source, self.target, {k: c * v for k, v in self.coords.items() if not (c * v).is_zero()}
        )

    def __rmul__(self, c) -> "AlgebraElement":
        return self.scale(c)

    def __mul__(self, other):
        """Composition ``self o other`` (algebra product for one object)."""
        if not isinstance(other, AlgebraElement):
            return self.scale(other)
        self._same(other)
        C = self.category
        coords = C.compose_coords(self.coords, other.coords)
        if self.coords and other.coords and other.target != self.source:
            coords = {}
        return AlgebraElement(C, other.source, self.target, coords)

    def __pow__(self, e: int) -> "AlgebraElement":
        out = self.category.one(self.source)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, AlgebraElement):
            return self.category is other.category and self.coords == other.coords
        if other == 0:
            return not self.coords
        return NotImplemented

    def is_zero(self) -> bool:
        return not self.coords

    def coordinate(self, f) -> Scalar:
        return self.coords.get(f, self.category.field.zero())

    def __str__(self) -> str:
        if not self.coords:
            return "0"
        parts = []
        for f in self.category.names:
            if f in self.coords:
                c = self.coords[f]
                parts.append(f if c.is_one() else f"({c})*{f}")
        return " + ".join(parts)

    __repr__ = __str__


# ---------------------------------------------------------------------------
# algebra morphisms


@dataclass(eq=False)
class AlgebraMorphism:
    source: LinearCategory
    target: LinearCategory
    images: dict  # source basis name -> target Coords
    check: bool = True

    def __post_init__(self):
        if self.check:
            self.verify()

    def apply_coords(self, coords: Mapping) -> Coords:
        out: dict = {}
        for f, c in coords.items():
            _axpy(out, c, self.images[f])
        return out

    def __call__(self, a: AlgebraElement) -> AlgebraElement:
        coords = self.apply_coords(a.coords)
        return self.target.element(coords) if coords else self.target.zero()

    def verify(self):
        S, T = self.source, self.target
        one = S.field.one()
        if not (S.is_algebra and T.is_algebra):
            raise ValueError("algebra morphisms need one-object categories")
        if self.apply_coords(S.identities[S.objects[0]]) != T.identities[T.objects[0]]:
            raise ValueError("morphism is not unital")
        for f in S.names:
            for g in S.names:
                lhs = self.apply_coords(S.compose_basis(f, g))
                rhs = T.compose_coords(self.images[f], self.images[g])
                if lhs != rhs:
                    raise ValueError(f"morphism is not multiplicative on ({f}, {g})")

    def is_bijective(self) -> bool:
        if self.source.dim != self.target.dim:
            return False
        rows = [[self.images[f].get(h, self.target.field.zero()) for h in self.target.names] for f in self.source.names]
        return rank(rows) == self.target.dim


# ---------------------------------------------------------------------------
# constructions


def _one_object(K, basis_names, product, unit, name, frame=None, check=True) -> LinearCategory:
    obj = "*"
    basis = {f: (obj, obj) for f in basis_names}
    compose = {}
    for g in basis_names:
        for f in basis_names:
            p = {h: c for h, c in product(g, f).items() if not c.is_zero()}
            if p:
                compose[(g, f)] = p
    return LinearCategory(K, (obj,), basis, compose, {obj: unit}, name=name, frame=frame, check=check)


def unit_name(i, j) -> str:
    return f"E{i},{j}"


def make_matrix_algebra(n: int, field: Field) -> LinearCategory:
    """M_n with matrix units ``E{j},{i}``; E_ji * E_lk = delta_il E_jk."""
    if n < 1:
        raise ValueError("n >= 1")
    K = field
    one = K.one()
    names = [unit_name(j, i) for j in range(1, n + 1) for i in range(1, n + 1)]
    idx = {unit_name(j, i): (j, i) for j in range(1, n + 1) for i in range(1, n + 1)}

    def product(g, f):
        (j, i), (l, k) = idx[g], idx[f]
        return {unit_name(j, k): one} if i == l else {}

    unit = {unit_name(i, i): one for i in range(1, n + 1)}
    return _one_object(K, names, product, unit, f"M{n}")


def xy_name(i: int, j: int) -> str:
    parts = []
    if i:
        parts.append("x" if i == 1 else f"x^{i}")
    if j:
        parts.append("y" if j == 1 else f"y^{j}")
    return "*".join(parts) or "1"


def make_matrix_xy(n: int, field: Field, q: Optional[Scalar] = None) -> LinearCategory:
    """M_n on the basis x^i y^j with x^n = y^n = 1 and yx = q xy.

    The frame records x as the cyclic shift sum_i E_{i+1,i} and y as
    diag(q, q^2, ..., q^n); it is checked to be an algebra isomorphism.
    """
    K = field
    q = K.primitive_root(n) if q is None else q
    names = [xy_name(i, j) for i in range(n) for j in range(n)]
    idx = {xy_name(i, j): (i, j) for i in range(n) for j in range(n)}
    qpow = [q**e for e in range(n)]

    def product(g, f):
        (i, j), (k, l) = idx[g], idx[f]
        return {xy_name((i + k) % n, (j + l) % n): qpow[(j * k) % n]}

    root = make_matrix_algebra(n, K)
    coords = {}
    for i in range(n):
        for j in range(n):
            # x^i y^j = sum_k q^{jk} E_{k+i,k}, indices taken in 1..n
            coords[xy_name(i, j)] = {unit_name((k + i) % n + 1, k + 1): qpow[(j * (k + 1)) % n] for k in range(n)}
    cat = _one_object(K, names, product, {"1": K.one()}, f"M{n}(xy)", frame=(root, coords))
    cat.verify_frame()
    return cat


def make_triangular(n: int, field: Field) -> LinearCategory:
    """T_n spanned by E_ji with j >= i (so E_{i+1,i} lies in T_n)."""
    K = field
    one = K.one()
    pairs = [(j, i) for j in range(1, n + 1) for i in range(1, n + 1) if j >= i]
    names = [unit_name(j, i) for j, i in pairs]
    idx = dict(zip(names, pairs))

    def product(g, f):
        (j, i), (l, k) = idx[g], idx[f]
        return {unit_name(j, k): one} if i == l else {}

    unit = {unit_name(i, i): one for i in range(1, n + 1)}
    return _one_object(K, names, product, unit, f"T{n}")


def make_diagonal(n: int, field: Field) -> LinearCategory:
    """k^n with Dirac masses ``d1 .. dn``."""
    K = field
    one = K.one()
    names = [f"d{i}" for i in range(1, n + 1)]
    return _one_object(
        K, names, lambda g, f: {g: one} if g == f else {}, {f: one for f in names}, f"k^{n}"
    )


def make_group_algebra(G: Group, field: Field) -> LinearCategory:
    """kG with the group elements (formatted normal forms) as basis."""
    K = field
    one = K.one()
    elems = G.elements()
    name = {e: G.format(e) for e in elems}

    def product(g, f):
        return {name[G.mul(back[g], back[f])]: one}

    back = {v: k for k, v in name.items()}
    return _one_object(K, [name[e] for e in elems], product, {name[G.identity()]: one}, f"k[{G.name()}]")


def power_name(i: int) -> str:
    return "1" if i == 0 else ("x" if i == 1 else f"x^{i}")


def make_truncated_poly(p: int, field: Field) -> LinearCategory:
    """k[x]/(x^p) on the monomial basis."""
    K = field
    one = K.one()
    names = [power_name(i) for i in range(p)]
    idx = {power_name(i): i for i in range(p)}

    def product(g, f):
        e = idx[g] + idx[f]
        return {power_name(e): one} if e < p else {}

    return _one_object(K, names, product, {"1": one}, f"k[x]/(x^{p})")


def rebase(cat: LinearCategory, new_basis: dict, name: str) -> LinearCategory:
    """Same algebra on a new basis given by coordinates in ``cat``'s basis.

    The result carries a frame to ``cat``'s root.
    """
    K = cat.field
    names = list(new_basis)
    old = cat.names
    mat = [[new_basis[f].get(h, K.zero()) for h in old] for f in names]
    inv = inverse_matrix(mat)  # rows: old basis vectors in the new basis

    def to_new(coords):
        out: dict = {}
        for h, c in coords.items():
            row = inv[cat.index[h]]
            for f, r in zip(names, row):
                if not r.is_zero():
                    _axpy(out, c, {f: r})
        return out

    x = cat.objects[0]
    unit = to_new(cat.identities[x])
    cache = {}

    def product(g, f):
        key = (g, f)
        if key not in cache:
            cache[key] = to_new(cat.compose_coords(new_basis[g], new_basis[f]))
        return cache[key]

    frame = (cat.root, {f: cat.root_coords(new_basis[f]) for f in names})
    out = _one_object(K, names, product, unit, name, frame=frame)
    return out


# ---------------------------------------------------------------------------
# quiver presentation of M_n (path algebra is infinite dimensional: kept lazy)


@dataclass
class QuiverPresentation:
    """Quiver with vertices 1..n, arrows x_i: i -> i+1 and y_i: i+1 -> i,
    and the map to M_n sending x_i to E_{i+1,i} and y_i to E_{i,i+1}."""

    n: int
    field: Field

    @cached_property
    def matrices(self) -> LinearCategory:
        return make_matrix_algebra(self.n, self.field)

    def arrow(self, a: str) -> tuple:
        kind, i = a[0], int(a[1:])
        if kind == "x":
            return i, i + 1
        if kind == "y":
            return i + 1, i
        if kind == "e":
            return i, i
        raise ValueError(f"unknown arrow {a}")

    def phi(self, path: str) -> AlgebraElement:
        """Image of a path written as a product ``y1*x1`` (right factor first
        along the path)."""
        M = self.matrices
        out = M.one()
        for a in reversed(path.replace(" ", "").split("*")):
            src, tgt = self.arrow(a)
            out = M.basis_element(unit_name(tgt, src)) * out
        return out

    def relations(self) -> list[tuple[str, str]]:
        rels = []
        for i in range(1, self.n):
            rels.append((f"y{i}*x{i}", f"e{i}"))
            rels.append((f"x{i}*y{i}", f"e{i + 1}"))
        return rels

    def verify(self) -> bool:
        """Relations map to zero and the images of paths span M_n."""
        for lhs, rhs in self.relations():
            if self.phi(lhs) - self.phi(rhs) != 0:
                raise ValueError(f"relation {lhs} - {rhs} does not vanish")
        hit = set()
        for i in range(1, self.n + 1):
            for j in range(1, self.n + 1):
                if i <= j:
                    path = "*".join(f"x{k}" for k in range(j - 1, i - 1, -1)) or f"e{i}"
                else:
                    path = "*".join(f"y{k}" for k in range(j, i))
                img = self.phi(path)
                hit |= set(img.coords)
        if len(hit) != self.n**2:
            raise ValueError("paths do not span M_n")
        return True


def quiver_presentation_matrix(n: int, field: Field) -> QuiverPresentation:
    if n < 2:
        raise ValueError("n >= 2")
    pres = QuiverPresentation(n, field)
    pres.verify()
    return pres


# ---------------------------------------------------------------------------
# elements of one-object categories


def _root_exponent(name: str) -> int:
    if name == "1":
        return 0
    if name == "x":
        return 1
    if name.startswith("x^"):
        return int(name[2:])
    raise ValueError(f"{name} is not a monomial")


def valuation(a: AlgebraElement) -> int:
    """Lowest exponent with a nonzero coordinate in k[x]/(x^p)."""
    coords = a.category.root_coords(a.coords)
    if not coords:
        raise ZeroElement("valuation of zero")
    return min(_root_exponent(f) for f in coords)


def left_multiplication_matrix(a: AlgebraElement) -> list[list[Scalar]]:
    C = a.category
    K = C.field
    one = K.one()
    cols = []
    for f in C.names:
        img = C.compose_coords(a.coords, {f: one})
        cols.append([img.get(h, K.zero()) for h in C.names])
    return [list(r) for r in zip(*cols)]


def is_invertible(a: AlgebraElement) -> bool:
    if not a.category.is_algebra:
        raise ValueError("invertibility is tested in algebras")
    return rank(left_multiplication_matrix(a)) == a.category.dim


# ---------------------------------------------------------------------------
# total algebra and matrix matching


def total_algebra(c: LinearCategory) -> LinearCategory:
    """Direct sum of all hom spaces with composition (non-composable -> 0)."""
    if c.is_algebra:
        return c
    obj = "*"
    basis = {f: (obj, obj) for f in c.names}
    unit: dict = {}
    for x in c.objects:
        _axpy(unit, c.field.one(), c.identities[x])
    return LinearCategory(
        c.field,
        (obj,),
        basis,
        dict(c.compose),
        {obj: unit},
        name=f"tot({c.name})",
        origin=dict(c.basis),
        check=False,
    )


def match_matrix_structure(a: LinearCategory, n: int) -> AlgebraMorphism:
    """Isomorphism a -> M_n for the total algebra of a category with n
    objects, one-dimensional homs and nonzero structure constants.

    Basis morphisms are rescaled along the star of the first object; the
    result is checked multiplicative on all basis pairs.
    """
    K = a.field
    if a.origin is None:
        if a.dim == 1 and n == 1:
            return AlgebraMorphism(a, make_matrix_algebra(1, K), {a.names[0]: {unit_name(1, 1): K.one()}})
        raise ShapeMismatch("not a total algebra of a category", witness=a.name)
    objs = []
    for f, (x, y) in a.origin.items():
        for o in (x, y):
            if o not in objs:
                objs.append(o)
    if len(objs) != n:
        raise ShapeMismatch(f"{len(objs)} objects, expected {n}", witness=len(objs))
    pos = {o: i + 1 for i, o in enumerate(objs)}
    hom: dict = {}
    for f, (x, y) in a.origin.items():
        hom.setdefault((x, y), []).append(f)
    for x in objs:
        for y in objs:
            if len(hom.get((x, y), [])) != 1:
                raise ShapeMismatch(f"hom({x}, {y}) is not one-dimensional", witness=(x, y))
    basis = {k: v[0] for k, v in hom.items()}

    def coef(g, f, h):
        c = a.compose_basis(g, f).get(h)
        if c is None or c.is_zero():
            raise ShapeMismatch(f"zero structure constant {g} o {f}", witness=(g, f))
        return c

    o1 = objs[0]
    unit = a.identities[a.objects[0]]
    lam1 = unit[basis[(o1, o1)]]
    scale: dict = {}
    for x in objs:
        scale[(o1, x)] = lam1.inverse() if x == o1 else K.one()
    for x in objs:
        if x == o1:
            continue
        for y in objs:
            # basis(x -> y) o basis(o1 -> x) = q * basis(o1 -> y)
            q = coef(basis[(x, y)], basis[(o1, x)], basis[(o1, y)])
            scale[(x, y)] = q * scale[(o1, y)] / scale[(o1, x)]
    M = make_matrix_algebra(n, K)
    images = {}
    for (x, y), f in basis.items():
        # f: x -> y maps to a multiple of E_{y,x}
        images[f] = {unit_name(pos[y], pos[x]): scale[(x, y)]}
    return AlgebraMorphism(a, M, images)


# ---------------------------------------------------------------------------
# group algebras of finite abelian groups are diagonal


def character_table(G: FiniteAbelian, field: Field) -> list[tuple]:
    """Characters of G as exponent tuples k: chi_k(t_i) = q_i^{k_i}."""
    return list(itertools.product(*(range(n) for n in G.factors)))


def group_algebra_to_diagonal(G: FiniteAbelian, field: Field) -> AlgebraMorphism:
    """Isomorphism kG -> k^|G| sending t^a to sum_chi chi(t^a)^{-1} delta_chi.

    The idempotent e_chi = (1/|G|) sum_a chi(t^a) t^a maps to delta_chi; the
    idempotents are checked orthogonal and complete.
    """
    K = field
    n = G.order()
    if K.characteristic and n % K.characteristic == 0:
        raise BadCharacteristic(f"characteristic {K.characteristic} divides |G| = {n}")
    roots = [K.primitive_root(m) for m in G.factors]
    chars = character_table(G, K)
    elems = G.elements()
    kG = make_group_algebra(G, K)
    D = make_diagonal(n, K)

    def chi(k, a):
        val = K.one()
        for q, ki, ai in zip(roots, k, a):
            val = val * q ** (ki * ai)
        return val

    images = {
        G.format(a): {f"d{c + 1}": chi(k, a).inverse() for c, k in enumerate(chars)} for a in elems
    }
    phi = AlgebraMorphism(kG, D, images)
    inv_n = K(1) / K(n)
    idem = []
    for k in chars:
        idem.append({G.format(a): inv_n * chi(k, a) for a in elems if not chi(k, a).is_zero()})
    total: dict = {}
    for i, e in enumerate(idem):
        _axpy(total, K.one(), e)
        for j, f in enumerate(idem):
            prod = kG.compose_coords(e, f)
            if prod != (e if i == j else {}):
                raise ValueError("idempotents are not orthogonal")
        if phi.apply_coords(e) != {f"d{i + 1}": K.one()}:
            raise ValueError("idempotent does not map to a Dirac mass")
    if total != kG.identities["*"]:
        raise ValueError("idempotents are not complete")
    return phi


def product_algebra(parts: Sequence[LinearCategory], prefixes: Sequence[str], name: str) -> LinearCategory:
    """A_1 x ... x A_k, basis names prefixed per factor.  If every factor
    has a diagonal root, the result gets a frame to the concatenated
    diagonal algebra."""
    K = parts[0].field
    obj = "*"
    basis, compose, unit = {}, {}, {}
    for A, pre in zip(parts, prefixes):
        for f in A.names:
            basis[pre + f] = (obj, obj)
        for (g, f), prod in A.compose.items():
            compose[(pre + g, pre + f)] = {pre + h: c for h, c in prod.items()}
        for f, c in A.identities[A.objects[0]].items():
            unit[pre + f] = c
    frame = None
    roots = [A.root for A in parts]
    if all(r.name.startswith("k^") for r in roots):
        offset = 0
        total = sum(r.dim for r in roots)
        D = make_diagonal(total, K)
        coords = {}
        for A, pre in zip(parts, prefixes):
            for f in A.names:
                rc = A.root_coords({f: K.one()})
                coords[pre + f] = {f"d{int(h[1:]) + offset}": c for h, c in rc.items()}
            offset += A.root.dim
        frame = (D, coords)
    return LinearCategory(K, (obj,), basis, compose, {obj: unit}, name=name, frame=frame)
