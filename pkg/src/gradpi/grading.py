"""Gradings as degree labels on a homogeneous basis."""

from __future__ import annotations

import random
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .algebra import AlgebraElement, LinearCategory, is_invertible
from .groups import (
    DirectProduct,
    FiniteAbelian,
    Free,
    Group,
    GroupDiagram,
    GroupElement,
    Homomorphism,
    abelian_invariant_factors,
    generates,
    is_abelian,
    is_surjective,
)
from .scalars import rank


class NotSurjective(ValueError):
    pass


class BrokenChain(ValueError):
    pass


@dataclass(eq=False)
class Grading:
    """``degrees[f]`` is the raw group element carried by basis vector f."""

    category: LinearCategory
    group: Group
    degrees: dict
    name: str = ""

    def __post_init__(self):
        degs = {}
        for f, d in self.degrees.items():
            if isinstance(d, GroupElement):
                d = d.nf
            elif isinstance(d, str):
                d = self.group.parse(d)
            degs[f] = d
        missing = set(self.category.names) - set(degs)
        if missing:
            raise ValueError(f"basis vectors without degree: {sorted(missing)}")
        self.degrees = {f: degs[f] for f in self.category.names}

    def degree(self, f) -> GroupElement:
        return GroupElement(self.group, self.degrees[f])

    def components(self) -> dict:
        """degree -> list of basis names."""
        out: dict = {}
        for f, d in self.degrees.items():
            out.setdefault(d, []).append(f)
        return out

    def component_dims(self) -> dict:
        return {d: len(v) for d, v in self.components().items()}

    def trivial_dim(self) -> int:
        return self.component_dims().get(self.group.identity(), 0)

    def homogeneous_element(self, degree, coords: Optional[dict] = None) -> AlgebraElement:
        """An element of the component of ``degree`` (all coordinates 1 by
        default)."""
        K = self.category.field
        names = self.components().get(degree, [])
        coords = coords if coords is not None else {f: K.one() for f in names}
        return self.category.element(coords)

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "name": self.name,
            "category": self.category.to_json(),
            "group": self.group.to_json(),
            "degrees": {f: self.group.format(d) for f, d in self.degrees.items()},
        }

    @classmethod
    def from_json(cls, data) -> "Grading":
        from .groups import group_from_json

        cat = LinearCategory.from_json(data["category"])
        G = group_from_json(data["group"])
        return cls(cat, G, {f: G.parse(s) for f, s in data["degrees"].items()}, name=data.get("name", ""))


# ---------------------------------------------------------------------------
# the grading axiom


@dataclass
class GradingCertificate:
    ok: bool
    pairs_checked: int
    violation: Optional[tuple] = None  # (h, f, offending basis vector) or ("identity", x, f)

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {"ok": self.ok, "pairs_checked": self.pairs_checked, "violation": self.violation}


def verify_grading(g: Grading) -> GradingCertificate:
    """Check deg(h o f) = deg h * deg f on every composable basis pair and
    that identities are homogeneous of trivial degree."""
    C, G = g.category, g.group
    e = G.identity()
    for x, ident in C.identities.items():
        for f in ident:
            if g.degrees[f] != e:
                return GradingCertificate(False, 0, ("identity", str(x), f))
    pairs = 0
    for f in C.names:
        df = g.degrees[f]
        for h in C.morphisms_from(C.target(f)):
            pairs += 1
            want = G.mul(g.degrees[h], df)
            for v in C.compose_basis(h, f):
                if g.degrees[v] != want:
                    return GradingCertificate(False, pairs, (h, f, v))
    return GradingCertificate(True, pairs)


def support(g: Grading) -> set:
    return {GroupElement(g.group, d) for d in set(g.degrees.values())}


# ---------------------------------------------------------------------------
# walks


@dataclass
class Walk:
    steps: list  # (basis name, +1 / -1)

    def endpoints(self, C: LinearCategory) -> tuple:
        if not self.steps:
            raise BrokenChain("empty walk")
        cur = None
        start = None
        for f, eps in self.steps:
            s, t = C.basis[f]
            a, b = (s, t) if eps > 0 else (t, s)
            if cur is None:
                start = a
            elif cur != a:
                raise BrokenChain(f"step {f} starts at {a}, walk is at {cur}")
            cur = b
        return start, cur


def walk_degree(g: Grading, w: Walk) -> GroupElement:
    """(deg f_n)^{e_n} ... (deg f_1)^{e_1}."""
    w.endpoints(g.category)
    G = g.group
    acc = G.identity()
    for f, eps in w.steps:
        acc = G.mul(G.power(g.degrees[f], eps), acc)
    return GroupElement(G, acc)


# ---------------------------------------------------------------------------
# connectedness


def closed_walk_degrees(g: Grading, base=None, max_length: Optional[int] = None) -> tuple[set, bool]:
    """Degrees of closed walks at ``base`` found by breadth-first search over
    (object, degree) states.  Returns (degrees, exhaustive?)."""
    C, G = g.category, g.group
    base = C.objects[0] if base is None else base
    steps: dict = {x: [] for x in C.objects}
    for f, (s, t) in C.basis.items():
        d = g.degrees[f]
        steps[s].append((t, d))
        steps[t].append((s, G.inv(d)))
    start = (base, G.identity())
    seen = {start: 0}
    queue = deque([start])
    exhaustive = True
    found = set()
    while queue:
        x, d = queue.popleft()
        if x == base:
            found.add(d)
        depth = seen[(x, d)]
        if max_length is not None and depth >= max_length:
            exhaustive = False
            continue
        for y, s in steps[x]:
            st = (y, G.mul(s, d))
            if st not in seen:
                seen[st] = depth + 1
                queue.append(st)
    return found, exhaustive


def is_connected_walks(C: LinearCategory) -> bool:
    parent = {x: x for x in C.objects}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for f, (s, t) in C.basis.items():
        parent[find(s)] = find(t)
    return len({find(x) for x in C.objects}) <= 1


def is_connected(g: Grading, bound: Optional[int] = None) -> Optional[bool]:
    """True, False, or None (unknown).

    One object: the support generates the group.  Several objects: the
    category is walk-connected and the degrees of closed walks at the first
    object generate the group (bounded search for infinite groups).
    """
    C, G = g.category, g.group
    if C.is_algebra:
        return generates(G, [d for d in set(g.degrees.values())])
    if not is_connected_walks(C):
        return False
    if G.is_finite:
        degs, _ = closed_walk_degrees(g)
        return generates(G, degs)
    if bound is None:
        orders = [G.element_order(x, bound=64) or 6 for x in G.gens()] or [6]
        bound = 2 * len(C.objects) * max(orders)
    degs, exhaustive = closed_walk_degrees(g, max_length=bound)
    ans = generates(G, degs)
    if ans is True:
        return True
    return ans if exhaustive else None


def walk_search_connected(g: Grading, max_length: int = 6) -> bool:
    """Oracle for one-object gradings: products of support elements and
    their inverses up to ``max_length`` factors cover the (finite) group."""
    G = g.group
    supp = list(set(g.degrees.values()))
    letters = supp + [G.inv(s) for s in supp]
    reached = {G.identity()}
    layer = {G.identity()}
    for _ in range(max_length):
        layer = {G.mul(s, x) for x in layer for s in letters} - reached
        reached |= layer
    return len(reached) == G.order()


# ---------------------------------------------------------------------------
# quotients


def quotient_grading(g: Grading, phi: Homomorphism) -> Grading:
    if phi.source != g.group:
        raise ValueError("homomorphism source is not the grading group")
    if is_surjective(phi) is False:
        raise NotSurjective(f"{phi.source.name()} -> {phi.target.name()} is not onto")
    degs = {f: phi.apply(d) for f, d in g.degrees.items()}
    return Grading(g.category, phi.target, degs, name=f"{g.name}/{phi.target.name()}")


def _component_rows(g: Grading, names) -> list:
    C = g.category
    root = C.root
    K = C.field
    rows = []
    for f in names:
        rc = C.root_coords({f: K.one()})
        rows.append([rc.get(h, K.zero()) for h in root.names])
    return rows


def same_components(g1: Grading, g2: Grading) -> bool:
    """Degree maps agree up to change of homogeneous basis: for each degree,
    the two components span the same subspace of the common root algebra."""
    if g1.group != g2.group:
        return False
    if g1.category is g2.category:
        return g1.degrees == g2.degrees
    if g1.category.root.names != g2.category.root.names:
        return False
    c1, c2 = g1.components(), g2.components()
    for d in set(c1) | set(c2):
        a = _component_rows(g1, c1.get(d, []))
        b = _component_rows(g2, c2.get(d, []))
        if len(a) != len(b):
            return False
        if a and rank(a + b) != rank(a):
            return False
    return True


def check_quotient_arrow(source: Grading, target: Grading, phi: Homomorphism) -> bool:
    if phi.target != target.group:
        return False
    return same_components(quotient_grading(source, phi), target)


# ---------------------------------------------------------------------------
# invariants


def has_invertible_nontrivial_homogeneous(g: Grading, seed: int = 0, trials: int = 8) -> bool:
    """Some homogeneous element of nontrivial degree is invertible.

    Tests basis vectors, the all-ones combination of each component, then a
    few random integer combinations.
    """
    C = g.category
    if not C.is_algebra:
        raise ValueError("one-object gradings only")
    K = C.field
    rng = random.Random(seed)
    e = g.group.identity()
    for d, names in g.components().items():
        if d == e:
            continue
        for f in names:
            if is_invertible(C.basis_element(f)):
                return True
        if len(names) > 1:
            if is_invertible(C.element({f: K.one() for f in names})):
                return True
            for _ in range(trials):
                coords = {f: K(rng.randint(-5, 5)) for f in names}
                if any(not c.is_zero() for c in coords.values()) and is_invertible(C.element(coords)):
                    return True
    return False


def group_class(G: Group) -> str:
    if G.is_finite:
        if is_abelian(G):
            factors = abelian_invariant_factors(G)
            return "abelian" + str(factors)
        from .groups import finite_invariants

        return "finite" + str(finite_invariants(G))
    return G.name()


@dataclass
class DistinctionReport:
    first_difference: Optional[str]
    values: dict = field(default_factory=dict)

    @property
    def distinguished(self) -> bool:
        return self.first_difference is not None

    def __str__(self):
        if self.first_difference is None:
            return "indistinguishable by these invariants"
        a, b = self.values[self.first_difference]
        return f"{self.first_difference}: {a} vs {b}"


def distinguish(g1: Grading, g2: Grading) -> DistinctionReport:
    checks = [
        ("trivial_component_dim", lambda g: g.trivial_dim()),
        ("component_dims", lambda g: tuple(sorted(g.component_dims().values()))),
        ("invertible_nontrivial_homogeneous", has_invertible_nontrivial_homogeneous),
        ("group_class", lambda g: group_class(g.group)),
    ]
    values = {}
    for name, inv in checks:
        a, b = inv(g1), inv(g2)
        values[name] = (a, b)
        if a != b:
            return DistinctionReport(name, values)
    return DistinctionReport(None, values)


# ---------------------------------------------------------------------------
# diagrams of gradings


@dataclass(eq=False)
class GradingDiagram:
    nodes: list
    arrows: list  # (i, j, Homomorphism)
    tag: str = ""

    def validate(self):
        for i, j, phi in self.arrows:
            if is_surjective(phi) is False:
                raise NotSurjective(f"arrow {i}->{j} is not surjective")
            if not check_quotient_arrow(self.nodes[i], self.nodes[j], phi):
                raise ValueError(f"arrow {i}->{j} is not a quotient of gradings")
        return True

    def group_diagram(self) -> GroupDiagram:
        return GroupDiagram(tuple(g.group for g in self.nodes), tuple(self.arrows))

    def summary(self) -> dict:
        return {
            "tag": self.tag,
            "nodes": [{"name": g.name, "group": g.group.name()} for g in self.nodes],
            "arrows": [
                {"source": i, "target": j, "images": [phi.target.format(x) for x in phi.images]}
                for i, j, phi in self.arrows
            ],
        }
