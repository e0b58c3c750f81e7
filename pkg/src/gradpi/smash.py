"""Smash products B#G of graded categories and their covering functors.

Objects are pairs (b, g).  The hom space from (b, g) to (c, h) is the
component of hom(b, c) of degree h^-1 g, so a basis morphism f of degree s
starting at (b, g) ends at (c, g s^-1).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .algebra import LinearCategory, ShapeMismatch, make_matrix_algebra, unit_name
from .grading import Grading, is_connected, is_connected_walks
from .groups import Free, Group, GroupElement


class InfiniteWithoutRadius(ValueError):
    pass


class StarMismatch(AssertionError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotConnected(ValueError):
    pass


class ActionFailure(AssertionError):
    pass


class MismatchBug(AssertionError):
    pass


class CheckFailure(AssertionError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(eq=False)
class SmashCategory:
    base: Grading
    radius: Optional[int]  # None: the whole (finite) group
    elements: list  # raw group elements, breadth-first order
    realization: LinearCategory
    cover: dict  # smash basis name -> (base basis name, group element)

    @property
    def group(self) -> Group:
        return self.base.group

    @property
    def objects(self) -> tuple:
        return self.realization.objects

    def obj(self, b, g):
        return (b, g)

    def label(self, o) -> str:
        b, g = o
        return f"({b}, {self.group.format(g)})"

    def neighbours(self, o) -> set:
        """Objects joined to ``o`` by a basis morphism of the full smash."""
        C, G = self.base.category, self.group
        b, g = o
        out = set()
        for f in C.morphisms_from(b):
            out.add((C.target(f), G.mul(g, G.inv(self.base.degrees[f]))))
        for f in C.morphisms_into(b):
            out.add((C.source(f), G.mul(g, self.base.degrees[f])))
        return out

    def interior(self) -> list:
        present = set(self.objects)
        return [o for o in self.objects if self.neighbours(o) <= present]

    def boundary(self) -> list:
        inner = set(self.interior())
        return [o for o in self.objects if o not in inner]


def _morphism_name(f: str, G: Group, g) -> str:
    return f"{f}@{G.format(g)}"


def smash_product(g: Grading, radius: Optional[int] = None, check: bool = True) -> SmashCategory:
    G = g.group
    C = g.category
    if radius is None:
        if not G.is_finite:
            raise InfiniteWithoutRadius(f"{G.name()} is infinite; pass a radius")
        elems = G.ball(10**9)
    else:
        elems = G.ball(radius)
    elems = sorted(elems, key=lambda x: (G.length(x), G.format(x))) if radius is not None else elems
    present = set(elems)
    objects = [(b, x) for b in C.objects for x in elems]
    basis, cover = {}, {}
    for b, x in objects:
        for f in C.morphisms_from(b):
            y = G.mul(x, G.inv(g.degrees[f]))
            if y in present:
                name = _morphism_name(f, G, x)
                basis[name] = ((b, x), (C.target(f), y))
                cover[name] = (f, x)
    compose = {}
    for fname, (src, mid) in basis.items():
        f, x = cover[fname]
        y = mid[1]
        for h in C.morphisms_from(mid[0]):
            hname = _morphism_name(h, G, y)
            if hname not in basis:
                continue
            prod = C.compose_basis(h, f)
            if prod:
                compose[(hname, fname)] = {_morphism_name(v, G, x): c for v, c in prod.items()}
    identities = {
        (b, x): {_morphism_name(f, G, x): c for f, c in C.identities[b].items()} for b, x in objects
    }
    real = LinearCategory(C.field, tuple(objects), basis, compose, identities, name=f"{C.name}#{G.name()}", check=check)
    return SmashCategory(g, radius, list(elems), real, cover)


# ---------------------------------------------------------------------------
# coverings


@dataclass
class CoveringReport:
    checked: list
    boundary: list
    stars: dict  # object label -> (out dim, in dim, base out dim, base in dim)
    galois: Optional[bool] = None
    action: dict = field(default_factory=dict)
    note: str = ""

    def to_json(self) -> dict:
        return {
            "checked": self.checked,
            "boundary": self.boundary,
            "stars": {k: list(v) for k, v in self.stars.items()},
            "galois": self.galois,
            "action": self.action,
            "note": self.note,
        }


def verify_covering(s: SmashCategory) -> CoveringReport:
    """At each interior object the covering functor maps the outgoing and
    the incoming parts of the star bijectively onto those of the base
    object."""
    R = s.realization
    C = s.base.category
    stars = {}
    checked = []
    for o in s.interior():
        b = o[0]
        out_m = R.morphisms_from(o)
        in_m = R.morphisms_into(o)
        # the covering sends f@g to f; distinct morphisms at one object have
        # distinct base morphisms, so the map is injective on the basis
        if len({s.cover[m][0] for m in out_m}) != len(out_m) or len({s.cover[m][0] for m in in_m}) != len(in_m):
            raise StarMismatch(f"covering is not injective at {s.label(o)}", witness=s.label(o))
        dims = (len(out_m), len(in_m), len(C.morphisms_from(b)), len(C.morphisms_into(b)))
        if dims[0] != dims[2] or dims[1] != dims[3]:
            raise StarMismatch(f"star of {s.label(o)} has dims {dims[:2]}, base {dims[2:]}", witness=s.label(o))
        stars[s.label(o)] = dims
        checked.append(s.label(o))
    note = "full" if s.radius is None else f"interior-certified at radius {s.radius}"
    return CoveringReport(checked, [s.label(o) for o in s.boundary()], stars, note=note)


def is_connected_category(c) -> bool:
    if isinstance(c, SmashCategory):
        c = c.realization
    return is_connected_walks(c)


def verify_galois(s: SmashCategory) -> bool:
    """Left translation by the group: free on objects, compatible with homs
    and the covering, transitive on fibres; the smash must be connected."""
    G = s.group
    if s.radius is not None or not G.is_finite:
        raise ValueError("Galois verification needs a full smash of a finite group")
    R = s.realization
    if not is_connected_category(R):
        raise NotConnected(f"{R.name} is not connected")
    C = s.base.category
    elems = s.elements
    objs = set(R.objects)
    for u in elems:
        if u == G.identity():
            continue
        for b, g in R.objects:
            if (b, G.mul(u, g)) == (b, g):
                raise ActionFailure("action is not free")
    for u in elems:
        for name, (src, tgt) in R.basis.items():
            f, g = s.cover[name]
            moved = _morphism_name(f, G, G.mul(u, g))
            if moved not in R.basis:
                raise ActionFailure(f"{name} has no translate by {G.format(u)}")
            ms, mt = R.basis[moved]
            if ms != (src[0], G.mul(u, src[1])) or mt != (tgt[0], G.mul(u, tgt[1])):
                raise ActionFailure(f"translate of {name} has wrong endpoints")
            if s.cover[moved][0] != f:
                raise ActionFailure("action does not commute with the covering")
    for b in C.objects:
        orbit = {(b, G.mul(u, G.identity())) for u in elems}
        fibre = {o for o in objs if o[0] == b}
        if orbit != fibre:
            raise ActionFailure(f"action is not transitive on the fibre over {b}")
    return True


def check_smash_connectedness_equivalence(g: Grading) -> bool:
    if not g.group.is_finite:
        raise ValueError("finite groups only")
    a = is_connected(g)
    b = is_connected_category(smash_product(g, check=False))
    if bool(a) != b:
        raise MismatchBug(f"grading connected={a} but smash connected={b}")
    return b


# ---------------------------------------------------------------------------
# simple-connectedness certificates


@dataclass
class SchurianCertificate:
    objects: int
    compositions_checked: int

    def to_json(self) -> dict:
        return {"kind": "one-dimensional homs, nonzero compositions", **self.__dict__}


def certify_schurian_simply_connected(c) -> SchurianCertificate:
    """Every hom space is one-dimensional and every composition of basis
    morphisms is nonzero; such a category has only trivial connected
    gradings."""
    if isinstance(c, SmashCategory):
        c = c.realization
    for x in c.objects:
        for y in c.objects:
            d = len(c.hom(x, y))
            if d != 1:
                raise ShapeMismatch(f"hom({x}, {y}) has dimension {d}", witness=(str(x), str(y), d))
    count = 0
    for f in c.names:
        for g in c.morphisms_from(c.target(f)):
            count += 1
            if not c.compose_basis(g, f):
                raise ShapeMismatch(f"{g} o {f} = 0", witness=(g, f))
    return SchurianCertificate(len(c.objects), count)


@dataclass
class RigidityCertificate:
    algebra: str
    radius: int
    interior_objects: int
    closed_walks: int
    max_walk_length: int
    vacuous: bool

    def to_json(self) -> dict:
        out = dict(self.__dict__)
        out["kind"] = "generated by adjacent morphisms, radius-limited"
        return out


def _free_reduce(word: list) -> list:
    out: list = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return out


def _check_idempotent_ends(s: SmashCategory):
    """Endomorphism spaces are spanned by orthogonal idempotents; other homs
    have dimension at most one."""
    R = s.realization
    one = R.field.one()
    for o in R.objects:
        for e in R.hom(o, o):
            for f in R.hom(o, o):
                want = {e: one} if e == f else {}
                if R.compose_basis(e, f) != want:
                    raise CheckFailure(f"End{s.label(o)} is not spanned by orthogonal idempotents", witness=(e, f))
    for x in R.objects:
        for y in R.objects:
            if x != y and len(R.hom(x, y)) > 1:
                raise CheckFailure(f"hom({s.label(x)}, {s.label(y)}) is not at most one-dimensional")


def _closed_walks_reduce(s: SmashCategory, word_of, bound: int) -> tuple[int, int]:
    """Every closed walk at the base object, inside the ball of radius R - 1,
    has a degree word that freely reduces to nothing.

    Words are in path order (first step first).  Rather than enumerating
    walks, each reachable object gets a potential (the reduced word of a
    spanning-tree path) and every edge is checked against it; this settles
    walks of every length at once.  Closed walks of length at most
    ``bound`` are counted for the report.
    Returns (region size, closed walks counted).
    """
    R = s.realization
    G = s.group
    limit = (s.radius if s.radius is not None else 10**9) - 1
    region = {o for o in R.objects if G.length(o[1]) <= limit}
    start = (s.base.category.objects[0], G.identity())
    if start not in region:
        return 0, 0
    adj: dict = {o: [] for o in region}
    for name, (src, tgt) in R.basis.items():
        if src == tgt or src not in region or tgt not in region:
            continue
        w = word_of(name)
        adj[src].append((tgt, w, name, 1))
        adj[tgt].append((src, [-a for a in reversed(w)], name, -1))
    potential = {start: []}
    path_to = {start: []}
    queue = [start]
    while queue:
        o = queue.pop(0)
        for tgt, w, name, eps in adj[o]:
            cand = _free_reduce(potential[o] + w)
            if tgt not in potential:
                potential[tgt] = cand
                path_to[tgt] = path_to[o] + [(name, eps)]
                queue.append(tgt)
            elif cand != potential[tgt]:
                raise CheckFailure(
                    "closed walk with nontrivial degree word",
                    witness=path_to[o] + [(name, eps)] + [(n, -e) for n, e in reversed(path_to[tgt])],
                )
    # count closed walks at start of length 1..bound
    counts = {start: 1}
    closed = 0
    for _ in range(bound):
        nxt: dict = {}
        for o, c in counts.items():
            for tgt, _, _, _ in adj[o]:
                nxt[tgt] = nxt.get(tgt, 0) + c
        counts = nxt
        closed += counts.get(start, 0)
    return len(region), closed


def certify_free_smash_rigidity(n: int, radius: int, max_walk_length: Optional[int] = None) -> RigidityCertificate:
    """Bounded check of the idempotent-rigidity argument on M_n # F_{n-1}.

    Endomorphisms are spanned by idempotents, so they carry trivial degree.
    Each morphism between distinct objects is a nonzero composite of
    adjacent units E_{i+1,i} or their partners E_{i,i+1}; a partner composes
    with its unit to an idempotent, so its degree is the inverse.  Closed
    walks in the interior must then reduce to the empty word in the free
    group on the adjacent units, which forces degree 1 under any grading.
    """
    from .catalog import good_grading_from_map
    from .scalars import Field

    if n < 2:
        raise ValueError("n >= 2")
    F = Free(n - 1)
    g = good_grading_from_map("matrix", n, F.gens(), Field.rational(), group=F)
    s = smash_product(g, radius)
    R = s.realization
    G = s.group
    _check_idempotent_ends(s)

    def unit(name):
        j, i = name[1:].split(",")
        return int(j), int(i)

    atoms: dict = {}
    for name in R.names:
        j, i = unit(s.cover[name][0])
        if j == i + 1:
            atoms[name] = len(atoms) + 1

    words: dict = {}

    def word_of(name):
        if name in words:
            return words[name]
        f, x = s.cover[name]
        j, i = unit(f)
        if i == j:
            w: list = []
        elif j == i + 1:
            w = [atoms[name]]
        elif i == j + 1:
            # partner of the adjacent unit that starts at our target
            tgt = R.target(name)
            partner = _morphism_name(unit_name(i, j), G, tgt[1])
            if partner not in R.basis or not R.compose_basis(name, partner):
                raise CheckFailure(f"{name} has no partner with nonzero composite", witness=name)
            w = [-atoms[partner]]
        else:
            # E_ji = E_jk E_ki with k the neighbour of i towards j
            k = i + 1 if j > i else i - 1
            first = _morphism_name(unit_name(k, i), G, x)
            if first not in R.basis:
                raise CheckFailure(f"factor of {name} is not materialized", witness=name)
            rest = _morphism_name(unit_name(j, k), G, R.target(first)[1])
            if rest not in R.basis or not R.compose_basis(rest, first).get(name):
                raise CheckFailure(f"{name} is not a nonzero composite", witness=name)
            w = _free_reduce(word_of(first) + word_of(rest))
        words[name] = w
        return w

    bound = 2 * radius if max_walk_length is None else max_walk_length
    inner, closed = _closed_walks_reduce(s, word_of, bound)
    return RigidityCertificate(f"M{n}", radius, inner, closed, bound, closed == 0)


def certify_truncated_rigidity(p: int, radius: int, max_walk_length: Optional[int] = None) -> RigidityCertificate:
    """Bounded check on k[x]/(x^p) # Z: every morphism x^k at an object is a
    nonzero composite of k adjacent morphisms x, so closed walks reduce."""
    from .catalog import truncated_Z_grading
    from .scalars import Field

    g = truncated_Z_grading(p, Field.prime(p))
    s = smash_product(g, radius)
    R = s.realization
    G = s.group
    _check_idempotent_ends(s)
    atoms = {name: k + 1 for k, name in enumerate(n for n in R.names if s.cover[n][0] == "x")}
    words: dict = {}

    def word_of(name):
        if name in words:
            return words[name]
        f, x = s.cover[name]
        if f == "1":
            w: list = []
        elif f == "x":
            w = [atoms[name]]
        else:
            k = int(f[2:])
            first = _morphism_name("x", G, x)
            rest = _morphism_name("x" if k == 2 else f"x^{k - 1}", G, R.target(first)[1])
            if first not in R.basis or rest not in R.basis or not R.compose_basis(rest, first).get(name):
                raise CheckFailure(f"{name} is not a nonzero composite", witness=name)
            w = word_of(first) + word_of(rest)
        words[name] = w
        return w

    bound = 2 * radius if max_walk_length is None else max_walk_length
    inner, closed = _closed_walks_reduce(s, word_of, bound)
    return RigidityCertificate(f"k[x]/(x^{p})", radius, inner, closed, bound, closed == 0)
