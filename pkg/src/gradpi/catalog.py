"""Named gradings, grading diagrams and the classification tables.

Which gradings exist (and which quotient arrows exhaust the common
quotients) is curated data; everything emitted here is machine-checked for
validity, connectedness and arrow correctness.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .algebra import (
    LinearCategory,
    _one_object,
    group_algebra_to_diagonal,
    make_group_algebra,
    make_matrix_algebra,
    make_matrix_xy,
    make_triangular,
    make_truncated_poly,
    power_name,
    unit_name,
    xy_name,
)
from .grading import (
    Grading,
    GradingDiagram,
    is_connected,
    quotient_grading,
    same_components,
    verify_grading,
)
from .groups import (
    TRIVIAL,
    FiniteAbelian,
    Free,
    FreeProductCyclic,
    Group,
    GroupElement,
    Homomorphism,
    all_subgroups,
    cyclic,
    quotient_by,
)
from .scalars import BadCharacteristic, Field, is_prime, parse_field, rank


class UnknownTag(ValueError):
    pass


class CertificateFailure(AssertionError):
    pass


# ---------------------------------------------------------------------------
# matrix algebras


def fine_matrix_grading(n: int, field: Field) -> Grading:
    """C_n x C_n grading of M_n on the basis x^i y^j, deg x^i y^j = (t^i, t^j)."""
    cat = make_matrix_xy(n, field)
    G = FiniteAbelian((n, n))
    degs = {xy_name(i, j): (i, j) for i in range(n) for j in range(n)}
    return Grading(cat, G, degs, name=f"fine M{n}")


def _infer_group(m: Sequence) -> Group:
    for x in m:
        if isinstance(x, GroupElement):
            return x.group
    raise ValueError("pass group= when images are raw normal forms")


def good_grading_from_map(kind: str, n: int, m: Sequence, field: Field, group: Optional[Group] = None) -> Grading:
    """Matrix units homogeneous with deg E_{i+1,i} = m(i).

    ``m`` lists images for i = 1..n-1 (GroupElements, strings or raw forms
    of ``group``).  For the matrix kind deg E_{i,i+1} = m(i)^-1.
    """
    G = group if group is not None else _infer_group(m)
    imgs = [x.nf if isinstance(x, GroupElement) else G.parse(x) if isinstance(x, str) else x for x in m]
    if len(imgs) != n - 1:
        raise ValueError(f"need {n - 1} images")
    if kind == "matrix":
        cat = make_matrix_algebra(n, field)
    elif kind == "triangular":
        cat = make_triangular(n, field)
    else:
        raise ValueError(f"unknown kind {kind}")
    degs = {}
    for f in cat.names:
        j, i = (int(v) for v in f[1:].split(","))
        d = G.identity()
        for k in range(min(i, j), max(i, j)):
            d = G.mul(imgs[k - 1], d)  # E_{k+1,k} ... E_{i+1,i}
        degs[f] = d if j >= i else G.inv(d)
    label = "free" if isinstance(G, Free) else G.name()
    return Grading(cat, G, degs, name=f"good {cat.name} by {label}")


# ---------------------------------------------------------------------------
# group algebras, truncated polynomials, diagonal algebras


def group_algebra_grading(G: Group, field: Field) -> Grading:
    cat = make_group_algebra(G, field)
    return Grading(cat, G, {G.format(g): g for g in G.elements()}, name=f"k{G.name()} natural")


def _require_char(p: int, field: Field):
    if field.characteristic != p:
        raise BadCharacteristic(f"k[x]/(x^{p}) gradings need characteristic {p}, got {field}")


def truncated_Z_grading(p: int, field: Field) -> Grading:
    """deg x^i = s^i over the free group of rank one."""
    _require_char(p, field)
    cat = make_truncated_poly(p, field)
    F = Free(1)
    return Grading(cat, F, {power_name(i): (1,) * i for i in range(p)}, name=f"k[x]/(x^{p}) by Z")


def truncated_group_grading(p: int, field: Field) -> Grading:
    """Natural C_p grading carried over by t -> 1 + x (so (1+x)^p = 1)."""
    _require_char(p, field)
    G = cyclic(p)
    kG = make_group_algebra(G, field)
    root = make_truncated_poly(p, field)
    coords = {}
    power = root.one()
    for a in range(p):
        coords[G.format((a,))] = dict(power.coords)
        power = (root.one() + root["x"]) * power
    cat = LinearCategory(
        field, kG.objects, kG.basis, kG.compose, kG.identities, name=f"k[x]/(x^{p}) as kC{p}", frame=(root, coords), check=False
    )
    cat.verify_frame()
    return Grading(cat, G, {G.format(g): g for g in G.elements()}, name=f"k[x]/(x^{p}) by C{p}")


def ergodic_diagonal_grading(G: FiniteAbelian, field: Field) -> Grading:
    """The natural grading of kG carried to k^|G| by the idempotent basis."""
    phi = group_algebra_to_diagonal(G, field)
    kG = phi.source
    cat = LinearCategory(
        field, kG.objects, kG.basis, kG.compose, kG.identities, name=f"k^{G.order()} ergodic {G.name()}",
        frame=(phi.target, phi.images), check=False,
    )
    return Grading(cat, G, {G.format(g): g for g in G.elements()}, name=f"ergodic {G.name()}")


def _cyclic_order(G: Group) -> Optional[int]:
    """Order of a cyclic group (None for Z); raise for non-cyclic groups."""
    if isinstance(G, FiniteAbelian) and len(G.factors) == 1:
        return G.factors[0]
    if isinstance(G, Free) and G.rank == 1:
        return None
    raise ValueError(f"free products are supported for cyclic factors only, got {G.name()}")


def free_product_grading(parts: Sequence[Grading], positions: Optional[Sequence[Sequence[int]]] = None) -> Grading:
    """Grading of A_1 x ... x A_k by the free product of the groups.

    Basis vector f of block i gets the image of its degree under the
    inclusion of the i-th group; trivially graded blocks contribute only to
    the trivial component.  ``positions`` places block i's Dirac masses at
    the given coordinates of the product diagonal algebra.
    """
    K = parts[0].category.field
    prefixes = [f"b{i + 1}." for i in range(len(parts))]
    live = [i for i, g in enumerate(parts) if not g.group.is_trivial]
    if not live:
        G: Group = TRIVIAL
        embed = lambda i, d: G.identity()  # noqa: E731
    elif len(live) == 1:
        G = parts[live[0]].group
        embed = lambda i, d: d if i == live[0] else G.identity()  # noqa: E731
    else:
        orders = [_cyclic_order(parts[i].group) for i in live]
        G = FreeProductCyclic(tuple(orders))
        slot = {i: k for k, i in enumerate(live)}

        def embed(i, d):
            if i not in slot or parts[i].group.is_identity(d):
                return G.identity()
            e = d[0] if isinstance(parts[i].group, FiniteAbelian) else len(d) * (1 if d[0] > 0 else -1)
            return ((slot[i], e),)

    obj = "*"
    basis, compose, unit, degs = {}, {}, {}, {}
    for i, (g, pre) in enumerate(zip(parts, prefixes)):
        A = g.category
        for f in A.names:
            basis[pre + f] = (obj, obj)
            degs[pre + f] = embed(i, g.degrees[f])
        for (h, f), prod in A.compose.items():
            compose[(pre + h, pre + f)] = {pre + v: c for v, c in prod.items()}
        for f, c in A.identities[A.objects[0]].items():
            unit[pre + f] = c
    frame = None
    roots = [g.category.root for g in parts]
    if all(r.name.startswith("k^") for r in roots):
        from .algebra import make_diagonal

        total = sum(r.dim for r in roots)
        if positions is None:
            positions, k = [], 1
            for r in roots:
                positions.append(list(range(k, k + r.dim)))
                k += r.dim
        D = make_diagonal(total, K)
        coords = {}
        for g, pre, pos in zip(parts, prefixes, positions):
            A = g.category
            for f in A.names:
                rc = A.root_coords({f: K.one()})
                coords[pre + f] = {f"d{pos[int(h[1:]) - 1]}": c for h, c in rc.items()}
        frame = (D, coords)
    cat = LinearCategory(K, (obj,), basis, compose, {obj: unit}, name=" x ".join(g.category.name for g in parts), frame=frame)
    return Grading(cat, G, degs, name=" * ".join(g.name for g in parts))


def specific_diagonal_grading(partition: Sequence[Sequence[int]], groups: Sequence[FiniteAbelian], field: Field) -> Grading:
    """Free product of ergodic gradings over the blocks of a partition of
    {1..n}; block i is graded by groups[i] (|groups[i]| = |block i|)."""
    blocks = [sorted(b) for b in partition]
    n = sum(len(b) for b in blocks)
    if sorted(x for b in blocks for x in b) != list(range(1, n + 1)):
        raise ValueError("not a partition of 1..n")
    parts = []
    for b, G in zip(blocks, groups):
        if G.order() != len(b):
            raise ValueError(f"block {b} needs a group of order {len(b)}")
        parts.append(ergodic_diagonal_grading(G, field))
    g = free_product_grading(parts, positions=blocks)
    g.name = "specific " + " ".join("{" + ",".join(map(str, b)) + "}" for b in blocks) + f" by {g.group.name()}"
    return g


def trivial_grading(cat: LinearCategory, G: Group = TRIVIAL) -> Grading:
    return Grading(cat, G, {f: G.identity() for f in cat.names}, name=f"trivial {cat.name}")


# ---------------------------------------------------------------------------
# k^4 table


K4_ROWS = [
    ("1", [[1], [2], [3], [4]], [1, 1, 1, 1]),
    ("C2*C2", [[1, 2], [3, 4]], [2, 2]),
    ("C3", [[1, 2, 3], [4]], [3, 1]),
    ("C2", [[1, 2], [3], [4]], [2, 1, 1]),
    ("C4", [[1, 2, 3, 4]], [4]),
    ("C2 x C2", [[1, 2, 3, 4]], [(2, 2)]),
]


def _block_group(factors) -> FiniteAbelian:
    return FiniteAbelian(factors) if isinstance(factors, tuple) else cyclic(factors)


def k4_gradings(field: Field) -> list[Grading]:
    return [
        specific_diagonal_grading(blocks, [_block_group(s) for s in groups], field)
        for _, blocks, groups in K4_ROWS
    ]


@dataclass
class TableRow:
    group: str
    trivial_dim: int
    other_dims: tuple

    def as_list(self) -> list:
        return [self.group, self.trivial_dim, ",".join(map(str, self.other_dims)) or "0"]


def k4_table_report(field: Optional[Field] = None) -> list[TableRow]:
    """Group, trivial component dimension and other component dimensions
    for each specific grading type of k^4."""
    field = field or Field.cyclotomic(12)
    rows = []
    for (label, _, _), g in zip(K4_ROWS, k4_gradings(field)):
        if not verify_grading(g) or is_connected(g) is not True:
            raise CertificateFailure(f"{g.name} is not a connected grading")
        dims = g.component_dims()
        triv = dims.pop(g.group.identity(), 0)
        rows.append(TableRow(label, triv, tuple(sorted(dims.values()))))
    return rows


# ---------------------------------------------------------------------------
# common quotient of the fine and good gradings of M_n


def _homogeneous_units(g: Grading) -> bool:
    """Every matrix unit of the root lies in a single component."""
    C = g.category
    K = C.field
    root = C.root
    comps = []
    for d, names in g.components().items():
        rows = []
        for f in names:
            rc = C.root_coords({f: K.one()})
            rows.append([rc.get(h, K.zero()) for h in root.names])
        comps.append((rows, rank(rows)))
    for h in root.names:
        e = [K.one() if x == h else K.zero() for x in root.names]
        if not any(rank(rows + [e]) == r for rows, r in comps):
            return False
    return True


@dataclass
class CommonQuotientCertificate:
    n: int
    good_subgroups: list
    minimal: str

    def to_json(self) -> dict:
        return dict(self.__dict__)


def first_coordinate_map(n: int) -> Homomorphism:
    G = FiniteAbelian((n, n))
    return Homomorphism(G, cyclic(n), ((1,), (0,)))


def quotient_is_good(fine: Grading, N) -> bool:
    q = quotient_by(fine.group, N)
    return _homogeneous_units(quotient_grading(fine, q))


def verify_common_quotient(n: int, field: Field) -> CommonQuotientCertificate:
    fine = fine_matrix_grading(n, field)
    G = fine.group
    proj = first_coordinate_map(n)
    q = quotient_grading(fine, proj)
    if not _homogeneous_units(q):
        raise CertificateFailure("quotient by 1 x C_n is not good")
    Cn = cyclic(n)
    good = good_grading_from_map("matrix", n, [(1,)] * (n - 1), field, group=Cn)
    if not same_components(q, good):
        raise CertificateFailure("quotient differs from the good grading with m(i) = t")
    F = Free(n - 1)
    free = good_grading_from_map("matrix", n, F.gens(), field, group=F)
    from_free = quotient_grading(free, Homomorphism(F, Cn, tuple((1,) for _ in range(n - 1))))
    if not same_components(from_free, q):
        raise CertificateFailure("free good grading does not have the same quotient")
    N = frozenset((0, b) for b in range(n))
    good_subs = [S for S in all_subgroups(G) if quotient_is_good(fine, S)]
    if N not in good_subs or not all(N <= S for S in good_subs):
        raise CertificateFailure("1 x C_n is not the minimal good quotient subgroup")
    fmt = lambda S: "{" + ", ".join(sorted(G.format(x) for x in S)) + "}"  # noqa: E731
    return CommonQuotientCertificate(n, [fmt(S) for S in good_subs], fmt(N))


# ---------------------------------------------------------------------------
# tags and diagrams


def parse_tag(tag: str) -> tuple[str, int]:
    """Normalize a tag to (family, parameter)."""
    t = tag.strip()
    fixed = {"k2": ("k", 2), "k3": ("k", 3), "k4": ("k", 4), "M2": ("M", 2), "M3": ("M", 3)}
    if t in fixed:
        return fixed[t]
    if ":" in t:
        fam, _, arg = t.partition(":")
        if not arg.isdigit():
            raise UnknownTag(tag)
        n = int(arg)
        if fam in ("Mp", "Mn") and is_prime(n):
            return ("M", n)
        if fam == "Tn" and n >= 1:
            return ("T", n)
        if fam == "trunc" and is_prime(n):
            return ("trunc", n)
        if fam == "kn" and 1 <= n <= 4:
            return ("k", n)
    if len(t) >= 2 and t[0] in "MT" and t[1:].isdigit():
        n = int(t[1:])
        if t[0] == "M" and is_prime(n):
            return ("M", n)
        if t[0] == "T" and n >= 1:
            return ("T", n)
    raise UnknownTag(tag)


def default_field(tag: str) -> Field:
    fam, n = parse_tag(tag)
    if fam == "k":
        return Field.rational() if n <= 2 else Field.cyclotomic(12)
    if fam == "M":
        return Field.rational() if n == 2 else Field.cyclotomic(n)
    if fam == "T":
        return Field.rational()
    return Field.prime(n)


def grading_diagram_for(tag: str, field: Optional[Field] = None, validate: bool = True) -> GradingDiagram:
    """The cofinal diagram of maximal connected gradings for a tag."""
    fam, n = parse_tag(tag)
    field = field or default_field(tag)
    if fam == "k":
        if n == 1:
            d = GradingDiagram([], [], tag)
        elif n == 2:
            d = GradingDiagram([ergodic_diagonal_grading(cyclic(2), field)], [], tag)
        elif n == 3:
            nodes = [
                specific_diagonal_grading([[1, 2], [3]], [cyclic(2), cyclic(1)], field),
                ergodic_diagonal_grading(cyclic(3), field),
            ]
            d = GradingDiagram(nodes, [], tag)
        else:
            gs = k4_gradings(field)
            nodes = [gs[1], gs[3], gs[2], gs[4], gs[5]]  # C2*C2, C2, C3, C4, C2xC2
            a_to_t = Homomorphism(nodes[0].group, nodes[1].group, ((1,), (0,)))
            d = GradingDiagram(nodes, [(0, 1, a_to_t)], tag)
    elif fam == "M":
        F = Free(n - 1)
        Cn = cyclic(n)
        nodes = [
            good_grading_from_map("matrix", n, F.gens(), field, group=F),
            good_grading_from_map("matrix", n, [(1,)] * (n - 1), field, group=Cn),
            fine_matrix_grading(n, field),
        ]
        arrows = [
            (0, 1, Homomorphism(F, Cn, tuple((1,) for _ in range(n - 1)))),
            (2, 1, first_coordinate_map(n)),
        ]
        d = GradingDiagram(nodes, arrows, tag)
    elif fam == "T":
        F = Free(n - 1)
        d = GradingDiagram([good_grading_from_map("triangular", n, F.gens(), field, group=F)], [], tag)
    else:
        d = GradingDiagram([truncated_Z_grading(n, field), truncated_group_grading(n, field)], [], tag)
    if validate:
        for g in d.nodes:
            cert = verify_grading(g)
            if not cert:
                raise CertificateFailure(f"{g.name} violates the grading axiom at {cert.violation}")
            if is_connected(g) is not True:
                raise CertificateFailure(f"{g.name} is not connected")
        d.validate()
    return d


# ---------------------------------------------------------------------------
# catalog entries


@dataclass
class CatalogEntry:
    name: str
    construction: str
    build: Callable[[Field], Grading]
    default_field: str

    def grading(self, field: Optional[Field] = None) -> Grading:
        g = self.build(field or parse_field(self.default_field))
        g.name = self.name
        return g


def _entries() -> list[CatalogEntry]:
    E = CatalogEntry
    out = [
        E("fine-M2", "C2 x C2 grading of M2 on x^i y^j", lambda K: fine_matrix_grading(2, K), "Q"),
        E("fine-M3", "C3 x C3 grading of M3 on x^i y^j", lambda K: fine_matrix_grading(3, K), "Q(z3)"),
        E("good-M2-C2", "good grading of M2, E21 of degree t", lambda K: good_grading_from_map("matrix", 2, [(1,)], K, group=cyclic(2)), "Q"),
        E("good-M3-C3", "good grading of M3, m(i) = t", lambda K: good_grading_from_map("matrix", 3, [(1,)] * 2, K, group=cyclic(3)), "Q"),
        E("good-M2-free", "good grading of M2 by Z", lambda K: good_grading_from_map("matrix", 2, Free(1).gens(), K, group=Free(1)), "Q"),
        E("good-M3-free", "good grading of M3 by F2", lambda K: good_grading_from_map("matrix", 3, Free(2).gens(), K, group=Free(2)), "Q"),
        E("good-T2-free", "good grading of T2 by Z", lambda K: good_grading_from_map("triangular", 2, Free(1).gens(), K, group=Free(1)), "Q"),
        E("good-T3-free", "good grading of T3 by F2", lambda K: good_grading_from_map("triangular", 3, Free(2).gens(), K, group=Free(2)), "Q"),
        E("group-C2", "natural grading of kC2", lambda K: group_algebra_grading(cyclic(2), K), "Q"),
        E("group-C3", "natural grading of kC3", lambda K: group_algebra_grading(cyclic(3), K), "Q"),
        E("group-C2xC2", "natural grading of k[C2 x C2]", lambda K: group_algebra_grading(FiniteAbelian((2, 2)), K), "Q"),
        E("trunc-Z-2", "Z grading of k[x]/(x^2)", lambda K: truncated_Z_grading(2, K), "F2"),
        E("trunc-Z-3", "Z grading of k[x]/(x^3)", lambda K: truncated_Z_grading(3, K), "F3"),
        E("trunc-C2", "C2 grading of k[x]/(x^2) through 1 + x", lambda K: truncated_group_grading(2, K), "F2"),
        E("trunc-C3", "C3 grading of k[x]/(x^3) through 1 + x", lambda K: truncated_group_grading(3, K), "F3"),
        E("ergodic-C2", "ergodic C2 grading of k^2", lambda K: ergodic_diagonal_grading(cyclic(2), K), "Q"),
        E("ergodic-C3", "ergodic C3 grading of k^3", lambda K: ergodic_diagonal_grading(cyclic(3), K), "Q(z12)"),
        E("ergodic-C4", "ergodic C4 grading of k^4", lambda K: ergodic_diagonal_grading(cyclic(4), K), "Q(z12)"),
        E("ergodic-C2xC2", "ergodic C2 x C2 grading of k^4", lambda K: ergodic_diagonal_grading(FiniteAbelian((2, 2)), K), "Q(z12)"),
        E("specific-k3-C2", "partition {1,2},{3} of k^3", lambda K: specific_diagonal_grading([[1, 2], [3]], [cyclic(2), cyclic(1)], K), "Q(z12)"),
        E("specific-k4-C2*C2", "partition {1,2},{3,4} of k^4", lambda K: specific_diagonal_grading([[1, 2], [3, 4]], [cyclic(2), cyclic(2)], K), "Q(z12)"),
        E("specific-k4-C3", "partition {1,2,3},{4} of k^4", lambda K: specific_diagonal_grading([[1, 2, 3], [4]], [cyclic(3), cyclic(1)], K), "Q(z12)"),
        E("specific-k4-C2", "partition {1,2},{3},{4} of k^4", lambda K: specific_diagonal_grading([[1, 2], [3], [4]], [cyclic(2), cyclic(1), cyclic(1)], K), "Q(z12)"),
        E("specific-k5-C2*C3", "partition {1,2},{3,4,5} of k^5", lambda K: specific_diagonal_grading([[1, 2], [3, 4, 5]], [cyclic(2), cyclic(3)], K), "Q(z12)"),
    ]
    return out


CATALOG = {e.name: e for e in _entries()}


def list_entries() -> list[str]:
    return list(CATALOG)


def build(name: str, field: Optional[Field] = None) -> Grading:
    if name not in CATALOG:
        raise UnknownTag(name)
    return CATALOG[name].grading(field)
