"""Fundamental groups as limits of grading groups.

The diagram of maximal connected gradings for a tag is pruned of trivial
nodes, its limit is computed componentwise, and the result is compared with
a reference group: exactly when everything is finite or the limit is read
off an initial node, otherwise by a bounded isomorphism certificate.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .catalog import (
    build,
    default_field,
    grading_diagram_for,
    parse_tag,
)
from .grading import distinguish, is_connected, verify_grading
from .groups import (
    CertificateFailure,
    DirectProduct,
    FiniteAbelian,
    Free,
    FreeProductCyclic,
    Group,
    Homomorphism,
    abelian_invariant_factors,
    certify_limit_iso,
    cyclic,
    diagram_limit,
    find_isomorphism,
    is_abelian,
    is_surjective,
)
from .scalars import Field
from .smash import (
    certify_free_smash_rigidity,
    certify_schurian_simply_connected,
    certify_truncated_rigidity,
    smash_product,
)


def pi1_reference(tag: str) -> Group:
    """The known answer for a tag, as a group object."""
    fam, n = parse_tag(tag)
    if fam == "k":
        if n == 1:
            return FiniteAbelian(())
        if n == 2:
            return cyclic(2)
        if n == 3:
            return DirectProduct((cyclic(2), cyclic(3)))
        return DirectProduct((FreeProductCyclic((2, 2)), cyclic(6), cyclic(4), cyclic(2)))
    if fam == "M":
        return DirectProduct((Free(n - 1), cyclic(n)))
    if fam == "T":
        return Free(n - 1)
    return DirectProduct((Free(1), cyclic(n)))


def _t(k: int = 1) -> tuple:
    return (k,)


def reference_cone(tag: str, reference: Group, nodes) -> dict:
    """Cone maps from the reference group to the diagram nodes.

    Only needed when the limit is infinite (M, k4, trunc families).
    Generators of the reference are, in order, the generators of its factors.
    """
    fam, n = parse_tag(tag)
    gens = reference.gens()
    if fam == "M":
        F, Cn, CnCn = (g.group for g in nodes)
        k = n - 1
        to_free = [F.gens()[i] for i in range(k)] + [F.identity()]
        to_cyclic = [_t() for _ in range(k)] + [_t(0)]
        to_fine = [(1, 0) for _ in range(k)] + [(0, 1)]
        return {
            0: Homomorphism(reference, F, tuple(to_free)),
            1: Homomorphism(reference, Cn, tuple(to_cyclic)),
            2: Homomorphism(reference, CnCn, tuple(to_fine)),
        }
    if fam == "k" and n == 4:
        G0, G1, G2, G3, G4 = (g.group for g in nodes)
        a, b = G0.gens()
        one0 = G0.identity()
        images = {
            0: (a, b, one0, one0, one0),
            1: (_t(), _t(0), _t(0), _t(0), _t(0)),
            2: (_t(0), _t(0), _t(), _t(0), _t(0)),
            3: (_t(0), _t(0), _t(0), _t(), _t(0)),
            4: ((0, 0), (0, 0), (1, 0), (0, 0), (0, 1)),
        }
        groups = (G0, G1, G2, G3, G4)
        return {i: Homomorphism(reference, groups[i], imgs) for i, imgs in images.items()}
    if fam == "trunc":
        Z, Cp = (g.group for g in nodes)
        assert len(gens) == 2
        return {
            0: Homomorphism(reference, Z, (Z.gens()[0], Z.identity())),
            1: Homomorphism(reference, Cp, (_t(0), _t())),
        }
    raise ValueError(f"no cone maps needed for {tag}")


def _finite_isomorphic(G: Group, H: Group) -> bool:
    if G.order() != H.order():
        return False
    if is_abelian(G) and is_abelian(H):
        return abelian_invariant_factors(G) == abelian_invariant_factors(H)
    return find_isomorphism(G, H) is not None


@dataclass
class Pi1Result:
    tag: str
    field: str
    diagram: dict
    limit: Group
    reference: Group
    method: str  # "exact", "exact (initial)" or "bounded"
    certificate: dict = field(default_factory=dict)
    limit_methods: list = field(default_factory=list)
    pruned: list = field(default_factory=list)
    projections_surjective: dict = field(default_factory=dict)

    @property
    def group_name(self) -> str:
        return self.reference.name()

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "tag": self.tag,
            "field": self.field,
            "group": self.group_name,
            "limit": self.limit.name(),
            "method": self.method,
            "certificate": self.certificate,
            "diagram": self.diagram,
            "components": [{"nodes": nodes, "case": case} for nodes, case in self.limit_methods],
            "pruned": self.pruned,
            "projections_surjective": {str(k): v for k, v in sorted(self.projections_surjective.items())},
        }


def fundamental_group(tag: str, field: Optional[Field] = None, radius: int = 6) -> Pi1Result:
    field = field or default_field(tag)
    gd = grading_diagram_for(tag, field)
    d = gd.group_diagram()
    lim = diagram_limit(d)
    ref = pi1_reference(tag)

    surj = {}
    for i, h in lim.projections.items():
        if i in lim.pruned:
            continue
        surj[i] = is_surjective(h)

    cases = {case for _, case in lim.methods}
    if lim.group.is_finite and ref.is_finite:
        if not _finite_isomorphic(lim.group, ref):
            raise CertificateFailure(
                f"limit {lim.group.name()} is not isomorphic to {ref.name()}",
                witness={"limit_order": lim.group.order(), "reference_order": ref.order()},
            )
        method = "exact"
        cert = {"method": "exact", "order": lim.group.order()}
        if is_abelian(lim.group):
            cert["invariant_factors"] = list(abelian_invariant_factors(lim.group))
    elif cases == {"initial"} and len(lim.methods) == 1:
        if lim.group != ref:
            raise CertificateFailure(f"initial node group {lim.group.name()} differs from {ref.name()}")
        method = "exact (initial)"
        cert = {"method": method, "node": lim.methods[0][0][0]}
    else:
        cone = reference_cone(tag, ref, gd.nodes)
        c = certify_limit_iso(d, ref, cone, radius)
        method = "bounded"
        cert = c.to_json()
    return Pi1Result(
        tag=tag,
        field=str(field),
        diagram=gd.summary(),
        limit=lim.group,
        reference=ref,
        method=method,
        certificate=cert,
        limit_methods=lim.methods,
        pruned=lim.pruned,
        projections_surjective=surj,
    )


# ---------------------------------------------------------------------------
# no universal covering


@dataclass
class NoUniversalReport:
    tag: str
    first: str
    second: str
    first_certificate: dict
    second_certificate: dict
    invariant: str
    values: tuple

    @property
    def conclusive(self) -> bool:
        return bool(self.invariant)

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "tag": self.tag,
            "gradings": [self.first, self.second],
            "certificates": [self.first_certificate, self.second_certificate],
            "distinguishing_invariant": self.invariant,
            "values": [str(v) for v in self.values],
        }


def _schurian(g) -> dict:
    return certify_schurian_simply_connected(smash_product(g)).to_json()


def check_no_universal(tag: str, field: Optional[Field] = None, radius: int = 3) -> NoUniversalReport:
    """Two simply connected gradings that cannot be quotients of a common one."""
    fam, n = parse_tag(tag)
    if fam == "M":
        from .catalog import fine_matrix_grading, good_grading_from_map

        field = field or default_field(tag)
        g1 = fine_matrix_grading(n, field)
        g2 = good_grading_from_map("matrix", n, Free(n - 1).gens(), field, group=Free(n - 1))
        c1 = _schurian(g1)
        rc = certify_free_smash_rigidity(n, radius)
        c2 = {"kind": "bounded rigidity", **rc.to_json()}
    elif fam == "trunc":
        from .catalog import truncated_group_grading, truncated_Z_grading

        field = field or default_field(tag)
        g1 = truncated_group_grading(n, field)
        g2 = truncated_Z_grading(n, field)
        c1 = _schurian(g1)
        rc = certify_truncated_rigidity(n, max(radius, 2))
        c2 = {"kind": "bounded rigidity", **rc.to_json()}
    elif fam == "k" and n == 4:
        g1 = build("ergodic-C4", field)
        g2 = build("ergodic-C2xC2", field)
        c1, c2 = _schurian(g1), _schurian(g2)
    else:
        raise ValueError(f"{tag}: no pair of simply connected gradings on record")
    for g in (g1, g2):
        if not verify_grading(g) or is_connected(g) is not True:
            raise CertificateFailure(f"{g.name} is not a connected grading")
    rep = distinguish(g1, g2)
    values = rep.values.get(rep.first_difference, ()) if rep.distinguished else ()
    return NoUniversalReport(tag, g1.name, g2.name, c1, c2, rep.first_difference or "", tuple(values))
