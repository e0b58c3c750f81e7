import itertools
import random
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gradpi.groups import (
    TRIVIAL,
    CertificateFailure,
    ConeDoesNotCommute,
    DirectProduct,
    FiniteAbelian,
    Free,
    FreeProductCyclic,
    GroupDiagram,
    Homomorphism,
    InvalidHomomorphism,
    UnsupportedShape,
    abelian_invariant_factors,
    all_subgroups,
    brute_force_limit_size,
    certify_limit_iso,
    cyclic,
    diagram_limit,
    find_isomorphism,
    generates,
    group_from_json,
    is_abelian,
    is_surjective,
    parse_group,
    quotient_by,
    symmetric_group,
)

# ---------------------------------------------------------------------------
# normal forms


def test_free_reduction_and_inverse():
    F = Free(2)
    a = F.parse("s1*s2*s2^-1")
    assert a == (1,)
    w = F.parse("s1*s2^-1*s1")
    assert F.mul(w, F.inv(w)) == F.identity()
    assert F.length(w) == 3
    assert F.parse(F.format(w)) == w


def test_free_ball_sizes():
    # 1 + 4 + 12 + 36: reduced words in two letters
    assert len(Free(2).ball(3)) == 1 + 4 + 12 + 36
    assert len(Free(1).ball(5)) == 11


def test_free_product_of_cyclics():
    G = FreeProductCyclic((2, 2))
    a, b = G.gens()
    assert G.mul(a, a) == G.identity()
    ab = G.mul(a, b)
    assert G.element_order(ab, bound=50) is None
    # C2 * C2 is infinite dihedral: two elements of each length >= 1
    assert len(G.ball(4)) == 1 + 2 * 4


def test_finite_abelian_formatting_roundtrip():
    G = FiniteAbelian((2, 4))
    for x in G.elements():
        assert G.parse(G.format(x)) == x
    assert G.order() == 8
    with pytest.raises(ValueError):
        FiniteAbelian((4, 2))


def test_direct_product_roundtrip():
    G = DirectProduct((Free(1), cyclic(3)))
    for x in G.ball(3):
        assert G.parse(G.format(x)) == x
        assert group_from_json(G.to_json()) == G


def test_symmetric_group():
    S = symmetric_group(3)
    assert S.order() == 6
    assert not is_abelian(S)
    assert sorted(S.element_order(x) for x in S.elements()) == [1, 2, 2, 2, 3, 3]


@pytest.mark.parametrize("text,order", [("C2xC2", 4), ("C6", 6), ("1", 1), ("C2xC4", 8)])
def test_parse_group_finite(text, order):
    assert parse_group(text).order() == order


def test_parse_group_infinite():
    assert parse_group("Z") == Free(1)
    assert parse_group("F2") == Free(2)
    assert parse_group("C2*C2") == FreeProductCyclic((2, 2))


# ---------------------------------------------------------------------------
# homomorphisms


def test_homomorphism_rejects_broken_relation():
    with pytest.raises(InvalidHomomorphism):
        Homomorphism(cyclic(4), cyclic(3), ((1,),))
    h = Homomorphism(cyclic(6), cyclic(3), ((1,),))
    assert h.apply((4,)) == (1,)


def test_composition_and_surjectivity():
    F = Free(2)
    to_c3 = Homomorphism(F, cyclic(3), ((1,), (1,)))
    to_one = Homomorphism(cyclic(3), TRIVIAL, ((),))
    assert is_surjective(to_c3)
    assert to_one.compose(to_c3).target == TRIVIAL
    assert not is_surjective(Homomorphism(F, cyclic(4), ((2,), (0,))))


# ---------------------------------------------------------------------------
# generation in free groups against an abelianisation + Nielsen oracle


def _abelian_rank_one(words, r):
    # oracle half 1: the images in Z^r must span Z^r (all r x r minors coprime)
    vecs = []
    for w in words:
        v = [0] * r
        for x in w:
            v[abs(x) - 1] += 1 if x > 0 else -1
        vecs.append(v)
    g = 0
    for rows in itertools.combinations(vecs, r):
        if r == 2:
            g = gcd(g, rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0])
        else:
            g = gcd(g, rows[0][0])
    return g == 1


def _nielsen(words):
    # oracle half 2: length-reducing Nielsen moves from a basis reach {s1, s2}
    F = Free(2)
    ws = [tuple(w) for w in words if w]
    changed = True
    while changed:
        changed = False
        ws = [w for w in ws if w]
        for i, j in itertools.permutations(range(len(ws)), 2):
            for v in (ws[j], F.inv(ws[j])):
                for new in (F.mul(ws[i], v), F.mul(v, ws[i])):
                    if len(new) < len(ws[i]):
                        ws[i] = new
                        changed = True
                        break
                if changed:
                    break
            if changed:
                break
    return ws


def _random_basis(rng, moves):
    F = Free(2)
    ws = [(1,), (2,)]
    for _ in range(moves):
        i = rng.randrange(2)
        v = ws[1 - i] if rng.random() < 0.5 else F.inv(ws[1 - i])
        ws[i] = F.mul(ws[i], v) if rng.random() < 0.5 else F.mul(v, ws[i])
        if rng.random() < 0.3:
            ws[i] = F.inv(ws[i])
    return ws


@pytest.mark.parametrize("seed", range(25))
def test_random_nielsen_bases_generate(seed):
    rng = random.Random(seed)
    ws = _random_basis(rng, rng.randint(1, 8))
    assert generates(Free(2), ws) is True
    # oracle agrees: a Nielsen basis reduces back to single letters
    assert sorted(len(w) for w in _nielsen(ws)) == [1, 1]


letter = st.sampled_from([1, -1, 2, -2])


@settings(max_examples=80, deadline=None)
@given(st.lists(st.lists(letter, min_size=1, max_size=6), min_size=1, max_size=3))
def test_generation_consistent_with_abelianisation(raw):
    F = Free(2)
    ws = []
    for w in raw:
        acc = F.identity()
        for x in w:
            acc = F.mul(acc, (x,))
        ws.append(acc)
    ans = generates(F, ws)
    assert ans in (True, False)
    if not _abelian_rank_one(ws, 2):
        assert ans is False
    if ans:
        assert _abelian_rank_one(ws, 2)


def test_stallings_known_cases():
    F = Free(2)
    assert generates(F, [(1,), (1, 2, -1)]) is True
    assert generates(F, [(1, 1), (2,)]) is False
    assert generates(F, [(1, 2), (2,)]) is True
    # commutator subgroup plus s1 is not everything
    assert generates(F, [(1,), (1, 2, -1, -2)]) is False


def test_free_product_generation():
    G = FreeProductCyclic((2, 2))
    a, b = G.gens()
    assert generates(G, [a, b]) is True
    assert generates(G, [a]) is False
    assert generates(G, [G.mul(a, b)]) is False


# ---------------------------------------------------------------------------
# finite group helpers


def _orders_profile(G):
    return sorted(G.element_order(x) for x in G.elements())


@pytest.mark.parametrize("factors", [(2,), (6,), (2, 2), (2, 4), (2, 6), (3, 3), (2, 2, 2)])
def test_invariant_factors_against_order_profile(factors):
    G = FiniteAbelian(factors)
    inv = abelian_invariant_factors(G)
    H = FiniteAbelian(inv) if inv else TRIVIAL
    assert _orders_profile(G) == _orders_profile(H)
    assert inv == factors


def test_invariant_factors_of_a_product():
    G = DirectProduct((cyclic(2), cyclic(3), cyclic(4)))
    assert abelian_invariant_factors(G) == (2, 12)


def test_find_isomorphism():
    assert find_isomorphism(DirectProduct((cyclic(2), cyclic(3))), cyclic(6)) is not None
    assert find_isomorphism(cyclic(4), FiniteAbelian((2, 2))) is None
    assert find_isomorphism(symmetric_group(3), cyclic(6)) is None


def test_subgroups_and_quotients():
    G = FiniteAbelian((2, 2))
    subs = all_subgroups(G)
    assert sorted(len(s) for s in subs) == [1, 2, 2, 2, 4]
    q = quotient_by(G, [(1, 0)])
    assert q.target.order() == 2
    assert is_surjective(q)


# ---------------------------------------------------------------------------
# limits


def test_all_finite_limit_matches_brute_force():
    C4, C2 = cyclic(4), cyclic(2)
    d = GroupDiagram((C4, C2, FiniteAbelian((2, 2))), ((0, 1, Homomorphism(C4, C2, ((1,),))), (2, 1, Homomorphism(FiniteAbelian((2, 2)), C2, ((1,), (0,))))))
    lim = diagram_limit(d)
    assert lim.group.order() == brute_force_limit_size(d) == 8


def test_pruning_does_not_change_finite_limits():
    C2, C3 = cyclic(2), cyclic(3)
    d = GroupDiagram((C2, TRIVIAL, C3), ((0, 1, Homomorphism(C2, TRIVIAL, ((),))),))
    a = diagram_limit(d, prune=True)
    b = diagram_limit(d, prune=False)
    assert a.group.order() == b.group.order() == 6
    assert a.pruned == [1]


def test_initial_node_limit_is_the_node():
    F = Free(2)
    d = GroupDiagram((F, cyclic(3)), ((0, 1, Homomorphism(F, cyclic(3), ((1,), (1,)))),))
    lim = diagram_limit(d)
    assert lim.group == F
    assert lim.methods[0][1] == "initial"


def _m2_diagram():
    Z, C2, V = Free(1), cyclic(2), FiniteAbelian((2, 2))
    return GroupDiagram(
        (Z, C2, V),
        ((0, 1, Homomorphism(Z, C2, ((1,),))), (2, 1, Homomorphism(V, C2, ((1,), (0,))))),
    )


def _m2_cone(P):
    Z, C2, V = Free(1), cyclic(2), FiniteAbelian((2, 2))
    return {
        0: Homomorphism(P, Z, ((1,), ())),
        1: Homomorphism(P, C2, ((1,), (0,))),
        2: Homomorphism(P, V, ((1, 0), (0, 1))),
    }


def test_fibre_product_certificate():
    d = _m2_diagram()
    lim = diagram_limit(d)
    assert lim.methods[0][1] == "fibre_product"
    P = DirectProduct((Free(1), cyclic(2)))
    cert = certify_limit_iso(d, P, _m2_cone(P), 6)
    assert cert.candidate_elements == cert.compatible_tuples == 26


def test_certificate_rejects_wrong_candidate():
    d = _m2_diagram()
    P = DirectProduct((Free(1), cyclic(4)))
    Z, C2, V = Free(1), cyclic(2), FiniteAbelian((2, 2))
    cone = {
        0: Homomorphism(P, Z, ((1,), ())),
        1: Homomorphism(P, C2, ((1,), (0,))),
        2: Homomorphism(P, V, ((1, 0), (0, 1))),
    }
    with pytest.raises(CertificateFailure) as exc:
        certify_limit_iso(d, P, cone, 4)
    assert exc.value.witness is not None


def test_certificate_rejects_noncommuting_cone():
    d = _m2_diagram()
    P = DirectProduct((Free(1), cyclic(2)))
    cone = _m2_cone(P)
    cone[1] = Homomorphism(P, cyclic(2), ((0,), (1,)))
    with pytest.raises(ConeDoesNotCommute):
        certify_limit_iso(d, P, cone, 3)


def test_unsupported_shape():
    Z = Free(1)
    d = GroupDiagram((Z, Z, cyclic(2)), ((0, 2, Homomorphism(Z, cyclic(2), ((1,),))), (1, 2, Homomorphism(Z, cyclic(2), ((1,),)))))
    with pytest.raises(UnsupportedShape):
        diagram_limit(d)


def test_trivial_source_node_is_not_pruned():
    # 1 -> C2 forces the C2 coordinate to be trivial
    d = GroupDiagram((TRIVIAL, cyclic(2)), ((0, 1, Homomorphism(TRIVIAL, cyclic(2), ())),))
    assert brute_force_limit_size(d) == 1
    assert diagram_limit(d).group.order() == 1
