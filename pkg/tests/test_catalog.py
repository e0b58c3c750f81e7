import pytest

from gradpi.catalog import (
    CATALOG,
    UnknownTag,
    build,
    default_field,
    grading_diagram_for,
    k4_table_report,
    list_entries,
    parse_tag,
    verify_common_quotient,
)
from gradpi.grading import is_connected, verify_grading
from gradpi.scalars import Field

# the table of specific gradings of k^4 (group, trivial dim, other dims)
K4_TABLE = [
    ["1", 4, "0"],
    ["C2*C2", 2, "1,1"],
    ["C3", 2, "1,1"],
    ["C2", 3, "1"],
    ["C4", 1, "1,1,1"],
    ["C2 x C2", 1, "1,1,1"],
]


@pytest.mark.parametrize("name", list_entries())
def test_catalog_entry_is_a_connected_grading(name):
    g = build(name)
    assert verify_grading(g)
    assert is_connected(g) is True


def test_catalog_size():
    assert len(CATALOG) >= 20


def test_k4_table():
    assert [r.as_list() for r in k4_table_report()] == K4_TABLE


@pytest.mark.parametrize("n", [2, 3])
def test_common_quotient(n):
    cert = verify_common_quotient(n, default_field(f"Mn:{n}"))
    assert cert.n == n


@pytest.mark.parametrize(
    "tag,expected",
    [("k2", ("k", 2)), ("M3", ("M", 3)), ("Mp:5", ("M", 5)), ("Tn:4", ("T", 4)), ("T3", ("T", 3)), ("trunc:5", ("trunc", 5))],
)
def test_parse_tag(tag, expected):
    assert parse_tag(tag) == expected


@pytest.mark.parametrize("tag", ["Mp:4", "trunc:6", "k5x", "Tn:x", "bogus"])
def test_unknown_tags(tag):
    with pytest.raises(UnknownTag):
        parse_tag(tag)


def test_default_fields():
    assert default_field("M3") == Field.cyclotomic(3)
    assert default_field("trunc:5") == Field.prime(5)
    assert default_field("k4") == Field.cyclotomic(12)


@pytest.mark.parametrize("tag,nodes", [("k2", 1), ("k3", 2), ("k4", 5), ("M2", 3), ("Tn:3", 1), ("trunc:3", 2)])
def test_diagram_shapes(tag, nodes):
    d = grading_diagram_for(tag)
    assert len(d.nodes) == nodes
