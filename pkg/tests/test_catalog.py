import pytest

from algebra.errors import BoundExceeded, ValidationError
from algebra.groups import isomorphic
from catalog import (
    catalog_names,
    dihedral,
    group_from_text,
    identify,
    named_group,
    parse_group_spec,
    permutation_group,
)
from serialization import dump_group


def test_quaternion_units(groups):
    Q8 = groups["Q8"]
    i, j, k, minus_one = 2, 4, 6, 1
    assert Q8.table[i, j] == k
    assert Q8.table[j, i] == k + 1
    assert Q8.table[i, i] == minus_one
    assert Q8.table[minus_one, minus_one] == 0


@pytest.mark.parametrize("name, expected", [
    ("C1", "C1"),
    ("C6", "C6"),
    ("Z4", "C4"),
    ("C2xC2", "V4"),
    ("C2 x C4", "C2xC4"),
    ("C2xC2xC2", "C2xC2xC2"),
    ("D3", "S3"),
    ("D4", "D4"),
    ("Q8", "Q8"),
    ("S3xC2", "D6"),
])
def test_identify(name, expected):
    assert identify(named_group(name)) == expected


def test_identify_returns_none_outside_the_catalog():
    A4 = group_from_text("perm:4:(1 2 3);(2 3 4)")
    assert A4.order == 12
    assert identify(A4) is None


def test_permutation_group_matches_named_group():
    S3 = group_from_text("perm:3:(1 2 3);(1 2)")
    assert S3.order == 6
    assert isomorphic(S3, named_group("S3")) is not None
    assert identify(S3) == "S3"
    assert permutation_group(4, ["(1,2,3,4)"]).order == 4


def test_dihedral_layout():
    D5 = dihedral(5)
    assert D5.order == 10
    reflection, rotation = 5, 1
    assert D5.table[reflection, reflection] == 0
    assert D5.table[D5.table[reflection, rotation], reflection] == D5.inverses[rotation]


def test_group_specs():
    spec = parse_group_spec("perm:4:(1 2);(3 4)")
    assert spec.kind == "perm"
    assert spec.points == 4
    assert spec.generators == ["(1 2)", "(3 4)"]
    assert parse_group_spec("cayley:groups/q8.grp").path == "groups/q8.grp"
    assert parse_group_spec("D4").kind == "named"


@pytest.mark.parametrize("text", [
    "",
    "Q9",
    "D1",
    "C0",
    "perm:x:(1 2)",
    "perm:3:(1 4)",
    "perm:3:(1 1)",
    "perm:3:(1 2) junk",
])
def test_bad_specs_are_rejected(text):
    with pytest.raises(ValidationError):
        group_from_text(text)


@pytest.mark.parametrize("text, bound", [
    ("C9", 8),
    ("C2xC4", 4),
    ("Q8", 4),
    ("perm:4:(1 2 3 4);(1 2)", 10),
])
def test_order_bound(text, bound):
    with pytest.raises(BoundExceeded):
        group_from_text(text, bound)


def test_cayley_spec_reads_group_documents(tmp_path, groups):
    path = tmp_path / "d4.grp"
    path.write_text(dump_group(groups["D4"]))
    loaded = group_from_text(f"cayley:{path}")
    assert loaded == groups["D4"]
    with pytest.raises(BoundExceeded):
        group_from_text(f"cayley:{path}", 6)


def test_catalog_names_are_distinct_types():
    names = catalog_names(8)
    assert len(names) == len(set(names))
    groups = [named_group(name) for name in names]
    for i, a in enumerate(groups):
        for b in groups[i + 1:]:
            if a.order == b.order:
                assert isomorphic(a, b) is None
