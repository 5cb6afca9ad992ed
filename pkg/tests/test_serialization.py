import pytest

from algebra.cohomology import Cochain
from algebra.crossed_modules import build_GS, validate_crossed_module
from algebra.errors import MalformedDocument, SchemaMismatch, ValidationError
from algebra.groups import Automorphism
from algebra.kernels import classify, kernels
from conftest import inversion_kernel, q8_swap_kernel, trivial_module
from serialization import (
    dump_cochain,
    dump_crossed_module,
    dump_factor_system,
    dump_group,
    dump_group_action,
    dump_kernel,
    dump_pair,
    load_cochain,
    load_crossed_module,
    load_factor_system,
    load_group,
    load_group_action,
    load_kernel,
    load_pair,
)


def test_group_document(groups):
    text = dump_group(groups["Q8"])
    assert text.startswith("extkit group v1\norder 8\nlabel Q8\n")
    loaded = load_group(text)
    assert loaded == groups["Q8"]
    assert loaded.label == "Q8"


def test_comments_and_blank_lines_are_ignored(groups):
    text = "# a comment\n\nextkit group v1\norder 2\n\ntable\n0 1\n# between rows\n1 0\n"
    assert load_group(text) == groups["C2"]


def test_wrong_header_is_a_schema_mismatch(groups):
    with pytest.raises(SchemaMismatch) as info:
        load_group(dump_group(groups["C2"]).replace("group", "kernel", 1))
    assert info.value.details["expected"] == "extkit group v1"


def test_malformed_rows_report_their_line():
    text = "extkit group v1\norder 2\ntable\n0 1\n1 x\n"
    with pytest.raises(MalformedDocument) as info:
        load_group(text)
    assert info.value.line == 5
    assert info.value.field == "table"


def test_invalid_tables_are_rejected():
    with pytest.raises(ValidationError):
        load_group("extkit group v1\norder 2\ntable\n0 1\n1 1\n")
    with pytest.raises(MalformedDocument):
        load_group("extkit group v1\norder 2\ntable\n0 1\n1 0\n0 1\n")


def test_cochain_document(groups):
    C2, C3 = groups["C2"], groups["C3"]
    module = trivial_module(C2, C3)
    c = Cochain(2, C3, module, [[0, 0, 0], [0, 1, 0], [0, 0, 1]])
    text = dump_cochain(c)
    assert "1 1 : 1" in text
    assert "2 2 : 1" in text
    assert load_cochain(text, C3, module) == c


def test_cochain_must_be_normalized(groups):
    C2, C3 = groups["C2"], groups["C3"]
    text = "extkit cochain v1\ndegree 2\nactor-order 3\nvalue-order 2\n0 1 : 1\n"
    with pytest.raises(MalformedDocument) as info:
        load_cochain(text, C3, trivial_module(C2, C3))
    assert info.value.line == 5


def test_cochain_actor_must_match(groups):
    C2, C3 = groups["C2"], groups["C3"]
    text = "extkit cochain v1\ndegree 1\nactor-order 4\nvalue-order 2\n"
    with pytest.raises(MalformedDocument):
        load_cochain(text, C3, trivial_module(C2, C3))


def test_kernel_documents(groups):
    k = kernels(groups["C2"], groups["Q8"])[1]
    by_classes = f"extkit kernel v1\nG C2\nN Q8\nclasses {' '.join(map(str, k.s))}\n"
    loaded = load_kernel(by_classes)
    assert loaded.s == k.s
    assert loaded.lift == k.lift
    swap = q8_swap_kernel(groups["C2"], groups["Q8"])
    text = dump_kernel(swap)
    assert "G C2" in text
    assert load_kernel(text).lift == swap.lift


def test_kernel_lift_rows_must_be_permutations():
    text = "extkit kernel v1\nG C2\nN C3\nlift\n0 1 2\n0 0 2\n"
    with pytest.raises(MalformedDocument) as info:
        load_kernel(text)
    assert info.value.field == "lift"


def test_factor_system_document(groups):
    for fs in classify(inversion_kernel(groups["C2"], groups["C4"])).classes:
        assert load_factor_system(dump_factor_system(fs)) == fs


def test_factor_system_with_table_groups(groups):
    fs = classify(inversion_kernel(groups["C2"], groups["C4"])).classes[1]
    text = dump_factor_system(fs).replace("G C2", "G table 2\n0 1\n1 0")
    assert load_factor_system(text) == fs


def test_crossed_module_document(groups):
    cm = build_GS(q8_swap_kernel(groups["C2"], groups["Q8"])).crossed
    loaded = load_crossed_module(dump_crossed_module(cm))
    assert validate_crossed_module(loaded).valid
    assert loaded.alpha.image.tolist() == cm.alpha.image.tolist()


def test_pair_document(groups):
    C2, C4 = groups["C2"], groups["C4"]
    flip = Automorphism(C4, C4.inverses)
    phi, psi = load_pair(dump_pair(flip, Automorphism.identity(C2)), C4, C2)
    assert phi == flip
    assert psi.is_identity()
    with pytest.raises(MalformedDocument) as info:
        load_pair("extkit pair v1\nphi 0 2 1 3\npsi 0 1\n", C4, C2)
    assert info.value.field == "phi"


def test_group_action_document(groups):
    C2, C4 = groups["C2"], groups["C4"]
    identity = (Automorphism.identity(C4), Automorphism.identity(C2))
    flip = (Automorphism(C4, C4.inverses), Automorphism.identity(C2))
    text = dump_group_action([identity, flip])
    assert load_group_action(text, C2, C4, C2) == [identity, flip]
    with pytest.raises(MalformedDocument):
        load_group_action(text, groups["C3"], C4, C2)
