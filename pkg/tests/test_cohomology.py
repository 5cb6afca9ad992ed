import pytest

from algebra.cohomology import (
    Cochain,
    CoefficientModule,
    abelian_invariants,
    cohomology,
    crossed_homomorphisms,
    delta_nonabelian,
    differential,
    h1_pointed,
    seven_term_prefix,
)
from algebra.errors import DegreeUnsupported, ModuleMismatch, NotACocycle, ValidationError
from algebra.groups import Automorphism
from catalog import named_group
from conftest import inversion, inversion_action, random_cochain, trivial_module


@pytest.mark.parametrize("name, factors", [
    ("C1", ()),
    ("C4", (4,)),
    ("V4", (2, 2)),
    ("C2xC4", (2, 4)),
    ("C6", (6,)),
])
def test_abelian_invariants(name, factors):
    found, coords = abelian_invariants(named_group(name))
    assert found == factors
    assert len({tuple(row) for row in coords}) == named_group(name).order


def test_abelian_invariants_rejects_nonabelian(groups):
    with pytest.raises(ValidationError):
        abelian_invariants(groups["S3"])


def test_module_action_must_be_a_homomorphism(groups):
    C3, C4 = groups["C3"], groups["C4"]
    flip = inversion(C4)
    with pytest.raises(ValidationError):
        CoefficientModule(C4, C3, [Automorphism.identity(C4), flip, flip])


def test_cochains_are_normalized(groups):
    module = trivial_module(groups["C2"], groups["C2"])
    with pytest.raises(ValidationError):
        Cochain(2, groups["C2"], module, [[0, 1], [0, 1]])


def _modules(groups):
    C2, C3, C4, V4, S3, C2xC4 = (groups[n] for n in ("C2", "C3", "C4", "V4", "S3", "C2xC4"))
    return [
        trivial_module(C2, C3),
        trivial_module(C3, V4),
        CoefficientModule(C4, C2, inversion_action(C2, C4)),
        CoefficientModule(C3, S3, inversion_action(S3, C3)),
        CoefficientModule(V4, C4, inversion_action(C4, V4)),
        CoefficientModule(C3, V4, inversion_action(V4, C3)),
        CoefficientModule(C2xC4, C4, inversion_action(C4, C2xC4)),
    ]


@pytest.mark.parametrize("degree", [0, 1, 2])
def test_differential_squares_to_zero(groups, rng, degree):
    for module in _modules(groups):
        for _ in range(20):
            c = random_cochain(module, degree, rng) if degree else Cochain(
                0, module.actor, module, int(rng.integers(module.order)))
            assert differential(differential(c)).is_zero()


def test_coboundaries_have_preimages(groups, rng):
    for module in _modules(groups):
        for degree in (1, 2):
            h = cohomology(module.actor, module, degree + 1)
            for _ in range(10):
                c = differential(random_cochain(module, degree, rng))
                b = h.preimage(c)
                assert b is not None
                assert differential(b) == c


def test_from_vector_reduces_coordinates_before_packing(groups):
    V4, C3 = groups["V4"], groups["C3"]
    module = CoefficientModule(C3, V4, inversion_action(V4, C3))
    vector = [3 ** 80 + 1, -(2 ** 90), 7 * 3 ** 60 + 2] * 3
    assert Cochain.from_vector(2, module, vector) == Cochain.from_vector(2, module, [v % 3 for v in vector])
    with pytest.raises(ValidationError):
        Cochain.from_vector(2, module, vector[:-1])


def test_representatives_of_nonzero_classes_have_no_preimage(groups):
    for actor in ("C2", "V4"):
        G = groups[actor]
        h = cohomology(G, trivial_module(groups["C2"], G), 3)
        for rep in h.representatives:
            assert h.preimage(rep) is None
            assert not h.class_of(rep).is_zero()


@pytest.mark.parametrize("degree", [1, 2, 3])
def test_coprime_twisted_cohomology_vanishes(groups, rng, degree):
    V4, C3 = groups["V4"], groups["C3"]
    module = CoefficientModule(C3, V4, inversion_action(V4, C3))
    h = cohomology(V4, module, degree)
    assert h.invariants == ()
    for _ in range(5):
        c = differential(random_cochain(module, degree - 1, rng)) if degree > 1 else h.zero().representative
        assert h.class_of(c).is_zero()
        assert h.coordinates(c) == ()


@pytest.mark.parametrize("degree", [1, 2, 3])
def test_cyclic_inversion_cohomology_of_mixed_module(groups, degree):
    C4, C2xC4 = groups["C4"], groups["C2xC4"]
    module = CoefficientModule(C2xC4, C4, inversion_action(C4, C2xC4))
    h = cohomology(C4, module, degree)
    assert h.invariants == (2, 2)
    for i, rep in enumerate(h.representatives):
        assert h.coordinates(rep) == tuple(int(j == i) for j in range(2))


@pytest.mark.parametrize("actor, carrier, degree, invariants", [
    ("C2", "C2", 1, (2,)),
    ("C2", "C2", 2, (2,)),
    ("C2", "C2", 3, (2,)),
    ("C3", "C2", 2, ()),
    ("C4", "C2", 2, (2,)),
    ("V4", "C2", 1, (2, 2)),
    ("V4", "C2", 2, (2, 2, 2)),
    ("S3", "C2", 2, (2,)),
    ("S3", "C3", 1, ()),
    ("C3", "C3", 2, (3,)),
])
def test_trivial_module_cohomology(actor, carrier, degree, invariants):
    G = named_group(actor)
    h = cohomology(G, trivial_module(named_group(carrier), G), degree)
    assert h.invariants == invariants
    assert len(list(h.classes())) == h.order


def test_twisted_cohomology_of_c2_on_c4(groups):
    C2, C4 = groups["C2"], groups["C4"]
    module = CoefficientModule(C4, C2, inversion_action(C2, C4))
    # fixed points {0, 2}, norms vanish
    assert cohomology(C2, module, 2).invariants == (2,)
    assert cohomology(C2, module, 1).invariants == (2,)
    assert module.fixed_points() == [0, 2]


def test_representatives_are_cocycles_with_unit_coordinates(groups):
    module = trivial_module(groups["C2"], groups["V4"])
    h = cohomology(groups["V4"], module, 2)
    for i, rep in enumerate(h.representatives):
        assert h.is_cocycle(rep)
        expected = tuple(int(j == i) for j in range(len(h.invariants)))
        assert h.coordinates(rep) == expected


def test_class_arithmetic(groups):
    module = trivial_module(groups["C3"], groups["C3"])
    h = cohomology(groups["C3"], module, 2)
    one = h.element((1,))
    assert not one.is_zero()
    assert (one + one + one).is_zero()
    assert (one + one).coords == (2,)
    assert -one == one + one


def test_class_of_rejects_non_cocycles(groups):
    C2 = groups["C2"]
    module = trivial_module(C2, groups["C3"])
    h = cohomology(groups["C3"], module, 2)
    cochain = Cochain(2, groups["C3"], module, [[0, 0, 0], [0, 1, 0], [0, 0, 0]])
    assert not h.is_cocycle(cochain)
    with pytest.raises(NotACocycle):
        h.class_of(cochain)


def test_degree_limits(groups):
    module = trivial_module(groups["C2"], groups["C2"])
    with pytest.raises(DegreeUnsupported):
        cohomology(groups["C2"], module, 4)
    with pytest.raises(ModuleMismatch):
        cohomology(groups["C3"], module, 2)


def test_crossed_homomorphisms_into_twisted_c3(groups):
    C2, C3 = groups["C2"], groups["C3"]
    cocycles = crossed_homomorphisms(C2, C3, inversion_action(C2, C3))
    assert len(cocycles) == 3
    module = CoefficientModule(C3, C2, inversion_action(C2, C3))
    assert cohomology(C2, module, 1).order == 1


def test_h1_pointed_counts_conjugacy_classes_of_involutions(groups):
    C2, S3 = groups["C2"], groups["S3"]
    trivial = [Automorphism.identity(S3)] * 2
    pointed = h1_pointed(C2, S3, trivial)
    assert len(pointed.cocycles) == 4
    assert len(pointed) == 2
    assert pointed.orbits[pointed.base] == [0]


def test_h1_pointed_matches_abelian_h1(groups):
    C2, C4 = groups["C2"], groups["C4"]
    action = inversion_action(C2, C4)
    pointed = h1_pointed(C2, C4, action)
    module = CoefficientModule(C4, C2, action)
    assert len(pointed) == cohomology(C2, module, 1).order


@pytest.mark.parametrize("actor, carrier", [("C2", "Q8"), ("C2", "D4"), ("C2", "S3"), ("V4", "C4")])
def test_seven_term_prefix_is_exact(actor, carrier):
    G, N = named_group(actor), named_group(carrier)
    sequence = seven_term_prefix(G, N, [Automorphism.identity(N)] * G.order)
    assert sequence.exact, sequence.exactness


def test_seven_term_prefix_with_outer_action(groups):
    C2, Q8 = groups["C2"], groups["Q8"]
    # swap i and j, send k to -k: an involutive outer automorphism
    swap = Automorphism(Q8, [0, 1, 4, 5, 2, 3, 7, 6])
    sequence = seven_term_prefix(C2, Q8, [Automorphism.identity(Q8), swap])
    assert sequence.exact, sequence.exactness
    assert set(sequence.center_fixed) <= set(sequence.fixed)


def test_coordinates_of_random_cocycles_are_well_defined(groups, rng):
    module = CoefficientModule(groups["C4"], groups["C2"], inversion_action(groups["C2"], groups["C4"]))
    h = cohomology(groups["C2"], module, 2)
    for c in h.classes():
        for _ in range(5):
            moved = c.representative + differential(random_cochain(module, 1, rng))
            assert h.coordinates(moved) == c.coords


def test_exhaustive_h2_count_for_c2_on_c3():
    C2, C3 = named_group("C2"), named_group("C3")
    module = trivial_module(C3, C2)
    h = cohomology(C2, module, 2)
    cocycles = [v for v in range(3) if h.is_cocycle(Cochain(2, C2, module, [[0, 0], [0, v]]))]
    coboundaries = {
        differential(Cochain(1, C2, module, [0, b])).values.tobytes() for b in range(3)
    }
    assert len(cocycles) // len(coboundaries) == h.order == 1


def test_nonabelian_defect_vanishes_on_homomorphisms(groups):
    C2, S3 = groups["C2"], groups["S3"]
    involution = next(x for x in range(6) if S3.element_orders[x] == 2)
    rotation = next(x for x in range(6) if S3.element_orders[x] == 3)
    assert not delta_nonabelian(Cochain(1, C2, S3, [0, involution])).values.any()
    defect = delta_nonabelian(Cochain(1, C2, S3, [0, rotation]))
    assert defect(1, 1) == S3.table[rotation, rotation]
