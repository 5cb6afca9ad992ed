import itertools

import numpy as np
import pytest

from algebra.errors import NotAHomomorphism, NotStabilizing, ValidationError
from algebra.ext_automorphisms import (
    act_on_cochain,
    aut_preserving,
    aut_preserving_bruteforce,
    center_cocycles,
    check_wells_cocycle_law,
    compatible_pair,
    compatible_pairs,
    conjugation_pairs,
    conjugation_twist_identity,
    gauge_group,
    lift_group_action,
    lift_pair,
    monoid_product,
    normal_form,
    pair_action,
    psi_map,
    wells_cocycle,
    wells_sequence,
)
from algebra.groups import Automorphism, automorphism_group
from algebra.kernels import classify
from catalog import identify, named_group
from conftest import inversion_kernel, q8_swap_kernel, trivial_kernel


def _extensions(kernel):
    return {identify(ext.total): ext for ext in classify(kernel).extensions}


@pytest.fixture(scope="module")
def c2_by_c2():
    return _extensions(trivial_kernel(named_group("C2"), named_group("C2")))


@pytest.fixture(scope="module")
def c4_by_c2():
    return _extensions(inversion_kernel(named_group("C2"), named_group("C4")))


def test_pair_action_of_identity_is_trivial(c4_by_c2):
    fs = c4_by_c2["Q8"].source
    identity = pair_action(Automorphism.identity(fs.N), Automorphism.identity(fs.G), fs)
    assert identity == fs


def test_identity_pair_has_zero_wells_class(c4_by_c2):
    fs = c4_by_c2["Q8"].source
    pair = compatible_pair(Automorphism.identity(fs.N), Automorphism.identity(fs.G), fs)
    assert pair is not None
    assert wells_cocycle(pair, fs).is_zero()
    lifted = lift_pair(pair, fs, c4_by_c2["Q8"])
    assert lifted.phi.is_identity()
    assert lifted.psi.is_identity()


@pytest.mark.parametrize("name, expected", [("V4", 2), ("C4", 2)])
def test_aut_preserving_counts_for_c2_by_c2(c2_by_c2, name, expected):
    found = aut_preserving(c2_by_c2[name], oracle=True)
    assert len(found) == expected


@pytest.mark.parametrize("name", ["D4", "Q8"])
def test_aut_preserving_for_cyclic_kernel(c4_by_c2, name):
    ext = c4_by_c2[name]
    found = aut_preserving(ext, oracle=True)
    # stabiliser of <i> in Aut(Q8), and all of Aut(D4)
    assert len(found) == 8
    forwards = [a.nu.forward.tolist() for a in found]
    assert forwards == sorted(forwards)
    assert all(a.nu.as_map().failure() is None for a in found)


def test_normal_form_round_trip(c4_by_c2):
    ext = c4_by_c2["Q8"]
    for form in aut_preserving_bruteforce(ext):
        again = normal_form(form.nu, ext)
        assert again.phi == form.phi
        assert again.psi == form.psi
        assert again.h == form.h


@pytest.mark.parametrize("name", ["D4", "Q8"])
def test_wells_sequence_is_exact(c4_by_c2, name):
    assert wells_sequence(c4_by_c2[name]).exact


def test_wells_sequence_for_nonabelian_kernel():
    for ext in classify(q8_swap_kernel(named_group("C2"), named_group("Q8"))).extensions:
        assert wells_sequence(ext).exact


def test_wells_cocycle_law(c4_by_c2):
    fs = c4_by_c2["Q8"].source
    pairs = compatible_pairs(fs)
    assert pairs
    assert check_wells_cocycle_law(pairs, fs)


def test_psi_is_a_homomorphism(c2_by_c2):
    ext = c2_by_c2["V4"]
    cocycles = center_cocycles(ext.source)
    for f1, f2 in itertools.product(cocycles, repeat=2):
        composite = psi_map(f1, ext).nu.compose(psi_map(f2, ext).nu)
        assert composite == psi_map(f1 + f2, ext).nu


def test_conjugation_pairs(c4_by_c2):
    ext = c4_by_c2["D4"]
    forms = conjugation_pairs(ext)
    assert len(forms) == ext.G.order
    assert forms[0].nu.is_identity()


def test_conjugation_twist_identity_on_nonabelian_kernel():
    for ext in classify(q8_swap_kernel(named_group("C2"), named_group("Q8"))).extensions:
        assert all(conjugation_twist_identity(ext.source, n) for n in range(ext.N.order))
    S3 = named_group("S3")
    ext = classify(trivial_kernel(named_group("C2"), S3)).extensions[0]
    assert all(conjugation_twist_identity(ext.source, n) for n in range(S3.order))


@pytest.fixture(scope="module")
def v4_by_c2():
    return classify(trivial_kernel(named_group("V4"), named_group("C2"))).extensions


def _gauge_by_filtering(ext):
    """Automorphisms of the total group keeping N and inducing the identity on G."""
    total, image = ext.total, ext.iota.image
    proj = ext.proj.image
    count = 0
    for a in automorphism_group(total):
        if set(a.forward[image].tolist()) != set(image.tolist()):
            continue
        if np.array_equal(proj[a.forward], proj):
            count += 1
    return count


@pytest.mark.parametrize("name", ["V4", "C4"])
def test_gauge_group_of_c2_by_c2(c2_by_c2, name):
    gauge = gauge_group(c2_by_c2[name])
    assert gauge.order == 2
    assert len(gauge.automorphisms) == 2
    assert _gauge_by_filtering(c2_by_c2[name]) == 2


@pytest.mark.parametrize("name", ["D4", "Q8"])
def test_gauge_group_of_c2_by_c4(c4_by_c2, name):
    ext = c4_by_c2[name]
    gauge = gauge_group(ext)
    # N abelian: Gau is Z^1(C2, C4) under inversion
    assert gauge.order == len(gauge.automorphisms) == _gauge_by_filtering(ext) == 4


@pytest.mark.parametrize("index", range(8))
def test_gauge_group_of_v4_by_c2(v4_by_c2, index):
    ext = v4_by_c2[index]
    gauge = gauge_group(ext)
    assert gauge.order == len(gauge.automorphisms) == _gauge_by_filtering(ext) == 4


def test_gauge_monoid_is_associative(c2_by_c2):
    ext = c2_by_c2["V4"]
    monoid = gauge_group(ext).monoid
    for f1, f2, f3 in itertools.product(monoid, repeat=3):
        left = monoid_product(monoid_product(f1, f2, ext), f3, ext)
        right = monoid_product(f1, monoid_product(f2, f3, ext), ext)
        assert left == right


def test_gauge_group_of_nonabelian_kernel():
    ext = classify(trivial_kernel(named_group("C2"), named_group("S3"))).extensions[0]
    gauge = gauge_group(ext)
    assert gauge.order == len(gauge.automorphisms) == _gauge_by_filtering(ext)
    assert all(a.psi.is_identity() for a in gauge.automorphisms)


def _conjugation_action(ext):
    """The total group acting on (N, G) by conjugation."""
    total = ext.total
    pairs = []
    for x in range(total.order):
        on_n = total.table[total.table[x, ext.iota.image], total.inverses[x]]
        pairs.append((Automorphism(ext.N, on_n), Automorphism.conjugation(ext.G, ext.proj(x))))
    return total, pairs


@pytest.mark.parametrize("name", ["D4", "Q8"])
def test_conjugation_action_lifts(c4_by_c2, name):
    ext = c4_by_c2[name]
    H, pairs = _conjugation_action(ext)
    result = lift_group_action(H, pairs, ext.source, ext)
    assert result.lifts
    assert result.obstruction.is_zero()
    for h, nu in enumerate(result.action):
        assert np.array_equal(nu.forward[ext.iota.image] % ext.N.order, pairs[h][0].forward)


def test_trivial_action_lifts_to_identity(c4_by_c2):
    ext = c4_by_c2["Q8"]
    C2 = named_group("C2")
    identity = (Automorphism.identity(ext.N), Automorphism.identity(ext.G))
    result = lift_group_action(C2, [identity, identity], ext.source, ext)
    assert result.lifts
    assert all(nu.is_identity() for nu in result.action)


def test_group_action_must_be_a_homomorphism(c4_by_c2):
    ext = c4_by_c2["Q8"]
    C3 = named_group("C3")
    flip = Automorphism(ext.N, ext.N.inverses)
    pairs = [(Automorphism.identity(ext.N), Automorphism.identity(ext.G))] + [(flip, Automorphism.identity(ext.G))] * 2
    with pytest.raises(NotAHomomorphism):
        lift_group_action(C3, pairs, ext.source, ext)


def test_action_moving_the_outer_class_is_rejected():
    V4, C3 = named_group("V4"), named_group("C3")
    ext = classify(inversion_kernel(V4, C3)).extensions[0]
    fixed = [g for g in range(1, V4.order) if ext.source.lift.S[g].is_identity()]
    psi = next(p for p in automorphism_group(V4) if p.compose(p).is_identity() and p(fixed[0]) != fixed[0])
    identity = Automorphism.identity(C3)
    pairs = [(identity, Automorphism.identity(V4)), (identity, psi)]
    assert compatible_pair(identity, psi, ext.source) is None
    with pytest.raises(NotStabilizing):
        lift_group_action(named_group("C2"), pairs, ext.source, ext)


def test_act_on_cochain(c4_by_c2):
    fs = c4_by_c2["Q8"].source
    phi, psi = Automorphism.identity(fs.N), Automorphism.identity(fs.G)
    assert act_on_cochain(phi, psi, fs.omega) == fs.omega
    with pytest.raises(ValidationError):
        act_on_cochain(phi, psi, center_cocycles(fs)[0])
