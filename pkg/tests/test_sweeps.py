"""Exhaustive cross-checks over small groups; deselect with -m "not slow"."""
import itertools
from functools import lru_cache

import numpy as np
import pytest

from algebra.cohomology import CoefficientModule, Cochain, cohomology, differential
from algebra.crossed_modules import action_data_from_cocycle, build_GS, d_f_torsor, decompose, enlarge, obstruction_Q
from algebra.errors import ValidationError
from algebra.ext_automorphisms import wells_sequence
from algebra.factor_systems import FactorSystem, c1_act, d_s_omega, is_split, product_table
from algebra.groups import center, inner_and_outer, make_group, subgroup_generated
from algebra.kernels import characteristic_class, choose_omega, classify, kernels, torsor_act
from catalog import catalog_names, named_group
from conftest import inversion_action, inversion_kernel, q8_swap_kernel, random_cochain, trivial_kernel, trivial_module

pytestmark = pytest.mark.slow

# every |G| <= 4 against every |N| <= 8, trivial groups left out
SWEEP_PAIRS = [(g, n) for g in catalog_names(4) for n in catalog_names(8) if "C1" not in (g, n)]
VERIFY_LIMIT = 16


@lru_cache(maxsize=None)
def _sweep_kernels():
    found = []
    for n_name in sorted({n for _, n in SWEEP_PAIRS}):
        N = named_group(n_name)
        outer = inner_and_outer(N)
        for g_name in sorted({g for g, m in SWEEP_PAIRS if m == n_name}):
            found.extend(kernels(named_group(g_name), N, outer))
    return tuple(found)


def _kernels(pairs):
    for g_name, n_name in pairs:
        N = named_group(n_name)
        for k in kernels(named_group(g_name), N, inner_and_outer(N)):
            yield k


def _classify(k):
    """classify, with the pairwise inequivalence check only on small H^2."""
    h2 = cohomology(k.G, k.lift.center_module, 2)
    return classify(k, verify=h2.order <= VERIFY_LIMIT)


def _perturbation_finds_cocycle(k, limit=4096):
    """Search w' = w z over normalized z with values in Z(N); None when the search is too large."""
    G, N = k.G, k.N
    omega = choose_omega(k.lift).values
    Z = np.array(center(N).elements)
    cells = list(itertools.product(range(1, G.order), repeat=2))
    if len(Z) ** len(cells) > limit:
        return None
    for choice in itertools.product(Z, repeat=len(cells)):
        z = np.zeros_like(omega)
        for (g, h), value in zip(cells, choice):
            z[g, h] = value
        if FactorSystem(k.lift, Cochain(2, G, N, N.table[omega, z])).is_cocycle:
            return True
    return False


def test_characteristic_class_vanishes_exactly_when_a_factor_system_exists():
    checked = 0
    for k in _sweep_kernels():
        found = _perturbation_finds_cocycle(k)
        if found is None:
            continue
        checked += 1
        assert characteristic_class(k).is_zero() == found
    assert checked > 50


def _moved_obstruction(k, fs, rng):
    """d_S w for the lift moved by a random h in C^1(G, N), w chosen afresh and changed centrally."""
    G, N = k.G, k.N
    h = rng.integers(0, N.order, size=G.order)
    h[0] = 0
    moved = c1_act(Cochain(1, G, N, h), fs).lift
    embedding = k.lift.center[1]
    z = rng.integers(0, len(embedding), size=(G.order, G.order))
    z[0, :] = 0
    z[:, 0] = 0
    omega = N.table[choose_omega(moved).values, embedding[z]]
    return d_s_omega(FactorSystem(moved, Cochain(2, G, N, omega)))


def test_characteristic_class_is_invariant_under_equivalence_moves():
    rng = np.random.default_rng(7)
    for k in _sweep_kernels():
        chi = characteristic_class(k, verify=False)
        h3 = chi.group
        fs = FactorSystem(k.lift, choose_omega(k.lift))
        for _ in range(100):
            moved = _moved_obstruction(k, fs, rng)
            assert h3.class_of(Cochain(3, k.G, h3.module, moved.values)) == chi


def test_torsor_action_is_a_bijection():
    for k in _sweep_kernels():
        classification = _classify(k)
        if classification.obstructed:
            continue
        images = sorted(torsor_act(beta, 0, classification) for beta in classification.h2.classes())
        assert images == list(range(len(classification)))


def test_gs_obstruction_matches_characteristic_class():
    for k in _sweep_kernels():
        gs = build_GS(k)
        assert obstruction_Q(decompose(gs.crossed)) == characteristic_class(k)


def test_wells_sequences_are_exact():
    for k in _kernels([("C2", "C2"), ("C2", "C4"), ("V4", "C2"), ("C2", "Q8"), ("C2", "S3")]):
        for ext in classify(k).extensions:
            assert wells_sequence(ext).exact


def _homomorphic_section(ext):
    """Exhaustive search over normalized set sections of the projection."""
    G, total = ext.G, ext.total
    fibres = [[x for x in range(total.order) if ext.proj(x) == g] for g in range(1, G.order)]
    for choice in itertools.product(*fibres):
        sigma = np.array((0,) + choice)
        if np.array_equal(total.table[np.ix_(sigma, sigma)], sigma[G.table]):
            return sigma
    return None


def test_is_split_agrees_with_section_search():
    for k in _kernels([("C2", "C2"), ("C2", "C4"), ("V4", "C2"), ("C2", "S3"), ("C3", "C3")]):
        for ext in classify(k).extensions:
            assert (is_split(ext.source) is None) == (_homomorphic_section(ext) is None)


def _restricting_cocycle_exists(ad):
    """Search all of Z^2(G, Z), as class representatives plus every d c, for f_G restricting to (f, theta)."""
    G, module, Z = ad.G, ad.module, ad.Z
    n = G.order
    ZT, neg, act, inv = Z.table, Z.inverses, module.action_table, G.inverses
    c = np.zeros((Z.order ** (n - 1), n), dtype=np.int64)
    c[:, 1:] = np.array(list(itertools.product(range(Z.order), repeat=n - 1)), dtype=np.int64)
    g, h = np.indices((n, n))
    coboundaries = ZT[ZT[act[g, c[:, h]], neg[c[:, G.table[g, h]]]], c[:, g]]
    embed = ad.embedding
    x, m = np.indices((n, ad.N.order))
    conjugated = G.table[G.table[inv[x], embed[m]], x]
    for beta in cohomology(G, module, 2).classes():
        f_G = ZT[beta.representative.values[None], coboundaries]
        f_ok = np.all(f_G[:, embed[:, None], embed[None, :]] == ad.f.values, axis=(1, 2))
        theta = ZT[f_G[:, x, conjugated], neg[f_G[:, embed[m], x]]]
        theta_ok = np.all(theta == ad.theta, axis=(1, 2))
        if np.any(f_ok & theta_ok):
            return True
    return False


def _action_data(G, module):
    """Every (f, theta + alpha) over central subgroups of order 2 acting trivially on Z."""
    h2 = cohomology(G, module, 2)
    identity = np.arange(module.order)
    for z in center(G).elements[1:]:
        if G.element_orders[z] != 2 or not np.array_equal(module.action_table[z], identity):
            continue
        normal = subgroup_generated(G, [z])
        for beta in h2.classes():
            ad = action_data_from_cocycle(G, normal, module, beta.representative)
            yield from d_f_torsor(ad).members


def test_enlargement_exists_exactly_when_a_restricting_cocycle_exists():
    C2, C4 = named_group("C2"), named_group("C4")
    modules = [trivial_module(C2, named_group(name)) for name in ("C4", "V4", "D4", "Q8", "C2xC4")]
    modules += [CoefficientModule(C4, named_group(name), inversion_action(named_group(name), C4))
                for name in ("C4", "D4", "Q8")]
    seen = {True: 0, False: 0}
    for module in modules:
        for ad in _action_data(module.actor, module):
            assert not ad.failures()
            found = _restricting_cocycle_exists(ad)
            assert (enlarge(ad) is not None) == found
            assert obstruction_Q(ad).is_zero() == found
            seen[found] += 1
    assert seen[True] + seen[False] >= 50
    assert seen[True]


def test_differential_squares_to_zero_on_random_samples(rng):
    D4, Q8, C4 = named_group("D4"), named_group("Q8"), named_group("C4")
    modules = [
        trivial_module(named_group("C2xC4"), D4),
        trivial_module(named_group("C2xC2xC2"), Q8),
        CoefficientModule(C4, D4, inversion_action(D4, C4)),
    ]
    for module in modules:
        for degree in (1, 2):
            for _ in range(170):
                assert differential(differential(random_cochain(module, degree, rng))).is_zero()


def _random_factor_system(k, rng):
    """choose_omega moved by a random central cochain, so compatibility always holds."""
    G, N = k.G, k.N
    Z = np.array(center(N).elements)
    z = Z[rng.integers(0, len(Z), size=(G.order, G.order))]
    z[0, :] = 0
    z[:, 0] = 0
    return FactorSystem(k.lift, Cochain(2, G, N, N.table[choose_omega(k.lift).values, z]))


def test_random_factor_systems_are_groups_exactly_when_cocycles(rng):
    C2, C4, V4, C3, Q8 = (named_group(n) for n in ("C2", "C4", "V4", "C3", "Q8"))
    ks = [inversion_kernel(C2, C4), trivial_kernel(V4, C2), trivial_kernel(C3, C3), q8_swap_kernel(C2, Q8),
          trivial_kernel(C2, C2)]
    seen = {True: 0, False: 0}
    for _ in range(100):
        for k in ks:
            fs = _random_factor_system(k, rng)
            try:
                make_group(product_table(fs))
                is_group = True
            except ValidationError:
                is_group = False
            assert is_group == fs.is_cocycle
            seen[is_group] += 1
    assert seen[True] and seen[False]
