"""
Extension Automorphisms
=======================
Automorphisms of N x_(S, omega) G that map N onto itself, organised by the
exact sequence

    Z^1(G, Z(N)) -> Aut(G^, N) -> Comp(S) -> H^2(G, Z(N))

together with the Wells cocycle, the gauge group and the lifting of group
actions on (N, G) to the extension.
"""

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .cohomology import (
    DEFAULT_BUDGET,
    Cochain,
    CoefficientModule,
    CohomologyClass,
    cohomology,
    crossed_homomorphisms,
)
from .errors import BoundExceeded, NotAHomomorphism, NotCompatible, NotStabilizing, ValidationError, ensure
from .factor_systems import (
    ExtensionGroup,
    FactorSystem,
    OuterActionLift,
    c1_act,
    connecting_cochain,
)
from .groups import DEFAULT_MAX_ORDER, Automorphism, AutomorphismCache, FiniteGroup, GroupMap, automorphism_group

logger = logging.getLogger(__name__)


def pair_action(phi: Automorphism, psi: Automorphism, fs: FactorSystem) -> FactorSystem:
    """(phi, psi).(S, w) = (c_phi o S o psi^-1, phi o w o (psi^-1 x psi^-1))."""
    back = psi.backward
    act = phi.forward[fs.lift.act[back][:, phi.backward]]
    omega = phi.forward[fs.omega.values[np.ix_(back, back)]]
    lift = OuterActionLift(fs.G, fs.N, [Automorphism(fs.N, row) for row in act])
    moved = FactorSystem(lift, Cochain(2, fs.G, fs.N, omega))
    expected = phi.forward[fs.obstruction_values[np.ix_(back, back, back)]]
    ensure(np.array_equal(moved.obstruction_values, expected), "pair action does not transport d_S omega")
    return moved


def act_on_cochain(phi: Automorphism, psi: Automorphism, c: Cochain,
                   embedding: Optional[np.ndarray] = None) -> Cochain:
    """phi o c o (psi^-1)^p; Z(N)-valued cochains need the embedding of Z(N) into N."""
    back = psi.backward
    values = c.values[np.ix_(*([back] * c.degree))] if c.degree else c.values
    if c.abelian:
        if embedding is None:
            raise ValidationError("embedding of the coefficient group into N is required")
        position = np.full(phi.base.order, -1, dtype=np.int64)
        position[embedding] = np.arange(len(embedding))
        mapped = position[phi.forward[embedding[values]]]
        ensure(bool(np.all(mapped >= 0)), "phi does not preserve the coefficient subgroup")
        return Cochain(c.degree, c.actor, c.coefficients, mapped)
    return Cochain(c.degree, c.actor, c.coefficients, phi.forward[values])


def pair_isomorphism(phi: Automorphism, psi: Automorphism, ext: ExtensionGroup,
                     target: ExtensionGroup) -> GroupMap:
    """(n, g) -> (phi(n), psi(g)) from ext onto the extension of (phi, psi).(S, w)."""
    n, g = np.arange(ext.total.order) % ext.N.order, np.arange(ext.total.order) // ext.N.order
    image = phi.forward[n] + ext.N.order * psi.forward[g]
    iso = GroupMap(ext.total, target.total, image)
    ensure(iso.failure() is None, "(phi, psi) does not induce an isomorphism of extensions")
    return iso


@dataclass(frozen=True, eq=False)
class CompatiblePair:
    phi: Automorphism
    psi: Automorphism
    h0: Cochain

    def compose(self, other: "CompatiblePair", fs: FactorSystem) -> "CompatiblePair":
        composed = compatible_pair(self.phi.compose(other.phi), self.psi.compose(other.psi), fs)
        ensure(composed is not None, "composite of compatible pairs is not compatible")
        return composed


def compatible_pair(phi: Automorphism, psi: Automorphism, fs: FactorSystem) -> Optional[CompatiblePair]:
    """The pair with its pointwise witness h0, c_{h0(g)} S(g) = ((phi, psi).S)(g), or None."""
    h0 = connecting_cochain(fs, pair_action(phi, psi, fs))
    return None if h0 is None else CompatiblePair(phi, psi, h0)


def _automorphisms(group: FiniteGroup, given: Optional[Sequence[Automorphism]], bound: int,
                   cache: Optional[AutomorphismCache]) -> List[Automorphism]:
    return list(given) if given is not None else automorphism_group(group, bound, cache)


def compatible_pairs(fs: FactorSystem, auts_n: Optional[Sequence[Automorphism]] = None,
                     auts_g: Optional[Sequence[Automorphism]] = None, bound: int = DEFAULT_MAX_ORDER,
                     cache: Optional[AutomorphismCache] = None) -> List[CompatiblePair]:
    """Comp(S), ordered by (phi, psi) position in the automorphism lists."""
    auts_n = _automorphisms(fs.N, auts_n, bound, cache)
    auts_g = _automorphisms(fs.G, auts_g, bound, cache)
    found = []
    for phi, psi in itertools.product(auts_n, auts_g):
        pair = compatible_pair(phi, psi, fs)
        if pair is not None:
            found.append(pair)
    logger.debug("%d compatible pairs out of %d", len(found), len(auts_n) * len(auts_g))
    return found


def _require_compatible(pair: CompatiblePair, fs: FactorSystem) -> FactorSystem:
    paired = pair_action(pair.phi, pair.psi, fs)
    moved = c1_act(pair.h0, fs)
    bad = np.argwhere(np.any(moved.lift.act != paired.lift.act, axis=1))
    if len(bad):
        raise NotCompatible(int(bad[0][0]))
    return paired


def _wells_cochain(pair: CompatiblePair, fs: FactorSystem) -> Cochain:
    paired = _require_compatible(pair, fs)
    moved = c1_act(pair.h0, fs)
    N = fs.N
    ratio = N.table[paired.omega.values, N.inverses[moved.omega.values]]
    position = fs.lift.center_position[ratio]
    ensure(bool(np.all(position >= 0)), "omega ratio of a compatible pair is not central")
    return Cochain(2, fs.G, fs.lift.center_module, position)


def wells_cocycle(pair: CompatiblePair, fs: FactorSystem) -> CohomologyClass:
    """I(phi, psi) = [(phi, psi).w - h0 *_S w] in H^2(G, Z(N))."""
    beta = _wells_cochain(pair, fs)
    return cohomology(fs.G, beta.coefficients, 2).class_of(beta)


def check_wells_cocycle_law(pairs: Sequence[CompatiblePair], fs: FactorSystem) -> bool:
    """I(pp') = p.I(p') + I(p) for every ordered pair drawn from `pairs`."""
    embedding = fs.lift.center[1]
    for p, q in itertools.product(pairs, repeat=2):
        composite = wells_cocycle(p.compose(q, fs), fs)
        moved = act_on_cochain(p.phi, p.psi, wells_cocycle(q, fs).representative, embedding)
        h2 = composite.group
        if composite != h2.class_of(moved) + wells_cocycle(p, fs):
            return False
    return True


@dataclass(frozen=True, eq=False)
class ExtAutomorphism:
    """nu(n, g) = (phi(n) h(psi(g)), psi(g)) on the flattened extension."""

    ext: ExtensionGroup
    nu: Automorphism
    phi: Automorphism
    psi: Automorphism
    h: Cochain

    @property
    def induced_on_N(self) -> Automorphism:
        return self.phi

    @property
    def induced_on_G(self) -> Automorphism:
        return self.psi

    @property
    def pair(self) -> Tuple[Automorphism, Automorphism]:
        return self.phi, self.psi

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ExtAutomorphism) and self.nu == other.nu

    def __hash__(self) -> int:
        return hash(self.nu)


def _assemble(ext: ExtensionGroup, phi: Automorphism, psi: Automorphism, h: Cochain) -> ExtAutomorphism:
    nN = ext.N.order
    n, g = np.arange(ext.total.order) % nN, np.arange(ext.total.order) // nN
    image_g = psi.forward[g]
    forward = ext.N.table[phi.forward[n], h.values[image_g]] + nN * image_g
    ensure(len(np.unique(forward)) == ext.total.order, "normal form is not a bijection")
    nu = Automorphism(ext.total, forward)
    ensure(nu.as_map().failure() is None, "normal form does not define an automorphism")
    return ExtAutomorphism(ext, nu, phi, psi, h)


def lift_pair(pair: CompatiblePair, fs: FactorSystem, ext: ExtensionGroup) -> Optional[ExtAutomorphism]:
    """An automorphism of the extension inducing (phi, psi), or None when I(phi, psi) != 0."""
    if ext.source != fs:
        raise ValidationError("extension was not built from this factor system")
    beta = _wells_cochain(pair, fs)
    gamma = cohomology(fs.G, beta.coefficients, 2).preimage(beta)
    if gamma is None:
        return None
    embedding = fs.lift.center[1]
    h = Cochain(1, fs.G, fs.N, fs.N.table[pair.h0.values, embedding[gamma.values]])
    ensure(c1_act(h, fs) == pair_action(pair.phi, pair.psi, fs), "corrected h does not realise the pair")
    return _assemble(ext, pair.phi, pair.psi, h)


def psi_map(f: Cochain, ext: ExtensionGroup) -> ExtAutomorphism:
    """(n, g) -> (n f(g), g) for f in Z^1(G, Z(N))."""
    fs = ext.source
    if not cohomology(fs.G, fs.lift.center_module, 1).is_cocycle(f):
        raise ValidationError("f is not a 1-cocycle with values in Z(N)")
    embedding = fs.lift.center[1]
    h = Cochain(1, fs.G, fs.N, embedding[f.values])
    return _assemble(ext, Automorphism.identity(fs.N), Automorphism.identity(fs.G), h)


def center_cocycles(fs: FactorSystem, budget: int = DEFAULT_BUDGET) -> List[Cochain]:
    """Z^1(G, Z(N)) as Z(N)-valued cochains on the center module."""
    module = fs.lift.center_module
    found = crossed_homomorphisms(fs.G, module.carrier, module.action, budget)
    return [Cochain(1, fs.G, module, f.values) for f in found]


def aut_preserving(ext: ExtensionGroup, auts_n: Optional[Sequence[Automorphism]] = None,
                   auts_g: Optional[Sequence[Automorphism]] = None, bound: int = DEFAULT_MAX_ORDER,
                   budget: int = DEFAULT_BUDGET, cache: Optional[AutomorphismCache] = None,
                   oracle: bool = False) -> List[ExtAutomorphism]:
    """
    Aut(G^, N) assembled from liftable compatible pairs and Z^1(G, Z(N)).

    Args:
        ext: Extension built from a factor system
        oracle: Also filter Aut(G^) by brute force and require the same set

    Returns:
        Automorphisms sorted by their forward arrays
    """
    fs = ext.source
    if ext.total.order > bound:
        raise BoundExceeded("extension order", ext.total.order, bound)
    embedding = fs.lift.center[1]
    cocycles = center_cocycles(fs, budget)
    found = []
    for pair in compatible_pairs(fs, auts_n, auts_g, bound, cache):
        base = lift_pair(pair, fs, ext)
        if base is None:
            continue
        for z in cocycles:
            h = Cochain(1, fs.G, fs.N, fs.N.table[base.h.values, embedding[z.values]])
            found.append(_assemble(ext, pair.phi, pair.psi, h))
    found.sort(key=lambda a: a.nu.forward.tolist())
    if oracle:
        brute = aut_preserving_bruteforce(ext, bound, cache)
        ensure([a.nu.key for a in brute] == [a.nu.key for a in found],
               "constructed Aut(G^, N) disagrees with brute force")
    logger.debug("|Aut(G^, N)| = %d", len(found))
    return found


def normal_form(nu: Automorphism, ext: ExtensionGroup) -> ExtAutomorphism:
    """Read (phi, psi, h) off an automorphism of the total group preserving N."""
    nN = ext.N.order
    fs = ext.source
    on_n = nu.forward[ext.iota.image]
    if np.any(on_n >= nN):
        raise ValidationError("automorphism does not preserve N")
    phi = Automorphism(fs.N, on_n)
    psi = Automorphism(fs.G, ext.proj.image[nu.forward[ext.section]])
    h = Cochain(1, fs.G, fs.N, nu.forward[ext.section[psi.backward]] % nN)
    form = _assemble(ext, phi, psi, h)
    ensure(form.nu == nu, "normal form does not reproduce the automorphism")
    return form


def aut_preserving_bruteforce(ext: ExtensionGroup, bound: int = DEFAULT_MAX_ORDER,
                              cache: Optional[AutomorphismCache] = None) -> List[ExtAutomorphism]:
    """Every automorphism of the total group mapping N onto itself, in normal form."""
    nN = ext.N.order
    found = [
        normal_form(nu, ext)
        for nu in automorphism_group(ext.total, bound, cache)
        if np.all(nu.forward[ext.iota.image] < nN)
    ]
    found.sort(key=lambda a: a.nu.forward.tolist())
    return found


@dataclass
class WellsSequence:
    """Both exactness statements of the four-term sequence, computed from brute force."""

    automorphisms: List[ExtAutomorphism]
    kernel_is_image_of_psi: bool
    image_is_wells_kernel: bool

    @property
    def exact(self) -> bool:
        return self.kernel_is_image_of_psi and self.image_is_wells_kernel


def wells_sequence(ext: ExtensionGroup, auts_n: Optional[Sequence[Automorphism]] = None,
                   auts_g: Optional[Sequence[Automorphism]] = None, bound: int = DEFAULT_MAX_ORDER,
                   budget: int = DEFAULT_BUDGET, cache: Optional[AutomorphismCache] = None) -> WellsSequence:
    fs = ext.source
    brute = aut_preserving_bruteforce(ext, bound, cache)
    kernel = {a.nu.key for a in brute if a.phi.is_identity() and a.psi.is_identity()}
    psi_image = {psi_map(f, ext).nu.key for f in center_cocycles(fs, budget)}
    image = {(a.phi.key, a.psi.key) for a in brute}
    liftable = {
        (pair.phi.key, pair.psi.key)
        for pair in compatible_pairs(fs, auts_n, auts_g, bound, cache)
        if wells_cocycle(pair, fs).is_zero()
    }
    return WellsSequence(brute, kernel == psi_image, image == liftable)


def conjugation_pairs(ext: ExtensionGroup) -> List[ExtAutomorphism]:
    """Conjugation by the section element over each g, with phi = S(g) and psi = c_g."""
    fs = ext.source
    found = []
    for g in range(fs.G.order):
        nu = Automorphism.conjugation(ext.total, int(ext.section[g]))
        form = normal_form(nu, ext)
        ensure(form.phi == fs.lift.S[g], "conjugation does not restrict to S(g) on N")
        ensure(form.psi == Automorphism.conjugation(fs.G, g), "conjugation does not induce c_g on G")
        found.append(form)
    return found


def conjugation_twist_identity(fs: FactorSystem, n: int) -> bool:
    """(c_n, id).(S, w) = h.(S, w) for h(g) = n S(g)(n^-1)."""
    N = fs.N
    values = N.table[n, fs.lift.act[:, N.inverses[n]]]
    moved = c1_act(Cochain(1, fs.G, N, values), fs)
    return moved == pair_action(Automorphism.conjugation(N, n), Automorphism.identity(fs.G), fs)


@dataclass
class GaugeGroup:
    """Gau(G^) as automorphisms over id_G and as the units of the twisted monoid Z^1(G^, N)."""

    automorphisms: List[ExtAutomorphism]
    units: List[Cochain]
    monoid: List[Cochain]

    @property
    def order(self) -> int:
        return len(self.units)


def _gauge_map(f: Cochain, ext: ExtensionGroup) -> np.ndarray:
    """phi_f(x) = f(x) x"""
    return ext.total.table[ext.iota.image[f.values], np.arange(ext.total.order)]


def monoid_product(f1: Cochain, f2: Cochain, ext: ExtensionGroup) -> Cochain:
    """(f1 * f2)(x) = f1(f2(x) x) f2(x), so that phi_{f1 * f2} = phi_f1 o phi_f2."""
    moved = _gauge_map(f2, ext)
    return Cochain(1, f1.actor, f1.coefficients, ext.N.table[f1.values[moved], f2.values])


def gauge_group(ext: ExtensionGroup, budget: int = DEFAULT_BUDGET,
                auts_n: Optional[Sequence[Automorphism]] = None,
                auts_g: Optional[Sequence[Automorphism]] = None,
                bound: int = DEFAULT_MAX_ORDER, cache: Optional[AutomorphismCache] = None) -> GaugeGroup:
    """Gau(G^) two ways, required to agree."""
    fs = ext.source
    total = ext.total
    conjugation = [
        Automorphism(fs.N, np.asarray(total.table[total.table[x, ext.iota.image], total.inverses[x]]))
        for x in range(total.order)
    ]
    monoid = crossed_homomorphisms(total, fs.N, conjugation, budget)
    units = [f for f in monoid if len(np.unique(_gauge_map(f, ext))) == total.order]
    automorphisms = [
        a for a in aut_preserving(ext, auts_n, [Automorphism.identity(fs.G)], bound, budget, cache)
        if a.psi.is_identity()
    ]
    ensure(
        sorted(_gauge_map(f, ext).tobytes() for f in units) == sorted(a.nu.key for a in automorphisms),
        "gauge automorphisms disagree with the units of Z^1(G^, N)",
    )
    return GaugeGroup(automorphisms, units, monoid)


@dataclass
class GroupActionLift:
    """Either theta and the lifted action of H, or the obstruction class in H^2(H, Z^1(G, Z(N)))."""

    obstruction: CohomologyClass
    theta: Optional[List[Cochain]] = None
    action: Optional[List[Automorphism]] = None

    @property
    def lifts(self) -> bool:
        return self.action is not None


@dataclass
class _CocycleModule:
    group: FiniteGroup
    cocycles: List[Cochain]

    @cached_property
    def index(self):
        return {c.values.tobytes(): i for i, c in enumerate(self.cocycles)}

    def position(self, values: np.ndarray) -> int:
        return self.index[np.asarray(values, dtype=np.int64).tobytes()]


def _cocycle_module(fs: FactorSystem, budget: int) -> _CocycleModule:
    cocycles = center_cocycles(fs, budget)
    index = {c.values.tobytes(): i for i, c in enumerate(cocycles)}
    ZT = fs.lift.center_module.carrier.table
    table = np.array([[index[ZT[a.values, b.values].tobytes()] for b in cocycles] for a in cocycles], dtype=np.int64)
    return _CocycleModule(FiniteGroup(table, label="Z^1(G, Z(N))"), cocycles)


def lift_group_action(H: FiniteGroup, pairs: Sequence[Tuple[Automorphism, Automorphism]],
                      fs: FactorSystem, ext: ExtensionGroup, budget: int = DEFAULT_BUDGET) -> GroupActionLift:
    """
    Lift h -> (phi_h, psi_h) to an action of H on the extension.

    theta0(h) is chosen with theta0(h)^-1.(S, w) = (phi_h, psi_h).(S, w); the
    defect d_H theta0 is a 2-cocycle in Z^1(G, Z(N)) and the action lifts
    exactly when its class vanishes.
    """
    if len(pairs) != H.order:
        raise ValidationError("one automorphism pair is needed for every element of H")
    for h, k in itertools.product(range(H.order), repeat=2):
        hk = int(H.table[h, k])
        if pairs[h][0].compose(pairs[k][0]) != pairs[hk][0] or pairs[h][1].compose(pairs[k][1]) != pairs[hk][1]:
            raise NotAHomomorphism((h, k), f"pair assignment is not a homomorphism at {(h, k)}")
    N, G = fs.N, fs.G
    T, inv = N.table, N.inverses
    theta0 = []
    for h, (phi, psi) in enumerate(pairs):
        pair = compatible_pair(phi, psi, fs)
        lifted = lift_pair(pair, fs, ext) if pair is not None else None
        if lifted is None:
            raise NotStabilizing(h)
        theta0.append(inv[lifted.h.values])

    def moved(h: int, values: np.ndarray) -> np.ndarray:
        phi, psi = pairs[h]
        return phi.forward[values[psi.backward]]

    embedding = fs.lift.center[1]
    z_position = fs.lift.center_position
    module_data = _cocycle_module(fs, budget)
    M = module_data.group
    action = []
    for h, (phi, psi) in enumerate(pairs):
        image = [module_data.position(z_position[moved(h, embedding[c.values])]) for c in module_data.cocycles]
        action.append(Automorphism(M, image))
    module = CoefficientModule(M, H, action)
    defect = np.zeros((H.order, H.order), dtype=np.int64)
    for h, k in itertools.product(range(H.order), repeat=2):
        values = T[T[theta0[h], moved(h, theta0[k])], inv[theta0[int(H.table[h, k])]]]
        central = z_position[values]
        ensure(bool(np.all(central >= 0)), "d_H theta0 is not central")
        defect[h, k] = module_data.position(central)
    h2 = cohomology(H, module, 2)
    obstruction = h2.class_of(Cochain(2, H, module, defect))
    eta = h2.preimage(obstruction.representative)
    if eta is None:
        logger.debug("group action of order %d does not lift", H.order)
        return GroupActionLift(obstruction)
    theta = []
    automorphisms = []
    for h, (phi, psi) in enumerate(pairs):
        correction = embedding[module_data.cocycles[int(eta.values[h])].values]
        values = T[theta0[h], inv[correction]]
        theta.append(Cochain(1, G, N, values))
        automorphisms.append(_assemble(ext, phi, psi, Cochain(1, G, N, inv[values])).nu)
    for h, k in itertools.product(range(H.order), repeat=2):
        ensure(automorphisms[h].compose(automorphisms[k]) == automorphisms[int(H.table[h, k])],
               "lifted action is not a homomorphism")
    return GroupActionLift(obstruction, theta, automorphisms)
