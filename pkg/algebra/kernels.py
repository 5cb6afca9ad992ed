"""
Kernels and Obstructions
========================
G-kernels (homomorphisms G -> Out(N) with a chosen lift), the
characteristic class in H^3(G, Z(N)), classification of the extensions of
a kernel as an H^2(G, Z(N))-torsor, the Baer product and the split
extensions of a kernel with a homomorphic lift.
"""

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .cohomology import (
    DEFAULT_BUDGET,
    Cochain,
    CohomologyClass,
    CohomologyGroup,
    cohomology,
    crossed_homomorphisms,
)
from .errors import (
    KernelMismatch,
    ModuleMismatch,
    NotACocycle,
    NotAHomomorphismOnClasses,
    ValidationError,
    ensure,
)
from .factor_systems import (
    ExtensionGroup,
    FactorSystem,
    OuterActionLift,
    build_extension,
    c1_act,
    connecting_cochain,
    d_s_omega,
    equivalent,
    extract_factor_system,
    is_split,
)
from .groups import (
    DEFAULT_MAX_ORDER,
    Automorphism,
    AutomorphismCache,
    FiniteGroup,
    GroupMap,
    OuterClassTable,
    Subgroup,
    center,
    coset_representatives,
    direct_product,
    homomorphisms,
    inner_and_outer,
    quotient,
)

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class GKernel:
    """A homomorphism s: G -> Out(N) on class indices together with a lift S."""

    G: FiniteGroup
    N: FiniteGroup
    s: Tuple[int, ...]
    lift: OuterActionLift
    outer: OuterClassTable

    @property
    def S(self) -> List[Automorphism]:
        return self.lift.S

    def same_as(self, other: "GKernel") -> bool:
        return self.G == other.G and self.N == other.N and self.s == other.s


def _outer_table(N: FiniteGroup, outer: Optional[OuterClassTable], bound: int,
                 cache: Optional[AutomorphismCache]) -> OuterClassTable:
    if outer is not None:
        if outer.group != N:
            raise KernelMismatch("outer class table belongs to a different group")
        return outer
    return inner_and_outer(N, bound, cache)


def make_kernel(G: FiniteGroup, N: FiniteGroup, s: Sequence[int], outer: Optional[OuterClassTable] = None,
                bound: int = DEFAULT_MAX_ORDER, cache: Optional[AutomorphismCache] = None) -> GKernel:
    """
    Build a kernel from outer class indices, lifting each class to its
    lexicographically smallest automorphism.

    Args:
        G: Acting group
        N: Group acted on
        s: Out(N) class index for every element of G
        outer: Precomputed class table for N

    Returns:
        The kernel with its canonical lift
    """
    outer = _outer_table(N, outer, bound, cache)
    s = tuple(int(c) for c in s)
    if len(s) != G.order:
        raise ValidationError("class assignment must cover every element of G")
    if any(c < 0 or c >= outer.out_order for c in s):
        raise ValidationError(f"class indices must lie in 0..{outer.out_order - 1}")
    if s[0] != 0:
        raise NotAHomomorphismOnClasses((0, 0))
    out = outer.out_group.table
    for g, h in itertools.product(range(G.order), repeat=2):
        if out[s[g], s[h]] != s[G.table[g, h]]:
            raise NotAHomomorphismOnClasses((g, h))
    lift = OuterActionLift(G, N, [outer.representatives[c] for c in s])
    return GKernel(G, N, s, lift, outer)


def kernel_from_action(G: FiniteGroup, N: FiniteGroup, S: Sequence[Automorphism],
                       outer: Optional[OuterClassTable] = None, bound: int = DEFAULT_MAX_ORDER,
                       cache: Optional[AutomorphismCache] = None) -> GKernel:
    """The kernel of a prescribed lift S, keeping S itself as the lift."""
    outer = _outer_table(N, outer, bound, cache)
    lift = S if isinstance(S, OuterActionLift) else OuterActionLift(G, N, S)
    s = tuple(outer.class_of(a) for a in lift.S)
    out = outer.out_group.table
    for g, h in itertools.product(range(G.order), repeat=2):
        if out[s[g], s[h]] != s[G.table[g, h]]:
            raise NotAHomomorphismOnClasses((g, h))
    return GKernel(G, N, s, lift, outer)


def kernels(G: FiniteGroup, N: FiniteGroup, outer: Optional[OuterClassTable] = None,
            bound: int = DEFAULT_MAX_ORDER, cache: Optional[AutomorphismCache] = None) -> List[GKernel]:
    """Every kernel G -> Out(N), in homomorphism search order."""
    outer = _outer_table(N, outer, bound, cache)
    found = [make_kernel(G, N, hom.image, outer) for hom in homomorphisms(G, outer.out_group)]
    logger.debug("%d kernels of a group of order %d on a group of order %d", len(found), G.order, N.order)
    return found


def choose_omega(lift: OuterActionLift) -> Cochain:
    """w(g, g') = smallest n with c_n = S(g) S(g') S(gg')^-1."""
    n = lift.G.order
    values = np.zeros((n, n), dtype=np.int64)
    for g, h in itertools.product(range(n), repeat=2):
        values[g, h] = lift.delta_preimages(g, h)[0]
    return Cochain(2, lift.G, lift.N, values)


def _random_central_cochain(lift: OuterActionLift, degree: int, rng: np.random.Generator) -> Cochain:
    module = lift.center_module
    shape = (lift.G.order,) * degree
    values = rng.integers(0, module.order, size=shape)
    for axis in range(degree):
        index = [slice(None)] * degree
        index[axis] = 0
        values[tuple(index)] = 0
    return Cochain(degree, lift.G, module, values)


def _random_cochain(G: FiniteGroup, N: FiniteGroup, rng: np.random.Generator) -> Cochain:
    values = rng.integers(0, N.order, size=G.order)
    values[0] = 0
    return Cochain(1, G, N, values)


def characteristic_class(k: GKernel, verify: bool = True,
                         rng: Optional[np.random.Generator] = None) -> CohomologyClass:
    """
    The class of d_S w in H^3(G, Z(N)) for w = choose_omega(S).

    With verify, the class is recomputed from a centrally perturbed w and
    from a lift moved by a random 1-cochain, and all three must agree.
    """
    fs = FactorSystem(k.lift, choose_omega(k.lift))
    h3 = cohomology(k.G, k.lift.center_module, 3)
    chi = h3.class_of(d_s_omega(fs))
    if verify:
        rng = rng or np.random.default_rng(0)
        embedding = k.lift.center[1]
        beta = _random_central_cochain(k.lift, 2, rng)
        perturbed = FactorSystem(k.lift, Cochain(2, k.G, k.N, k.N.table[fs.omega.values, embedding[beta.values]]))
        ensure(h3.class_of(d_s_omega(perturbed)) == chi, "characteristic class depends on the choice of omega")
        moved = c1_act(_random_cochain(k.G, k.N, rng), fs).lift
        again = d_s_omega(FactorSystem(moved, choose_omega(moved)))
        ensure(h3.class_of(Cochain(3, k.G, h3.module, again.values)) == chi,
               "characteristic class depends on the choice of lift")
    return chi


@dataclass
class ExtClassification:
    """Extension classes of a kernel: empty when obstructed, else one factor system per H^2 class."""

    kernel: GKernel
    obstruction: CohomologyClass
    base: Optional[FactorSystem] = None
    h2: Optional[CohomologyGroup] = None
    coordinates: List[Tuple[int, ...]] = field(default_factory=list)
    classes: List[FactorSystem] = field(default_factory=list)

    @property
    def obstructed(self) -> bool:
        return self.base is None

    def __len__(self) -> int:
        return len(self.classes)

    @cached_property
    def extensions(self) -> List[ExtensionGroup]:
        return [build_extension(fs) for fs in self.classes]

    def offset(self, fs: FactorSystem) -> Tuple[int, ...]:
        """H^2 coordinates of fs relative to the base, after moving fs onto the base lift."""
        if self.base is None:
            raise KernelMismatch("an obstructed kernel has no extension classes")
        h0 = connecting_cochain(fs, self.base)
        if h0 is None:
            raise KernelMismatch("factor system does not belong to this kernel")
        moved = c1_act(h0, fs)
        N = self.kernel.N
        ratio = N.table[moved.omega.values, N.inverses[self.base.omega.values]]
        position = self.base.lift.center_position
        ensure(bool(np.all(position[ratio] >= 0)), "omega ratio over a shared lift is not central")
        return self.h2.class_of(Cochain(2, self.kernel.G, self.h2.module, position[ratio])).coords

    def locate(self, fs: FactorSystem) -> int:
        """Index of the class containing fs."""
        return self.coordinates.index(self.offset(fs))


def classify(k: GKernel, verify: bool = True) -> ExtClassification:
    """
    Classify the extensions of G by N with outer action s.

    Returns:
        An empty classification when the characteristic class is nonzero,
        otherwise a base factor system and one class per element of
        H^2(G, Z(N)), in lexicographic coordinate order.
    """
    chi = characteristic_class(k, verify=verify)
    if not chi.is_zero():
        logger.debug("kernel %s is obstructed", k.s)
        return ExtClassification(k, chi)
    G, N = k.G, k.N
    module, embedding = k.lift.center
    omega = choose_omega(k.lift)
    obstruction = d_s_omega(FactorSystem(k.lift, omega))
    beta = cohomology(G, module, 3).preimage(obstruction)
    ensure(beta is not None, "zero characteristic class without a preimage")
    base_omega = N.table[omega.values, N.inverses[embedding[beta.values]]]
    base = FactorSystem(k.lift, Cochain(2, G, N, base_omega))
    ensure(base.is_cocycle, "corrected omega is not a cocycle")
    h2 = cohomology(G, module, 2)
    coordinates, classes = [], []
    for c in h2.classes():
        values = N.table[base.omega.values, embedding[c.representative.values]]
        coordinates.append(c.coords)
        classes.append(FactorSystem(k.lift, Cochain(2, G, N, values)))
    if verify:
        for i, j in itertools.combinations(range(len(classes)), 2):
            ensure(equivalent(classes[i], classes[j]) is None, f"classes {i} and {j} are equivalent")
    logger.debug("kernel %s has %d extension classes", k.s, len(classes))
    return ExtClassification(k, chi, base, h2, coordinates, classes)


def torsor_act(beta: CohomologyClass, index: int, classification: ExtClassification) -> int:
    """The class of (S, w * beta) for the factor system (S, w) of class `index`."""
    if classification.h2 is None or beta.group.module != classification.h2.module or beta.group.degree != 2:
        raise KernelMismatch("class does not act on this classification")
    fs = classification.classes[index]
    N = classification.kernel.N
    embedding = classification.kernel.lift.center[1]
    values = N.table[fs.omega.values, embedding[beta.representative.values]]
    return classification.locate(FactorSystem(fs.lift, Cochain(2, fs.G, N, values)))


def baer_product(abelian_ext: ExtensionGroup, ext: ExtensionGroup) -> ExtensionGroup:
    """
    Fibre product of the two extensions over G modulo the antidiagonal
    copy of Z(N), re-expressed as N x_(S, w) G through its canonical section.
    """
    fs1, fs2 = abelian_ext.source, ext.source
    if fs1.G != fs2.G:
        raise ModuleMismatch("extensions are over different groups")
    module, embedding = fs2.lift.center
    if fs1.N != module.carrier or not np.array_equal(fs1.lift.act, module.action_table):
        raise ModuleMismatch("abelian extension is not an extension by the G-module Z(N)")
    T1, T2 = abelian_ext.total, ext.total
    n1 = T1.order
    product = direct_product(T1, T2)
    a, b = np.arange(product.order) % n1, np.arange(product.order) // n1
    fibre = np.nonzero(abelian_ext.proj.image[a] == ext.proj.image[b])[0]
    H, h_embed = Subgroup(product, tuple(int(x) for x in fibre)).as_group()
    position = np.full(product.order, -1, dtype=np.int64)
    position[h_embed] = np.arange(len(h_embed))
    z = np.arange(module.order)
    anti = position[abelian_ext.iota.image[z] + n1 * ext.iota.image[fs2.N.inverses[embedding[z]]]]
    total, qmap = quotient(H, Subgroup(H, tuple(sorted(int(x) for x in anti))))
    reps = coset_representatives(qmap)
    iota = GroupMap(fs2.N, total, qmap.image[position[n1 * ext.iota.image]])
    proj = GroupMap(total, fs2.G, abelian_ext.proj.image[h_embed[reps] % n1])
    section = qmap.image[position[abelian_ext.section + n1 * ext.section]]
    fs = extract_factor_system(total, iota, proj, section)
    result = build_extension(fs)
    expected = FactorSystem(fs2.lift, Cochain(2, fs2.G, fs2.N, fs2.N.table[fs2.omega.values, embedding[fs1.omega.values]]))
    ensure(equivalent(fs, expected) is not None, "Baer product disagrees with the cocycle product")
    return result


def adjoint_quotient(N: FiniteGroup) -> Tuple[FiniteGroup, GroupMap, np.ndarray]:
    """N_ad = N / Z(N) with its projection and smallest coset representatives."""
    Nad, proj = quotient(N, center(N))
    return Nad, proj, coset_representatives(proj)


def adjoint_action(k: GKernel) -> List[Automorphism]:
    Nad, proj, reps = adjoint_quotient(k.N)
    return [Automorphism(Nad, proj.image[row[reps]]) for row in k.lift.act]


def _require_homomorphic_lift(k: GKernel) -> None:
    if not k.lift.is_homomorphism():
        raise ValidationError("kernel lift must be a homomorphism G -> Aut(N)")


def connecting_delta(k: GKernel, f: Cochain) -> CohomologyClass:
    """[d_S f^] in H^2(G, Z(N)) for a pointwise lift f^ of a cocycle f: G -> N_ad."""
    _require_homomorphic_lift(k)
    Nad, proj, reps = adjoint_quotient(k.N)
    if f.degree != 1 or f.group != Nad:
        raise ValidationError("f must be a 1-cochain with values in N / Z(N)")
    G = k.G
    act_ad = np.array([a.forward for a in adjoint_action(k)])
    TG, Tad = G.table, Nad.table
    a, b = np.indices((G.order, G.order))
    defect = np.argwhere(f.values[TG[a, b]] != Tad[f.values[a], act_ad[a, f.values[b]]])
    if len(defect):
        raise NotACocycle(tuple(int(i) for i in defect[0]))
    h2 = cohomology(G, k.lift.center_module, 2)

    def lift_class(lifted: np.ndarray) -> CohomologyClass:
        N = k.N
        T, inv = N.table, N.inverses
        values = T[T[lifted[a], k.lift.act[a, lifted[b]]], inv[lifted[TG[a, b]]]]
        position = k.lift.center_position[values]
        ensure(bool(np.all(position >= 0)), "d_S of the lifted cochain is not central")
        return h2.class_of(Cochain(2, G, h2.module, position))

    smallest = reps[f.values]
    chosen = lift_class(smallest)
    largest = np.array([max(np.nonzero(proj.image == x)[0]) if g else 0 for g, x in enumerate(f.values)])
    ensure(lift_class(largest) == chosen, "connecting map depends on the lift")
    return chosen


def split_classes(classification: ExtClassification, budget: int = DEFAULT_BUDGET) -> List[int]:
    """Indices of the classes whose extensions admit a homomorphic section."""
    return [i for i, fs in enumerate(classification.classes) if is_split(fs, budget) is not None]


def connecting_split_classes(classification: ExtClassification, budget: int = DEFAULT_BUDGET) -> List[int]:
    """Indices of -delta(f).[N x_S G] for f running over Z^1(G, N_ad)."""
    k = classification.kernel
    _require_homomorphic_lift(k)
    Nad = adjoint_quotient(k.N)[0]
    module, embedding = k.lift.center
    G, N = k.G, k.N
    found = set()
    for f in crossed_homomorphisms(G, Nad, adjoint_action(k), budget):
        delta = connecting_delta(k, Cochain(1, G, Nad, f.values))
        values = embedding[(-delta.representative).values]
        found.add(classification.locate(FactorSystem(k.lift, Cochain(2, G, N, values))))
    return sorted(found)


def semidirect_twist_equivalent(G: FiniteGroup, N: FiniteGroup, S: Sequence[Automorphism], h: Cochain) -> bool:
    """
    Whether N x_S G and N x_(S_h) G are equivalent, where S_h = (C_N o h) S.
    Requires d_S h to be central; the answer is checked against [d_S h] = 0.
    """
    semidirect_base = FactorSystem(OuterActionLift(G, N, S), Cochain.zero(2, G, N))
    if not semidirect_base.lift.is_homomorphism():
        raise ValidationError("S must be a homomorphism G -> Aut(N)")
    moved = c1_act(h, semidirect_base)
    position = semidirect_base.lift.center_position[moved.omega.values]
    if np.any(position < 0):
        raise ValidationError("d_S h is not central")
    twisted = FactorSystem(moved.lift, Cochain.zero(2, G, N))
    verdict = equivalent(semidirect_base, twisted) is not None
    module = semidirect_base.lift.center_module
    ensure(verdict == cohomology(G, module, 2).is_coboundary(Cochain(2, G, module, position)),
           "semidirect twist verdict disagrees with the class of d_S h")
    return verdict
