"""
Factor Systems
==============
Pairs (S, omega) describing an extension of G by N, the group law on
N x G they induce, the C^1(G, N)-action on pairs and the equivalence and
splitting tests built on it.

Elements of an extension are flattened as (n, g) -> n + |N| * g, so the
canonical section is g -> |N| * g.
"""

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .cohomology import (
    DEFAULT_BUDGET,
    Cochain,
    CoefficientModule,
    action_array,
    center_module,
    cohomology,
    differential,
    homomorphism_failure,
)
from .errors import (
    BoundExceeded,
    CompatibilityViolated,
    KernelMismatch,
    NotACocycle,
    NotAHomomorphism,
    NotInner,
    ValidationError,
    ensure,
)
from .groups import Automorphism, FiniteGroup, GroupMap, _search
from .orbits import UnionFind

logger = logging.getLogger(__name__)


@lru_cache(maxsize=64)
def conjugation_array(N: FiniteGroup) -> np.ndarray:
    """conj[n, x] = n x n^-1"""
    T, inv = N.table, N.inverses
    return T[T, inv[:, None]]


@lru_cache(maxsize=64)
def inner_preimages(N: FiniteGroup) -> Dict[bytes, List[int]]:
    """Forward array of each inner automorphism -> sorted list of n with c_n equal to it."""
    conj = conjugation_array(N)
    found: Dict[bytes, List[int]] = {}
    for n in range(N.order):
        found.setdefault(conj[n].tobytes(), []).append(n)
    return found


class OuterActionLift:
    """S: G -> Aut(N) with S(1) = id and S(g)S(g')S(gg')^-1 inner for all g, g'."""

    def __init__(self, G: FiniteGroup, N: FiniteGroup, S: Sequence[Automorphism]):
        if len(S) != G.order:
            raise ValidationError("lift must assign one automorphism to every element of G")
        self.G = G
        self.N = N
        self.S = list(S)
        self.act = action_array(self.S)
        self.back = np.array([s.backward for s in self.S], dtype=np.int64)
        self.act.setflags(write=False)
        self.back.setflags(write=False)
        if not self.S[0].is_identity():
            raise ValidationError("S(1) must be the identity automorphism")
        where = self.inner_failure()
        if where is not None:
            raise NotInner(where)

    @cached_property
    def delta(self) -> np.ndarray:
        """delta[g, g', x] = S(g) S(g') S(gg')^-1 (x)"""
        n = self.G.order
        a, b = np.indices((n, n))
        inner = self.back[self.G.table[a, b]]
        return self.act[a[..., None], self.act[b[..., None], inner]]

    def inner_failure(self) -> Optional[Tuple[int, int]]:
        inner = inner_preimages(self.N)
        for g, h in itertools.product(range(self.G.order), repeat=2):
            if self.delta[g, h].tobytes() not in inner:
                return g, h
        return None

    def delta_preimages(self, g: int, h: int) -> List[int]:
        """Sorted {n : c_n = delta_S(g, h)}, a coset of Z(N)."""
        return inner_preimages(self.N)[self.delta[g, h].tobytes()]

    def is_homomorphism(self) -> bool:
        return homomorphism_failure(self.G, self.S) is None

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, OuterActionLift)
            and self.G == other.G
            and self.N == other.N
            and np.array_equal(self.act, other.act)
        )

    def __hash__(self) -> int:
        return hash(self.act.tobytes())

    def __repr__(self) -> str:
        return f"OuterActionLift(G={self.G.order}, N={self.N.order}, S={self.act.tolist()})"

    @cached_property
    def center(self) -> Tuple[CoefficientModule, np.ndarray]:
        """Z(N) as a G-module under S, with its embedding into N."""
        return center_module(self.N, self.G, self.S)

    @property
    def center_module(self) -> CoefficientModule:
        return self.center[0]

    @cached_property
    def center_position(self) -> np.ndarray:
        """N element -> index in Z(N), -1 off the center."""
        position = np.full(self.N.order, -1, dtype=np.int64)
        position[self.center[1]] = np.arange(len(self.center[1]))
        return position


def lift_from_arrays(G: FiniteGroup, N: FiniteGroup, forwards: Sequence[Sequence[int]]) -> OuterActionLift:
    return OuterActionLift(G, N, [Automorphism(N, f) for f in forwards])


class FactorSystem:
    """A pair (S, omega) with delta_S = C_N o omega pointwise."""

    def __init__(self, lift: OuterActionLift, omega: Cochain):
        if omega.degree != 2 or omega.actor != lift.G or omega.group != lift.N:
            raise ValidationError("omega must be a normalized 2-cochain G x G -> N")
        self.lift = lift
        self.omega = omega
        where = self.compatibility_failure()
        if where is not None:
            raise CompatibilityViolated(where)

    @property
    def G(self) -> FiniteGroup:
        return self.lift.G

    @property
    def N(self) -> FiniteGroup:
        return self.lift.N

    def compatibility_failure(self) -> Optional[Tuple[int, int]]:
        conj = conjugation_array(self.N)
        bad = np.argwhere(np.any(conj[self.omega.values] != self.lift.delta, axis=2))
        return (int(bad[0][0]), int(bad[0][1])) if len(bad) else None

    @cached_property
    def obstruction_values(self) -> np.ndarray:
        """(d_S omega)(g, g', g'') as a table of N elements."""
        return d_s_omega_values(self.lift, self.omega.values)

    @property
    def is_cocycle(self) -> bool:
        return not np.any(self.obstruction_values)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FactorSystem) and self.lift == other.lift and self.omega == other.omega

    def __hash__(self) -> int:
        return hash((self.lift.act.tobytes(), self.omega.values.tobytes()))

    def __repr__(self) -> str:
        return f"FactorSystem(S={self.lift.act.tolist()}, omega={self.omega.values.tolist()})"


def d_s_omega_values(lift: OuterActionLift, omega: np.ndarray) -> np.ndarray:
    """S(g)(w(g',g'')) w(g,g'g'') w(gg',g'')^-1 w(g,g')^-1"""
    N, TG = lift.N, lift.G.table
    T, inv = N.table, N.inverses
    a, b, c = np.indices((lift.G.order,) * 3)
    out = T[lift.act[a, omega[b, c]], omega[a, TG[b, c]]]
    out = T[out, inv[omega[TG[a, b], c]]]
    return T[out, inv[omega[a, b]]]


def d_s_omega(fs: FactorSystem) -> Cochain:
    """The obstruction cocycle of fs as a Z(N)-valued 3-cocycle."""
    position = fs.lift.center_position
    values = position[fs.obstruction_values]
    bad = np.argwhere(values < 0)
    ensure(len(bad) == 0, f"d_S omega leaves the center at {tuple(bad[0]) if len(bad) else None}")
    chain = Cochain(3, fs.G, fs.lift.center_module, values)
    ensure(differential(chain).is_zero(), "d_S omega is not a 3-cocycle")
    return chain


def make_factor_system(G: FiniteGroup, N: FiniteGroup, S: Sequence[Automorphism], omega) -> FactorSystem:
    lift = S if isinstance(S, OuterActionLift) else OuterActionLift(G, N, S)
    values = omega.values if isinstance(omega, Cochain) else omega
    return FactorSystem(lift, Cochain(2, G, N, values))


def product_table(fs: FactorSystem) -> np.ndarray:
    """(n,g)(n',g') = (n S(g)(n') w(g,g'), gg') on flattened indices, with no validation."""
    nN = fs.N.order
    size = nN * fs.G.order
    n, g = np.arange(size) % nN, np.arange(size) // nN
    n1, g1 = n[:, None], g[:, None]
    n2, g2 = n[None, :], g[None, :]
    T = fs.N.table
    fiber = T[T[n1, fs.lift.act[g1, n2]], fs.omega.values[g1, g2]]
    return fiber + nN * fs.G.table[g1, g2]


@dataclass(frozen=True, eq=False)
class ExtensionGroup:
    """N x_(S, omega) G with inclusion, projection and the canonical section."""

    total: FiniteGroup
    iota: GroupMap
    proj: GroupMap
    section: np.ndarray
    source: FactorSystem

    @property
    def N(self) -> FiniteGroup:
        return self.iota.source

    @property
    def G(self) -> FiniteGroup:
        return self.proj.target

    def element(self, n: int, g: int) -> int:
        return int(n) + self.N.order * int(g)

    def pair(self, x: int) -> Tuple[int, int]:
        return int(x) % self.N.order, int(x) // self.N.order


def build_extension(fs: FactorSystem) -> ExtensionGroup:
    bad = np.argwhere(fs.obstruction_values != 0)
    if len(bad):
        raise NotACocycle(tuple(int(i) for i in bad[0]), f"d_S omega != 1 at {tuple(int(i) for i in bad[0])}")
    nN, nG = fs.N.order, fs.G.order
    total = FiniteGroup(product_table(fs))
    iota = GroupMap(fs.N, total, np.arange(nN))
    proj = GroupMap(total, fs.G, np.arange(nN * nG) // nN)
    section = nN * np.arange(nG)
    extension = ExtensionGroup(total, iota, proj, section, fs)
    ensure(np.array_equal(total.inverses, inverse_formula(fs)), "inverses disagree with the factor system")
    logger.debug("built extension of order %d", total.order)
    return extension


def inverse_formula(fs: FactorSystem) -> np.ndarray:
    """(n, g)^-1 = (w(g^-1, g)^-1 S(g^-1)(n^-1), g^-1) on flattened indices."""
    nN = fs.N.order
    size = nN * fs.G.order
    n, g = np.arange(size) % nN, np.arange(size) // nN
    gi = fs.G.inverses[g]
    T, inv = fs.N.table, fs.N.inverses
    fiber = T[inv[fs.omega.values[gi, g]], fs.lift.act[gi, inv[n]]]
    return fiber + nN * gi


def semidirect(G: FiniteGroup, N: FiniteGroup, S: Sequence[Automorphism]) -> ExtensionGroup:
    bad = homomorphism_failure(G, S)
    if bad is not None:
        raise NotAHomomorphism(bad)
    return build_extension(FactorSystem(OuterActionLift(G, N, S), Cochain.zero(2, G, N)))


def omega_g(fs: FactorSystem, g: int) -> np.ndarray:
    """w_g(x) = w(g, x) w(g x g^-1, g)^-1 for every x in G."""
    G, T, inv = fs.G, fs.N.table, fs.N.inverses
    x = np.arange(G.order)
    conjugated = G.table[G.table[g, x], G.inverses[g]]
    return T[fs.omega.values[g, x], inv[fs.omega.values[conjugated, g]]]


def conjugation_in_extension(ext: ExtensionGroup, x: int, y: int) -> int:
    """x y x^-1 from the factor system, checked against the table."""
    fs = ext.source
    T, inv = fs.N.table, fs.N.inverses
    n, g = ext.pair(x)
    n2, g2 = ext.pair(y)
    m = T[fs.lift.act[g, n2], omega_g(fs, g)[g2]]
    h = fs.G.conjugate(g, g2)
    value = ext.element(T[T[n, m], fs.lift.act[h, inv[n]]], h)
    ensure(value == ext.total.conjugate(x, y), f"conjugation formula disagrees with the table at {(x, y)}")
    return value


def c1_act(h: Cochain, fs: FactorSystem) -> FactorSystem:
    """h.(S, w) = ((C_N o h) S, h *_S w)."""
    if h.degree != 1 or h.actor != fs.G or h.group != fs.N:
        raise ValidationError("h must be a normalized 1-cochain G -> N")
    N, G = fs.N, fs.G
    T, inv = N.table, N.inverses
    conj = conjugation_array(N)
    act = conj[h.values[:, None], fs.lift.act]
    lift = OuterActionLift(G, N, [Automorphism(N, row) for row in act])
    a, b = np.indices((G.order, G.order))
    hv = h.values
    omega = T[T[T[hv[a], fs.lift.act[a, hv[b]]], fs.omega.values], inv[hv[G.table[a, b]]]]
    moved = FactorSystem(lift, Cochain(2, G, N, omega))
    ensure(np.array_equal(moved.obstruction_values, fs.obstruction_values), "C^1 action changed d_S omega")
    return moved


def _same_pair(fs1: FactorSystem, fs2: FactorSystem) -> None:
    if fs1.G != fs2.G or fs1.N != fs2.N:
        raise KernelMismatch("factor systems are over different groups")


def connecting_cochain(fs1: FactorSystem, fs2: FactorSystem) -> Optional[Cochain]:
    """Pointwise h0 with c_{h0(g)} = S2(g) S1(g)^-1, lexicographically smallest, or None."""
    _same_pair(fs1, fs2)
    N = fs1.N
    inner = inner_preimages(N)
    values = np.zeros(fs1.G.order, dtype=np.int64)
    for g in range(fs1.G.order):
        ratio = fs2.lift.act[g][fs1.lift.back[g]]
        preimages = inner.get(ratio.tobytes())
        if not preimages:
            return None
        values[g] = preimages[0]
    return Cochain(1, fs1.G, N, values)


def equivalent(fs1: FactorSystem, fs2: FactorSystem) -> Optional[Cochain]:
    """Some h with h.fs1 = fs2, or None when the extensions are not equivalent."""
    h0 = connecting_cochain(fs1, fs2)
    if h0 is None:
        return None
    moved = c1_act(h0, fs1)
    N, G = fs1.N, fs1.G
    beta = N.table[fs2.omega.values, N.inverses[moved.omega.values]]
    position = fs2.lift.center_position
    ensure(bool(np.all(position[beta] >= 0)), "omega ratio of matching lifts is not central")
    module = fs2.lift.center_module
    gamma = cohomology(G, module, 2).preimage(Cochain(2, G, module, position[beta]))
    if gamma is None:
        return None
    embedding = fs2.lift.center[1]
    witness = Cochain(1, G, N, N.table[h0.values, embedding[gamma.values]])
    ensure(c1_act(witness, fs1) == fs2, "equivalence witness does not map fs1 to fs2")
    return witness


def is_split(fs: FactorSystem, budget: int = DEFAULT_BUDGET) -> Optional[GroupMap]:
    """A homomorphic section G -> N x_(S, w) G, or None when the extension does not split."""
    ext = build_extension(fs)
    gens = fs.G.generators
    space = fs.N.order ** len(gens)
    if space > budget:
        raise BoundExceeded("section search", space, budget)
    candidates = [[ext.element(n, s) for n in range(fs.N.order)] for s in gens]
    for phi in _search(fs.G, ext.total, candidates, bijective=False):
        section = GroupMap(fs.G, ext.total, phi)
        ensure(section.failure() is None, "section search returned a non-homomorphism")
        return section
    return None


def splitting_cochain(ext: ExtensionGroup, section: GroupMap) -> Cochain:
    """h with h *_S w = 1, read off a homomorphic section s(g) = (h(g), g)."""
    N = ext.N
    values = section.image % N.order
    return Cochain(1, ext.G, N, values)


def extract_factor_system(total: FiniteGroup, iota: GroupMap, proj: GroupMap,
                          section: Sequence[int]) -> FactorSystem:
    """(S, w) with S(g) = C(s(g)) restricted to N and w = delta_s, for a normalized section s."""
    N, G = iota.source, proj.target
    if not iota.is_injective() or not proj.is_surjective():
        raise ValidationError("iota must be injective and proj surjective")
    section = np.asarray(section, dtype=np.int64)
    ensure(section[0] == 0, "section must send 1 to 1")
    ensure(bool(np.all(proj.image[section] == np.arange(G.order))), "section is not a section of proj")
    ensure(sorted(np.nonzero(proj.image == 0)[0].tolist()) == sorted(iota.image.tolist()),
           "image of iota is not the kernel of proj")
    back = np.full(total.order, -1, dtype=np.int64)
    back[iota.image] = np.arange(N.order)
    T, inv = total.table, total.inverses
    s = section
    act = back[T[T[s[:, None], iota.image[None, :]], inv[s][:, None]]]
    a, b = np.indices((G.order, G.order))
    omega = back[T[T[s[a], s[b]], inv[s[G.table[a, b]]]]]
    return make_factor_system(G, N, [Automorphism(N, row) for row in act], omega)


def factor_system_classes(G: FiniteGroup, N: FiniteGroup, automorphisms: Sequence[Automorphism],
                          budget: int = DEFAULT_BUDGET) -> List[List[FactorSystem]]:
    """Every cocyclic factor system on (G, N), grouped into equivalence classes."""
    lifts = len(automorphisms) ** (G.order - 1)
    omegas = N.order ** ((G.order - 1) ** 2)
    if lifts * omegas > budget:
        raise BoundExceeded("factor system enumeration", lifts * omegas, budget)
    identity = Automorphism.identity(N)
    systems: List[FactorSystem] = []
    for choice in itertools.product(automorphisms, repeat=G.order - 1):
        try:
            lift = OuterActionLift(G, N, [identity, *choice])
        except NotInner:
            continue
        for entries in itertools.product(range(N.order), repeat=(G.order - 1) ** 2):
            values = np.zeros((G.order, G.order), dtype=np.int64)
            values[1:, 1:] = np.array(entries, dtype=np.int64).reshape(G.order - 1, G.order - 1)
            try:
                fs = FactorSystem(lift, Cochain(2, G, N, values))
            except CompatibilityViolated:
                continue
            if fs.is_cocycle:
                systems.append(fs)
    uf = UnionFind(range(len(systems)))
    for i, j in itertools.combinations(range(len(systems)), 2):
        if uf.find(i) != uf.find(j) and equivalent(systems[i], systems[j]) is not None:
            uf.union(i, j)
    logger.debug("%d cocyclic factor systems in %d classes", len(systems), len(uf.blocks()))
    return [[systems[i] for i in block] for block in uf.blocks()]
