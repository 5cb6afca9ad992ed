"""
Crossed Modules
===============
Crossed modules alpha: H -> G with a G-action on H, their decomposition
into a central extension Z -> H -> N = im(alpha) plus action data (f, theta),
the degree-3 obstruction to enlarging that central extension to one of G,
the enlargement itself, and the group G^S attached to a kernel together
with the reduction of N-extensions to Z(N)-extensions of G^S.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Tuple

import numpy as np

from .cohomology import (
    DEFAULT_BUDGET,
    Cochain,
    CoefficientModule,
    CohomologyClass,
    action_array,
    cohomology,
    crossed_homomorphisms,
    differential,
    homomorphism_failure,
)
from .errors import KernelMismatch, ModuleMismatch, ValidationError, ensure
from .factor_systems import (
    ExtensionGroup,
    FactorSystem,
    OuterActionLift,
    build_extension,
    c1_act,
    conjugation_array,
    equivalent,
    extract_factor_system,
)
from .groups import (
    Automorphism,
    FiniteGroup,
    GroupMap,
    Subgroup,
    center,
    coset_representatives,
    homomorphisms,
    quotient,
)
from .kernels import GKernel, choose_omega

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class CrossedModule:
    """alpha: H -> G with G acting on H by `action`."""

    H: FiniteGroup
    G: FiniteGroup
    alpha: GroupMap
    action: List[Automorphism]

    @cached_property
    def action_table(self) -> np.ndarray:
        return action_array(self.action)


@dataclass
class CrossedModuleReport:
    """Pass/fail per axiom, with a witness for every failure."""

    checks: Dict[str, bool]
    witnesses: Dict[str, Tuple[int, ...]]
    kernel: Optional[Subgroup] = None
    image: Optional[Subgroup] = None

    @property
    def valid(self) -> bool:
        return all(self.checks.values())


def validate_crossed_module(cm: CrossedModule) -> CrossedModuleReport:
    """
    Check that alpha is a homomorphism, that the action is one, then the
    equivariance axiom alpha(g.h) = g alpha(h) g^-1 and the Peiffer axiom
    alpha(h).h' = h h' h^-1.
    """
    checks: Dict[str, bool] = {}
    witnesses: Dict[str, Tuple[int, ...]] = {}

    def record(name: str, witness: Optional[Tuple[int, ...]]) -> None:
        checks[name] = witness is None
        if witness is not None:
            witnesses[name] = tuple(int(w) for w in witness)

    if len(cm.action) != cm.G.order:
        raise ValidationError("action must assign an automorphism of H to every element of G")
    record("alpha_homomorphism", cm.alpha.failure())
    record("action_homomorphism", homomorphism_failure(cm.G, cm.action))
    TG, inv = cm.G.table, cm.G.inverses
    act, alpha = cm.action_table, cm.alpha.image
    g, h = np.indices((cm.G.order, cm.H.order))
    lhs = alpha[act[g, h]]
    rhs = TG[TG[g, alpha[h]], inv[g]]
    bad = np.argwhere(lhs != rhs)
    record("equivariance", tuple(bad[0]) if len(bad) else None)
    bad = np.argwhere(act[alpha] != conjugation_array(cm.H))
    record("peiffer", tuple(bad[0]) if len(bad) else None)

    report = CrossedModuleReport(checks, witnesses)
    if report.valid:
        report.kernel = cm.alpha.kernel()
        report.image = cm.alpha.image_subgroup()
        central = center(cm.H)
        ensure(all(z in central for z in report.kernel.elements), "kernel of alpha is not central")
        ensure(report.image.is_normal(), "image of alpha is not normal")
    else:
        logger.debug("crossed module axioms failed: %s", witnesses)
    return report


def _require_valid(cm: CrossedModule) -> CrossedModuleReport:
    report = validate_crossed_module(cm)
    if not report.valid:
        failed = sorted(name for name, ok in report.checks.items() if not ok)
        raise ValidationError(f"not a crossed module: {', '.join(failed)} fails", witnesses=report.witnesses)
    return report


class ActionData:
    """
    A normal subgroup N of G, a G-module Z on which N acts trivially, a
    2-cocycle f: N x N -> Z and theta: G -> C^1(N, Z), stored as
    theta[g, n] with n indexing the sorted elements of N.
    """

    def __init__(self, G: FiniteGroup, normal: Subgroup, module: CoefficientModule,
                 f: np.ndarray, theta: np.ndarray):
        if module.actor != G or normal.parent != G:
            raise ModuleMismatch("module and subgroup must live over G")
        if not normal.is_normal():
            raise ValidationError("N must be normal in G")
        self.G = G
        self.normal = normal
        self.module = module
        self.N, self.embedding = normal.as_group()
        self.position = np.full(G.order, -1, dtype=np.int64)
        self.position[self.embedding] = np.arange(len(self.embedding))
        self.n_module = module.restrict(self.N, self.embedding)
        self.f = Cochain(2, self.N, self.n_module, f)
        self.theta = np.array(theta, dtype=np.int64).reshape(G.order, self.N.order)
        self.theta.setflags(write=False)

    @property
    def Z(self) -> FiniteGroup:
        return self.module.carrier

    @cached_property
    def conjugation(self) -> np.ndarray:
        """conjugation[g, n] = index of g n g^-1 in N."""
        TG, inv = self.G.table, self.G.inverses
        g = np.arange(self.G.order)[:, None]
        return self.position[TG[TG[g, self.embedding[None, :]], inv[g]]]

    def failures(self) -> List[str]:
        found = []
        ZT, neg, act = self.Z.table, self.Z.inverses, self.module.action_table
        TG, TN, inv = self.G.table, self.N.table, self.G.inverses
        conj, theta, f = self.conjugation, self.theta, self.f.values
        if np.any(act[self.embedding] != np.arange(self.Z.order)):
            found.append("N acts nontrivially on Z")
        if np.any(theta[:, 0]):
            found.append("theta(g) is not normalized")
        if not differential(self.f).is_zero():
            found.append("f is not a 2-cocycle on N")
        g, h, n = np.indices((self.G.order, self.G.order, self.N.order))
        twisted = act[g, theta[h, conj[inv[g], n]]]
        if np.any(theta[TG[g, h], n] != ZT[theta[g, n], twisted]):
            found.append("theta is not a 1-cocycle on G")
        g, m, k = np.indices((self.G.order, self.N.order, self.N.order))
        d_theta = ZT[ZT[theta[g, k], neg[theta[g, TN[m, k]]]], theta[g, m]]
        moved = act[g, f[conj[inv[g], m], conj[inv[g], k]]]
        if np.any(d_theta != ZT[moved, neg[f[m, k]]]):
            found.append("d_N theta(g) != g.f - f")
        m, k = np.indices((self.N.order, self.N.order))
        ninv = self.N.inverses
        expected = ZT[f[m, TN[TN[ninv[m], k], m]], neg[f[k, m]]]
        if np.any(theta[self.embedding[m], k] != expected):
            found.append("theta restricted to N differs from f~")
        return found

    def validate(self) -> None:
        found = self.failures()
        if found:
            raise ValidationError(f"invalid action data: {'; '.join(found)}", failures=found)


def decompose(cm: CrossedModule) -> ActionData:
    """Read (Z, N, f, theta) off a crossed module through the smallest-preimage section of alpha."""
    report = _require_valid(cm)
    H, G = cm.H, cm.G
    Z, z_embed = report.kernel.as_group()
    z_position = np.full(H.order, -1, dtype=np.int64)
    z_position[z_embed] = np.arange(len(z_embed))
    act = cm.action_table
    module = CoefficientModule(Z, G, [Automorphism(Z, z_position[act[g][z_embed]]) for g in range(G.order)])
    normal = report.image
    N, n_embed = normal.as_group()
    section = np.full(G.order, -1, dtype=np.int64)
    for x in range(H.order - 1, -1, -1):
        section[cm.alpha.image[x]] = x
    s = section[n_embed]
    T, hinv = H.table, H.inverses
    a, b = np.indices((N.order, N.order))
    f = z_position[T[T[s[a], s[b]], hinv[s[N.table[a, b]]]]]
    TG, ginv = G.table, G.inverses
    g, m = np.indices((G.order, N.order))
    pulled = section[TG[TG[ginv[g], n_embed[m]], g]]
    theta = z_position[T[act[g, pulled], hinv[s[m]]]]
    ensure(bool(np.all(f >= 0)) and bool(np.all(theta >= 0)), "section defects leave the kernel of alpha")
    data = ActionData(G, normal, module, f, theta)
    problems = data.failures()
    ensure(not problems, f"decomposed action data is inconsistent: {problems}")
    return data


def action_data_from_cocycle(G: FiniteGroup, normal: Subgroup, module: CoefficientModule,
                             cocycle: Cochain) -> ActionData:
    """(f, theta) restricted from a 2-cocycle on G: f = f_G|N x N, theta(g)(m) = f_G(g, g^-1 m g) - f_G(m, g)."""
    if cocycle.coefficients != module or cocycle.degree != 2:
        raise ModuleMismatch("cocycle does not take values in the given module")
    N, n_embed = normal.as_group()
    TG, inv = G.table, G.inverses
    ZT, neg = module.carrier.table, module.carrier.inverses
    v = cocycle.values
    f = v[np.ix_(n_embed, n_embed)]
    g, m = np.indices((G.order, N.order))
    moved = TG[TG[inv[g], n_embed[m]], g]
    theta = ZT[v[g, moved], neg[v[n_embed[m], g]]]
    return ActionData(G, normal, module, f, theta)


def action_data_sum(first: ActionData, second: ActionData) -> ActionData:
    """(f1 + f2, theta1 + theta2)"""
    if first.module != second.module or first.normal.elements != second.normal.elements:
        raise ModuleMismatch("action data over different subgroups or modules")
    ZT = first.Z.table
    return ActionData(
        first.G, first.normal, first.module,
        ZT[first.f.values, second.f.values], ZT[first.theta, second.theta],
    )


def central_cover(ad: ActionData) -> Tuple[FiniteGroup, List[Automorphism]]:
    """
    N^ = Z x_f N with (z, n)(z', n') = (z + z' + f(n, n'), nn'), flattened as
    z + |Z| n, and the G-action g.(z, n) = (g.z + theta(g)(g n g^-1), g n g^-1).
    """
    nz, nn = ad.Z.order, ad.N.order
    ZT = ad.Z.table
    idx = np.arange(nz * nn)
    z, n = idx % nz, idx // nz
    f = ad.f.values
    table = ZT[ZT[z[:, None], z[None, :]], f[n[:, None], n[None, :]]] + nz * ad.N.table[n[:, None], n[None, :]]
    cover = FiniteGroup(table, label="Z x_f N")
    act = ad.module.action_table
    conj = ad.conjugation
    action = []
    for g in range(ad.G.order):
        moved = conj[g, n]
        action.append(Automorphism(cover, ZT[act[g, z], ad.theta[g, moved]] + nz * moved))
    return cover, action


@dataclass
class QuotientData:
    """Everything the obstruction needs over Q = G/N for a fixed section."""

    quotient: FiniteGroup
    proj: GroupMap
    section: np.ndarray
    module: CoefficientModule
    delta: np.ndarray
    cocycle: Cochain


def _quotient_data(ad: ActionData, section: Optional[np.ndarray] = None,
                   omega_z: Optional[np.ndarray] = None, cross_check: bool = True) -> QuotientData:
    Q, proj = quotient(ad.G, ad.normal)
    sigma = coset_representatives(proj) if section is None else np.asarray(section, dtype=np.int64)
    ensure(sigma[0] == 0 and bool(np.all(proj.image[sigma] == np.arange(Q.order))), "not a normalized section")
    module = CoefficientModule(ad.Z, Q, [ad.module.action[int(g)] for g in sigma])
    TG, ginv, TQ = ad.G.table, ad.G.inverses, Q.table
    a, b = np.indices((Q.order, Q.order))
    delta = ad.position[TG[TG[sigma[a], sigma[b]], ginv[sigma[TQ[a, b]]]]]
    ensure(bool(np.all(delta >= 0)), "section defect leaves N")
    if omega_z is None:
        omega_z = np.zeros((Q.order, Q.order), dtype=np.int64)
    ZT, neg = ad.Z.table, ad.Z.inverses
    f, theta, conj = ad.f.values, ad.theta, ad.conjugation
    x, y, w = np.indices((Q.order,) * 3)
    moved = conj[sigma[x], delta[y, w]]
    values = differential(Cochain(2, Q, module, omega_z)).values
    values = ZT[values, theta[sigma[x], moved]]
    values = ZT[values, f[moved, delta[x, TQ[y, w]]]]
    values = ZT[values, neg[f[delta[x, y], delta[TQ[x, y], w]]]]
    cocycle = Cochain(3, Q, module, values)
    if cross_check:
        cover, cover_action = central_cover(ad)
        lift = OuterActionLift(Q, cover, [cover_action[int(g)] for g in sigma])
        direct = FactorSystem(lift, Cochain(2, Q, cover, omega_z + ad.Z.order * delta))
        ensure(np.array_equal(direct.obstruction_values, values), "obstruction formula disagrees with d_S omega in Z x_f N")
    return QuotientData(Q, proj, sigma, module, delta, cocycle)


def _random_section(proj: GroupMap, rng: np.random.Generator) -> np.ndarray:
    section = np.zeros(proj.target.order, dtype=np.int64)
    for x in range(1, proj.target.order):
        section[x] = rng.choice(np.nonzero(proj.image == x)[0])
    return section


def obstruction_Q(ad: ActionData, verify: bool = True,
                  rng: Optional[np.random.Generator] = None) -> CohomologyClass:
    """The class in H^3(G/N, Z) obstructing an extension of G by Z restricting to (f, theta)."""
    data = _quotient_data(ad)
    h3 = cohomology(data.quotient, data.module, 3)
    chi = h3.class_of(data.cocycle)
    if verify and data.quotient.order > 1:
        rng = rng or np.random.default_rng(0)
        other = _quotient_data(ad, section=_random_section(data.proj, rng))
        ensure(h3.class_of(Cochain(3, data.quotient, h3.module, other.cocycle.values)) == chi,
               "obstruction depends on the section")
        omega_z = rng.integers(0, ad.Z.order, size=(data.quotient.order,) * 2)
        omega_z[0, :] = 0
        omega_z[:, 0] = 0
        perturbed = _quotient_data(ad, omega_z=omega_z, cross_check=False)
        ensure(h3.class_of(perturbed.cocycle) == chi, "obstruction depends on omega")
    return chi


@dataclass
class Enlargement:
    """A cocycle f_G on G restricting to (f, theta), its extension, and the ambient group it came from."""

    cocycle: Cochain
    extension: ExtensionGroup
    ambient: ExtensionGroup


def enlarge(ad: ActionData) -> Optional[Enlargement]:
    """f_G in Z^2(G, Z) with f_G|N x N = f and theta recovered from f_G, or None when obstructed."""
    data = _quotient_data(ad)
    Q = data.quotient
    h3 = cohomology(Q, data.module, 3)
    beta = h3.preimage(data.cocycle)
    if beta is None:
        return None
    nz = ad.Z.order
    cover, cover_action = central_cover(ad)
    lift = OuterActionLift(Q, cover, [cover_action[int(g)] for g in data.section])
    omega = ad.Z.inverses[beta.values] + nz * data.delta
    ambient = build_extension(FactorSystem(lift, Cochain(2, Q, cover, omega)))
    G, size = ad.G, cover.order
    # g = n sigma(x) corresponds to ((0, n), x)
    n_of = ad.position[G.table[np.arange(G.order), G.inverses[data.section[data.proj.image]]]]
    s = nz * n_of + size * data.proj.image
    T, inv = ambient.total.table, ambient.total.inverses
    a, b = np.indices((G.order, G.order))
    defect = T[T[s[a], s[b]], inv[s[G.table[a, b]]]]
    ensure(bool(np.all(defect < nz)), "section defect of the enlargement leaves Z")
    cocycle = Cochain(2, G, ad.module, defect)
    ensure(differential(cocycle).is_zero(), "enlarged cocycle is not a cocycle")
    restricted = action_data_from_cocycle(G, ad.normal, ad.module, cocycle)
    ensure(np.array_equal(restricted.f.values, ad.f.values), "f_G does not restrict to f")
    ensure(np.array_equal(restricted.theta, ad.theta), "f_G does not recover theta")
    extension = build_extension(FactorSystem(OuterActionLift(G, ad.Z, ad.module.action), Cochain(2, G, ad.Z, defect)))
    return Enlargement(cocycle, extension, ambient)


@dataclass
class DTorsor:
    """The thetas compatible with f, generated from one of them by Z^1(G/N, Hom(N, Z))."""

    hom_group: FiniteGroup
    homs: np.ndarray
    cocycles: List[Cochain]
    members: List[ActionData] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.members)


def d_f_torsor(ad: ActionData, budget: int = DEFAULT_BUDGET) -> DTorsor:
    """All (f, theta + alpha o q) for alpha in Z^1(G/N, Hom(N, Z))."""
    N, Z = ad.N, ad.Z
    homs = np.array([h.image for h in homomorphisms(N, Z)], dtype=np.int64)
    index = {row.tobytes(): i for i, row in enumerate(homs)}
    ZT = Z.table
    table = np.array([[index[ZT[p, q].tobytes()] for q in homs] for p in homs], dtype=np.int64)
    hom_group = FiniteGroup(table, label="Hom(N, Z)")
    Q, proj = quotient(ad.G, ad.normal)
    sigma = coset_representatives(proj)
    act, conj, inv = ad.module.action_table, ad.conjugation, ad.G.inverses
    action = []
    for x in range(Q.order):
        g = sigma[x]
        moved = act[g][homs[:, conj[inv[g]]]]
        action.append(Automorphism(hom_group, [index[row.tobytes()] for row in moved]))
    cocycles = crossed_homomorphisms(Q, hom_group, action, budget)
    members = []
    for alpha in cocycles:
        shift = homs[alpha.values[proj.image]]
        member = ActionData(ad.G, ad.normal, ad.module, ad.f.values, ZT[ad.theta, shift])
        ensure(not member.failures(), "torsor move left the set of compatible thetas")
        members.append(member)
    distinct = {m.theta.tobytes() for m in members}
    ensure(len(distinct) == len(members), "torsor action is not free")
    logger.debug("D(f) has %d elements", len(members))
    return DTorsor(hom_group, homs, cocycles, members)


@dataclass
class GSConstruction:
    """G^S as an extension of G by Inn(N), the map rho to Aut(N) and the crossed module N -> G^S."""

    kernel: GKernel
    factor_system: FactorSystem
    extension: ExtensionGroup
    rho: GroupMap
    crossed: CrossedModule

    @property
    def group(self) -> FiniteGroup:
        return self.extension.total

    def psi_is_injective(self) -> bool:
        """Whether (rho, q_S): G^S -> Aut(N) x G is injective."""
        pairs = {(int(r), int(q)) for r, q in zip(self.rho.image, self.extension.proj.image)}
        return len(pairs) == self.group.order


def _gs_factor_system(lift: OuterActionLift, k: GKernel) -> FactorSystem:
    outer = k.outer
    inn = outer.inn_group
    position = {c.key: i for i, c in enumerate(outer.inn)}
    induced = []
    for s in lift.S:
        inverse = s.inverse()
        induced.append(Automorphism(inn, [position[s.compose(c).compose(inverse).key] for c in outer.inn]))
    omega = outer.inner_index[choose_omega(lift).values]
    return FactorSystem(OuterActionLift(lift.G, inn, induced), Cochain(2, lift.G, inn, omega))


def build_GS(k: GKernel, verify: bool = True, rng: Optional[np.random.Generator] = None) -> GSConstruction:
    """The group G^S on Inn(N) x G, with rho(c, g) = c o S(g) and the crossed module n -> (c_n, 1)."""
    fs = _gs_factor_system(k.lift, k)
    extension = build_extension(fs)
    outer = k.outer
    k_inn = len(outer.inn)
    rho_auts = [outer.inn[x % k_inn].compose(k.lift.S[x // k_inn]) for x in range(extension.total.order)]
    rho = GroupMap(extension.total, outer.aut_group, [outer.aut_position[a.key] for a in rho_auts])
    ensure(rho.failure() is None, "rho is not a homomorphism")
    alpha = GroupMap(k.N, extension.total, outer.inner_index)
    crossed = CrossedModule(k.N, extension.total, alpha, rho_auts)
    _require_valid(crossed)
    if verify:
        rng = rng or np.random.default_rng(0)
        values = rng.integers(0, k.N.order, size=k.G.order)
        values[0] = 0
        moved = c1_act(Cochain(1, k.G, k.N, values), FactorSystem(k.lift, choose_omega(k.lift))).lift
        ensure(equivalent(_gs_factor_system(moved, k), fs) is not None, "G^S depends on the lift")
    return GSConstruction(k, fs, extension, rho, crossed)


@dataclass
class ReducedExtension:
    """Z(N) -> G^ -> G^S obtained from an extension of G by N."""

    gamma: GroupMap
    factor_system: FactorSystem
    extension: ExtensionGroup


def reduce_to_abelian(ext: ExtensionGroup, gs: GSConstruction) -> ReducedExtension:
    """gamma(n, g) = (c_n S'(g) S(g)^-1, g), packaged as an extension of G^S by Z(N)."""
    k = gs.kernel
    fs = ext.source
    if fs.N != k.N or fs.G != k.G:
        raise KernelMismatch("extension and G^S are over different groups")
    outer = k.outer
    if tuple(outer.class_of(a) for a in fs.lift.S) != k.s:
        raise KernelMismatch("extension does not have the outer action of the kernel")
    k_inn = len(outer.inn)
    conj = conjugation_array(k.N)
    twist = np.zeros(k.G.order, dtype=np.int64)
    for g in range(k.G.order):
        ratio = fs.lift.act[g][k.lift.back[g]]
        twist[g] = outer.inner_index[outer.inner_preimages(Automorphism(k.N, ratio))[0]]
    inn_table = outer.inn_group.table
    n, g = np.arange(ext.total.order) % k.N.order, np.arange(ext.total.order) // k.N.order
    image = inn_table[outer.inner_index[n], twist[g]] + k_inn * g
    gamma = GroupMap(ext.total, gs.group, image)
    ensure(gamma.failure() is None, "gamma is not a homomorphism")
    ensure(gamma.is_surjective(), "gamma is not surjective")
    Z, z_embed = center(k.N).as_group()
    ensure(sorted(gamma.kernel().elements) == sorted(ext.iota.image[z_embed].tolist()), "kernel of gamma is not Z(N)")
    iota = GroupMap(Z, ext.total, ext.iota.image[z_embed])
    section = coset_representatives(gamma)
    reduced = extract_factor_system(ext.total, iota, gamma, section)
    logger.debug("reduced an extension of order %d to G^S of order %d", ext.total.order, gs.group.order)
    return ReducedExtension(gamma, reduced, build_extension(reduced))
