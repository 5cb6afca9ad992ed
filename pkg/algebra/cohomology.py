"""
Cohomology Engine
=================
Normalized cochains of a finite group with values in a finite abelian
coefficient module (or, in low degree, in a non-abelian group), the group
differential, and H^p for p <= 3 presented through Smith forms over Z/e,
e the exponent of the coefficient module.

Cochain values are stored as full tables indexed by G^p; entries with an
identity argument are always the identity of the coefficient group.
Coordinates for linear algebra run over non-identity tuples in
lexicographic order, k invariant-factor coordinates per tuple.
"""

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from math import lcm
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import (
    BoundExceeded,
    DegreeUnsupported,
    ModuleMismatch,
    NotACocycle,
    NotAHomomorphism,
    ValidationError,
    ensure,
)
from .groups import Automorphism, FiniteGroup, center, coset_representatives, quotient
from .linalg import DEFAULT_MAX_ENTRIES, ModularSmith, dot_mod, exact, modular_smith, smith_form
from .orbits import UnionFind

logger = logging.getLogger(__name__)

MAX_DEGREE = 3
DEFAULT_MAX_UNKNOWNS = 200_000
DEFAULT_BUDGET = 1_000_000


def action_array(action: Sequence[Automorphism]) -> np.ndarray:
    """Stack an action G -> Aut(X) into a (|G|, |X|) array: arr[g, x] = S(g)(x)."""
    return np.array([a.forward for a in action], dtype=np.int64)


def homomorphism_failure(actor: FiniteGroup, action: Sequence[Automorphism]) -> Optional[Tuple[int, int]]:
    """First (g, g') with S(g)S(g') != S(gg'), or None."""
    arr = action_array(action)
    if not np.array_equal(arr[0], np.arange(arr.shape[1])):
        return (0, 0)
    for g in range(actor.order):
        lhs = arr[g][arr]
        rhs = arr[actor.table[g]]
        bad = np.nonzero(np.any(lhs != rhs, axis=1))[0]
        if len(bad):
            return g, int(bad[0])
    return None


def abelian_invariants(A: FiniteGroup) -> Tuple[Tuple[int, ...], np.ndarray]:
    """
    Invariant factors d_1 | d_2 | ... of an abelian group and the coordinates
    of every element in the matching basis, as an (|A|, k) array.
    """
    if not A.is_abelian:
        raise ValidationError("coefficient group must be abelian")
    gens = list(A.generators)
    m = len(gens)
    if m == 0:
        return (), np.zeros((A.order, 0), dtype=np.int64)
    expr: Dict[int, np.ndarray] = {0: np.zeros(m, dtype=np.int64)}
    relations = np.zeros((m, m), dtype=np.int64)
    for j, g in enumerate(gens):
        c, x = 1, g
        while x not in expr:
            x = A.mul(x, g)
            c += 1
        relations[j] = -expr[x]
        relations[j, j] = c
        layer = dict(expr)
        for h, vec in expr.items():
            y = h
            for t in range(1, c):
                y = A.mul(y, g)
                step = vec.copy()
                step[j] += t
                layer[y] = step
        expr = layer
    snf = smith_form(relations)
    diagonal = [abs(d) for d in snf.diagonal]
    keep = [i for i, d in enumerate(diagonal) if d > 1]
    factors = tuple(diagonal[i] for i in keep)
    coords = np.zeros((A.order, len(keep)), dtype=np.int64)
    for a, vec in expr.items():
        y = exact(vec).dot(snf.right)
        coords[a] = [int(y[i]) % diagonal[i] for i in keep]
    return factors, coords


class CoefficientModule:
    """A finite abelian group with an action of a finite group, in invariant-factor coordinates."""

    def __init__(self, carrier: FiniteGroup, actor: FiniteGroup, action: Sequence[Automorphism]):
        if len(action) != actor.order:
            raise ModuleMismatch("action must have one automorphism per element of the acting group")
        self.carrier = carrier
        self.actor = actor
        self.action = list(action)
        self.action_table = action_array(self.action)
        self.action_table.setflags(write=False)
        bad = homomorphism_failure(actor, self.action)
        if bad is not None:
            raise NotAHomomorphism(bad, f"module action is not a homomorphism at {bad}")
        self.factors, self.coords = abelian_invariants(carrier)
        self.coords.setflags(write=False)
        self.rank = len(self.factors)
        self.lookup = np.zeros(self.factors, dtype=np.int64) if self.rank else np.zeros((), dtype=np.int64)
        if self.rank:
            self.lookup[tuple(self.coords.T)] = np.arange(carrier.order)
        basis = [int(self.lookup[tuple(row)]) for row in np.eye(self.rank, dtype=np.int64)]
        self.basis = basis
        self.matrices = np.zeros((actor.order, self.rank, self.rank), dtype=np.int64)
        for g in range(actor.order):
            for j, b in enumerate(basis):
                self.matrices[g, :, j] = self.coords[self.action_table[g, b]]

    @classmethod
    def trivial(cls, carrier: FiniteGroup, actor: FiniteGroup) -> "CoefficientModule":
        return cls(carrier, actor, [Automorphism.identity(carrier)] * actor.order)

    @cached_property
    def key(self) -> Tuple[str, str, bytes]:
        return self.carrier.fingerprint, self.actor.fingerprint, self.action_table.tobytes()

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CoefficientModule) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"CoefficientModule(factors={self.factors}, actor_order={self.actor.order})"

    @property
    def order(self) -> int:
        return self.carrier.order

    def element_of(self, coords: np.ndarray) -> np.ndarray:
        """Element indices for coordinate rows (last axis), reduced mod the factors."""
        coords = np.asarray(coords, dtype=np.int64)
        if self.rank == 0:
            return np.zeros(coords.shape[:-1], dtype=np.int64)
        reduced = coords % np.array(self.factors, dtype=np.int64)
        return self.lookup[tuple(np.moveaxis(reduced, -1, 0))]

    def restrict(self, actor: FiniteGroup, embedding: np.ndarray) -> "CoefficientModule":
        """The same carrier with the action pulled back along an injective map actor -> self.actor."""
        return CoefficientModule(self.carrier, actor, [self.action[int(x)] for x in embedding])

    def fixed_points(self) -> List[int]:
        fixed = np.all(self.action_table == np.arange(self.order)[None, :], axis=0)
        return [int(a) for a in np.nonzero(fixed)[0]]


Coefficients = Union[CoefficientModule, FiniteGroup]


class Cochain:
    """A normalized p-cochain G^p -> A, stored as a full table of element indices."""

    def __init__(self, degree: int, actor: FiniteGroup, coefficients: Coefficients, values):
        if degree < 0 or degree > MAX_DEGREE + 1:
            raise DegreeUnsupported(degree, MAX_DEGREE + 1)
        self.degree = degree
        self.actor = actor
        self.coefficients = coefficients
        self.values = np.array(values, dtype=np.int64).reshape((actor.order,) * degree)
        self.values.setflags(write=False)
        where = self.normalization_failure()
        if where is not None:
            raise ValidationError(f"cochain is not normalized at {where}")

    @property
    def abelian(self) -> bool:
        return isinstance(self.coefficients, CoefficientModule)

    @property
    def group(self) -> FiniteGroup:
        """The group the values live in."""
        return self.coefficients.carrier if self.abelian else self.coefficients

    def normalization_failure(self) -> Optional[Tuple[int, ...]]:
        for axis in range(self.degree):
            face = np.take(self.values, 0, axis=axis)
            bad = np.argwhere(face != 0)
            if len(bad):
                index = list(bad[0])
                index.insert(axis, 0)
                return tuple(int(i) for i in index)
        return None

    @classmethod
    def zero(cls, degree: int, actor: FiniteGroup, coefficients: Coefficients) -> "Cochain":
        return cls(degree, actor, coefficients, np.zeros((actor.order,) * degree, dtype=np.int64))

    @classmethod
    def from_function(cls, degree: int, actor: FiniteGroup, coefficients: Coefficients, fn) -> "Cochain":
        values = np.zeros((actor.order,) * degree, dtype=np.int64)
        for args in itertools.product(range(1, actor.order), repeat=degree):
            values[args] = fn(*args)
        return cls(degree, actor, coefficients, values)

    def __call__(self, *args: int) -> int:
        return int(self.values[tuple(args)])

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Cochain)
            and self.degree == other.degree
            and self.actor == other.actor
            and self.group == other.group
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self) -> int:
        return hash((self.degree, self.values.tobytes()))

    def __repr__(self) -> str:
        return f"Cochain(degree={self.degree}, values={self.values.tolist()})"

    def pointwise(self, other: "Cochain") -> "Cochain":
        """(f * g)(x) = f(x) g(x) in the coefficient group."""
        return Cochain(self.degree, self.actor, self.coefficients, self.group.table[self.values, other.values])

    def pointwise_inverse(self) -> "Cochain":
        return Cochain(self.degree, self.actor, self.coefficients, self.group.inverses[self.values])

    def __add__(self, other: "Cochain") -> "Cochain":
        return self.pointwise(other)

    def __neg__(self) -> "Cochain":
        return self.pointwise_inverse()

    def __sub__(self, other: "Cochain") -> "Cochain":
        return self.pointwise(other.pointwise_inverse())

    def is_zero(self) -> bool:
        return not np.any(self.values)

    def vector(self) -> np.ndarray:
        """Invariant-factor coordinates over non-identity tuples, lexicographic."""
        module = self._module()
        if self.degree == 0:
            return module.coords[int(self.values)].copy()
        inner = self.values[(slice(1, None),) * self.degree]
        return module.coords[inner.ravel()].ravel()

    @classmethod
    def from_vector(cls, degree: int, module: CoefficientModule, vector: Sequence[int]) -> "Cochain":
        if module.rank == 0:
            return cls.zero(degree, module.actor, module)
        n = module.actor.order
        moduli = cochain_moduli(module, degree).tolist()
        if len(vector) != len(moduli):
            raise ValidationError(f"expected {len(moduli)} coordinates, got {len(vector)}")
        reduced = [int(v) % m for v, m in zip(vector, moduli)]
        coords = np.array(reduced, dtype=np.int64).reshape(-1, module.rank)
        elements = module.element_of(coords)
        if degree == 0:
            return cls(0, module.actor, module, elements[0] if len(elements) else 0)
        values = np.zeros((n,) * degree, dtype=np.int64)
        values[(slice(1, None),) * degree] = elements.reshape((n - 1,) * degree)
        return cls(degree, module.actor, module, values)

    def _module(self) -> CoefficientModule:
        if not self.abelian:
            raise ValidationError("operation needs cochains with values in a coefficient module")
        return self.coefficients


def differential(f: Cochain) -> Cochain:
    """
    (d f)(g_0..g_p) = g_0.f(g_1..g_p) + sum_j (-1)^j f(..g_{j-1}g_j..) + (-1)^(p+1) f(g_0..g_{p-1})
    """
    module = f._module()
    p = f.degree
    if p > MAX_DEGREE:
        raise DegreeUnsupported(p, MAX_DEGREE)
    G = f.actor
    add, neg = module.carrier.table, module.carrier.inverses
    act, T = module.action_table, G.table
    grid = np.indices((G.order,) * (p + 1))
    vals = f.values
    if p == 0:
        a = int(vals)
        return Cochain(1, G, module, add[act[grid[0], a], neg[a]])
    out = act[grid[0], vals[tuple(grid[1:])]]
    for j in range(1, p + 1):
        args = list(grid[:j - 1]) + [T[grid[j - 1], grid[j]]] + list(grid[j + 1:])
        term = vals[tuple(args)]
        out = add[out, term if j % 2 == 0 else neg[term]]
    last = vals[tuple(grid[:p])]
    out = add[out, last if (p + 1) % 2 == 0 else neg[last]]
    return Cochain(p + 1, G, module, out)


def _tuple_index(t: Sequence[int], n: int) -> int:
    index = 0
    for x in t:
        index = index * (n - 1) + (x - 1)
    return index


def cochain_dimension(module: CoefficientModule, degree: int) -> int:
    return (module.actor.order - 1) ** degree * module.rank


def cochain_moduli(module: CoefficientModule, degree: int) -> np.ndarray:
    return np.tile(np.array(module.factors, dtype=np.int64), (module.actor.order - 1) ** degree)


def differential_matrix(module: CoefficientModule, degree: int) -> np.ndarray:
    """Integer matrix of d: C^p -> C^(p+1) in coordinates, rows reduced mod their modulus."""
    G = module.actor
    n, k = G.order, module.rank
    rows, cols = cochain_dimension(module, degree + 1), cochain_dimension(module, degree)
    D = np.zeros((rows, cols), dtype=np.int64)
    if rows == 0 or cols == 0:
        return D
    eye = np.eye(k, dtype=np.int64)

    def block(face: Sequence[int]) -> slice:
        c = _tuple_index(face, n)
        return slice(c * k, (c + 1) * k)

    for r, t in enumerate(itertools.product(range(1, n), repeat=degree + 1)):
        band = slice(r * k, (r + 1) * k)
        D[band, block(t[1:])] += module.matrices[t[0]]
        for j in range(1, degree + 1):
            product = int(G.table[t[j - 1], t[j]])
            if product == 0:
                continue
            D[band, block(t[:j - 1] + (product,) + t[j + 1:])] += (-1) ** j * eye
        D[band, block(t[:degree])] += (-1) ** (degree + 1) * eye
    return D % cochain_moduli(module, degree + 1)[:, None]


class CohomologyGroup:
    """H^p(G, A) with a coboundary solver and a lazily computed presentation."""

    def __init__(self, module: CoefficientModule, degree: int, max_unknowns: int = DEFAULT_MAX_UNKNOWNS,
                 max_entries: int = DEFAULT_MAX_ENTRIES):
        if degree < 1 or degree > MAX_DEGREE:
            raise DegreeUnsupported(degree, MAX_DEGREE)
        unknowns = cochain_dimension(module, degree)
        if unknowns > max_unknowns:
            raise BoundExceeded("cochain unknowns", unknowns, max_unknowns)
        self.module = module
        self.degree = degree
        self.dimension = unknowns
        self.max_entries = max_entries

    def __repr__(self) -> str:
        return f"CohomologyGroup(degree={self.degree}, module={self.module!r})"

    @cached_property
    def exponent(self) -> int:
        """Exponent of the coefficient module; all linear algebra runs over Z/exponent."""
        return lcm(*self.module.factors) if self.module.rank else 1

    @cached_property
    def _boundaries(self) -> np.ndarray:
        d_prev = differential_matrix(self.module, self.degree - 1)
        relations = np.diag(cochain_moduli(self.module, self.degree))
        return np.concatenate([d_prev, relations], axis=1)

    @cached_property
    def _solver(self) -> ModularSmith:
        return modular_smith(self._boundaries, self.exponent, left=True, right=True,
                             max_entries=self.max_entries)

    @cached_property
    def _cocycles(self) -> ModularSmith:
        """Smith form of the cocycle conditions, each row scaled so it reads mod the exponent."""
        e = self.exponent
        d_next = differential_matrix(self.module, self.degree)
        scale = e // cochain_moduli(self.module, self.degree + 1)
        conditions = (d_next * scale[:, None]) % e
        conditions = conditions[conditions.any(axis=1)]
        if len(conditions):
            conditions = np.unique(conditions, axis=0)
        return modular_smith(conditions, e, right=True, max_entries=self.max_entries)

    @cached_property
    def _presentation(self) -> ModularSmith:
        """Smith form of B^p written in the basis of Z^p; its torsion is H^p."""
        e = self.exponent
        cocycles = self._cocycles
        scales = cocycles.kernel_scales
        moved = dot_mod(cocycles.right_inverse, self._boundaries % e, e)
        ensure(not (moved % scales[:, None]).any(), "coboundaries escape the cocycle lattice")
        relations = np.concatenate([moved // scales[:, None], np.diag(e // scales) % e], axis=1)
        smith = modular_smith(relations, e, left=True, max_entries=self.max_entries)
        logger.debug("presented H^%d with torsion %s", self.degree, [d for d in smith.torsion if d > 1])
        return smith

    @property
    def invariants(self) -> Tuple[int, ...]:
        """Invariant factors of H^p (all > 1)."""
        if self.dimension == 0:
            return ()
        return tuple(d for d in self._presentation.torsion if d > 1)

    @property
    def order(self) -> int:
        result = 1
        for d in self.invariants:
            result *= d
        return result

    def _check(self, c: Cochain) -> None:
        if c.degree != self.degree or not c.abelian or c.coefficients != self.module:
            raise ModuleMismatch("cochain does not belong to this cohomology group")

    def cocycle_failure(self, c: Cochain) -> Optional[Tuple[int, ...]]:
        self._check(c)
        dc = differential(c)
        bad = np.argwhere(dc.values != 0)
        return tuple(int(i) for i in bad[0]) if len(bad) else None

    def is_cocycle(self, c: Cochain) -> bool:
        return self.cocycle_failure(c) is None

    def preimage(self, c: Cochain) -> Optional[Cochain]:
        """A cochain b of degree p-1 with d b = c, or None if c is not a coboundary."""
        self._check(c)
        if self.dimension == 0:
            return Cochain.zero(self.degree - 1, self.module.actor, self.module)
        solution = self._solver.solve(c.vector())
        if solution is None:
            return None
        width = cochain_dimension(self.module, self.degree - 1)
        b = Cochain.from_vector(self.degree - 1, self.module, solution[:width].tolist())
        ensure(differential(b) == c, "coboundary solver returned a wrong preimage")
        return b

    def is_coboundary(self, c: Cochain) -> bool:
        self._check(c)
        if not c.values.any():
            return True
        return self.preimage(c) is not None

    def coordinates(self, c: Cochain) -> Tuple[int, ...]:
        self._check(c)
        if self.dimension == 0:
            return ()
        e = self.exponent
        cocycles, presentation = self._cocycles, self._presentation
        scales = cocycles.kernel_scales
        lifted = dot_mod(cocycles.right_inverse, c.vector(), e)
        ensure(not (lifted % scales).any(), "cochain is not a cocycle")
        y = dot_mod(presentation.left, lifted // scales, e)
        return tuple(int(y[i]) % d for i, d in enumerate(presentation.torsion) if d > 1)

    @cached_property
    def representatives(self) -> List[Cochain]:
        """One cocycle per invariant factor, in the same order as invariants."""
        if self.dimension == 0:
            return []
        e = self.exponent
        cocycles, presentation = self._cocycles, self._presentation
        scales = cocycles.kernel_scales
        reps = []
        for i, d in enumerate(presentation.torsion):
            if d > 1:
                y = (presentation.left_inverse[:, i] * scales) % e
                vector = dot_mod(cocycles.right, y, e)
                reps.append(Cochain.from_vector(self.degree, self.module, vector.tolist()))
        return reps

    def class_of(self, c: Cochain) -> "CohomologyClass":
        where = self.cocycle_failure(c)
        if where is not None:
            raise NotACocycle(where)
        return CohomologyClass(self, c)

    def zero(self) -> "CohomologyClass":
        return CohomologyClass(self, Cochain.zero(self.degree, self.module.actor, self.module))

    def element(self, coords: Sequence[int]) -> "CohomologyClass":
        """The class with the given coordinates, represented by sum coords_i * rep_i."""
        rep = Cochain.zero(self.degree, self.module.actor, self.module)
        for k, r in zip(coords, self.representatives):
            for _ in range(int(k)):
                rep = rep + r
        return CohomologyClass(self, rep)

    def classes(self) -> Iterator["CohomologyClass"]:
        """Every class, coordinates in lexicographic order."""
        for coords in itertools.product(*[range(d) for d in self.invariants]):
            yield self.element(coords)


@dataclass(frozen=True, eq=False)
class CohomologyClass:
    group: CohomologyGroup
    representative: Cochain

    @cached_property
    def coords(self) -> Tuple[int, ...]:
        return self.group.coordinates(self.representative)

    def is_zero(self) -> bool:
        return self.group.is_coboundary(self.representative)

    def _same_group(self, other: "CohomologyClass") -> None:
        if self.group.module != other.group.module or self.group.degree != other.group.degree:
            raise ModuleMismatch("classes live in different cohomology groups")

    def __add__(self, other: "CohomologyClass") -> "CohomologyClass":
        self._same_group(other)
        return CohomologyClass(self.group, self.representative + other.representative)

    def __neg__(self) -> "CohomologyClass":
        return CohomologyClass(self.group, -self.representative)

    def __sub__(self, other: "CohomologyClass") -> "CohomologyClass":
        return self + (-other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CohomologyClass):
            return NotImplemented
        self._same_group(other)
        return (self - other).is_zero()

    def __hash__(self) -> int:
        return hash((self.group.degree, self.group.module.key))


@lru_cache(maxsize=256)
def _cohomology(module: CoefficientModule, degree: int, max_unknowns: int) -> CohomologyGroup:
    return CohomologyGroup(module, degree, max_unknowns)


def cohomology(G: FiniteGroup, A: CoefficientModule, p: int,
               max_unknowns: int = DEFAULT_MAX_UNKNOWNS) -> CohomologyGroup:
    if A.actor != G:
        raise ModuleMismatch("module is not a module over the given group")
    return _cohomology(A, p, max_unknowns)


def center_module(N: FiniteGroup, G: FiniteGroup, S: Sequence[Automorphism]) -> Tuple[CoefficientModule, np.ndarray]:
    """Z(N) as a G-module under the restriction of S, with its embedding into N."""
    Z, embedding = center(N).as_group()
    position = np.full(N.order, -1, dtype=np.int64)
    position[embedding] = np.arange(len(embedding))
    action = [Automorphism(Z, position[s.forward[embedding]]) for s in S]
    return CoefficientModule(Z, G, action), embedding


def delta_nonabelian(f: Cochain) -> Cochain:
    """delta_f(g, g') = f(g) f(g') f(gg')^-1"""
    N, G = f.group, f.actor
    a, b = np.indices((G.order, G.order))
    v = f.values
    values = N.table[N.table[v[a], v[b]], N.inverses[v[G.table[a, b]]]]
    return Cochain(2, G, f.coefficients, values)


def crossed_homomorphisms(G: FiniteGroup, N: FiniteGroup, S: Sequence[Automorphism],
                          budget: int = DEFAULT_BUDGET) -> List[Cochain]:
    """All f with f(gg') = f(g) S(g)(f(g')), assigned on generators and propagated."""
    bad = homomorphism_failure(G, S)
    if bad is not None:
        raise NotAHomomorphism(bad, f"action is not a homomorphism at {bad}")
    gens = G.generators
    space = N.order ** len(gens)
    if space > budget:
        raise BoundExceeded("crossed homomorphism search", space, budget)
    act = action_array(S)
    TG, TN = G.table, N.table
    found = []
    for images in itertools.product(range(N.order), repeat=len(gens)):
        f = np.full(G.order, -1, dtype=np.int64)
        f[0] = 0
        queue = [0]
        consistent = True
        for x in queue:
            for s, v in zip(gens, images):
                y = TG[x, s]
                value = TN[f[x], act[x, v]]
                if f[y] == -1:
                    f[y] = value
                    queue.append(int(y))
                elif f[y] != value:
                    consistent = False
                    break
            if not consistent:
                break
        if consistent:
            found.append(Cochain(1, G, N, f))
    logger.debug("found %d crossed homomorphisms out of %d assignments", len(found), space)
    return found


@dataclass
class PointedSet:
    """H^1(G, N): cocycles, their orbits under N, and the orbit of the trivial cocycle."""

    cocycles: List[Cochain]
    orbits: List[List[int]]
    base: int = 0
    _orbit_of: Dict[bytes, int] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        for o, members in enumerate(self.orbits):
            for i in members:
                self._orbit_of[self.cocycles[i].values.tobytes()] = o

    def orbit_of(self, f: Cochain) -> int:
        return self._orbit_of[f.values.tobytes()]

    def __len__(self) -> int:
        return len(self.orbits)


def h1_pointed(G: FiniteGroup, N: FiniteGroup, S: Sequence[Automorphism],
               budget: int = DEFAULT_BUDGET) -> PointedSet:
    """Orbits of Z^1(G, N)_S under (n.f)(g) = n f(g) S(g)(n)^-1."""
    cocycles = crossed_homomorphisms(G, N, S, budget)
    index = {f.values.tobytes(): i for i, f in enumerate(cocycles)}
    act = action_array(S)
    TN, inv = N.table, N.inverses
    uf = UnionFind(range(len(cocycles)))
    for n in N.generators:
        twist = inv[act[:, n]]
        for i, f in enumerate(cocycles):
            moved = TN[TN[n, f.values], twist]
            uf.union(i, index[moved.tobytes()])
    orbits = uf.blocks()
    base = next(o for o, members in enumerate(orbits) if 0 in members)
    return PointedSet(cocycles, orbits, base)


@dataclass
class SevenTermSequence:
    """The low-degree exact sequence attached to an action of G on N."""

    center_fixed: List[int]
    fixed: List[int]
    adjoint_fixed: List[int]
    connecting: Dict[int, Tuple[int, ...]]
    h1_center: CohomologyGroup
    h1_center_classes: List[Tuple[int, ...]]
    h1: PointedSet
    h1_adjoint: PointedSet
    center_to_h1: Dict[Tuple[int, ...], int]
    h1_to_adjoint: Dict[int, int]
    exactness: Dict[str, bool]

    @property
    def exact(self) -> bool:
        return all(self.exactness.values())


def seven_term_prefix(G: FiniteGroup, N: FiniteGroup, S: Sequence[Automorphism],
                      budget: int = DEFAULT_BUDGET) -> SevenTermSequence:
    """
    Z(N)^G -> N^G -> N_ad^G -> H^1(G,Z(N)) -> H^1(G,N) -> H^1(G,N_ad),
    computed exhaustively with exactness checked at every inner node.
    """
    bad = homomorphism_failure(G, S)
    if bad is not None:
        raise NotAHomomorphism(bad, f"action is not a homomorphism at {bad}")
    act = action_array(S)
    Zsub = center(N)
    zmod, zembed = center_module(N, G, S)
    zpos = np.full(N.order, -1, dtype=np.int64)
    zpos[zembed] = np.arange(len(zembed))
    Nad, proj = quotient(N, Zsub)
    reps = coset_representatives(proj)
    act_ad = [Automorphism(Nad, proj.image[act[g][reps]]) for g in range(G.order)]

    fixed = [n for n in range(N.order) if np.all(act[:, n] == n)]
    center_fixed = [n for n in fixed if n in Zsub]
    adjoint_fixed = [x for x in range(Nad.order) if all(a(x) == x for a in act_ad)]

    h1z = cohomology(G, zmod, 1)
    connecting: Dict[int, Tuple[int, ...]] = {}
    for x in adjoint_fixed:
        n = int(reps[x])
        values = N.table[N.inverses[n], act[:, n]]
        ensure(bool(np.all(zpos[values] >= 0)), "connecting cocycle leaves the center")
        cocycle = Cochain(1, G, zmod, zpos[values])
        connecting[x] = h1z.class_of(cocycle).coords

    h1 = h1_pointed(G, N, S, budget)
    h1_ad = h1_pointed(G, Nad, act_ad, budget)
    center_to_h1: Dict[Tuple[int, ...], int] = {}
    for z in crossed_homomorphisms(G, zmod.carrier, zmod.action, budget):
        coords = h1z.class_of(Cochain(1, G, zmod, z.values)).coords
        orbit = h1.orbit_of(Cochain(1, G, N, zembed[z.values]))
        ensure(center_to_h1.setdefault(coords, orbit) == orbit, "H^1(G,Z(N)) -> H^1(G,N) is not well defined")
    h1_to_adjoint: Dict[int, int] = {}
    for o, members in enumerate(h1.orbits):
        for i in members:
            image = h1_ad.orbit_of(Cochain(1, G, Nad, proj.image[h1.cocycles[i].values]))
            ensure(h1_to_adjoint.setdefault(o, image) == image, "H^1(G,N) -> H^1(G,N_ad) is not well defined")

    zero = tuple(0 for _ in h1z.invariants)
    exactness = {
        "N^G": sorted(n for n in fixed if proj(n) == 0) == center_fixed,
        "N_ad^G": sorted({proj(n) for n in fixed}) == sorted(x for x, c in connecting.items() if c == zero),
        "H1(G,Z(N))": set(connecting.values()) == {c for c, o in center_to_h1.items() if o == h1.base},
        "H1(G,N)": set(center_to_h1.values()) == {o for o, a in h1_to_adjoint.items() if a == h1_ad.base},
    }
    return SevenTermSequence(
        center_fixed, fixed, adjoint_fixed, connecting, h1z, sorted(center_to_h1),
        h1, h1_ad, center_to_h1, h1_to_adjoint, exactness,
    )
