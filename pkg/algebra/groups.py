"""
Group Core
==========
Finite groups given by Cayley tables with the identity pinned at index 0,
their subgroups, quotients and homomorphisms, and the backtracking searches
for automorphisms and isomorphisms.
"""

import hashlib
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterator, List, Optional, Protocol, Sequence, Tuple

import numpy as np

from .errors import (
    BoundExceeded,
    NoIdentity,
    NoInverse,
    NotAHomomorphism,
    NotAssociative,
    NotLatinSquare,
    NotNormal,
    ValidationError,
)

logger = logging.getLogger(__name__)

DEFAULT_MAX_ORDER = 128


class FiniteGroup:
    """A finite group by Cayley table; table[a][b] is the index of a*b."""

    identity = 0

    def __init__(self, table: np.ndarray, label: Optional[str] = None):
        self.table = np.array(table, dtype=np.int64)
        self.table.setflags(write=False)
        self.order = int(self.table.shape[0])
        self.label = label

    def __repr__(self) -> str:
        return f"FiniteGroup(order={self.order}, label={self.label!r})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FiniteGroup) and self.fingerprint == other.fingerprint

    def __hash__(self) -> int:
        return hash(self.fingerprint)

    @cached_property
    def fingerprint(self) -> str:
        digest = hashlib.sha256(str(self.order).encode())
        digest.update(self.table.tobytes())
        return digest.hexdigest()

    @cached_property
    def inverses(self) -> np.ndarray:
        inv = np.argmax(self.table == 0, axis=1)
        inv.setflags(write=False)
        return inv

    @cached_property
    def element_orders(self) -> np.ndarray:
        orders = np.zeros(self.order, dtype=np.int64)
        current = np.arange(self.order)
        for k in range(1, self.order + 1):
            orders[(current == 0) & (orders == 0)] = k
            if np.all(orders > 0):
                break
            current = self.table[current, np.arange(self.order)]
        orders.setflags(write=False)
        return orders

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    @cached_property
    def generators(self) -> Tuple[int, ...]:
        """Greedy generating set: smallest elements extending the generated subgroup."""
        gens: List[int] = []
        current = {0}
        for x in range(self.order):
            if x not in current:
                gens.append(x)
                current = set(closure(self, gens))
        return tuple(gens)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverses[a])

    def conjugate(self, g: int, x: int) -> int:
        """g x g^-1"""
        return int(self.table[self.table[g, x], self.inverses[g]])

    def power(self, a: int, k: int) -> int:
        result = 0
        base = a if k >= 0 else self.inv(a)
        for _ in range(abs(k)):
            result = int(self.table[result, base])
        return result


def closure(group: FiniteGroup, gens: Sequence[int]) -> List[int]:
    """Sorted elements of the subgroup generated by gens."""
    seen = {0}
    queue = [0]
    for x in queue:
        for s in gens:
            y = int(group.table[x, s])
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return sorted(seen)


def _first_associativity_failure(table: np.ndarray) -> Optional[Tuple[int, int, int]]:
    n = table.shape[0]
    block = max(1, (1 << 21) // (n * n))
    for start in range(0, n, block):
        a = np.arange(start, min(n, start + block))
        left = table[table[a]]
        right = table[a[:, None, None], table[None, :, :]]
        bad = np.argwhere(left != right)
        if len(bad):
            i, b, c = bad[0]
            return int(a[i]), int(b), int(c)
    return None


def make_group(table, label: Optional[str] = None) -> FiniteGroup:
    """Validate a Cayley table and relabel so that the identity sits at index 0."""
    arr = np.asarray(table)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise ValidationError("group table must be a non-empty square array")
    if not np.issubdtype(arr.dtype, np.integer):
        raise ValidationError("group table entries must be integers")
    arr = arr.astype(np.int64)
    n = arr.shape[0]
    if arr.min() < 0 or arr.max() >= n:
        raise ValidationError(f"group table entries must lie in 0..{n - 1}")

    ident = np.arange(n)
    candidates = [
        e for e in range(n)
        if np.array_equal(arr[e], ident) and np.array_equal(arr[:, e], ident)
    ]
    if not candidates:
        raise NoIdentity()
    e = candidates[0]
    if e != 0:
        swap = np.arange(n)
        swap[0], swap[e] = e, 0
        arr = swap[arr[np.ix_(swap, swap)]]

    failure = _first_associativity_failure(arr)
    if failure is not None:
        raise NotAssociative(failure)

    for axis, view in (("row", arr), ("column", arr.T)):
        bad = np.nonzero(np.any(np.sort(view, axis=1) != ident, axis=1))[0]
        if len(bad):
            raise NotLatinSquare(axis, int(bad[0]))

    right_inv = np.argmax(arr == 0, axis=1)
    for a in range(n):
        if arr[right_inv[a], a] != 0:
            raise NoInverse(a)

    return FiniteGroup(arr, label=label)


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: FiniteGroup
    elements: Tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x: int) -> bool:
        return x in self.member_set

    @cached_property
    def member_set(self) -> frozenset:
        return frozenset(self.elements)

    @cached_property
    def mask(self) -> np.ndarray:
        mask = np.zeros(self.parent.order, dtype=bool)
        mask[list(self.elements)] = True
        return mask

    def normality_witness(self) -> Optional[Tuple[int, int]]:
        """(element, conjugator) with the conjugate outside, or None if normal."""
        G = self.parent
        k = np.array(self.elements)
        g = np.arange(G.order)
        conj = G.table[G.table[g[:, None], k[None, :]], G.inverses[g][:, None]]
        bad = np.argwhere(~self.mask[conj])
        if len(bad):
            gi, ki = bad[0]
            return int(k[ki]), int(g[gi])
        return None

    def is_normal(self) -> bool:
        return self.normality_witness() is None

    @cached_property
    def group_and_embedding(self) -> Tuple[FiniteGroup, np.ndarray]:
        embedding = np.array(self.elements, dtype=np.int64)
        position = np.full(self.parent.order, -1, dtype=np.int64)
        position[embedding] = np.arange(len(embedding))
        table = position[self.parent.table[np.ix_(embedding, embedding)]]
        return FiniteGroup(table), embedding

    def as_group(self) -> Tuple[FiniteGroup, np.ndarray]:
        """The subgroup as a FiniteGroup (sorted relabeling) with its embedding array."""
        return self.group_and_embedding


def subgroup_generated(G: FiniteGroup, gens: Sequence[int]) -> Subgroup:
    return Subgroup(G, tuple(closure(G, gens)))


def center(G: FiniteGroup) -> Subgroup:
    commuting = np.all(G.table == G.table.T, axis=1)
    return Subgroup(G, tuple(int(z) for z in np.nonzero(commuting)[0]))


class GroupMap:
    """A map between finite groups given element-wise."""

    def __init__(self, source: FiniteGroup, target: FiniteGroup, image):
        self.source = source
        self.target = target
        self.image = np.array(image, dtype=np.int64)
        self.image.setflags(write=False)

    def __call__(self, x: int) -> int:
        return int(self.image[x])

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, GroupMap)
            and self.source == other.source
            and self.target == other.target
            and np.array_equal(self.image, other.image)
        )

    def __hash__(self) -> int:
        return hash(self.image.tobytes())

    def failure(self) -> Optional[Tuple[int, int]]:
        """First pair (a, b) with image[ab] != image[a]image[b], or None."""
        img = self.image
        lhs = img[self.source.table]
        rhs = self.target.table[img[:, None], img[None, :]]
        bad = np.argwhere(lhs != rhs)
        if img[0] != 0:
            return (0, 0)
        return (int(bad[0][0]), int(bad[0][1])) if len(bad) else None

    def compose(self, other: "GroupMap") -> "GroupMap":
        """self o other"""
        return GroupMap(other.source, self.target, self.image[other.image])

    def kernel(self) -> Subgroup:
        return Subgroup(self.source, tuple(int(x) for x in np.nonzero(self.image == 0)[0]))

    def image_subgroup(self) -> Subgroup:
        return Subgroup(self.target, tuple(sorted({int(x) for x in self.image})))

    def is_injective(self) -> bool:
        return len(np.unique(self.image)) == self.source.order

    def is_surjective(self) -> bool:
        return len(np.unique(self.image)) == self.target.order


def group_map(source: FiniteGroup, target: FiniteGroup, image) -> GroupMap:
    """Build a GroupMap and check that it is a homomorphism."""
    phi = GroupMap(source, target, image)
    bad = phi.failure()
    if bad is not None:
        raise NotAHomomorphism(bad)
    return phi


class Automorphism:
    """An automorphism stored as forward and backward permutations."""

    def __init__(self, base: FiniteGroup, forward, backward=None):
        self.base = base
        self.forward = np.array(forward, dtype=np.int64)
        self.forward.setflags(write=False)
        if backward is None:
            backward = np.empty_like(self.forward)
            backward[self.forward] = np.arange(len(self.forward))
        self.backward = np.array(backward, dtype=np.int64)
        self.backward.setflags(write=False)

    @classmethod
    def identity(cls, base: FiniteGroup) -> "Automorphism":
        return cls(base, np.arange(base.order))

    @classmethod
    def conjugation(cls, base: FiniteGroup, g: int) -> "Automorphism":
        """c_g(x) = g x g^-1"""
        T, inv = base.table, base.inverses
        forward = T[T[g], inv[g]]
        backward = T[T[inv[g]], g]
        return cls(base, forward, backward)

    @cached_property
    def key(self) -> bytes:
        return self.forward.tobytes()

    def __call__(self, x: int) -> int:
        return int(self.forward[x])

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Automorphism) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"Automorphism({self.forward.tolist()})"

    def compose(self, other: "Automorphism") -> "Automorphism":
        """self o other"""
        return Automorphism(self.base, self.forward[other.forward], other.backward[self.backward])

    def inverse(self) -> "Automorphism":
        return Automorphism(self.base, self.backward, self.forward)

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.forward, np.arange(len(self.forward))))

    def as_map(self) -> GroupMap:
        return GroupMap(self.base, self.base, self.forward)


def automorphism(base: FiniteGroup, forward) -> Automorphism:
    """Build an Automorphism from a forward array, checking bijectivity and multiplicativity."""
    forward = np.asarray(forward, dtype=np.int64)
    if sorted(forward.tolist()) != list(range(base.order)):
        raise NotAHomomorphism((0, 0), "automorphism forward array is not a permutation")
    bad = GroupMap(base, base, forward).failure()
    if bad is not None:
        raise NotAHomomorphism(bad)
    return Automorphism(base, forward)


def _extend(source: FiniteGroup, target: FiniteGroup, gens: Sequence[int],
            images: Sequence[int]) -> Optional[np.ndarray]:
    """Propagate generator images along right multiplication; -1 outside <gens>."""
    S, T = source.table, target.table
    phi = np.full(source.order, -1, dtype=np.int64)
    phi[0] = 0
    queue = [0]
    for x in queue:
        px = phi[x]
        for s, t in zip(gens, images):
            y = S[x, s]
            v = T[px, t]
            if phi[y] == -1:
                phi[y] = v
                queue.append(int(y))
            elif phi[y] != v:
                return None
    return phi


def _search(source: FiniteGroup, target: FiniteGroup, candidates: Sequence[Sequence[int]],
            bijective: bool) -> Iterator[np.ndarray]:
    gens = source.generators
    images: List[int] = []

    def extend(depth: int) -> Iterator[np.ndarray]:
        if depth == len(gens):
            phi = _extend(source, target, gens, images)
            if phi is not None:
                yield phi
            return
        for c in candidates[depth]:
            images.append(int(c))
            partial = _extend(source, target, gens[:depth + 1], images)
            if partial is not None:
                reached = partial[partial >= 0]
                if not bijective or len(np.unique(reached)) == len(reached):
                    yield from extend(depth + 1)
            images.pop()

    yield from extend(0)


def homomorphisms(source: FiniteGroup, target: FiniteGroup) -> Iterator[GroupMap]:
    """All homomorphisms source -> target in generator-image backtracking order."""
    orders_t = target.element_orders
    candidates = [
        [y for y in range(target.order) if source.element_orders[s] % orders_t[y] == 0]
        for s in source.generators
    ]
    for phi in _search(source, target, candidates, bijective=False):
        yield GroupMap(source, target, phi)


class AutomorphismCache(Protocol):
    def get(self, group: FiniteGroup) -> Optional[List[List[int]]]: ...

    def put(self, group: FiniteGroup, forwards: List[List[int]]) -> None: ...


def _check_bound(group: FiniteGroup, bound: int) -> None:
    if group.order > bound:
        raise BoundExceeded("group order", group.order, bound)


def automorphism_group(G: FiniteGroup, bound: int = DEFAULT_MAX_ORDER,
                       cache: Optional[AutomorphismCache] = None) -> List[Automorphism]:
    """All automorphisms of G, identity first, then lexicographic by forward array."""
    _check_bound(G, bound)
    if cache is not None:
        stored = cache.get(G)
        if stored is not None:
            return [Automorphism(G, forward) for forward in stored]
    orders = G.element_orders
    candidates = [[y for y in range(G.order) if orders[y] == orders[s]] for s in G.generators]
    found = sorted((tuple(int(v) for v in phi) for phi in _search(G, G, candidates, bijective=True)))
    logger.debug("found %d automorphisms of a group of order %d", len(found), G.order)
    if cache is not None:
        cache.put(G, [list(forward) for forward in found])
    return [Automorphism(G, forward) for forward in found]


def isomorphic(G1: FiniteGroup, G2: FiniteGroup, bound: int = DEFAULT_MAX_ORDER) -> Optional[GroupMap]:
    """An isomorphism G1 -> G2 if one exists (first in backtracking order)."""
    _check_bound(G1, bound)
    _check_bound(G2, bound)
    if G1.order != G2.order:
        return None
    if sorted(G1.element_orders.tolist()) != sorted(G2.element_orders.tolist()):
        return None
    orders2 = G2.element_orders
    candidates = [
        [y for y in range(G2.order) if orders2[y] == G1.element_orders[s]] for s in G1.generators
    ]
    for phi in _search(G1, G2, candidates, bijective=True):
        if len(np.unique(phi)) == G1.order:
            return GroupMap(G1, G2, phi)
    return None


class OuterClassTable:
    """Aut(N) partitioned into Inn(N)-cosets with canonical representatives."""

    def __init__(self, group: FiniteGroup, automorphisms: List[Automorphism]):
        self.group = group
        self.automorphisms = automorphisms
        inn: List[Automorphism] = []
        inner_index = np.zeros(group.order, dtype=np.int64)
        position: Dict[bytes, int] = {}
        self._inner_preimages: Dict[bytes, List[int]] = {}
        for n in range(group.order):
            c = Automorphism.conjugation(group, n)
            if c.key not in position:
                position[c.key] = len(inn)
                inn.append(c)
                self._inner_preimages[c.key] = []
            inner_index[n] = position[c.key]
            self._inner_preimages[c.key].append(n)
        self.inn = inn
        self.inner_index = inner_index
        self.inner_index.setflags(write=False)

        self._class_of: Dict[bytes, int] = {}
        classes: List[List[int]] = []
        index = {aut.key: i for i, aut in enumerate(automorphisms)}
        for i, aut in enumerate(automorphisms):
            if aut.key in self._class_of:
                continue
            members = sorted({index[aut.compose(c).key] for c in inn})
            for m in members:
                self._class_of[automorphisms[m].key] = -1
            classes.append(members)
        # members are sorted by forward array, so the first one is the lexicographic minimum
        classes.sort(key=lambda members: tuple(automorphisms[members[0]].forward.tolist()))
        for c, members in enumerate(classes):
            for m in members:
                self._class_of[automorphisms[m].key] = c
        self.classes = classes
        self.representatives = [automorphisms[members[0]] for members in classes]

    def class_of(self, aut: Automorphism) -> int:
        return self._class_of[aut.key]

    def inner_preimages(self, aut: Automorphism) -> List[int]:
        """Sorted {n : c_n = aut}; empty when aut is not inner."""
        return self._inner_preimages.get(aut.key, [])

    def inner_position(self, aut: Automorphism) -> Optional[int]:
        pre = self.inner_preimages(aut)
        return int(self.inner_index[pre[0]]) if pre else None

    @property
    def out_order(self) -> int:
        return len(self.classes)

    @cached_property
    def out_group(self) -> FiniteGroup:
        k = len(self.classes)
        table = np.zeros((k, k), dtype=np.int64)
        for i, a in enumerate(self.representatives):
            for j, b in enumerate(self.representatives):
                table[i, j] = self.class_of(a.compose(b))
        return FiniteGroup(table, label=f"Out({self.group.label or self.group.order})")

    @cached_property
    def inn_group(self) -> FiniteGroup:
        """Inn(N) under composition, indexed like self.inn."""
        position = {c.key: i for i, c in enumerate(self.inn)}
        k = len(self.inn)
        table = np.zeros((k, k), dtype=np.int64)
        for i, a in enumerate(self.inn):
            for j, b in enumerate(self.inn):
                table[i, j] = position[a.compose(b).key]
        return FiniteGroup(table)

    @cached_property
    def aut_position(self) -> Dict[bytes, int]:
        return {aut.key: i for i, aut in enumerate(self.automorphisms)}

    @cached_property
    def aut_group(self) -> FiniteGroup:
        """Aut(N) under composition, indexed like self.automorphisms."""
        position = self.aut_position
        table = np.array(
            [[position[a.compose(b).key] for b in self.automorphisms] for a in self.automorphisms],
            dtype=np.int64,
        )
        return FiniteGroup(table, label=f"Aut({self.group.label or self.group.order})")


def inner_and_outer(G: FiniteGroup, bound: int = DEFAULT_MAX_ORDER,
                    cache: Optional[AutomorphismCache] = None) -> OuterClassTable:
    return OuterClassTable(G, automorphism_group(G, bound, cache))


def automorphism_table(G: FiniteGroup, bound: int = DEFAULT_MAX_ORDER,
                       cache: Optional[AutomorphismCache] = None) -> Tuple[FiniteGroup, List[Automorphism]]:
    """Aut(G) as a FiniteGroup under composition, indexed like automorphism_group(G)."""
    auts = automorphism_group(G, bound, cache)
    position = {a.key: i for i, a in enumerate(auts)}
    table = np.array([[position[a.compose(b).key] for b in auts] for a in auts], dtype=np.int64)
    return FiniteGroup(table, label=f"Aut({G.label or G.order})"), auts


def quotient(G: FiniteGroup, K: Subgroup) -> Tuple[FiniteGroup, GroupMap]:
    """G/K on smallest coset representatives; representative order gives the indices."""
    witness = K.normality_witness()
    if witness is not None:
        raise NotNormal(*witness)
    k = np.array(K.elements)
    coset_min = G.table[:, k].min(axis=1)
    reps = np.unique(coset_min)
    position = np.full(G.order, -1, dtype=np.int64)
    position[reps] = np.arange(len(reps))
    proj = position[coset_min]
    quotient_group = FiniteGroup(proj[G.table[np.ix_(reps, reps)]])
    return quotient_group, GroupMap(G, quotient_group, proj)


def coset_representatives(proj: GroupMap) -> np.ndarray:
    """Smallest preimage of each target element under a surjection."""
    reps = np.full(proj.target.order, -1, dtype=np.int64)
    for x in range(proj.source.order - 1, -1, -1):
        reps[proj.image[x]] = x
    return reps


def direct_product(G: FiniteGroup, H: FiniteGroup, label: Optional[str] = None) -> FiniteGroup:
    """G x H with (a, b) flattened to a + |G| * b."""
    n, m = G.order, H.order
    a = np.arange(n * m) % n
    b = np.arange(n * m) // n
    table = G.table[a[:, None], a[None, :]] + n * H.table[b[:, None], b[None, :]]
    return FiniteGroup(table, label=label)
