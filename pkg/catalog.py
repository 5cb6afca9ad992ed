"""
Group Catalog
=============
Named groups, permutation-generator groups and group spec resolution.

Accepted specs:
    C<n>, V4, S3, D<n> (dihedral of order 2n), Q8, products A x B ... (written "AxB")
    perm:<points>:<cycles>;<cycles>     e.g. perm:3:(1 2 3);(1 2)
    cayley:<path>                        a group document written by serialization.py
"""

import logging
import re
from functools import lru_cache
from itertools import combinations_with_replacement
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np
from sympy.combinatorics import Permutation, PermutationGroup

from algebra.cohomology import abelian_invariants
from algebra.errors import BoundExceeded, ValidationError
from algebra.groups import DEFAULT_MAX_ORDER, FiniteGroup, direct_product, isomorphic, make_group
from data_models import GroupSpec

logger = logging.getLogger(__name__)

_CYCLIC_RE = re.compile(r"[CZ](\d+)", re.IGNORECASE)
_DIHEDRAL_RE = re.compile(r"D(\d+)", re.IGNORECASE)
_CYCLE_RE = re.compile(r"\(([^()]*)\)")

# quaternion units 1, i, j, k as (unit, sign) pairs; index = 2 * unit + (sign < 0)
_UNIT_PRODUCT = {
    (1, 1): (0, -1), (1, 2): (3, 1), (1, 3): (2, -1),
    (2, 1): (3, -1), (2, 2): (0, -1), (2, 3): (1, 1),
    (3, 1): (2, 1), (3, 2): (1, -1), (3, 3): (0, -1),
}


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise ValidationError(f"cyclic group order must be positive, got {n}")
    a = np.arange(n)
    return FiniteGroup((a[:, None] + a[None, :]) % n, label=f"C{n}")


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, r^i s^a stored at i + n * a."""
    if n < 2:
        raise ValidationError(f"dihedral group needs n >= 2, got {n}")
    x = np.arange(2 * n)
    i, a = x % n, x // n
    sign = np.where(a == 0, 1, -1)
    rot = (i[:, None] + sign[:, None] * i[None, :]) % n
    return FiniteGroup(rot + n * ((a[:, None] + a[None, :]) % 2), label=f"D{n}")


@lru_cache(maxsize=None)
def quaternion() -> FiniteGroup:
    """Q8 with 0:1 1:-1 2:i 3:-i 4:j 5:-j 6:k 7:-k."""
    table = np.zeros((8, 8), dtype=np.int64)
    for x in range(8):
        for y in range(8):
            u, v = x // 2, y // 2
            sign = (-1) ** (x % 2 + y % 2)
            if u == 0 or v == 0:
                w, s = u + v, 1
            else:
                w, s = _UNIT_PRODUCT[(u, v)]
            table[x, y] = 2 * w + (sign * s < 0)
    return FiniteGroup(table, label="Q8")


def parse_cycles(text: str, points: int) -> Permutation:
    """One generator in 1-based cycle notation, "(1 2 3)(4 5)" or "(1,2,3)"."""
    cycles = []
    for body in _CYCLE_RE.findall(text):
        entries = [int(p) - 1 for p in re.split(r"[\s,]+", body.strip()) if p]
        if any(p < 0 or p >= points for p in entries):
            raise ValidationError(f"cycle {body!r} leaves the points 1..{points}")
        if len(set(entries)) != len(entries):
            raise ValidationError(f"cycle {body!r} repeats a point")
        if entries:
            cycles.append(entries)
    leftover = _CYCLE_RE.sub("", text).strip()
    if leftover:
        raise ValidationError(f"unexpected text {leftover!r} in permutation {text!r}")
    return Permutation(cycles, size=points)


def permutation_group(points: int, generators: Sequence[str], label: Optional[str] = None,
                      bound: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    """The group generated by the given permutations; elements sorted by array form."""
    gens = [parse_cycles(g, points) for g in generators] or [Permutation(list(range(points)))]
    group = PermutationGroup(gens)
    if group.order() > bound:
        raise BoundExceeded("group order", int(group.order()), bound)
    elements = sorted(group.elements, key=lambda p: p.array_form)
    position = {tuple(p.array_form): i for i, p in enumerate(elements)}
    table = [[position[tuple((p * q).array_form)] for q in elements] for p in elements]
    return make_group(table, label=label)


def named_group(name: str, bound: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    """Catalog lookup; products are folded left to right with direct_product."""
    clean = re.sub(r"\s+", "", name).replace("×", "x").replace("X", "x")
    if not clean:
        raise ValidationError("group name cannot be empty")
    if "x" in clean:
        factors = [named_group(part, bound) for part in clean.split("x")]
        group = factors[0]
        for factor in factors[1:]:
            group = direct_product(group, factor)
        if group.order > bound:
            raise BoundExceeded("group order", group.order, bound)
        return FiniteGroup(group.table, label=clean)
    if clean.upper() == "V4":
        return FiniteGroup(direct_product(cyclic(2), cyclic(2)).table, label="V4")
    if clean.upper() == "Q8":
        return quaternion()
    if clean.upper() == "S3":
        return permutation_group(3, ["(1 2 3)", "(1 2)"], label="S3")
    m = _CYCLIC_RE.fullmatch(clean)
    if m:
        return cyclic(int(m.group(1)))
    m = _DIHEDRAL_RE.fullmatch(clean)
    if m:
        return dihedral(int(m.group(1)))
    raise ValidationError(f"unknown group {name!r}")


def parse_group_spec(text: str) -> GroupSpec:
    """Split a command-line group argument into its kind and payload."""
    if text.startswith("perm:"):
        _, points, gens = (text.split(":", 2) + [""])[:3]
        if not points.isdigit():
            raise ValidationError(f"permutation spec {text!r} needs a point count")
        return GroupSpec(kind="perm", value=text, points=int(points),
                         generators=[g for g in gens.split(";") if g.strip()])
    if text.startswith("cayley:"):
        return GroupSpec(kind="cayley", value=text, path=text[len("cayley:"):])
    return GroupSpec(kind="named", value=text)


def resolve_group(spec: GroupSpec, bound: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    if spec.kind == "named":
        group = named_group(spec.value, bound)
    elif spec.kind == "perm":
        group = permutation_group(spec.points, spec.generators, label=spec.value, bound=bound)
    elif spec.kind == "cayley":
        from serialization import load_group

        group = load_group(Path(spec.path).read_text())
    else:
        raise ValidationError(f"unknown group spec kind {spec.kind!r}")
    if group.order > bound:
        raise BoundExceeded("group order", group.order, bound)
    return group


def group_from_text(text: str, bound: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    return resolve_group(parse_group_spec(text), bound)


def _abelian_name(factors: Sequence[int]) -> str:
    if not factors:
        return "C1"
    if list(factors) == [2, 2]:
        return "V4"
    return "x".join(f"C{d}" for d in factors)


def _nonabelian_candidates(order: int) -> List[str]:
    names = []
    if order == 6:
        names.append("S3")
    if order == 8:
        names.append("Q8")
    if order % 2 == 0 and order // 2 >= 3:
        names.append(f"D{order // 2}")
    for base, base_order in (("S3", 6), ("Q8", 8), ("D4", 8)):
        if order % base_order == 0 and order > base_order:
            names.append(f"{base}xC{order // base_order}")
    return names


def identify(group: FiniteGroup, bound: int = DEFAULT_MAX_ORDER) -> Optional[str]:
    """A catalog name isomorphic to the group, or None when the catalog has none."""
    if group.is_abelian:
        factors, _ = abelian_invariants(group)
        return _abelian_name(factors)
    for name in _nonabelian_candidates(group.order):
        try:
            candidate = named_group(name, bound)
        except (BoundExceeded, ValidationError):
            continue
        if isomorphic(group, candidate, bound) is not None:
            return name
    logger.debug("no catalog name for a group of order %d", group.order)
    return None


def catalog_names(max_order: int) -> List[str]:
    """Names used by search sweeps, one per isomorphism type up to max_order."""
    names = [f"C{n}" for n in range(1, max_order + 1)]
    for a, b in combinations_with_replacement(range(2, max_order + 1), 2):
        if b % a == 0 and a * b <= max_order:
            names.append(_abelian_name((a, b)))
    if 8 <= max_order:
        names.append("C2xC2xC2")
    for n in range(3, max_order // 2 + 1):
        names.append("S3" if n == 3 else f"D{n}")
    if 8 <= max_order:
        names.append("Q8")
    return names
