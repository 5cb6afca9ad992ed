"""
Integer Linear Algebra
======================
Smith normal forms over ZZ for small relation matrices, and over Z/e for
the cochain matrices behind cohomology, where every entry stays below e.

The modular form keeps the transforms it is asked for so that callers can
solve coboundary equations and read off cocycle coordinates. Matrices over
ZZ go through sympy's DomainMatrix.
"""

import logging
from dataclasses import dataclass
from math import gcd
from typing import List, Optional, Sequence, Tuple

import numpy as np
from sympy.core.intfunc import igcdex
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import smith_normal_decomp

from .errors import BoundExceeded

logger = logging.getLogger(__name__)


def to_domain(matrix: np.ndarray) -> DomainMatrix:
    """Convert an integer numpy array to a dense DomainMatrix over ZZ."""
    rows, cols = matrix.shape
    if rows == 0 or cols == 0:
        return DomainMatrix.zeros((rows, cols), ZZ).to_dense()
    data = [[ZZ(int(x)) for x in row] for row in matrix.tolist()]
    return DomainMatrix(data, (rows, cols), ZZ)


def from_domain(matrix: DomainMatrix) -> np.ndarray:
    """Convert a DomainMatrix over ZZ to an object array of Python ints."""
    rows, cols = matrix.shape
    out = np.empty((rows, cols), dtype=object)
    for i, row in enumerate(matrix.to_list()):
        for j, entry in enumerate(row):
            out[i, j] = int(entry)
    return out


def exact(matrix: np.ndarray) -> np.ndarray:
    """Copy an integer array into an object array of Python ints."""
    values = np.asarray(matrix)
    out = np.empty(values.shape, dtype=object)
    for index, x in np.ndenumerate(values):
        out[index] = int(x)
    return out


@dataclass(frozen=True)
class SmithForm:
    """D = left @ M @ right with D diagonal; rank entries of D are nonzero."""

    shape: Tuple[int, int]
    diagonal: Tuple[int, ...]
    left: np.ndarray
    right: np.ndarray

    @property
    def rank(self) -> int:
        return len(self.diagonal)


def smith_form(matrix: np.ndarray) -> SmithForm:
    rows, cols = matrix.shape
    if rows == 0 or cols == 0:
        return SmithForm(
            (rows, cols), (),
            exact(np.eye(rows, dtype=np.int64)), exact(np.eye(cols, dtype=np.int64)),
        )
    logger.debug("smith normal form of a %dx%d matrix", rows, cols)
    snf, left, right = smith_normal_decomp(to_domain(matrix))
    entries = snf.to_list()
    diagonal = []
    for i in range(min(rows, cols)):
        d = int(entries[i][i])
        if d == 0:
            break
        diagonal.append(d)
    return SmithForm((rows, cols), tuple(diagonal), from_domain(left), from_domain(right))


MAX_MODULUS = 1 << 30
DEFAULT_MAX_ENTRIES = 25_000_000
LOOKUP_LIMIT = 1 << 20


def dot_mod(a: np.ndarray, b: np.ndarray, modulus: int) -> np.ndarray:
    """a @ b reduced mod modulus, falling back to Python ints when int64 could overflow."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    inner = a.shape[-1] if a.ndim else 1
    if inner * (modulus - 1) ** 2 < (1 << 62):
        return (a @ b) % modulus
    out = (exact(a) @ exact(b)) % modulus
    return out.astype(np.int64)


def unit_to_divisor(a: int, modulus: int) -> Tuple[int, int]:
    """A unit u of Z/modulus and g = gcd(a, modulus) with u * a = g (mod modulus)."""
    g = gcd(a, modulus)
    step = modulus // g
    u = pow(a // g, -1, step) if step > 1 else 1
    while gcd(u, modulus) != 1:
        u += step
    return u % modulus, g


@dataclass(frozen=True, eq=False)
class ModularSmith:
    """
    Smith form of an integer matrix over Z/e: left @ M @ right = D (mod e).

    The diagonal entries divide e and each divides the next. left and right
    (with their inverses) are only kept when requested.
    """

    modulus: int
    shape: Tuple[int, int]
    diagonal: Tuple[int, ...]
    left: Optional[np.ndarray] = None
    left_inverse: Optional[np.ndarray] = None
    right: Optional[np.ndarray] = None
    right_inverse: Optional[np.ndarray] = None

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    @property
    def torsion(self) -> Tuple[int, ...]:
        """Orders of the cyclic summands of coker M, one per row (1 for trivial summands)."""
        return self.diagonal + (self.modulus,) * (self.shape[0] - self.rank)

    @property
    def kernel_scales(self) -> np.ndarray:
        """c with ker M = right @ diag(c) (Z/e)^cols."""
        scales = np.ones(self.shape[1], dtype=np.int64)
        scales[:self.rank] = [self.modulus // d for d in self.diagonal]
        return scales

    def solve(self, rhs: Sequence[int]) -> Optional[np.ndarray]:
        """Some x with M x = rhs (mod e), or None when none exists."""
        rows, cols = self.shape
        e = self.modulus
        if self.left is None or self.right is None:
            raise ValueError("solving needs both transforms")
        z = dot_mod(self.left, np.asarray(rhs, dtype=np.int64) % e, e) if rows else np.zeros(0, dtype=np.int64)
        if z[self.rank:].any():
            return None
        y = np.zeros(cols, dtype=np.int64)
        for i, d in enumerate(self.diagonal):
            if z[i] % d:
                return None
            y[i] = z[i] // d
        return dot_mod(self.right, y, e) if cols else y


class _Elimination:
    """Row and column operations on a working matrix, mirrored on the transforms."""

    def __init__(self, matrix: np.ndarray, modulus: int, left: bool, right: bool):
        rows, cols = matrix.shape
        self.e = modulus
        self.work = np.asarray(matrix, dtype=np.int64) % modulus
        self.left = np.eye(rows, dtype=np.int64) if left else None
        self.left_inverse = np.eye(rows, dtype=np.int64) if left else None
        self.right = np.eye(cols, dtype=np.int64) if right else None
        self.right_inverse = np.eye(cols, dtype=np.int64) if right else None

    def swap_rows(self, i: int, j: int) -> None:
        if i == j:
            return
        self.work[[i, j]] = self.work[[j, i]]
        if self.left is not None:
            self.left[[i, j]] = self.left[[j, i]]
            self.left_inverse[:, [i, j]] = self.left_inverse[:, [j, i]]

    def swap_cols(self, i: int, j: int) -> None:
        if i == j:
            return
        self.work[:, [i, j]] = self.work[:, [j, i]]
        if self.right is not None:
            self.right[:, [i, j]] = self.right[:, [j, i]]
            self.right_inverse[[i, j]] = self.right_inverse[[j, i]]

    def scale_row(self, i: int, unit: int) -> None:
        e = self.e
        self.work[i] = (self.work[i] * unit) % e
        if self.left is not None:
            self.left[i] = (self.left[i] * unit) % e
            self.left_inverse[:, i] = (self.left_inverse[:, i] * pow(unit, -1, e)) % e

    @staticmethod
    def _mix(first: np.ndarray, second: np.ndarray, s: int, x: int, p: int, q: int, e: int):
        return (s * first + x * second) % e, (p * first + q * second) % e

    def combine_rows(self, t: int, i: int, s: int, x: int, p: int, q: int) -> None:
        """row_t, row_i <- s row_t + x row_i, p row_t + q row_i (s q - x p = 1)."""
        e = self.e
        self.work[t], self.work[i] = self._mix(self.work[t], self.work[i], s, x, p, q, e)
        if self.left is not None:
            self.left[t], self.left[i] = self._mix(self.left[t], self.left[i], s, x, p, q, e)
            inv = self.left_inverse
            inv[:, t], inv[:, i] = self._mix(inv[:, t], inv[:, i], q, -p, -x, s, e)

    def combine_cols(self, t: int, j: int, s: int, x: int, p: int, q: int) -> None:
        """col_t, col_j <- s col_t + x col_j, p col_t + q col_j (s q - x p = 1)."""
        e = self.e
        self.work[:, t], self.work[:, j] = self._mix(self.work[:, t], self.work[:, j], s, x, p, q, e)
        if self.right is not None:
            self.right[:, t], self.right[:, j] = self._mix(self.right[:, t], self.right[:, j], s, x, p, q, e)
            inv = self.right_inverse
            inv[t], inv[j] = self._mix(inv[t], inv[j], q, -p, -x, s, e)

    def add_row(self, t: int, i: int) -> None:
        e = self.e
        self.work[t] = (self.work[t] + self.work[i]) % e
        if self.left is not None:
            self.left[t] = (self.left[t] + self.left[i]) % e
            self.left_inverse[:, i] = (self.left_inverse[:, i] - self.left_inverse[:, t]) % e

    def clear(self, t: int, pivot: int) -> None:
        """Zero row t and column t off the diagonal; pivot divides all of them."""
        e = self.e
        below = np.nonzero(self.work[t + 1:, t])[0] + t + 1
        if len(below):
            q = self.work[below, t] // pivot
            self.work[below] = (self.work[below] - q[:, None] * self.work[t]) % e
            if self.left is not None:
                self.left[below] = (self.left[below] - q[:, None] * self.left[t]) % e
                self.left_inverse[:, t] = (self.left_inverse[:, t] + dot_mod(self.left_inverse[:, below], q, e)) % e
        beyond = np.nonzero(self.work[t, t + 1:])[0] + t + 1
        if len(beyond):
            q = self.work[t, beyond] // pivot
            self.work[t, beyond] = 0
            if self.right is not None:
                self.right[:, beyond] = (self.right[:, beyond] - self.right[:, [t]] * q[None, :]) % e
                self.right_inverse[t] = (self.right_inverse[t] + dot_mod(q, self.right_inverse[beyond], e)) % e

    def settle(self, t: int) -> int:
        """Make work[t, t] a divisor of e dividing every entry of the remaining block."""
        e = self.e
        while True:
            unit, pivot = unit_to_divisor(int(self.work[t, t]), e)
            if unit != 1:
                self.scale_row(t, unit)
            if pivot == 1:
                self.clear(t, pivot)
                return pivot
            column = self.work[t + 1:, t]
            bad = np.nonzero(column % pivot)[0]
            if len(bad):
                i = t + 1 + int(bad[0])
                b = int(self.work[i, t])
                s, x, h = igcdex(pivot, b)
                self.combine_rows(t, i, int(s), int(x), -b // int(h), pivot // int(h))
                continue
            row = self.work[t, t + 1:]
            bad = np.nonzero(row % pivot)[0]
            if len(bad):
                j = t + 1 + int(bad[0])
                b = int(self.work[t, j])
                s, x, h = igcdex(pivot, b)
                self.combine_cols(t, j, int(s), int(x), -b // int(h), pivot // int(h))
                continue
            self.clear(t, pivot)
            rest = np.argwhere(self.work[t + 1:, t + 1:] % pivot)
            if len(rest):
                self.add_row(t, t + 1 + int(rest[0][0]))
                continue
            return pivot


def modular_smith(matrix: np.ndarray, modulus: int, left: bool = False, right: bool = False,
                  max_entries: int = DEFAULT_MAX_ENTRIES) -> ModularSmith:
    """Smith form of an integer matrix over Z/modulus, with entries kept below the modulus."""
    e = int(modulus)
    rows, cols = matrix.shape
    if e < 1 or e >= MAX_MODULUS:
        raise BoundExceeded("modulus", e, MAX_MODULUS - 1)
    if rows * cols > max_entries:
        raise BoundExceeded("matrix entries", rows * cols, max_entries)
    state = _Elimination(matrix, e, left, right)
    logger.debug("smith form of a %dx%d matrix mod %d", rows, cols, e)
    # pivot key: gcd with e, zero entries last
    divisors = np.gcd(np.arange(e, dtype=np.int64), e) if e <= LOOKUP_LIMIT else None
    if divisors is not None:
        divisors[0] = e
    diagonal: List[int] = []
    for t in range(min(rows, cols)):
        block = state.work[t:, t:]
        if divisors is not None:
            keys = divisors[block]
        else:
            keys = np.gcd(block, e)
            keys[block == 0] = e
        flat = int(np.argmin(keys))
        if keys.flat[flat] == e:
            break
        i, j = divmod(flat, block.shape[1])
        state.swap_rows(t, t + i)
        state.swap_cols(t, t + j)
        diagonal.append(state.settle(t))
    return ModularSmith(
        e, (rows, cols), tuple(diagonal),
        state.left, state.left_inverse, state.right, state.right_inverse,
    )
