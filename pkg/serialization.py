"""
Serialization
=============
Line-oriented, versioned text documents for groups, cochains, kernels,
factor systems, crossed modules, automorphism pairs and group actions.

Every document starts with a header line "extkit <kind> v1". Blank lines
and lines starting with '#' are ignored. Tables are rows of whitespace
separated indices; cochains list their non-identity values as
"g1 g2 ... : value".
"""

import logging
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from algebra.cohomology import Cochain, Coefficients, CoefficientModule
from algebra.crossed_modules import CrossedModule
from algebra.errors import ExtkitError, MalformedDocument, SchemaMismatch, ValidationError
from algebra.factor_systems import FactorSystem, OuterActionLift
from algebra.groups import DEFAULT_MAX_ORDER, Automorphism, AutomorphismCache, FiniteGroup, GroupMap, make_group
from algebra.kernels import GKernel, kernel_from_action, make_kernel

logger = logging.getLogger(__name__)

VERSION = "v1"


def header(kind: str) -> str:
    return f"extkit {kind} {VERSION}"


class _Reader:
    """Cursor over the significant lines of a document, keeping line numbers."""

    def __init__(self, text: str, kind: str):
        self.lines: List[Tuple[int, str]] = [
            (number, line.strip())
            for number, line in enumerate(text.splitlines(), start=1)
            if line.strip() and not line.strip().startswith('#')
        ]
        self.position = 0
        expected = header(kind)
        found = self.lines[0][1] if self.lines else ""
        if found != expected:
            raise SchemaMismatch(expected, found)
        self.position = 1

    @property
    def line(self) -> int:
        if self.position < len(self.lines):
            return self.lines[self.position][0]
        return self.lines[-1][0] + 1

    def done(self) -> bool:
        return self.position >= len(self.lines)

    def peek(self) -> Optional[str]:
        return None if self.done() else self.lines[self.position][1]

    def take(self, field: str) -> str:
        if self.done():
            raise MalformedDocument(self.line, field, "unexpected end of document")
        text = self.lines[self.position][1]
        self.position += 1
        return text

    def keyword(self, field: str) -> str:
        """Consume "<field> <rest>" and return rest."""
        number = self.line
        text = self.take(field)
        name, _, rest = text.partition(' ')
        if name != field:
            raise MalformedDocument(number, field, f"expected '{field}', found '{name}'")
        return rest.strip()

    def integers(self, field: str, text: str, number: int, count: Optional[int] = None) -> List[int]:
        try:
            values = [int(v) for v in text.split()]
        except ValueError:
            raise MalformedDocument(number, field, f"expected integers, found '{text}'") from None
        if count is not None and len(values) != count:
            raise MalformedDocument(number, field, f"expected {count} entries, found {len(values)}")
        return values

    def rows(self, field: str, count: int, width: int) -> np.ndarray:
        rows = []
        for _ in range(count):
            number = self.line
            rows.append(self.integers(field, self.take(field), number, width))
        return np.array(rows, dtype=np.int64).reshape(count, width)

    def finish(self) -> None:
        if not self.done():
            raise MalformedDocument(self.line, "end", f"unexpected trailing line '{self.peek()}'")


def _rows(table: np.ndarray) -> Iterator[str]:
    for row in np.atleast_2d(table):
        yield " ".join(str(int(v)) for v in row)


def _read_group(reader: _Reader, field: str, bound: int) -> FiniteGroup:
    """Either "<field> <catalog spec>" or "<field> table <n>" followed by n rows."""
    from catalog import group_from_text

    number = reader.line
    rest = reader.keyword(field)
    if rest.startswith("table"):
        order = reader.integers(field, rest[len("table"):], number, 1)[0]
        if order > bound:
            raise ValidationError(f"group of order {order} exceeds max order {bound}")
        return make_group(reader.rows(field, order, order))
    if not rest:
        raise MalformedDocument(number, field, "missing group")
    group = group_from_text(rest, bound)
    return FiniteGroup(group.table, label=rest)


def _write_group(field: str, group: FiniteGroup) -> List[str]:
    from catalog import group_from_text

    if group.label:
        try:
            if group_from_text(group.label).fingerprint == group.fingerprint:
                return [f"{field} {group.label}"]
        except (ExtkitError, OSError):
            pass
    return [f"{field} table {group.order}", *_rows(group.table)]


def dump_group(group: FiniteGroup) -> str:
    lines = [header("group"), f"order {group.order}"]
    if group.label:
        lines.append(f"label {group.label}")
    lines.append("table")
    lines.extend(_rows(group.table))
    return "\n".join(lines) + "\n"


def load_group(text: str) -> FiniteGroup:
    reader = _Reader(text, "group")
    number = reader.line
    order = reader.integers("order", reader.keyword("order"), number, 1)[0]
    label = reader.keyword("label") if (reader.peek() or "").startswith("label") else None
    reader.keyword("table")
    table = reader.rows("table", order, order)
    reader.finish()
    return make_group(table, label=label)


def _cochain_lines(c: Cochain) -> List[str]:
    if c.degree == 0:
        return [f": {int(c.values)}"]
    entries = np.argwhere(c.values != 0)
    return [
        " ".join(str(int(i)) for i in index) + f" : {int(c.values[tuple(index)])}"
        for index in entries
    ]


def _read_cochain_entries(reader: _Reader, field: str, degree: int, actor: FiniteGroup,
                          coefficients: Coefficients) -> Cochain:
    group = coefficients.carrier if isinstance(coefficients, CoefficientModule) else coefficients
    values = np.zeros((actor.order,) * degree, dtype=np.int64)
    while not reader.done() and ':' in reader.peek():
        number = reader.line
        text = reader.take(field)
        left, _, right = text.partition(':')
        index = reader.integers(field, left, number, degree)
        value = reader.integers(field, right, number, 1)[0]
        if any(i < 0 or i >= actor.order for i in index) or not 0 <= value < group.order:
            raise MalformedDocument(number, field, "index out of range")
        if value and 0 in index:
            raise MalformedDocument(number, field, f"cochain is not normalized at {tuple(index)}")
        values[tuple(index)] = value
    return Cochain(degree, actor, coefficients, values)


def dump_cochain(c: Cochain) -> str:
    lines = [header("cochain"), f"degree {c.degree}", f"actor-order {c.actor.order}",
             f"value-order {c.group.order}"]
    lines.extend(_cochain_lines(c))
    return "\n".join(lines) + "\n"


def load_cochain(text: str, actor: FiniteGroup, coefficients: Coefficients) -> Cochain:
    reader = _Reader(text, "cochain")
    number = reader.line
    degree = reader.integers("degree", reader.keyword("degree"), number, 1)[0]
    number = reader.line
    order = reader.integers("actor-order", reader.keyword("actor-order"), number, 1)[0]
    if order != actor.order:
        raise MalformedDocument(number, "actor-order", f"expected {actor.order}, found {order}")
    number = reader.line
    reader.integers("value-order", reader.keyword("value-order"), number, 1)
    c = _read_cochain_entries(reader, "value", degree, actor, coefficients)
    reader.finish()
    return c


def _read_lift(reader: _Reader, G: FiniteGroup, N: FiniteGroup) -> List[Automorphism]:
    reader.keyword("lift")
    rows = reader.rows("lift", G.order, N.order)
    for g, row in enumerate(rows):
        if sorted(row.tolist()) != list(range(N.order)):
            raise MalformedDocument(reader.line - G.order + g, "lift", f"row {g} is not a permutation")
    return [Automorphism(N, row) for row in rows]


def dump_kernel(k: GKernel) -> str:
    lines = [header("kernel"), *_write_group("G", k.G), *_write_group("N", k.N), "lift"]
    lines.extend(_rows(k.lift.act))
    return "\n".join(lines) + "\n"


def load_kernel(text: str, bound: int = DEFAULT_MAX_ORDER, cache: Optional[AutomorphismCache] = None) -> GKernel:
    """Kernels name Out(N) classes ("classes c_0 ... c_{|G|-1}") or give a full lift."""
    reader = _Reader(text, "kernel")
    G = _read_group(reader, "G", bound)
    N = _read_group(reader, "N", bound)
    if (reader.peek() or "").startswith("classes"):
        number = reader.line
        s = reader.integers("classes", reader.keyword("classes"), number, G.order)
        reader.finish()
        return make_kernel(G, N, s, bound=bound, cache=cache)
    S = _read_lift(reader, G, N)
    reader.finish()
    return kernel_from_action(G, N, S, bound=bound, cache=cache)


def dump_factor_system(fs: FactorSystem) -> str:
    lines = [header("factor-system"), *_write_group("G", fs.G), *_write_group("N", fs.N), "lift"]
    lines.extend(_rows(fs.lift.act))
    lines.append("omega")
    lines.extend(_cochain_lines(fs.omega))
    return "\n".join(lines) + "\n"


def load_factor_system(text: str, bound: int = DEFAULT_MAX_ORDER) -> FactorSystem:
    """Compatibility is checked; the cocycle condition is left to the caller."""
    reader = _Reader(text, "factor-system")
    G = _read_group(reader, "G", bound)
    N = _read_group(reader, "N", bound)
    S = _read_lift(reader, G, N)
    reader.keyword("omega")
    omega = _read_cochain_entries(reader, "omega", 2, G, N)
    reader.finish()
    return FactorSystem(OuterActionLift(G, N, S), omega)


def dump_crossed_module(cm: CrossedModule) -> str:
    lines = [header("crossed-module"), *_write_group("H", cm.H), *_write_group("G", cm.G)]
    lines.append("alpha " + next(_rows(cm.alpha.image)))
    lines.append("action")
    lines.extend(_rows(cm.action_table))
    return "\n".join(lines) + "\n"


def load_crossed_module(text: str, bound: int = DEFAULT_MAX_ORDER) -> CrossedModule:
    reader = _Reader(text, "crossed-module")
    H = _read_group(reader, "H", bound)
    G = _read_group(reader, "G", bound)
    number = reader.line
    alpha = reader.integers("alpha", reader.keyword("alpha"), number, H.order)
    if any(a < 0 or a >= G.order for a in alpha):
        raise MalformedDocument(number, "alpha", "image outside G")
    reader.keyword("action")
    rows = reader.rows("action", G.order, H.order)
    for g, row in enumerate(rows):
        if sorted(row.tolist()) != list(range(H.order)):
            raise MalformedDocument(reader.line - G.order + g, "action", f"row {g} is not a permutation")
    reader.finish()
    return CrossedModule(H, G, GroupMap(H, G, alpha), [Automorphism(H, row) for row in rows])


def _read_permutation(reader: _Reader, field: str, order: int) -> List[int]:
    number = reader.line
    row = reader.integers(field, reader.keyword(field), number, order)
    if sorted(row) != list(range(order)):
        raise MalformedDocument(number, field, "not a permutation")
    return row


def dump_pair(phi: Automorphism, psi: Automorphism) -> str:
    lines = [header("pair"), "phi " + next(_rows(phi.forward)), "psi " + next(_rows(psi.forward))]
    return "\n".join(lines) + "\n"


def load_pair(text: str, N: FiniteGroup, G: FiniteGroup) -> Tuple[Automorphism, Automorphism]:
    """An automorphism pair; rows are checked to be automorphisms."""
    reader = _Reader(text, "pair")
    phi = _automorphism(N, _read_permutation(reader, "phi", N.order), reader, "phi")
    psi = _automorphism(G, _read_permutation(reader, "psi", G.order), reader, "psi")
    reader.finish()
    return phi, psi


def _automorphism(group: FiniteGroup, row: Sequence[int], reader: _Reader, field: str) -> Automorphism:
    aut = Automorphism(group, row)
    if aut.as_map().failure() is not None:
        raise MalformedDocument(reader.line - 1, field, "not a homomorphism")
    return aut


def dump_group_action(pairs: Sequence[Tuple[Automorphism, Automorphism]]) -> str:
    lines = [header("action"), f"elements {len(pairs)}"]
    for phi, psi in pairs:
        lines.append("phi " + next(_rows(phi.forward)))
        lines.append("psi " + next(_rows(psi.forward)))
    return "\n".join(lines) + "\n"


def load_group_action(text: str, H: FiniteGroup, N: FiniteGroup,
                      G: FiniteGroup) -> List[Tuple[Automorphism, Automorphism]]:
    """One (phi, psi) pair per element of H, in element order."""
    reader = _Reader(text, "action")
    number = reader.line
    count = reader.integers("elements", reader.keyword("elements"), number, 1)[0]
    if count != H.order:
        raise MalformedDocument(number, "elements", f"expected {H.order}, found {count}")
    pairs = []
    for _ in range(count):
        phi = _automorphism(N, _read_permutation(reader, "phi", N.order), reader, "phi")
        psi = _automorphism(G, _read_permutation(reader, "psi", G.order), reader, "psi")
        pairs.append((phi, psi))
    reader.finish()
    return pairs
