"""Exceptions raised by the extkit engine."""
from __future__ import annotations

from typing import Any, Dict, Optional


class ExtkitError(Exception):
    """Base exception for all extkit errors."""

    def __init__(self, message: str = "extkit computation failed", **details: Any) -> None:
        self.message = message
        self.details: Dict[str, Any] = details
        super().__init__(self.message)

    def to_dict(self) -> Dict[str, Any]:
        """Structured error body, as printed by the CLI."""
        body = {"error": type(self).__name__, "message": self.message}
        body.update({key: _plain(value) for key, value in self.details.items()})
        return body


def _plain(value: Any) -> Any:
    if isinstance(value, tuple):
        return [_plain(v) for v in value]
    if hasattr(value, "item"):
        return value.item()
    return value


class ValidationError(ExtkitError):
    """Raised when an input fails a structural check."""


class NotAssociative(ValidationError):
    def __init__(self, triple: tuple) -> None:
        a, b, c = triple
        super().__init__(f"(a*b)*c != a*(b*c) for a={a}, b={b}, c={c}", triple=triple)


class NotLatinSquare(ValidationError):
    def __init__(self, axis: str, index: int) -> None:
        super().__init__(f"{axis} {index} of the table is not a permutation", axis=axis, index=index)


class NoIdentity(ValidationError):
    def __init__(self) -> None:
        super().__init__("table has no two-sided identity element")


class NoInverse(ValidationError):
    def __init__(self, element: int) -> None:
        super().__init__(f"element {element} has no two-sided inverse", element=element)


class NotNormal(ValidationError):
    def __init__(self, element: int, conjugator: int) -> None:
        super().__init__(
            f"subgroup is not normal: conjugating {element} by {conjugator} leaves it",
            element=element,
            conjugator=conjugator,
        )


class DegreeUnsupported(ValidationError):
    def __init__(self, degree: int, limit: int) -> None:
        super().__init__(f"degree {degree} is not supported (maximum {limit})", degree=degree, limit=limit)


class CompatibilityViolated(ValidationError):
    def __init__(self, pair: tuple) -> None:
        super().__init__(f"delta_S != C_N o omega at {pair}", pair=pair)


class NotACocycle(ValidationError):
    def __init__(self, where: tuple, message: Optional[str] = None) -> None:
        super().__init__(message or f"cocycle identity fails at {where}", where=where)


class NotAHomomorphism(ValidationError):
    def __init__(self, pair: tuple, message: Optional[str] = None) -> None:
        super().__init__(message or f"map is not multiplicative at {pair}", pair=pair)


class NotAHomomorphismOnClasses(ValidationError):
    def __init__(self, pair: tuple) -> None:
        super().__init__(f"outer class assignment is not multiplicative at {pair}", pair=pair)


class NotInner(ValidationError):
    def __init__(self, pair: tuple) -> None:
        super().__init__(f"S(g)S(g')S(gg')^-1 is not inner at {pair}", pair=pair)


class KernelMismatch(ValidationError):
    def __init__(self, message: str = "objects belong to different kernels") -> None:
        super().__init__(message)


class ModuleMismatch(ValidationError):
    def __init__(self, message: str = "coefficient modules do not agree") -> None:
        super().__init__(message)


class NotCompatible(ValidationError):
    def __init__(self, element: int) -> None:
        super().__init__(f"pair is not S-compatible: no inner correction at g={element}", element=element)


class NotStabilizing(ValidationError):
    def __init__(self, element: int) -> None:
        super().__init__(f"psi({element}) does not stabilize the extension class", element=element)


class SchemaMismatch(ValidationError):
    def __init__(self, expected: str, found: str) -> None:
        super().__init__(f"expected document header '{expected}', found '{found}'", expected=expected, found=found)


class MalformedDocument(ValidationError):
    def __init__(self, line: int, field: str, message: str = "malformed value") -> None:
        self.line = line
        self.field = field
        super().__init__(f"line {line}, field '{field}': {message}", line=line, field=field)


class BoundExceeded(ExtkitError):
    """Raised when a search or matrix would exceed the configured limits."""

    def __init__(self, what: str, requested: int, limit: int) -> None:
        super().__init__(f"{what}: {requested} exceeds the limit {limit}", what=what, requested=requested, limit=limit)


class InvariantViolation(ExtkitError):
    """Raised when a consistency check between two computations fails."""


def ensure(condition: bool, message: str) -> None:
    if not condition:
        raise InvariantViolation(message)
