"""
Data Models
===========
Core data structures for command inputs and reports.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional


@dataclass
class GroupSpec:
    """A group named on the command line"""
    kind: str  # 'named', 'perm' or 'cayley'
    value: str
    points: int = 0
    generators: List[str] = field(default_factory=list)
    path: Optional[str] = None


@dataclass
class Report:
    """Result of one command, with the choices needed to replay it"""
    command: List[str]
    result: Dict[str, Any]
    provenance: Dict[str, Any] = field(default_factory=dict)
    timing: Dict[str, float] = field(default_factory=dict)

    def structured(self) -> Dict[str, Any]:
        """Everything except timing; identical across runs on identical input."""
        return {'command': self.command, 'result': self.result, 'provenance': self.provenance}
