"""Finite-witness toolkit for local-to-global rigidity of graphs: balls and
automorphisms, k-universal covers, covering propagation, triangle-count marking
of generating sets, Z/2 cocycles and double covers, glued graphs, and Fox
calculus Betti bounds."""

from .errors import (
    Budget,
    BudgetExceeded,
    CoveringViolation,
    LgrigidError,
    PreconditionError,
    TransportError,
    TruncationError,
)
from .graph import SimpleGraph

__all__ = [
    "Budget",
    "BudgetExceeded",
    "CoveringViolation",
    "LgrigidError",
    "PreconditionError",
    "SimpleGraph",
    "TransportError",
    "TruncationError",
]
__version__ = "0.1.0"
