"""Exception types shared across the package."""

from __future__ import annotations

from typing import Any


class LgrigidError(Exception):
    """Base class for every error raised by this package."""


class BudgetExceeded(LgrigidError):
    """An exponential search ran past its node budget.

    ``partial`` carries whatever was established before the cut-off
    (orbit data, clique brackets, node counts, ...).
    """

    def __init__(self, message: str, partial: dict[str, Any] | None = None):
        super().__init__(message)
        self.partial = dict(partial or {})


class TruncationError(LgrigidError):
    """A free-group operation left the oracle's truncation radius."""


class PreconditionError(LgrigidError):
    """The inputs violate a documented precondition."""


class CoveringViolation(LgrigidError):
    """A vertex map fails to be a covering at ``vertex``."""

    def __init__(self, vertex: int, reason: str):
        super().__init__(f"vertex {vertex}: {reason}")
        self.vertex = vertex
        self.reason = reason


class TransportError(LgrigidError):
    """Germ transport produced zero or several candidates."""

    def __init__(self, message: str, candidates: int):
        super().__init__(message)
        self.candidates = candidates


class Budget:
    """Mutable node counter handed down through recursive searches."""

    __slots__ = ("limit", "used", "what")

    def __init__(self, limit: int | None, what: str = "search"):
        self.limit = limit
        self.used = 0
        self.what = what

    def tick(self, n: int = 1, **partial: Any) -> None:
        self.used += n
        if self.limit is not None and self.used > self.limit:
            partial.setdefault("nodes", self.used)
            raise BudgetExceeded(f"{self.what} exceeded budget of {self.limit} nodes", partial)


def as_budget(budget: "Budget | int | None", what: str = "search") -> Budget:
    if isinstance(budget, Budget):
        return budget
    return Budget(budget, what)
