"""Generating sets, (marked) Cayley graphs and balls, word metrics and distortion."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Sequence

from .errors import Budget, BudgetExceeded, PreconditionError, TruncationError, as_budget
from .graph import BallView, SimpleGraph
from .groups import Element, Group


class GenSet:
    """Identity-free generating set; duplicates are dropped, order is kept."""

    def __init__(self, group: Group, elements: Iterable[Element], require_symmetric: bool = True):
        self.group = group
        out: list[Element] = []
        seen = set()
        e = group.identity()
        for s in elements:
            if s == e:
                raise PreconditionError("generating sets must not contain the identity")
            if s not in seen:
                seen.add(s)
                out.append(s)
        self.elements = tuple(out)
        self._set = frozenset(out)
        if require_symmetric and not self.symmetric:
            raise PreconditionError("generating set is not closed under inversion")

    @classmethod
    def symmetrized(cls, group: Group, elements: Iterable[Element]) -> "GenSet":
        out: list[Element] = []
        for s in elements:
            out += [s, group.invert(s)]
        return cls(group, out)

    @cached_property
    def symmetric(self) -> bool:
        return all(self.group.invert(s) in self._set for s in self.elements)

    def __contains__(self, x: Element) -> bool:
        return x in self._set

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"GenSet({[self.group.serialize(s) for s in self.elements]})"

    def union(self, extra: Iterable[Element]) -> "GenSet":
        return GenSet(self.group, list(self.elements) + list(extra), require_symmetric=False)

    @cached_property
    def inversion_classes(self) -> tuple[tuple[Element, ...], ...]:
        """Classes ``{s, s^-1}`` in order of first appearance."""
        classes: list[tuple[Element, ...]] = []
        done = set()
        for s in self.elements:
            if s in done:
                continue
            si = self.group.invert(s)
            cls = (s,) if si == s else (s, si)
            done.update(cls)
            classes.append(cls)
        return tuple(classes)

    def class_index(self, s: Element) -> int:
        for i, cls in enumerate(self.inversion_classes):
            if s in cls:
                return i
        raise KeyError(s)

    def to_json(self) -> list:
        return [self.group.serialize(s) for s in self.elements]


@dataclass(frozen=True)
class CayleyBall:
    """Ball of a Cayley graph; carrier vertex ``i`` is the element ``element_of[i]``."""

    ball: BallView
    element_of: tuple[Element, ...]
    center_element: Element

    @property
    def graph(self) -> SimpleGraph:
        return self.ball.carrier

    @cached_property
    def index(self) -> dict[Element, int]:
        return {g: i for i, g in enumerate(self.element_of)}

    def vertex(self, g: Element) -> int:
        return self.index[g]


def _safe_mul(G: Group, a: Element, b: Element) -> Element | None:
    try:
        return G.multiply(a, b)
    except TruncationError:
        return None


def cayley_ball(
    G: Group,
    S: GenSet,
    R: int,
    budget: Budget | int | None = 1_000_000,
    marked: bool = False,
    center: Element | None = None,
) -> CayleyBall:
    """Ball of radius ``R`` about ``center`` (default: identity) in the Cayley graph ``(G, S)``.

    Vertices are listed by word distance, then discovery order.  With
    ``marked`` each edge carries the index of its inversion class ``{s, s^-1}``.
    """
    if not S.symmetric:
        raise PreconditionError("generating set is not closed under inversion")
    if R < 0:
        raise PreconditionError("radius must be nonnegative")
    bud = as_budget(budget, "Cayley ball enumeration")
    c = G.identity() if center is None else center
    elems = [c]
    dist = [0]
    index = {c: 0}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        if dist[i] >= R:
            continue
        for s in S:
            y = _safe_mul(G, elems[i], s)
            if y is None:
                raise TruncationError("Cayley ball radius exceeds the oracle's truncation")
            if y not in index:
                bud.tick(vertices=len(elems))
                index[y] = len(elems)
                elems.append(y)
                dist.append(dist[i] + 1)
                queue.append(index[y])
    edges: dict[tuple[int, int], int] = {}
    for i, x in enumerate(elems):
        for s in S:
            y = _safe_mul(G, x, s)
            j = index.get(y) if y is not None else None
            if j is not None and i < j:
                edges[(i, j)] = S.class_index(s)
    carrier = SimpleGraph(len(elems), edges.keys(), edges if marked else None)
    view = BallView(carrier, R, tuple(range(len(elems))), tuple(dist))
    return CayleyBall(view, tuple(elems), c)


def marked_cayley(G: Group, S: GenSet, R: int, budget: Budget | int | None = 1_000_000) -> CayleyBall:
    """Cayley ball whose edges are labelled by inversion-class index."""
    return cayley_ball(G, S, R, budget, marked=True)


def cayley_graph(G: Group, S: GenSet, marked: bool = False) -> SimpleGraph:
    """Full Cayley graph of a finite group; vertex ``i`` is ``G.elements()[i]``.

    ``S`` need not generate, so the result may be disconnected.
    """
    if not S.symmetric:
        raise PreconditionError("generating set is not closed under inversion")
    elems = G.elements()
    index = {g: i for i, g in enumerate(elems)}
    edges: dict[tuple[int, int], int] = {}
    for i, x in enumerate(elems):
        for s in S:
            j = index[G.multiply(x, s)]
            if i < j:
                edges[(i, j)] = S.class_index(s)
    return SimpleGraph(len(elems), sorted(edges), edges if marked else None)


def word_lengths(
    G: Group,
    S: GenSet,
    targets: Iterable[Element],
    budget: Budget | int | None = 1_000_000,
) -> dict[Element, int | None]:
    """``|g|_S`` for each target by one BFS; ``None`` when beyond the budget."""
    pending = set(targets)
    out: dict[Element, int | None] = {g: None for g in pending}
    e = G.identity()
    seen = {e: 0}
    queue = deque([e])
    bud = as_budget(budget, "word length")
    try:
        while queue and pending:
            x = queue.popleft()
            if x in pending:
                out[x] = seen[x]
                pending.discard(x)
            for s in S:
                y = _safe_mul(G, x, s)
                if y is not None and y not in seen:
                    bud.tick()
                    seen[y] = seen[x] + 1
                    queue.append(y)
    except BudgetExceeded:
        pass
    return out


def word_length(G: Group, S: GenSet, g: Element, budget: Budget | int | None = 1_000_000) -> int | None:
    return word_lengths(G, S, [g], budget)[g]


def distortion_rho(
    G: Group | None,
    S: GenSet,
    H: Group,
    T: GenSet,
    R: int,
    in_G: Callable[[Element], bool] | None = None,
    budget: Budget | int | None = 1_000_000,
) -> int:
    """``max |g|_S`` over subgroup elements ``g`` with ``|g|_T <= R``.

    ``S`` consists of elements of ``H``.  ``in_G`` tests subgroup membership;
    ``None`` means the subgroup is all of ``H``.  ``G`` is accepted for
    symmetry with the other signatures and otherwise unused.
    """
    ball = cayley_ball(H, T, R, budget)
    targets = [g for g in ball.element_of if in_G is None or in_G(g)]
    lengths = word_lengths(H, S, targets, budget)
    missing = [g for g, k in lengths.items() if k is None]
    if missing:
        raise BudgetExceeded("subgroup word lengths beyond budget", {"unresolved": len(missing)})
    return max(lengths.values())


def build_S_N(G: Group, S1: GenSet, N: int, budget: Budget | int | None = 1_000_000) -> GenSet:
    """All elements of ``S1``-word length ``1..N``; requires ``N > |S1|``."""
    if N <= len(S1):
        raise PreconditionError(f"N={N} must exceed |S1|={len(S1)}")
    b = cayley_ball(G, S1, N, budget)
    return GenSet(G, b.element_of[1:])
