"""Short-cycle 2-cells, the k-universal cover, k-simple connectivity and filling radii.

The cover is built by coset-enumeration style folding: nodes carry a base
vertex and at most one neighbour over each base neighbour; lifting a cell at
a node either closes up, adds the missing last edge, or forces two nodes to
be identified.  Identifications cascade through a union-find.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .errors import Budget, BudgetExceeded, PreconditionError, as_budget
from .graph import BallView, SimpleGraph, ball_vertices


@dataclass(frozen=True)
class CellSet:
    """Simple loops of length ``3..k``, one representative per unoriented cyclic class.

    A representative starts at its smallest vertex and runs towards the
    smaller of that vertex's two cycle neighbours.
    """

    graph: SimpleGraph
    k: int
    cells: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.cells)

    def rotations_at(self) -> list[list[tuple[int, ...]]]:
        """Per vertex, every cell read from that vertex in both directions."""
        out: list[list[tuple[int, ...]]] = [[] for _ in range(self.graph.n)]
        for c in self.cells:
            m = len(c)
            for i in range(m):
                fwd = c[i:] + c[:i]
                out[c[i]].append(fwd)
                out[c[i]].append((fwd[0],) + tuple(reversed(fwd[1:])))
        return out


def short_cycle_cells(g: SimpleGraph, k: int, budget: Budget | int | None = 1_000_000) -> CellSet:
    """All simple cycles of length at most ``k`` (and at least 3)."""
    bud = as_budget(budget, "cycle enumeration")
    cells: list[tuple[int, ...]] = []
    if k >= 3:
        for s in range(g.n):
            path = [s]
            on_path = {s}

            def dfs(u: int) -> None:
                bud.tick(cells=len(cells))
                for w in g.neighbors(u):
                    if w == s and len(path) >= 3 and path[1] < path[-1]:
                        cells.append(tuple(path))
                    elif w > s and w not in on_path and len(path) < k:
                        path.append(w)
                        on_path.add(w)
                        dfs(w)
                        path.pop()
                        on_path.discard(w)

            dfs(s)
    cells.sort(key=lambda c: (len(c), c))
    return CellSet(g, k, tuple(cells))


@dataclass(frozen=True)
class CoverBall:
    """Ball of the k-universal cover about a lift of ``base``.

    ``projection[i]`` is the base vertex under carrier vertex ``i``.
    """

    ball: BallView
    projection: tuple[int, ...]
    status: str
    explored_radius: int
    closed: bool = False
    nodes: int = 0

    @property
    def exact(self) -> bool:
        return self.status == "exact"


class CoverBuilder:
    """Incremental folding construction of the k-universal cover of ``g``."""

    def __init__(self, g: SimpleGraph, base: int, k: int, fuel: int | None = 200_000,
                 cells: CellSet | None = None):
        g.check_vertex(base)
        self.g = g
        self.k = k
        self.base = base
        self.cells = cells if cells is not None else short_cycle_cells(g, k)
        self._rot = self.cells.rotations_at()
        self.proj: list[int] = [base]
        self.parent: list[int] = [0]
        self.nbr: list[dict[int, int]] = [{}]
        self.fuel = fuel
        self.exhausted = False
        self.radius = -1
        self._merges: deque[tuple[int, int]] = deque()

    # -- union-find and folding ------------------------------------------
    def find(self, a: int) -> int:
        parent = self.parent
        root = a
        while parent[root] != root:
            root = parent[root]
        while parent[a] != root:
            parent[a], a = root, parent[a]
        return root

    def step(self, z: int, w: int) -> int | None:
        y = self.nbr[z].get(w)
        return None if y is None else self.find(y)

    def _new_node(self, z: int, w: int) -> int:
        if self.fuel is not None and len(self.proj) >= self.fuel:
            raise BudgetExceeded("k-universal cover ran out of fuel", {"nodes": len(self.proj)})
        y = len(self.proj)
        self.proj.append(w)
        self.parent.append(y)
        self.nbr.append({self.proj[z]: z})
        self.nbr[z][w] = y
        return y

    def _link(self, a: int, b: int) -> None:
        for x, y in ((a, b), (b, a)):
            cur = self.step(x, self.proj[y])
            if cur is None:
                self.nbr[x][self.proj[y]] = y
            elif cur != y:
                self._merges.append((cur, y))

    def _drain(self) -> bool:
        changed = False
        while self._merges:
            a, b = self._merges.popleft()
            a, b = self.find(a), self.find(b)
            if a == b:
                continue
            if self.proj[a] != self.proj[b]:
                raise AssertionError("folding identified nodes over different base vertices")
            keep, drop = (a, b) if a < b else (b, a)
            self.parent[drop] = keep
            changed = True
            for w, y in self.nbr[drop].items():
                y = self.find(y)
                cur = self.step(keep, w)
                if cur is None:
                    self.nbr[keep][w] = y
                elif cur != y:
                    self._merges.append((cur, y))
            self.nbr[drop] = {}
        return changed

    def live(self) -> list[int]:
        return [z for z in range(len(self.proj)) if self.parent[z] == z]

    def distances(self) -> dict[int, int]:
        root = self.find(0)
        dist = {root: 0}
        queue = deque([root])
        while queue:
            z = queue.popleft()
            for y in self.nbr[z].values():
                y = self.find(y)
                if y not in dist:
                    dist[y] = dist[z] + 1
                    queue.append(y)
        return dist

    def _scan_cells(self, z: int) -> bool:
        changed = False
        for cyc in self._rot[self.proj[z]]:
            z = self.find(z)
            cur = z
            ok = True
            for v in cyc[1:]:
                nxt = self.step(cur, v)
                if nxt is None:
                    ok = False
                    break
                cur = nxt
            if not ok:
                continue
            end = self.step(cur, cyc[0])
            if end is None:
                self._link(cur, z)
                changed = True
            elif end != z:
                self._merges.append((end, z))
            changed |= self._drain()
        return changed

    def saturate(self, D: int) -> None:
        """Complete every node within distance ``D - 1`` and close all cells, to fixpoint."""
        self.radius = max(self.radius, D)
        while True:
            changed = False
            dist = self.distances()
            for z, d in sorted(dist.items(), key=lambda t: (t[1], t[0])):
                if d >= D or self.find(z) != z:
                    continue
                for w in self.g.neighbors(self.proj[z]):
                    if self.step(z, w) is None:
                        self._new_node(z, w)
                        changed = True
            for z in self.live():
                if self.find(z) == z:
                    changed |= self._scan_cells(z)
            if not changed:
                return

    def is_closed(self) -> bool:
        """True when the folded structure is a finite covering graph of ``g``."""
        for z in self.live():
            if len(self.nbr[z]) != self.g.degree(self.proj[z]):
                return False
            if any(self.find(y) == z for y in self.nbr[z].values()):
                return False
        return True

    def graph(self, R: int | None = None) -> tuple[SimpleGraph, list[int], list[int]]:
        """Folded graph (optionally the ball of radius ``R``), node ids and root distances."""
        dist = self.distances()
        nodes = sorted(
            (z for z, d in dist.items() if R is None or d <= R), key=lambda z: (dist[z], z)
        )
        index = {z: i for i, z in enumerate(nodes)}
        edges = set()
        for z in nodes:
            for y in self.nbr[z].values():
                j = index.get(self.find(y))
                if j is not None and j != index[z]:
                    edges.add((min(index[z], j), max(index[z], j)))
        return SimpleGraph(len(nodes), sorted(edges)), nodes, [dist[z] for z in nodes]

    def lift_path(self, path: Sequence[int], start: int | None = None) -> int | None:
        """Endpoint of the lift of a base path from ``start`` (default root); ``None`` if undefined."""
        cur = self.find(0 if start is None else start)
        if self.proj[cur] != path[0]:
            raise PreconditionError("path does not start under the lift point")
        for v in path[1:]:
            cur = self.step(cur, v)
            if cur is None:
                return None
        return cur


def k_universal_cover_ball(
    g: SimpleGraph,
    base: int,
    k: int,
    R: int,
    fuel: int | None = 200_000,
) -> CoverBall:
    """Ball of radius ``R`` in the k-universal cover, saturated to radius ``R + k``.

    ``status`` is ``"exact"`` when folding reached a fixpoint and
    ``"fuel-exhausted"`` when the node budget ran out first.
    """
    if not g.is_connected():
        raise PreconditionError("k-universal cover requires a connected graph")
    builder = CoverBuilder(g, base, k, fuel)
    status = "exact"
    try:
        builder.saturate(R + k)
    except BudgetExceeded:
        status = "fuel-exhausted"
    carrier, nodes, dist = builder.graph(R)
    view = BallView(carrier, R, tuple(range(carrier.n)), tuple(dist))
    return CoverBall(
        view,
        tuple(builder.proj[z] for z in nodes),
        status,
        builder.radius,
        closed=status == "exact" and builder.is_closed(),
        nodes=len(builder.proj),
    )


@dataclass(frozen=True)
class SimpleConnectivity:
    verdict: str  # "yes" | "no" | "unknown"
    certificate: dict = field(default_factory=dict)


def _separating_loop(builder: CoverBuilder, a: int, b: int) -> list[int]:
    """Base loop lifting from node ``a`` to node ``b`` (same base vertex) through the root."""
    dist = builder.distances()
    parent: dict[int, int] = {}
    root = builder.find(0)
    order = sorted(dist, key=lambda z: (dist[z], z))
    for z in order:
        for y in builder.nbr[z].values():
            y = builder.find(y)
            if dist.get(y) == dist[z] + 1 and y not in parent and y != root:
                parent[y] = z

    def to_root(z: int) -> list[int]:
        out = [z]
        while z != root:
            z = parent[z]
            out.append(z)
        return out

    pa, pb = to_root(a), to_root(b)
    # root -> a, then (a and b share a base vertex) b -> root
    walk = list(reversed(pa)) + pb[1:]
    return [builder.proj[z] for z in walk]


def is_k_simply_connected(
    g: SimpleGraph, k: int, budget: int | None = 200_000, max_radius: int | None = None
) -> SimpleConnectivity:
    """Semi-decision of simple connectivity of ``P_k(g)``.

    ``yes`` when the folded cover closes up onto ``g`` itself; ``no`` when it
    closes up as a larger finite cover, or when a saturated cover ball is
    strictly larger than the corresponding ball of ``g``; ``unknown`` when
    the fuel runs out first.
    """
    if not g.is_connected():
        raise PreconditionError("graph must be connected")
    builder = CoverBuilder(g, 0, k, budget)
    limit = max_radius if max_radius is not None else g.n + 1
    base_dist = g.distances_from(0)
    for R in range(1, limit + 1):
        try:
            builder.saturate(R + k)
        except BudgetExceeded:
            return SimpleConnectivity("unknown", {"radius": R, "nodes": len(builder.proj)})
        if builder.is_closed():
            size = len(builder.live())
            if size == g.n:
                return SimpleConnectivity("yes", {"cover_vertices": size, "radius": builder.radius})
            over: dict[int, int] = {}
            for z in builder.live():
                if builder.proj[z] in over:
                    loop = _separating_loop(builder, over[builder.proj[z]], z)
                    return SimpleConnectivity(
                        "no", {"finite_cover_vertices": size, "base_vertices": g.n, "loop": loop}
                    )
                over[builder.proj[z]] = z
        dist = builder.distances()
        in_ball = [z for z, d in dist.items() if d <= R]
        base_ball = sum(1 for d in base_dist if 0 <= d <= R)
        if len(in_ball) > base_ball:
            over = {}
            loop = None
            for z in sorted(in_ball, key=lambda z: (dist[z], z)):
                p = builder.proj[z]
                if p in over:
                    loop = _separating_loop(builder, over[p], z)
                    break
                over[p] = z
            return SimpleConnectivity(
                "no",
                {"radius": R, "cover_ball": len(in_ball), "base_ball": base_ball, "loop": loop},
            )
    return SimpleConnectivity("unknown", {"radius": limit, "nodes": len(builder.proj)})


def _fundamental_loops(h: SimpleGraph, root: int) -> list[list[int]]:
    dist = h.distances_from(root)
    parent = {root: root}
    for v in sorted((v for v in range(h.n) if dist[v] >= 0), key=lambda v: (dist[v], v)):
        for w in h.neighbors(v):
            if w not in parent:
                parent[w] = v

    def to_root(v: int) -> list[int]:
        out = [v]
        while v != root:
            v = parent[v]
            out.append(v)
        return out

    loops = []
    for u, v in h.edges():
        if u not in parent or v not in parent or parent[u] == v or parent[v] == u:
            continue
        loops.append(list(reversed(to_root(u))) + to_root(v))
    return loops


def fills_within(
    g: SimpleGraph, x: int, k: int, R1: int, R2: int, fuel: int | None = 200_000
) -> bool:
    """Whether every loop in ``B(x, R1)`` based at ``x`` contracts inside ``P_k(B(x, R2))``."""
    verts = ball_vertices(g, x, R2)
    outer = g.induced_subgraph(verts)
    inner_ids = [i for i, v in enumerate(verts) if v in set(ball_vertices(g, x, R1))]
    inner = outer.induced_subgraph(inner_ids)
    builder = CoverBuilder(outer, 0, k, fuel)
    builder.saturate(2 * R1 + 2 + k)
    for loop in _fundamental_loops(inner, 0):
        path = [inner_ids[i] for i in loop]
        end = builder.lift_path(path)
        if end is None or end != builder.find(0):
            return False
    return True


def fill_radius(
    g: SimpleGraph,
    k: int,
    R1: int,
    budget: int | None = 200_000,
    vertices: Sequence[int] | None = None,
) -> int | None:
    """Largest, over base vertices, of the least ``R2 >= R1`` that fills radius-``R1`` loops.

    Returns ``None`` if some vertex needs more than the graph's diameter.
    """
    diam = max(g.diameter(), R1)
    worst = R1
    for x in range(g.n) if vertices is None else vertices:
        for R2 in range(max(R1, worst), diam + 1):
            if fills_within(g, x, k, R1, R2, budget):
                worst = max(worst, R2)
                break
        else:
            return None
    return worst
