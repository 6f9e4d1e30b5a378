"""Finite simple graphs, balls with their intrinsic metric, rooted isometries,
automorphism groups and triangle/clique statistics.

Vertices are dense integer ids ``0..n-1``.  Every exponential search accepts a
``budget`` (maximum number of search nodes); running past it raises
:class:`~lgrigid.errors.BudgetExceeded`.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Hashable, Iterable, Iterator, Sequence

from .errors import Budget, BudgetExceeded, PreconditionError, as_budget

Edge = tuple[int, int]


def _key(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class SimpleGraph:
    """Immutable finite simple undirected graph with optional labels."""

    __slots__ = ("n", "_adj", "_edge_labels", "vertex_labels", "__dict__")

    def __init__(
        self,
        n: int,
        edges: Iterable[Sequence[int]] = (),
        edge_labels: dict[Edge, Hashable] | Sequence[Hashable] | None = None,
        vertex_labels: Sequence[Hashable] | None = None,
    ):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        edges = [tuple(e) for e in edges]
        adj: list[set[int]] = [set() for _ in range(n)]
        seen: set[Edge] = set()
        ordered: list[Edge] = []
        for e in edges:
            if len(e) != 2:
                raise ValueError(f"malformed edge {e!r}")
            u, v = int(e[0]), int(e[1])
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {e!r} has an unknown endpoint")
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            k = _key(u, v)
            if k in seen:
                raise ValueError(f"duplicate edge {k}")
            seen.add(k)
            ordered.append(k)
            adj[u].add(v)
            adj[v].add(u)
        self.n = n
        self._adj = tuple(tuple(sorted(a)) for a in adj)
        labels: dict[Edge, Hashable] | None = None
        if edge_labels is not None:
            if isinstance(edge_labels, dict):
                labels = {_key(*k): lab for k, lab in edge_labels.items()}
            else:
                if len(edge_labels) != len(ordered):
                    raise ValueError("edge_labels must align with edges")
                labels = dict(zip(ordered, edge_labels))
            if set(labels) != seen:
                raise ValueError("edge labels must cover exactly the edges")
        self._edge_labels = labels
        if vertex_labels is not None:
            vertex_labels = tuple(vertex_labels)
            if len(vertex_labels) != n:
                raise ValueError("vertex_labels must have one entry per vertex")
        self.vertex_labels = vertex_labels

    # -- basic queries -------------------------------------------------
    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adjsets[u]

    @cached_property
    def _adjsets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(a) for a in self._adj)

    def edges(self) -> list[Edge]:
        return [(u, v) for u in range(self.n) for v in self._adj[u] if u < v]

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self._adj) // 2

    @property
    def has_edge_labels(self) -> bool:
        return self._edge_labels is not None

    def edge_label(self, u: int, v: int) -> Hashable:
        if self._edge_labels is None:
            return None
        return self._edge_labels[_key(u, v)]

    def check_vertex(self, v: int) -> None:
        if not (isinstance(v, int) and 0 <= v < self.n):
            raise PreconditionError(f"unknown vertex id {v!r}")

    # -- metric --------------------------------------------------------
    def distances_from(self, src: int, limit: int | None = None) -> list[int]:
        """BFS distances from ``src``; ``-1`` marks unreachable (or beyond ``limit``)."""
        dist = [-1] * self.n
        dist[src] = 0
        queue = deque([src])
        while queue:
            u = queue.popleft()
            if limit is not None and dist[u] >= limit:
                continue
            for w in self._adj[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    def components(self) -> list[list[int]]:
        comp = [-1] * self.n
        out: list[list[int]] = []
        for s in range(self.n):
            if comp[s] >= 0:
                continue
            comp[s] = len(out)
            members = [s]
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for w in self._adj[u]:
                    if comp[w] < 0:
                        comp[w] = comp[s]
                        members.append(w)
                        queue.append(w)
            out.append(sorted(members))
        return out

    def is_connected(self) -> bool:
        return self.n == 0 or len(self.components()) == 1

    def diameter(self) -> int:
        """Largest finite distance (``-1`` for the empty graph)."""
        return max((max(self.distances_from(v)) for v in range(self.n)), default=-1)

    # -- derived graphs ------------------------------------------------
    def induced_subgraph(self, vertices: Sequence[int]) -> "SimpleGraph":
        """Induced subgraph; new id ``i`` corresponds to ``vertices[i]``."""
        index = {v: i for i, v in enumerate(vertices)}
        if len(index) != len(vertices):
            raise ValueError("repeated vertex in induced_subgraph")
        edges = []
        labels = [] if self._edge_labels is not None else None
        for i, v in enumerate(vertices):
            for w in self._adj[v]:
                j = index.get(w)
                if j is not None and i < j:
                    edges.append((i, j))
                    if labels is not None:
                        labels.append(self._edge_labels[_key(v, w)])
        vl = None
        if self.vertex_labels is not None:
            vl = [self.vertex_labels[v] for v in vertices]
        return SimpleGraph(len(vertices), edges, labels, vl)

    def relabeled(self, perm: Sequence[int]) -> "SimpleGraph":
        """Copy with vertex ``v`` renamed to ``perm[v]``."""
        edges = [(perm[u], perm[v]) for u, v in self.edges()]
        labels = None
        if self._edge_labels is not None:
            labels = [self._edge_labels[e] for e in self.edges()]
        vl = None
        if self.vertex_labels is not None:
            vl = [None] * self.n
            for v, lab in enumerate(self.vertex_labels):
                vl[perm[v]] = lab
        return SimpleGraph(self.n, edges, labels, vl)

    def without_labels(self) -> "SimpleGraph":
        return SimpleGraph(self.n, self.edges())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimpleGraph):
            return NotImplemented
        return (
            self.n == other.n
            and self._adj == other._adj
            and self._edge_labels == other._edge_labels
            and self.vertex_labels == other.vertex_labels
        )

    def __hash__(self) -> int:
        return hash((self.n, self._adj))

    def __repr__(self) -> str:
        return f"SimpleGraph(n={self.n}, m={self.edge_count})"

    # -- JSON ------------------------------------------------------------
    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"vertices": self.n, "edges": [list(e) for e in self.edges()]}
        if self._edge_labels is not None:
            out["edge_labels"] = [self._edge_labels[e] for e in self.edges()]
        if self.vertex_labels is not None:
            out["vertex_labels"] = list(self.vertex_labels)
        return out

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> "SimpleGraph":
        edges = obj.get("edges", [])
        for e in edges:
            if len(e) != 2 or e[0] >= e[1]:
                raise ValueError(f"edges must be listed as [u, v] with u < v, got {e!r}")
        labels = obj.get("edge_labels")
        if labels is not None:
            labels = [_freeze(lab) for lab in labels]
        vlabels = obj.get("vertex_labels")
        if vlabels is not None:
            vlabels = [_freeze(lab) for lab in vlabels]
        return cls(int(obj["vertices"]), edges, labels, vlabels)


def _freeze(x: Any) -> Hashable:
    if isinstance(x, list):
        return tuple(_freeze(y) for y in x)
    return x


# ----------------------------------------------------------------------
# Common graph families (used throughout tests and examples)
# ----------------------------------------------------------------------

def cycle_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def torus_graph(a: int, b: int | None = None) -> SimpleGraph:
    """Standard Cayley graph of ``Z/a x Z/b``; vertex ``(i, j)`` has id ``i*b + j``."""
    b = a if b is None else b
    edges = set()
    for i in range(a):
        for j in range(b):
            v = i * b + j
            for w in (((i + 1) % a) * b + j, i * b + (j + 1) % b):
                if w != v:
                    edges.add(_key(v, w))
    return SimpleGraph(a * b, sorted(edges))


def grid_ball(radius: int) -> tuple[SimpleGraph, list[tuple[int, int]]]:
    """The radius-``radius`` word-metric ball of the square lattice.

    Returns the graph and the coordinates of each vertex (id 0 is the origin).
    """
    pts = sorted(
        ((x, y) for x in range(-radius, radius + 1) for y in range(-radius, radius + 1)
         if abs(x) + abs(y) <= radius),
        key=lambda p: (abs(p[0]) + abs(p[1]), p),
    )
    index = {p: i for i, p in enumerate(pts)}
    edges = []
    for (x, y), i in index.items():
        for q in ((x + 1, y), (x, y + 1)):
            j = index.get(q)
            if j is not None:
                edges.append(_key(i, j))
    return SimpleGraph(len(pts), edges), pts


def petersen_graph() -> SimpleGraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return SimpleGraph(10, outer + spokes + inner)


def regular_tree_ball(degree: int, radius: int) -> SimpleGraph:
    """Ball of radius ``radius`` about vertex 0 in the ``degree``-regular tree."""
    edges = []
    frontier = [0]
    n = 1
    for depth in range(radius):
        nxt = []
        for v in frontier:
            for _ in range(degree if depth == 0 else degree - 1):
                edges.append((v, n))
                nxt.append(n)
                n += 1
        frontier = nxt
    return SimpleGraph(n, edges)


# ----------------------------------------------------------------------
# Balls
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class BallView:
    """Rooted induced ball.  Carrier vertex ``i`` is ambient vertex ``vertices[i]``;
    the root is carrier vertex 0 and carrier ids are ordered by (ambient distance, id)."""

    carrier: SimpleGraph
    radius: int
    vertices: tuple[int, ...]
    ambient_dist: tuple[int, ...]
    root: int = 0

    @cached_property
    def intrinsic_dist(self) -> tuple[int, ...]:
        """Geodesic distance from the root inside the carrier."""
        return tuple(self.carrier.distances_from(self.root))

    def distance(self, i: int, j: int) -> int:
        return self._table[i][j]

    @cached_property
    def _table(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(self.carrier.distances_from(i)) for i in range(self.carrier.n))

    @cached_property
    def index(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @property
    def center(self) -> int:
        return self.vertices[self.root]

    def __len__(self) -> int:
        return len(self.vertices)


def ball_vertices(g: SimpleGraph, v: int, R: int) -> list[int]:
    dist = g.distances_from(v, limit=R)
    return sorted((u for u in range(g.n) if 0 <= dist[u] <= R), key=lambda u: (dist[u], u))


def ball(g: SimpleGraph, v: int, R: int) -> BallView:
    """Induced ball of radius ``R`` around ``v`` with its intrinsic metric."""
    g.check_vertex(v)
    if R < 0:
        raise PreconditionError("radius must be nonnegative")
    dist = g.distances_from(v, limit=R)
    verts = sorted((u for u in range(g.n) if 0 <= dist[u] <= R), key=lambda u: (dist[u], u))
    return BallView(g.induced_subgraph(verts), R, tuple(verts), tuple(dist[u] for u in verts))


@dataclass(frozen=True)
class RootedIsometry:
    """Root-preserving isomorphism between ball carriers.

    ``carrier_map[i]`` is the target carrier id of source carrier id ``i``;
    :attr:`vertex_map` expresses the same bijection on ambient vertex ids.
    """

    source: BallView
    target: BallView
    carrier_map: tuple[int, ...]

    @cached_property
    def vertex_map(self) -> dict[int, int]:
        tv = self.target.vertices
        return {v: tv[self.carrier_map[i]] for i, v in enumerate(self.source.vertices)}

    def inverse(self) -> "RootedIsometry":
        inv = [0] * len(self.carrier_map)
        for i, j in enumerate(self.carrier_map):
            inv[j] = i
        return RootedIsometry(self.target, self.source, tuple(inv))


# ----------------------------------------------------------------------
# Colour refinement and isomorphism search
# ----------------------------------------------------------------------

class _Union:
    """Two graphs placed side by side for joint colour refinement."""

    def __init__(self, g1: SimpleGraph, g2: SimpleGraph, labels: bool):
        codes: dict[Hashable, int] = {}

        def code(x: Hashable) -> int:
            return codes.setdefault(x, len(codes))

        self.n1 = g1.n
        adj: list[tuple[tuple[int, int], ...]] = []
        colors: list[int] = []
        for offset, g in ((0, g1), (g1.n, g2)):
            for v in range(g.n):
                adj.append(tuple(
                    (offset + w, code(g.edge_label(v, w)) if labels else 0) for w in g.neighbors(v)
                ))
        vcodes: dict[Hashable, int] = {}
        for g in (g1, g2):
            for v in range(g.n):
                lab = g.vertex_labels[v] if (labels and g.vertex_labels is not None) else None
                colors.append(vcodes.setdefault(lab, len(vcodes)))
        self.adj = adj
        self.colors = colors
        self.g1, self.g2, self.labels = g1, g2, labels


def _refine(adj: Sequence[Sequence[tuple[int, int]]], colors: list[int]) -> list[int]:
    """Equitable colour refinement; colours are renumbered canonically."""
    ncol = -1
    while True:
        sigs = [(colors[v], tuple(sorted((colors[u], lab) for u, lab in adj[v])))
                for v in range(len(adj))]
        table = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [table[s] for s in sigs]
        if len(table) == ncol:
            return new
        colors, ncol = new, len(table)


def _is_iso(g1: SimpleGraph, g2: SimpleGraph, f: Sequence[int], labels: bool) -> bool:
    for u, v in g1.edges():
        if not g2.has_edge(f[u], f[v]):
            return False
        if labels and g1.edge_label(u, v) != g2.edge_label(f[u], f[v]):
            return False
    if labels and g1.vertex_labels is not None:
        if any(g1.vertex_labels[v] != g2.vertex_labels[f[v]] for v in range(g1.n)):
            return False
    return g1.edge_count == g2.edge_count


def iter_isomorphisms(
    g1: SimpleGraph,
    g2: SimpleGraph,
    pairs: Sequence[tuple[int, int]] = (),
    *,
    labels: bool = True,
    budget: Budget | int | None = None,
) -> Iterator[tuple[int, ...]]:
    """Yield every isomorphism ``g1 -> g2`` sending ``a`` to ``b`` for each ``(a, b)`` in ``pairs``.

    Individualisation-refinement backtracking on the disjoint union; each
    isomorphism is produced exactly once, in a deterministic order.
    """
    bud = as_budget(budget, "isomorphism search")
    if g1.n != g2.n or g1.edge_count != g2.edge_count:
        return
    if sorted(map(len, g1._adj)) != sorted(map(len, g2._adj)):
        return
    if labels and (g1.vertex_labels is None) != (g2.vertex_labels is None):
        return
    U = _Union(g1, g2, labels)
    n1 = U.n1
    colors = list(U.colors)
    fresh = max(colors, default=0) + 1
    for a, b in pairs:
        if colors[a] != colors[n1 + b]:
            return
        colors[a] = colors[n1 + b] = fresh
        fresh += 1
    yield from _search(U, colors, bud)


def _search(U: _Union, colors: list[int], bud: Budget) -> Iterator[tuple[int, ...]]:
    bud.tick()
    n1 = U.n1
    colors = _refine(U.adj, colors)
    left: dict[int, list[int]] = {}
    right: dict[int, list[int]] = {}
    for v in range(n1):
        left.setdefault(colors[v], []).append(v)
    for v in range(n1, 2 * n1):
        right.setdefault(colors[v], []).append(v - n1)
    if left.keys() != right.keys():
        return
    best = None
    for c, members in left.items():
        if len(members) != len(right[c]):
            return
        if len(members) > 1 and (best is None or (len(members), c) < (len(left[best]), best)):
            best = c
    if best is None:
        f = [0] * n1
        for c, (v,) in left.items():
            f[v] = right[c][0]
        if _is_iso(U.g1, U.g2, f, U.labels):
            yield tuple(f)
        return
    x = min(left[best])
    fresh = len(left)
    for y in sorted(right[best]):
        new = list(colors)
        new[x] = new[n1 + y] = fresh
        yield from _search(U, new, bud)


def find_isomorphism(
    g1: SimpleGraph,
    g2: SimpleGraph,
    pairs: Sequence[tuple[int, int]] = (),
    *,
    labels: bool = True,
    budget: Budget | int | None = None,
) -> tuple[int, ...] | None:
    return next(iter_isomorphisms(g1, g2, pairs, labels=labels, budget=budget), None)


def _ball_invariant(b: BallView) -> tuple:
    g = b.carrier
    return (
        g.n,
        g.edge_count,
        tuple(sorted(b.intrinsic_dist)),
        tuple(sorted((b.intrinsic_dist[v], g.degree(v)) for v in range(g.n))),
    )


def ball_isometric(
    b1: BallView, b2: BallView, budget: Budget | int | None = None
) -> RootedIsometry | None:
    """A root-preserving isometry ``b1 -> b2`` or ``None``."""
    if b1.radius != b2.radius:
        raise PreconditionError("balls must have equal radius")
    if _ball_invariant(b1) != _ball_invariant(b2):
        return None
    f = find_isomorphism(b1.carrier, b2.carrier, [(b1.root, b2.root)], budget=budget)
    return None if f is None else RootedIsometry(b1, b2, f)


def iter_ball_isometries(
    b1: BallView,
    b2: BallView,
    fixed: dict[int, int] | None = None,
    budget: Budget | int | None = None,
) -> Iterator[RootedIsometry]:
    """All rooted isometries ``b1 -> b2`` extending ``fixed`` (ambient ids)."""
    pairs = [(b1.root, b2.root)]
    for a, b in (fixed or {}).items():
        i, j = b1.index.get(a), b2.index.get(b)
        if i is None or j is None:
            return
        pairs.append((i, j))
    if b1.carrier.n != b2.carrier.n:
        return
    for f in iter_isomorphisms(b1.carrier, b2.carrier, pairs, budget=budget):
        yield RootedIsometry(b1, b2, f)


@dataclass(frozen=True)
class LocalReport:
    verdict: bool
    witnesses: tuple[int | None, ...]
    failing_vertex: int | None = None


def is_r_locally(
    Y: SimpleGraph,
    X_balls: Sequence[BallView],
    R: int,
    budget: Budget | int | None = None,
) -> LocalReport:
    """Check that every radius-``R`` ball of ``Y`` is isometric to one of ``X_balls``.

    The report lists, per vertex of ``Y``, the index of a matching model ball;
    it stops at the first vertex without a match.
    """
    for b in X_balls:
        if b.radius < R:
            raise PreconditionError("model balls must have radius at least R")
    models = [b if b.radius == R else ball(b.carrier, b.root, R) for b in X_balls]
    inv = [_ball_invariant(b) for b in models]
    bud = as_budget(budget, "is_r_locally")
    witnesses: list[int | None] = []
    for y in range(Y.n):
        by = ball(Y, y, R)
        iy = _ball_invariant(by)
        hit = None
        for idx, b in enumerate(models):
            if inv[idx] == iy and ball_isometric(by, b, bud) is not None:
                hit = idx
                break
        if hit is None:
            return LocalReport(False, tuple(witnesses) + (None,) * (Y.n - y), y)
        witnesses.append(hit)
    return LocalReport(True, tuple(witnesses))


# ----------------------------------------------------------------------
# Automorphisms
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class AutGroup:
    """Automorphism group given by generators, with exact order and vertex orbits."""

    n: int
    generators: tuple[tuple[int, ...], ...]
    order: int
    orbits: tuple[tuple[int, ...], ...] = field(default=())

    @property
    def vertex_orbit_count(self) -> int:
        return len(self.orbits)

    def elements(self, limit: int = 100_000) -> list[tuple[int, ...]]:
        """All group elements by closure; refuses groups larger than ``limit``."""
        if self.order > limit:
            raise BudgetExceeded(f"group of order {self.order} exceeds enumeration limit {limit}")
        return closure(self.generators, self.n)


def compose(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """``p`` after ``q``."""
    return tuple(p[i] for i in q)


def invert_perm(p: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def closure(gens: Iterable[Sequence[int]], n: int) -> list[tuple[int, ...]]:
    ident = tuple(range(n))
    gens = [tuple(g) for g in gens]
    seen = {ident}
    out = [ident]
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = compose(g, x)
            if y not in seen:
                seen.add(y)
                out.append(y)
                queue.append(y)
    return out


def orbits_of(gens: Sequence[Sequence[int]], n: int) -> tuple[tuple[int, ...], ...]:
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for g in gens:
        for i, j in enumerate(g):
            a, b = find(i), find(j)
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for v in range(n):
        groups.setdefault(find(v), []).append(v)
    return tuple(tuple(m) for _, m in sorted(groups.items()))


def _orbit(point: int, gens: Sequence[Sequence[int]]) -> set[int]:
    seen = {point}
    stack = [point]
    while stack:
        x = stack.pop()
        for g in gens:
            y = g[x]
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def _single_adj(g: SimpleGraph, labels: bool) -> tuple[list, list[int]]:
    U = _Union(g, SimpleGraph(0), labels)
    return U.adj, U.colors


def _stabilizer_chain(
    g: SimpleGraph, fixed: tuple[int, ...], labels: bool, bud: Budget
) -> tuple[int, list[tuple[int, ...]]]:
    """Order and generators of the pointwise stabilizer of ``fixed``."""
    adj, colors = _single_adj(g, labels)
    fresh = max(colors, default=0) + 1
    for i, f in enumerate(fixed):
        colors[f] = fresh + i
    colors = _refine(adj, colors)
    cells: dict[int, list[int]] = {}
    for v, c in enumerate(colors):
        cells.setdefault(c, []).append(v)
    target = None
    for c, members in sorted(cells.items()):
        if len(members) > 1 and (target is None or len(members) < len(cells[target])):
            target = c
    if target is None:
        return 1, []
    cell = cells[target]
    b = cell[0]
    sub_order, gens = _stabilizer_chain(g, fixed + (b,), labels, bud)
    orbit = _orbit(b, gens)
    base_pairs = [(f, f) for f in fixed]
    for w in cell:
        if w in orbit:
            continue
        try:
            phi = find_isomorphism(g, g, base_pairs + [(b, w)], labels=labels, budget=bud)
        except BudgetExceeded as exc:
            exc.partial.update(partial_orbit=sorted(orbit), base=list(fixed) + [b])
            raise
        if phi is not None:
            gens.append(phi)
            orbit = _orbit(b, gens)
    return len(orbit) * sub_order, gens


def automorphism_group(
    g: SimpleGraph,
    respect_labels: bool = False,
    budget: Budget | int | None = 200_000,
    fixed: Sequence[int] = (),
) -> AutGroup:
    """Automorphism group of ``g`` (optionally of the pointwise stabilizer of ``fixed``).

    With ``respect_labels`` the automorphisms must preserve edge and vertex labels.
    """
    bud = as_budget(budget, "automorphism search")
    order, gens = _stabilizer_chain(g, tuple(fixed), respect_labels, bud)
    gens_t = tuple(gens)
    return AutGroup(g.n, gens_t, order, orbits_of(gens_t, g.n))


def local_stabilizer_probe(
    g: SimpleGraph, v: int, r: int, budget: Budget | int | None = 200_000
) -> int:
    """Order of the subgroup of ``Aut(g)`` fixing the ball ``B(v, r)`` pointwise."""
    g.check_vertex(v)
    return automorphism_group(g, budget=budget, fixed=ball_vertices(g, v, r)).order


def empirical_rc(
    g: SimpleGraph,
    max_r: int,
    vertices: Iterable[int] | None = None,
    budget: Budget | int | None = 200_000,
) -> int | None:
    """Least ``r <= max_r`` whose ball stabilizers are all trivial, else ``None``."""
    verts = list(range(g.n) if vertices is None else vertices)
    if vertices is None:
        verts = [orb[0] for orb in automorphism_group(g, budget=budget).orbits]
    for r in range(max_r + 1):
        if all(local_stabilizer_probe(g, v, r, budget) == 1 for v in verts):
            return r
    return None


# ----------------------------------------------------------------------
# Triangles and cliques
# ----------------------------------------------------------------------

def edge_triangle_count(g: SimpleGraph, u: int, v: int) -> int:
    """Number of common neighbours of the endpoints of the edge ``{u, v}``."""
    if not g.has_edge(u, v):
        raise PreconditionError(f"{{{u}, {v}}} is not an edge")
    return len(g._adjsets[u] & g._adjsets[v])


def max_clique_size(g: SimpleGraph, budget: Budget | int | None = 1_000_000) -> int:
    """Exact clique number by branch and bound with a greedy colouring bound.

    On budget exhaustion the raised error's ``partial`` holds ``lower`` and ``upper``.
    """
    bud = as_budget(budget, "clique search")
    adj = g._adjsets
    best = [0]
    upper = max((g.degree(v) + 1 for v in range(g.n)), default=0)

    def colour_bound(cands: list[int]) -> list[tuple[int, int]]:
        # greedy sequential colouring; returns (vertex, colour) sorted by colour
        classes: list[set[int]] = []
        for v in cands:
            for cls in classes:
                if not (adj[v] & cls):
                    cls.add(v)
                    break
            else:
                classes.append({v})
        return [(v, k + 1) for k, cls in enumerate(classes) for v in cls]

    def expand(size: int, cands: list[int]) -> None:
        bud.tick(lower=best[0], upper=upper)
        order = colour_bound(cands)
        while order:
            v, c = order.pop()
            if size + c <= best[0]:
                return
            new = [w for w, _ in order if w in adj[v]]
            if new:
                expand(size + 1, new)
            elif size + 1 > best[0]:
                best[0] = size + 1

    verts = sorted(range(g.n), key=lambda v: -g.degree(v))
    expand(0, verts)
    return best[0]


def maximal_cliques(g: SimpleGraph, budget: Budget | int | None = 1_000_000) -> Iterator[frozenset[int]]:
    """Bron-Kerbosch with pivoting."""
    bud = as_budget(budget, "clique enumeration")
    adj = g._adjsets

    def bk(r: set[int], p: set[int], x: set[int]) -> Iterator[frozenset[int]]:
        bud.tick()
        if not p and not x:
            yield frozenset(r)
            return
        pivot = max(p | x, key=lambda u: (len(adj[u] & p), -u))
        for v in sorted(p - adj[pivot]):
            yield from bk(r | {v}, p & adj[v], x & adj[v])
            p = p - {v}
            x = x | {v}

    yield from bk(set(), set(range(g.n)), set())
