"""Graphs glued from 2-coverings over a partitioned base: the Cayley graph X0 of
``H x Z/2``, its variants with one or every coset replaced by a cover, and the
diagnostics used to tell them apart."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence

from .cayley import GenSet, cayley_graph
from .discreteness import n3_profile
from .errors import Budget, PreconditionError, as_budget
from .graph import SimpleGraph, edge_triangle_count, find_isomorphism
from .groups import Cyclic, DirectProduct, Element, Group
from .rigidity import CoveringMap, verify_covering

INNER, OUTER, VERTICAL = "inner", "outer", "vertical"


@dataclass(frozen=True)
class PartitionedBase:
    """``X`` split into pieces; ``pieces[i][y]`` is the image of ``Y``-vertex ``y`` in piece ``i``."""

    X: SimpleGraph
    Y: SimpleGraph
    pieces: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen = [None] * self.X.n
        for i, piece in enumerate(self.pieces):
            if len(piece) != self.Y.n:
                raise PreconditionError(f"piece {i} has {len(piece)} vertices, expected {self.Y.n}")
            for x in piece:
                if seen[x] is not None:
                    raise PreconditionError(f"vertex {x} lies in two pieces")
                seen[x] = i
        if any(s is None for s in seen):
            raise PreconditionError("pieces do not cover the base")
        for i, piece in enumerate(self.pieces):
            for a in range(self.Y.n):
                for b in range(a + 1, self.Y.n):
                    if self.Y.has_edge(a, b) != self.X.has_edge(piece[a], piece[b]):
                        raise PreconditionError(f"piece {i} is not an induced copy of Y")
        object.__setattr__(self, "piece_of", tuple(seen))
        inv = {}
        for i, piece in enumerate(self.pieces):
            for y, x in enumerate(piece):
                inv[x] = y
        object.__setattr__(self, "local", tuple(inv[x] for x in range(self.X.n)))


@dataclass(frozen=True)
class CosetBase:
    """Cayley partition of ``(H, T)`` into left cosets of ``G``."""

    H: Group
    T: GenSet
    S: GenSet
    elements: tuple[Element, ...]
    group_elements: tuple[Element, ...]
    representatives: tuple[Element, ...]
    base: PartitionedBase


def coset_base(
    H: Group,
    T: GenSet,
    in_G: Callable[[Element], bool],
    section: Sequence[Element] | None = None,
) -> CosetBase:
    """Partition ``(H, T)`` by left ``G``-cosets with ``f_i(y) = section(i) y``.

    Without ``section`` each coset is represented by its first element in
    enumeration order.
    """
    els = tuple(H.elements())
    idx = {h: i for i, h in enumerate(els)}
    G_els = tuple(h for h in els if in_G(h))
    S = GenSet(H, [t for t in T if in_G(t)])
    X = cayley_graph(H, T)
    gidx = {g: i for i, g in enumerate(G_els)}
    Y = SimpleGraph(len(G_els), [(gidx[g], gidx[H.multiply(g, s)]) for g in G_els for s in S
                                 if gidx[g] < gidx[H.multiply(g, s)]])
    if not Y.is_connected():
        raise PreconditionError("T ∩ G does not generate G")
    reps: list[Element] = []
    covered: set[Element] = set()
    if section is None:
        for h in els:
            if h not in covered:
                reps.append(h)
                covered.update(H.multiply(h, g) for g in G_els)
    else:
        reps = list(section)
    pieces = tuple(tuple(idx[H.multiply(r, g)] for g in G_els) for r in reps)
    return CosetBase(H, T, S, els, G_els, tuple(reps), PartitionedBase(X, Y, pieces))


@dataclass(frozen=True)
class GluedGraph:
    graph: SimpleGraph
    kinds: dict[tuple[int, int], str]
    projection: tuple[int, ...]
    base: SimpleGraph

    def kind(self, u: int, v: int) -> str:
        return self.kinds[(u, v) if u < v else (v, u)]

    def edges_of_kind(self, kind: str) -> list[tuple[int, int]]:
        return [e for e in self.graph.edges() if self.kinds[e] == kind]

    @property
    def fibers(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.base.n)]
        for v, x in enumerate(self.projection):
            out[x].append(v)
        return out

    def to_json(self) -> dict[str, Any]:
        obj = self.graph.to_json()
        obj["edge_kinds"] = [self.kinds[e] for e in self.graph.edges()]
        obj["projection"] = list(self.projection)
        obj["fibers"] = self.fibers
        return obj


def trivial_cover(Y: SimpleGraph) -> CoveringMap:
    """``Y x {0, 1} -> Y``; vertex ``(y, a)`` has index ``a |Y| + y``."""
    n = Y.n
    Z = SimpleGraph(2 * n, [(u + a * n, v + a * n) for u, v in Y.edges() for a in (0, 1)])
    return verify_covering([z % n for z in range(2 * n)], Z, Y)


def glue(base: PartitionedBase, covers: Sequence[CoveringMap]) -> GluedGraph:
    """Put ``covers[i]`` over piece ``i``; inner, outer and vertical edges as usual."""
    if len(covers) != len(base.pieces):
        raise PreconditionError("need one covering per piece")
    for q in covers:
        if q.target != base.Y:
            raise PreconditionError("covering does not project onto the piece graph")
    offsets = []
    total = 0
    for q in covers:
        offsets.append(total)
        total += q.source.n
    proj = [0] * total
    over: list[list[int]] = [[] for _ in range(base.X.n)]
    for i, q in enumerate(covers):
        for z in range(q.source.n):
            x = base.pieces[i][q(z)]
            proj[offsets[i] + z] = x
            over[x].append(offsets[i] + z)
    kinds: dict[tuple[int, int], str] = {}
    for i, q in enumerate(covers):
        o = offsets[i]
        for u, v in q.source.edges():
            kinds[(o + u, o + v)] = INNER
        fib: dict[int, list[int]] = {}
        for z in range(q.source.n):
            fib.setdefault(q(z), []).append(o + z)
        for zs in fib.values():
            for a in range(len(zs)):
                for b in range(a + 1, len(zs)):
                    kinds[(zs[a], zs[b])] = VERTICAL
    piece_of = base.piece_of
    for a, b in base.X.edges():
        if piece_of[a] == piece_of[b]:
            continue
        for u in over[a]:
            for v in over[b]:
                kinds[(min(u, v), max(u, v))] = OUTER
    g = SimpleGraph(total, sorted(kinds))
    return GluedGraph(g, kinds, tuple(proj), base.X)


def build_Xtilde(base: PartitionedBase, q: CoveringMap) -> GluedGraph:
    return glue(base, [q] * len(base.pieces))


def build_Xq(cb: CosetBase, q: CoveringMap) -> GluedGraph:
    """``q`` over the coset ``G`` itself, trivial covers over every other coset."""
    if q.target != cb.base.Y:
        raise PreconditionError("q must cover the Cayley graph (G, T ∩ G)")
    triv = trivial_cover(cb.base.Y)
    G_set = set(cb.group_elements)
    return glue(cb.base, [q if r in G_set else triv for r in cb.representatives])


def x0_generators(H: Group, T: GenSet, S: GenSet) -> tuple[DirectProduct, GenSet]:
    HZ = DirectProduct(H, Cyclic(2))
    out = [(H.identity(), 1)]
    out += [(s, 0) for s in S]
    out += [(t, a) for t in T if t not in S for a in (0, 1)]
    return HZ, GenSet(HZ, out)


def build_X0(H: Group, T: GenSet, in_G: Callable[[Element], bool]) -> GluedGraph:
    """Cayley graph of ``H x Z/2`` for ``{(e,1)} ∪ S x {0} ∪ (T \\ S) x {0,1}``, ``S = T ∩ G``."""
    if not T.symmetric:
        raise PreconditionError("T must be symmetric")
    S = GenSet(H, [t for t in T if in_G(t)])
    HZ, Tp = x0_generators(H, T, S)
    g = cayley_graph(HZ, Tp)
    els = HZ.elements()
    hidx = {h: i for i, h in enumerate(H.elements())}
    kinds = {}
    for u, v in g.edges():
        (a, ea), (b, eb) = els[u], els[v]
        if a == b:
            kinds[(u, v)] = VERTICAL
        elif in_G(H.multiply(H.invert(a), b)):
            kinds[(u, v)] = INNER
        else:
            kinds[(u, v)] = OUTER
    return GluedGraph(g, kinds, tuple(hidx[h] for h, _ in els), cayley_graph(H, T))


def fiber_isomorphism(a: GluedGraph, b: GluedGraph) -> tuple[int, ...] | None:
    """Graph isomorphism ``a -> b`` commuting with the projections, or ``None``."""
    if a.base != b.base:
        return None
    ga = SimpleGraph(a.graph.n, a.graph.edges(), vertex_labels=list(a.projection))
    gb = SimpleGraph(b.graph.n, b.graph.edges(), vertex_labels=list(b.projection))
    return find_isomorphism(ga, gb)


# ----------------------------------------------------------------------
# Triangle condition
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class TriangleCondition:
    holds: bool
    margin: int
    max_triangles: int
    threshold: int


def check_triangle_condition(X: SimpleGraph, Y: SimpleGraph) -> TriangleCondition:
    """Every edge of ``X`` in fewer than ``min deg X - max deg Y - 1`` triangles."""
    m_X = min(X.degree(v) for v in range(X.n))
    M_Y = max((Y.degree(v) for v in range(Y.n)), default=0)
    top = max((edge_triangle_count(X, u, v) for u, v in X.edges()), default=0)
    rhs = m_X - M_Y - 1
    return TriangleCondition(top < rhs, rhs - top - 1, top, rhs)


def check_cayley_triangle_condition(H: Group, T: GenSet, S: GenSet) -> TriangleCondition:
    """``max_t |tT ∩ T| < |T| - |S| - 1``."""
    Tset = set(T)
    top = max(sum(1 for u in T if H.multiply(t, u) in Tset) for t in T)
    rhs = len(T) - len(S) - 1
    return TriangleCondition(top < rhs, rhs - top - 1, top, rhs)


@dataclass(frozen=True)
class MarkingGenset:
    T: GenSet
    profile: dict[Element, int]
    added: tuple[Element, ...]


def choose_marking_genset(
    H: Group,
    in_G: Callable[[Element], bool],
    T1: GenSet,
    candidates: Iterable[Element] | None = None,
    radius: int = 8,
    budget: Budget | int | None = 1_000_000,
) -> MarkingGenset:
    """Adjoin ``h, h^-1`` (``h`` outside ``G``, word length > 3) until
    ``max N3(t, T) + 1 < |T \\ G|``.

    Candidates default to ``H`` (finite) or the ``T1``-ball of ``radius``.
    """
    from .cayley import cayley_ball, word_lengths

    if candidates is None:
        candidates = H.elements() if H.is_finite() else cayley_ball(H, T1, radius, budget).element_of
    pool = [h for h in candidates if not in_G(h)]
    T = T1
    added: list[Element] = []
    while True:
        prof = n3_profile(H, T)
        outside = sum(1 for t in T if not in_G(t))
        if max(prof.counts.values()) + 1 < outside:
            return MarkingGenset(T, prof.counts, tuple(added))
        lengths = word_lengths(H, T, pool, budget)
        pick = next((h for h in pool if h not in T and lengths[h] is not None and lengths[h] > 3), None)
        if pick is None:
            raise PreconditionError(
                f"carrier exhausted: no element outside G of word length > 3 (|T \\ G| = {outside})"
            )
        T = GenSet(H, list(T) + [pick, H.invert(pick)])
        added.append(pick)


# ----------------------------------------------------------------------
# Blind recovery of the fibres
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class VerticalRelation:
    found: bool
    fibers: tuple[tuple[int, ...], ...]
    threshold: int | None
    vertical_range: tuple[int, int] | None
    other_range: tuple[int, int] | None
    reason: str = ""

    def same(self, u: int, v: int) -> bool:
        return any(u in f and v in f for f in self.fibers)


def edge_triangle_counts(g: SimpleGraph) -> dict[tuple[int, int], int]:
    adj = [set(g.neighbors(v)) for v in range(g.n)]
    return {(u, v): len(adj[u] & adj[v]) for u, v in g.edges()}


def detect_vertical_relation(g: SimpleGraph) -> VerticalRelation:
    """Find the highest triangle-count threshold whose edges split every vertex into
    equal-size cliques of size at least 2."""
    counts = edge_triangle_counts(g)
    if not counts:
        return VerticalRelation(False, (), None, None, None, "graph has no edges")
    values = sorted(set(counts.values()), reverse=True)
    for th in values:
        vert = [e for e, c in counts.items() if c >= th]
        other = [c for c in counts.values() if c < th]
        h = SimpleGraph(g.n, vert)
        comps = h.components()
        sizes = {len(c) for c in comps}
        if len(sizes) != 1 or min(sizes) < 2:
            continue
        if any(h.induced_subgraph(c).edge_count != len(c) * (len(c) - 1) // 2 for c in comps):
            continue
        vr = (min(counts[e] for e in vert), max(counts[e] for e in vert))
        orr = (min(other), max(other)) if other else None
        return VerticalRelation(True, tuple(tuple(sorted(c)) for c in comps), th, vr, orr)
    lo, hi = min(values), max(values)
    return VerticalRelation(False, (), None, None, (lo, hi), "no threshold separates clique fibres")


# ----------------------------------------------------------------------
# Admissible edge sets
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class AdmissibleResult:
    """``edges`` is a disconnecting admissible set; otherwise ``forced_components`` shows
    how far forced edges alone connect the graph."""

    edges: tuple[tuple[int, int], ...] | None
    side: tuple[int, ...] | None
    forced_components: int
    forced_edges: int

    @property
    def disconnecting(self) -> bool:
        return self.edges is not None


def is_admissible(glued: GluedGraph, E: Iterable[tuple[int, int]]) -> bool:
    g, p, X = glued.graph, glued.projection, glued.base
    reach = [set() for _ in range(g.n)]
    for u, v in E:
        reach[u].add(p[v])
        reach[v].add(p[u])
    return all(set(X.neighbors(p[x])) <= reach[x] for x in range(g.n))


def admissible_edge_analysis(glued: GluedGraph, budget: Budget | int | None = 1_000_000) -> AdmissibleResult:
    """Search for an admissible edge set whose graph is disconnected.

    Such a set exists iff the vertices split into two nonempty sides so that
    every requirement ``(x, b)`` (reach the base neighbour ``b`` of ``p(x)``)
    has an option on the side of ``x``.  Requirements with one option force
    an edge; the remaining choices are searched over forced components.
    """
    g, p, X = glued.graph, glued.projection, glued.base
    bud = as_budget(budget, "admissible edge search")
    requirements: list[tuple[int, list[int]]] = []
    parent = list(range(g.n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    forced = 0
    for x in range(g.n):
        for b in X.neighbors(p[x]):
            opts = [y for y in g.neighbors(x) if p[y] == b]
            if not opts:
                raise PreconditionError(f"vertex {x} has no edge over the base edge ({p[x]}, {b})")
            if len(opts) == 1:
                forced += 1
                parent[find(x)] = find(opts[0])
            else:
                requirements.append((x, opts))
    roots = sorted({find(v) for v in range(g.n)})
    comp = {r: i for i, r in enumerate(roots)}
    cid = [comp[find(v)] for v in range(g.n)]
    m = len(roots)
    if m == 1:
        return AdmissibleResult(None, None, 1, forced)
    # requirements between components: component of x needs some option component on its side
    needs = sorted({(cid[x], tuple(sorted({cid[y] for y in opts}))) for x, opts in requirements
                    if cid[x] not in {cid[y] for y in opts}})
    by_comp: dict[int, list[tuple[int, ...]]] = {}
    watch: dict[int, list[tuple[int, tuple[int, ...]]]] = {}
    for c, opts in needs:
        by_comp.setdefault(c, []).append(opts)
        for o in opts:
            watch.setdefault(o, []).append((c, opts))
    side = [-1] * m

    def consistent(c: int) -> bool:
        for opts in by_comp.get(c, ()):
            if all(side[o] != -1 and side[o] != side[c] for o in opts):
                return False
        for c2, opts in watch.get(c, ()):
            if side[c2] != -1 and all(side[o] != -1 and side[o] != side[c2] for o in opts):
                return False
        return True

    def search(k: int) -> bool:
        bud.tick()
        if k == m:
            return 0 in side and 1 in side
        for s in ((0,) if k == 0 else (1, 0)):
            side[k] = s
            if consistent(k) and search(k + 1):
                return True
        side[k] = -1
        return False

    if not search(0):
        return AdmissibleResult(None, None, m, forced)
    sides = tuple(side[cid[v]] for v in range(g.n))
    E = tuple(e for e in g.edges() if sides[e[0]] == sides[e[1]])
    return AdmissibleResult(E, sides, m, forced)


# ----------------------------------------------------------------------
# Lipschitz comparison
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class LipschitzReport:
    forward: Fraction
    backward: Fraction
    mapping: tuple[int, ...]

    @property
    def bilipschitz(self) -> Fraction:
        return max(self.forward, self.backward)


def _all_distances(g: SimpleGraph) -> list[list[int]]:
    return [g.distances_from(v) for v in range(g.n)]


def _lipschitz(d1: list[list[int]], d2: list[list[int]], f: Sequence[int]) -> Fraction:
    best = Fraction(0)
    n = len(f)
    for a in range(n):
        for b in range(a + 1, n):
            x = d1[a][b]
            if x < 0:
                continue
            y = d2[f[a]][f[b]]
            if y < 0:
                return Fraction(10**18)
            r = Fraction(y, x)
            if r > best:
                best = r
    return best


def projection_bijection(g1: GluedGraph, g2: GluedGraph) -> tuple[int, ...]:
    """Match each fibre of ``g1`` to the same-base fibre of ``g2`` in index order."""
    if g1.base != g2.base:
        raise PreconditionError("glued graphs lie over different bases")
    f = [0] * g1.graph.n
    for a, b in zip(g1.fibers, g2.fibers):
        if len(a) != len(b):
            raise PreconditionError("fibre sizes differ")
        for u, v in zip(a, b):
            f[u] = v
    return tuple(f)


def bilipschitz_compare(
    g1: GluedGraph, g2: GluedGraph, mapping: Sequence[int] | None = None
) -> LipschitzReport:
    """Exact Lipschitz constants of a projection-commuting bijection and its inverse."""
    f = tuple(mapping) if mapping is not None else projection_bijection(g1, g2)
    if any(g1.projection[u] != g2.projection[f[u]] for u in range(len(f))):
        raise PreconditionError("mapping does not commute with the projections")
    inv = [0] * len(f)
    for u, v in enumerate(f):
        inv[v] = u
    d1, d2 = _all_distances(g1.graph), _all_distances(g2.graph)
    return LipschitzReport(_lipschitz(d1, d2, f), _lipschitz(d2, d1, inv), f)
