"""Coverings, extension radii, germ transport and covering propagation,
deck groups, a residual-finiteness probe and covers along tree decompositions."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .cayley import GenSet, cayley_ball, word_lengths
from .errors import (
    Budget,
    CoveringViolation,
    LgrigidError,
    PreconditionError,
    TransportError,
    as_budget,
)
from .graph import (
    AutGroup,
    SimpleGraph,
    automorphism_group,
    ball,
    ball_isometric,
    ball_vertices,
    closure,
    find_isomorphism,
    is_r_locally,
    iter_ball_isometries,
    orbits_of,
)
from .groups import Element, Group


# ----------------------------------------------------------------------
# Covering maps
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class CoveringMap:
    """A verified covering; ``vertex_map[z]`` is ``None`` outside the domain."""

    source: SimpleGraph
    target: SimpleGraph
    vertex_map: tuple[int | None, ...]
    fiber_size: int | None
    injectivity_radius: float
    interior: tuple[int, ...] | None = None

    def __call__(self, z: int) -> int:
        img = self.vertex_map[z]
        if img is None:
            raise KeyError(z)
        return img

    def to_json(self) -> list[int | None]:
        return list(self.vertex_map)


def _as_map(p: Sequence[int | None] | Mapping[int, int], n: int) -> list[int | None]:
    if isinstance(p, Mapping):
        return [p.get(z) for z in range(n)]
    if len(p) != n:
        raise PreconditionError(f"map has {len(p)} entries for {n} source vertices")
    return [None if x is None or x < 0 else int(x) for x in p]


def covering_violation(
    p: Sequence[int | None] | Mapping[int, int],
    Z: SimpleGraph,
    X: SimpleGraph,
    interior: Iterable[int] | None = None,
) -> tuple[int, str] | None:
    """First ``(vertex, reason)`` where ``p`` fails to be a covering, or ``None``."""
    pm = _as_map(p, Z.n)
    centers = range(Z.n) if interior is None else sorted(interior)
    for z in centers:
        x = pm[z]
        if x is None:
            return z, "vertex outside the map's domain"
        if not 0 <= x < X.n:
            return z, f"image {x} is not a target vertex"
        images = []
        for w in Z.neighbors(z):
            y = pm[w]
            if y is None:
                return z, f"neighbour {w} outside the map's domain"
            if not X.has_edge(x, y):
                return z, f"edge {{{z}, {w}}} is not mapped to an edge"
            images.append(y)
        if len(set(images)) != len(images):
            return z, "star is not mapped injectively"
        if len(images) != X.degree(x):
            return z, "star is not mapped onto the star of the image"
    return None


def injectivity_radius(
    pm: Sequence[int | None], Z: SimpleGraph, centers: Iterable[int]
) -> float:
    """Largest ``R`` with ``p`` injective on every ``B(z, R)``, ``z`` in ``centers``."""
    best = math.inf
    for z in centers:
        dist = {z: 0}
        seen_images = {pm[z]: z}
        queue = deque([z])
        collision = None
        while queue and collision is None:
            u = queue.popleft()
            if dist[u] + 1 > best:
                break
            for w in Z.neighbors(u):
                if w in dist or pm[w] is None:
                    continue
                dist[w] = dist[u] + 1
                if pm[w] in seen_images:
                    collision = dist[w]
                    break
                seen_images[pm[w]] = w
                queue.append(w)
        if collision is not None:
            best = min(best, collision - 1)
    return best


def verify_covering(
    p: Sequence[int | None] | Mapping[int, int],
    Z: SimpleGraph,
    X: SimpleGraph,
    interior: Iterable[int] | None = None,
) -> CoveringMap:
    """Check star-bijectivity at every vertex (or every ``interior`` vertex).

    Raises :class:`CoveringViolation` at the first failing vertex.
    """
    pm = _as_map(p, Z.n)
    inner = None if interior is None else tuple(sorted(interior))
    bad = covering_violation(pm, Z, X, inner)
    if bad is not None:
        raise CoveringViolation(*bad)
    fiber = None
    if inner is None:
        counts = [0] * X.n
        for x in pm:
            counts[x] += 1
        if counts and min(counts) == max(counts):
            fiber = counts[0]
    radius = injectivity_radius(pm, Z, range(Z.n) if inner is None else inner)
    return CoveringMap(Z, X, tuple(pm), fiber, radius, inner)


# ----------------------------------------------------------------------
# Extension radius
# ----------------------------------------------------------------------

def _restriction(perm: Sequence[int], verts: Sequence[int]) -> tuple[int, ...]:
    return tuple(perm[v] for v in verts)


def extension_radius(
    X: SimpleGraph,
    r: int,
    budget: Budget | int | None = 500_000,
    centers: Sequence[int] | None = None,
    max_radius: int | None = None,
) -> int:
    """Least ``r2 >= r`` such that every rooted isometry ``B(x, r2) -> B(y, r2)``
    agrees on ``B(x, r)`` with an automorphism of ``X``.

    Sources range over ``centers`` (default: one vertex per automorphism orbit);
    targets over one vertex per orbit, which loses nothing because composing
    with an automorphism preserves the property.
    """
    bud = as_budget(budget, "extension radius")
    aut = automorphism_group(X, budget=bud)
    orbit_of = {}
    for i, orb in enumerate(aut.orbits):
        for v in orb:
            orbit_of[v] = i
    reps = [orb[0] for orb in aut.orbits]
    sources = reps if centers is None else list(centers)
    limit = X.diameter() if max_radius is None else max_radius
    # per source: automorphisms mapping the orbit representative to the source
    stab_restrictions: dict[int, set[tuple[int, ...]]] = {}
    carry: dict[int, tuple[int, ...]] = {}
    inner = {x: ball_vertices(X, x, r) for x in sources}
    for x in sources:
        stab = automorphism_group(X, budget=bud, fixed=[x])
        stab_restrictions[x] = {_restriction(g, inner[x]) for g in stab.elements()}
        rep = reps[orbit_of[x]]
        h = find_isomorphism(X, X, [(rep, x)], labels=False, budget=bud)
        carry[x] = h  # h maps rep -> x
    for r2 in range(r, max(limit, r) + 1):
        good = True
        for x in sources:
            bx = ball(X, x, r2)
            for u in reps:
                bu = ball(X, u, r2)
                same = orbit_of[u] == orbit_of[x]
                for iso in iter_ball_isometries(bx, bu, budget=bud):
                    if not same:
                        good = False
                        break
                    h = carry[x]
                    f = iso.vertex_map
                    # h . f maps B(x, r2) onto B(x, r2) fixing x
                    moved = tuple(h[f[v]] for v in inner[x])
                    if moved not in stab_restrictions[x]:
                        good = False
                        break
                if not good:
                    break
            if not good:
                break
        if good:
            return r2
    raise PreconditionError(f"no extension radius up to {max(limit, r)}")


# ----------------------------------------------------------------------
# Germs
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class Germ:
    """Isometry of ``B_X(center, r1)`` into ``Y`` that extends to ``B_X(center, r2)``."""

    center: int
    target: int
    map: dict[int, int] = field(compare=False)
    witness: dict[int, int] = field(compare=False, repr=False)
    key: tuple[tuple[int, int], ...] = field(default=(), repr=False)

    @classmethod
    def make(cls, center: int, mapping: dict[int, int], witness: dict[int, int]) -> "Germ":
        return cls(center, mapping[center], mapping, witness, tuple(sorted(mapping.items())))


def germ_set(
    X: SimpleGraph,
    Y: SimpleGraph,
    x: int,
    r1: int,
    r2: int,
    budget: Budget | int | None = 500_000,
    targets: Iterable[int] | None = None,
) -> list[Germ]:
    """Every germ at ``x`` (one stored witness each), over all target centres."""
    if r1 > r2:
        raise PreconditionError("r1 must not exceed r2")
    bud = as_budget(budget, "germ enumeration")
    bx = ball(X, x, r2)
    inner = ball_vertices(X, x, r1)
    out: list[Germ] = []
    for y in range(Y.n) if targets is None else targets:
        by = ball(Y, y, r2)
        seen = set()
        for iso in iter_ball_isometries(bx, by, budget=bud):
            f = iso.vertex_map
            restr = {v: f[v] for v in inner}
            key = tuple(sorted(restr.items()))
            if key not in seen:
                seen.add(key)
                out.append(Germ.make(x, restr, dict(f)))
    return out


def _germs_extending(
    X: SimpleGraph,
    Y: SimpleGraph,
    x: int,
    fixed: dict[int, int],
    r1: int,
    r2: int,
    bud: Budget,
    stop_after: int = 2,
) -> list[Germ]:
    bx = ball(X, x, r2)
    by = ball(Y, fixed[x], r2)
    inner = ball_vertices(X, x, r1)
    found: dict[tuple, Germ] = {}
    for iso in iter_ball_isometries(bx, by, fixed, budget=bud):
        f = iso.vertex_map
        restr = {v: f[v] for v in inner}
        key = tuple(sorted(restr.items()))
        if key not in found:
            found[key] = Germ.make(x, restr, dict(f))
            if len(found) >= stop_after:
                break
    return list(found.values())


def transport_germ(
    X: SimpleGraph,
    Y: SimpleGraph,
    germ: Germ,
    x2: int,
    r_c: int,
    r1: int,
    r2: int,
    budget: Budget | int | None = 500_000,
) -> Germ:
    """The unique germ at ``x2`` agreeing with ``germ`` on ``B(x2, r_c)``.

    Raises :class:`TransportError` when there is no candidate or more than one,
    or when the result disagrees with ``germ`` on the overlap of the ``r1``-balls.
    """
    anchor = ball_vertices(X, x2, r_c)
    missing = [v for v in anchor if v not in germ.map]
    if missing:
        raise PreconditionError(f"B({x2}, {r_c}) is not inside the germ's domain")
    fixed = {v: germ.map[v] for v in anchor}
    cands = _germs_extending(X, Y, x2, fixed, r1, r2, as_budget(budget, "germ transport"))
    if len(cands) != 1:
        raise TransportError(
            f"germ transport {germ.center} -> {x2} found {len(cands)}"
            f"{'+' if len(cands) > 1 else ''} candidates",
            len(cands),
        )
    new = cands[0]
    for v, y in new.map.items():
        if v in germ.map and germ.map[v] != y:
            raise TransportError(f"transported germ at {x2} disagrees with its source at {v}", 1)
    return new


# ----------------------------------------------------------------------
# Propagation
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class Obstruction:
    """A loop along which germ transport fails to close up."""

    loop: tuple[int, ...]
    reason: str

    def to_json(self) -> dict:
        return {"loop": list(self.loop), "reason": self.reason}


class PropagationError(LgrigidError):
    """Propagation hypotheses were violated (not a global obstruction)."""


@dataclass(frozen=True)
class PropagationParams:
    r_c: int
    k: int
    r1: int
    r2: int

    @property
    def t(self) -> int:
        return self.r1 - self.r_c


def propagation_params(X: SimpleGraph, k: int, r_c: int | None = None, r2: int | None = None,
                       budget: Budget | int | None = 500_000) -> PropagationParams:
    """Radii used by propagation: step ``t = ceil(k/2)``, ``r1 = r_c + t``, ``r2`` from
    :func:`extension_radius` unless supplied."""
    t = math.ceil(k / 2)
    if r_c is None:
        from .graph import empirical_rc

        r_c = empirical_rc(X, X.diameter(), budget=budget)
        if r_c is None:
            raise PreconditionError("no radius with trivial ball stabilizers")
    r1 = r_c + t
    if r2 is None:
        r2 = extension_radius(X, r1, budget)
    if r2 < r1:
        raise PreconditionError("r2 must be at least r1")
    return PropagationParams(r_c, k, r1, r2)


def _tree_path(parent: dict[int, int], v: int) -> list[int]:
    out = [v]
    while parent[v] != v:
        v = parent[v]
        out.append(v)
    return out


def propagate_covering(
    X: SimpleGraph,
    Y: SimpleGraph,
    seed: Mapping[int, int],
    x0: int,
    params: PropagationParams,
    domain: Iterable[int] | None = None,
    budget: Budget | int | None = 2_000_000,
) -> CoveringMap | Obstruction:
    """Build ``x -> phi_x(x)`` by transporting the seed germ along a BFS tree.

    ``seed`` maps at least ``B(x0, r_c)`` into ``Y``.  ``domain`` restricts the
    walk to the vertices whose ``r2``-balls are honest balls of the model
    (ball chunks of an infinite graph); by default it is all of ``X``.
    Returns an :class:`Obstruction` when some non-tree edge fails to close.
    """
    bud = as_budget(budget, "propagation")
    r_c, r1, r2 = params.r_c, params.r1, params.r2
    dom = set(range(X.n)) if domain is None else set(domain)
    if x0 not in dom:
        raise PreconditionError("seed centre lies outside the domain")
    known = {v: seed[v] for v in ball_vertices(X, x0, r1) if v in seed}
    if any(v not in known for v in ball_vertices(X, x0, r_c)):
        raise PreconditionError(f"seed must be defined on B({x0}, {r_c})")
    cands = _germs_extending(X, Y, x0, known, r1, r2, bud)
    if len(cands) != 1:
        raise TransportError(
            f"seed determines {len(cands)}{'+' if len(cands) > 1 else ''} germs at {x0}", len(cands)
        )
    germs = {x0: cands[0]}
    parent = {x0: x0}
    queue = deque([x0])
    while queue:
        x = queue.popleft()
        for w in X.neighbors(x):
            if w in dom and w not in germs:
                germs[w] = transport_germ(X, Y, germs[x], w, r_c, r1, r2, bud)
                parent[w] = x
                queue.append(w)
    # closure over non-tree edges
    for a in sorted(germs):
        for b in X.neighbors(a):
            if b not in germs or a > b or parent[a] == b or parent[b] == a:
                continue
            ga, gb = germs[a], germs[b]
            if any(ga.map[v] != gb.map[v] for v in ball_vertices(X, b, r_c)):
                loop = list(reversed(_tree_path(parent, a))) + _tree_path(parent, b)
                return Obstruction(tuple(loop), f"transport around edge {{{a}, {b}}} does not close")
    pm: list[int | None] = [None] * X.n
    for x, g in germs.items():
        pm[x] = g.map[x]
    if len(germs) < len(dom):
        raise PropagationError("domain is not connected to the seed centre")
    # images of boundary neighbours, read off the adjacent germs
    for x, g in sorted(germs.items()):
        for w in X.neighbors(x):
            if w in germs:
                continue
            if pm[w] is None:
                pm[w] = g.map[w]
            elif pm[w] != g.map[w]:
                raise PropagationError(f"germs disagree at boundary vertex {w}")
    try:
        return verify_covering(pm, X, Y, None if domain is None else sorted(germs))
    except CoveringViolation as exc:
        raise PropagationError(f"propagated map is not a covering: {exc}") from exc


# ----------------------------------------------------------------------
# Deck groups
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class DeckQuotient:
    group: AutGroup
    elements: tuple[tuple[int, ...], ...]
    free: bool
    quotient: SimpleGraph
    orbit_of: tuple[int, ...]
    quotient_iso: tuple[int, ...] | None
    failure: str | None = None

    @property
    def order(self) -> int:
        return len(self.elements)


def _lift_deck(p: CoveringMap, z0: int, z: int) -> tuple[int, ...] | None:
    Z, X, pm = p.source, p.target, p.vertex_map
    h = {z0: z}
    queue = deque([z0])
    while queue:
        u = queue.popleft()
        hu = h[u]
        over = {pm[w]: w for w in Z.neighbors(hu)}
        for v in Z.neighbors(u):
            img = over.get(pm[v])
            if img is None:
                return None
            if v in h:
                if h[v] != img:
                    return None
            else:
                h[v] = img
                queue.append(v)
    if len(h) != Z.n or len(set(h.values())) != Z.n:
        return None
    perm = tuple(h[v] for v in range(Z.n))
    if any(not Z.has_edge(perm[a], perm[b]) for a, b in Z.edges()):
        return None
    return perm


def deck_quotient(p: CoveringMap) -> DeckQuotient:
    """Automorphisms ``h`` of the source with ``p . h = p``, freeness, and ``H \\ source``.

    Deck transformations of a connected cover are determined by the image of
    one vertex, so each fibre element is tried as the image of vertex 0.
    """
    Z, X, pm = p.source, p.target, p.vertex_map
    if p.interior is not None:
        raise PreconditionError("deck groups need a covering defined everywhere")
    if not Z.is_connected():
        raise PreconditionError("deck groups are computed for connected sources")
    z0 = 0
    elements = []
    for z in range(Z.n):
        if pm[z] == pm[z0]:
            h = _lift_deck(p, z0, z)
            if h is not None:
                elements.append(h)
    ident = tuple(range(Z.n))
    free = all(h == ident or all(h[v] != v for v in range(Z.n)) for h in elements)
    gens: list[tuple[int, ...]] = []
    span = {ident}
    for h in elements:
        if h not in span:
            gens.append(h)
            span = set(closure(gens, Z.n))
    group = AutGroup(Z.n, tuple(gens), len(elements), orbits_of(gens, Z.n))
    orbit_index = [0] * Z.n
    for i, orb in enumerate(group.orbits):
        for v in orb:
            orbit_index[v] = i
    qedges = set()
    for a, b in Z.edges():
        oa, ob = orbit_index[a], orbit_index[b]
        if oa == ob:
            continue
        qedges.add((min(oa, ob), max(oa, ob)))
    quotient = SimpleGraph(len(group.orbits), sorted(qedges))
    iso = tuple(pm[orb[0]] for orb in group.orbits)
    failure = None
    if not free:
        failure = "deck group does not act freely"
    elif len(set(iso)) != X.n or len(iso) != X.n:
        failure = "quotient vertices do not match the target"
    elif any(not X.has_edge(iso[a], iso[b]) for a, b in quotient.edges()) or quotient.edge_count != X.edge_count:
        failure = "quotient edges do not match the target"
    return DeckQuotient(group, tuple(elements), free, quotient, tuple(orbit_index),
                        None if failure else iso, failure)


# ----------------------------------------------------------------------
# Residual finiteness probe
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class RFProbe:
    action: dict[Element, tuple[int, ...]]
    element_action: dict[Element, tuple[int, ...]]
    fixed_point_free: tuple[Element, ...]
    with_fixed_points: tuple[Element, ...]
    skipped: tuple[Element, ...]
    covering: CoveringMap


def residual_finiteness_probe(
    G: Group,
    S: GenSet,
    Y: SimpleGraph,
    n: int,
    F: Sequence[Element],
    k: int = 4,
    r_c: int = 1,
    r2: int | None = None,
    budget: Budget | int | None = 5_000_000,
    max_chunk_radius: int = 40,
) -> RFProbe:
    """Transport right multiplication by ``G`` to ``Y`` through a propagated covering
    of a Cayley ball, and report which non-identity elements of ``F`` act freely."""
    bud = as_budget(budget, "residual finiteness probe")
    e = G.identity()
    skipped = tuple(f for f in F if f == e)
    targets = [f for f in F if f != e]
    lengths = word_lengths(G, S, targets + list(S), bud)
    for f in targets:
        if lengths[f] is None or lengths[f] > 2 * n:
            raise PreconditionError(f"element {G.serialize(f)} is not in the ball of radius {2 * n}")
    t = math.ceil(k / 2)
    r1 = r_c + t
    r2 = r1 if r2 is None else r2
    if r2 < r1:
        raise PreconditionError("r2 must be at least r_c + ceil(k/2)")
    model = cayley_ball(G, S, n, bud)
    report = is_r_locally(Y, [model.ball], n, bud)
    if not report.verdict:
        raise PreconditionError(f"target is not {n}-locally the Cayley graph (vertex {report.failing_vertex})")
    y0 = 0
    flen = max((lengths[f] for f in targets + list(S)), default=1)
    M = max(2 * n, r2 + 1) + flen + 1
    while True:
        if M > max_chunk_radius:
            raise PreconditionError("chunk needed to cover the target exceeds max_chunk_radius")
        chunk = cayley_ball(G, S, M, bud)
        X = chunk.graph
        dist = chunk.ball.ambient_dist
        domain = [v for v in range(X.n) if dist[v] <= M - r2]
        b_seed = ball(X, 0, r2)
        iso = ball_isometric(b_seed, ball(Y, y0, r2), bud)
        if iso is None:
            raise PreconditionError(f"no isometry of radius-{r2} balls for the seed")
        params = PropagationParams(r_c, k, r1, r2)
        result = propagate_covering(X, Y, iso.vertex_map, 0, params, domain, bud)
        if isinstance(result, Obstruction):
            raise PropagationError(f"propagation obstructed along {list(result.loop)}")
        pm = result.vertex_map
        dom = set(domain)
        # y -> first domain preimage for which every probe element stays in the domain
        probes = list(dict.fromkeys(list(S) + targets))
        rep: dict[int, int] = {}
        for v in sorted(dom, key=lambda v: (dist[v], v)):
            y = pm[v]
            if y in rep:
                continue
            gv = chunk.element_of[v]
            if all(chunk.index.get(G.multiply(gv, f)) in dom for f in probes):
                rep[y] = v
        if len(rep) == Y.n:
            break
        M += 2

    def act(f: Element) -> tuple[int, ...]:
        out = []
        for y in range(Y.n):
            v = rep[y]
            out.append(pm[chunk.index[G.multiply(chunk.element_of[v], f)]])
        # the action must not depend on the chosen preimage
        for v in dom:
            w = chunk.index.get(G.multiply(chunk.element_of[v], f))
            if w in dom and pm[w] != out[pm[v]]:
                raise PropagationError("right multiplication does not descend to the target")
        return tuple(out)

    action = {s: act(s) for s in S}
    element_action = {f: act(f) for f in targets}
    free = tuple(f for f in targets if all(element_action[f][y] != y for y in range(Y.n)))
    fixed = tuple(f for f in targets if f not in free)
    return RFProbe(action, element_action, free, fixed, skipped, result)


# ----------------------------------------------------------------------
# Tree decompositions
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class TreeDecomposition:
    tree: SimpleGraph
    pieces: tuple[frozenset[int], ...]
    r1: int

    @classmethod
    def make(cls, tree: SimpleGraph, pieces: Sequence[Iterable[int]], r1: int) -> "TreeDecomposition":
        return cls(tree, tuple(frozenset(p) for p in pieces), r1)


class GluingConflict(LgrigidError):
    def __init__(self, message: str, edge: tuple[int, int] | None = None):
        super().__init__(message)
        self.edge = edge


def validate_tree_decomposition(X: SimpleGraph, D: TreeDecomposition) -> str | None:
    """``None`` if valid, else a description of the first violation."""
    T = D.tree
    if len(D.pieces) != T.n:
        return "one piece per tree vertex is required"
    if T.edge_count != T.n - 1 or not T.is_connected():
        return "decomposition graph is not a tree"
    covered = set().union(*D.pieces) if D.pieces else set()
    if covered != set(range(X.n)):
        return "pieces do not cover the graph"
    for u, piece in enumerate(D.pieces):
        if not piece:
            return f"piece {u} is empty"
        for a in piece:
            dist = X.distances_from(a)
            if any(dist[b] < 0 or dist[b] >= D.r1 for b in piece):
                return f"piece {u} has diameter at least {D.r1}"
    for u in range(T.n):
        for v in range(u + 1, T.n):
            meets = bool(D.pieces[u] & D.pieces[v])
            if meets != T.has_edge(u, v):
                return f"pieces {u} and {v} {'meet' if meets else 'are disjoint'} but tree edge is {'absent' if meets else 'present'}"
    return None


def _neighbourhood(X: SimpleGraph, piece: Iterable[int], r: int) -> set[int]:
    out: set[int] = set()
    for a in piece:
        out.update(ball_vertices(X, a, r))
    return out


def extend_cover_along_tree(
    X: SimpleGraph,
    D: TreeDecomposition,
    Y: SimpleGraph,
    seed: Mapping[int, int],
    x0: int,
    r: int,
    r2: int,
    budget: Budget | int | None = 1_000_000,
) -> CoveringMap:
    """Glue local isometries piece by piece along the tree, starting from the seed."""
    problem = validate_tree_decomposition(X, D)
    if problem is not None:
        raise PreconditionError(f"invalid tree decomposition: {problem}")
    if r < D.r1 or r2 < r:
        raise PreconditionError("need r >= r1 and r2 >= r")
    bud = as_budget(budget, "tree extension")
    R = r + r2
    T = D.tree
    near = set(ball_vertices(X, x0, r))
    start = [u for u in range(T.n) if D.pieces[u] & near]
    if not start:
        raise PreconditionError("no piece meets the seed ball")
    sub = T.induced_subgraph(start)
    if not sub.is_connected():
        raise PreconditionError("pieces meeting the seed ball do not form a subtree")
    local: dict[int, dict[int, int]] = {}
    for u in start:
        nb = _neighbourhood(X, D.pieces[u], r2)
        if any(v not in seed for v in nb):
            raise PreconditionError(f"seed does not cover the {r2}-neighbourhood of piece {u}")
        local[u] = {v: seed[v] for v in nb}
    queue = deque(start)
    while queue:
        u = queue.popleft()
        for v in T.neighbors(u):
            if v in local:
                continue
            x = min(D.pieces[u] & D.pieces[v])
            phi_u = local[u]
            fixed = {a: phi_u[a] for a in ball_vertices(X, x, r)}
            bx, by = ball(X, x, R), ball(Y, phi_u[x], R)
            ext = next(iter_ball_isometries(bx, by, fixed, budget=bud), None)
            if ext is None:
                raise GluingConflict(f"no isometry of B({x}, {R}) extends the map on piece {u}", (u, v))
            f = ext.vertex_map
            if any(f[a] != phi_u[a] for a in D.pieces[u] & D.pieces[v]):
                raise GluingConflict("extension disagrees on the overlap", (u, v))
            local[v] = {a: f[a] for a in _neighbourhood(X, D.pieces[v], r2)}
            queue.append(v)
    pm: list[int | None] = [None] * X.n
    for u, piece in enumerate(D.pieces):
        for a in piece:
            img = local[u][a]
            if pm[a] is not None and pm[a] != img:
                edge = next(((u, w) for w in T.neighbors(u) if a in D.pieces[w]), None)
                raise GluingConflict(f"pieces disagree at vertex {a}", edge)
            pm[a] = img
    return verify_covering(pm, X, Y)
