"""Triangle statistics of generating sets and the constructions that use them to
force discrete isometry groups: Δ-augmentation, the discrete generating-set
builder, and cyclic padding."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .cayley import GenSet, cayley_ball, cayley_graph
from .errors import Budget, LgrigidError, PreconditionError, as_budget
from .graph import SimpleGraph, local_stabilizer_probe, max_clique_size, maximal_cliques
from .groups import INFINITE, DirectProduct, Element, FiniteAbelian, Group


@dataclass(frozen=True)
class TriangleProfile:
    """``s -> N3(s, S)`` for every ``s`` in ``S``; absent elements count 0."""

    counts: dict[Element, int]

    def __getitem__(self, s: Element) -> int:
        return self.counts.get(s, 0)

    def to_json(self, G: Group) -> list:
        return [[G.serialize(s), c] for s, c in self.counts.items()]


def n3(G: Group, S: GenSet, s: Element) -> int:
    """Number of triangles through the edge ``{e, s}`` of the Cayley graph."""
    if s not in S:
        return 0
    si = G.invert(s)
    return sum(1 for t in S if G.multiply(si, t) in S)


def n3_profile(G: Group, S: GenSet) -> TriangleProfile:
    return TriangleProfile({s: n3(G, S, s) for s in S})


# ----------------------------------------------------------------------
# Augmentation
# ----------------------------------------------------------------------

INCREMENT_TABLE: dict[int, frozenset[tuple[int, int]]] = {
    2: frozenset({(2, 0), (4, 0)}),
    3: frozenset({(1, 1), (2, 2), (3, 3)}),
    4: frozenset({(1, 0), (2, 0), (2, 2)}),
    5: frozenset({(1, 0), (2, 0), (2, 1)}),
}


def allowed_increments(order: float | int) -> frozenset[tuple[int, int]]:
    """Admissible ``(dN3(s0), dN3(s0^2))`` pairs for an ``s0`` of the given order."""
    if order in (2, 3, 4):
        return INCREMENT_TABLE[int(order)]
    return INCREMENT_TABLE[5]


@dataclass(frozen=True)
class AugmentationStep:
    s0: Element
    gamma: Element
    n: int
    delta: tuple[Element, ...]


@dataclass(frozen=True)
class AugmentResult:
    S: GenSet
    step: AugmentationStep
    achieved: tuple[int, int]
    rejections: tuple[tuple[int, str], ...] = ()


class AugmentationFailed(LgrigidError):
    def __init__(self, message: str, rejections: Sequence[tuple[int, str]]):
        super().__init__(message)
        self.rejections = tuple(rejections)


def _require_infinite(G: Group, gamma: Element) -> None:
    order = G.order_of(gamma)
    if order != INFINITE:
        what = "unknown" if order is None else f"finite ({order})"
        raise PreconditionError(f"gamma must have infinite order; its order is {what}")


def _short_elements(G: Group, S: GenSet) -> set[Element]:
    """Elements of word length at most 2."""
    out = {G.identity()}
    out.update(S)
    for s in S:
        for t in S:
            out.add(G.multiply(s, t))
    return out


def augment_genset(
    G: Group,
    S: GenSet,
    s0: Element,
    gamma: Element,
    search_bound: int = 10_000,
    start: int = 1,
) -> AugmentResult:
    """Add ``{g^n, g^-n, s0^-1 g^n, g^-n s0}`` (``g = gamma``) for the least admissible ``n``.

    Every candidate ``n`` is checked directly: new elements have word length
    at least 3 and avoid squares of ``S``; each new generator lies in at most
    6 triangles; counts are unchanged away from ``s0^{±1}, s0^{±2}``; and the
    increments at ``(s0, s0^2)`` lie in the table for the order of ``s0``.
    """
    if s0 not in S:
        raise PreconditionError("s0 must belong to S")
    _require_infinite(G, gamma)
    short = _short_elements(G, S)
    squares = {G.multiply(s, s) for s in S}
    before = n3_profile(G, S)
    s0i = G.invert(s0)
    s0sq = G.multiply(s0, s0)
    protected = {s0, s0i, s0sq, G.invert(s0sq)}
    table = allowed_increments(G.order_of(s0))
    rejections: list[tuple[int, str]] = []
    for n in range(start, search_bound + 1):
        gn = G.power(gamma, n)
        gni = G.invert(gn)
        delta = tuple(dict.fromkeys((gn, gni, G.multiply(s0i, gn), G.multiply(gni, s0))))
        if len(set(delta[:3])) < 3:
            rejections.append((n, "elements of Δ coincide"))
            continue
        if any(d in short for d in delta):
            rejections.append((n, "Δ contains an element of word length < 3"))
            continue
        if any(d in squares for d in delta):
            rejections.append((n, "Δ meets the squares of S"))
            continue
        S2 = S.union(delta)
        after = n3_profile(G, S2)
        worst = max(after[d] for d in delta)
        if worst > 6:
            rejections.append((n, f"a new generator lies in {worst} > 6 triangles"))
            continue
        moved = [s for s in S if s not in protected and after[s] != before[s]]
        if moved:
            rejections.append((n, f"triangle count changed at {G.serialize(moved[0])}"))
            continue
        pair = (after[s0] - before[s0], n3(G, S2, s0sq) - n3(G, S, s0sq))
        if pair not in table:
            rejections.append((n, f"increment {pair} not in {sorted(table)}"))
            continue
        return AugmentResult(S2, AugmentationStep(s0, gamma, n, delta), pair, tuple(rejections))
    raise AugmentationFailed(
        f"no admissible exponent up to {search_bound} (bound too small or hypotheses fail)", rejections
    )


# ----------------------------------------------------------------------
# Discrete generating sets
# ----------------------------------------------------------------------

def _square_root_closure(G: Group, S0: GenSet, T: set[Element]) -> set[Element]:
    """Smallest symmetric ``T' ⊇ T`` with ``s^2 in T' => s in T'`` for ``s`` in ``S0``."""
    T = set(T)
    T |= {G.invert(t) for t in T}
    changed = True
    while changed:
        changed = False
        for s in S0:
            if s not in T and G.multiply(s, s) in T:
                T |= {s, G.invert(s)}
                changed = True
    return T


def closure_chain(G: Group, S0: GenSet) -> list[list[tuple[Element, ...]]]:
    """Blocks of a maximal chain ``T_0 ⊂ T_1 ⊂ ... ⊂ T_K = S0`` of closed symmetric subsets.

    Each block is ``T_{i+1} \\ T_i`` as a list of inversion classes.
    """
    done: set[Element] = set()
    blocks: list[list[tuple[Element, ...]]] = []
    classes = S0.inversion_classes
    while len(done) < len(S0):
        best = None
        for cls in classes:
            if cls[0] in done:
                continue
            inc = _square_root_closure(G, S0, done | set(cls)) - done
            if best is None or len(inc) < len(best):
                best = inc
        blocks.append([cls for cls in classes if cls[0] in best])
        done |= best
    return blocks


@dataclass(frozen=True)
class DiscreteGenset:
    S: GenSet
    S0: GenSet
    profile: TriangleProfile
    steps: tuple[AugmentResult, ...]
    chain: tuple[tuple[tuple[Element, ...], ...], ...]

    def separated(self) -> bool:
        """Counts on ``S0`` are at least 7 and identify inversion classes; others are at most 6."""
        G = self.S.group
        for s in self.S0:
            if self.profile[s] < 7:
                return False
            for t in self.S:
                same = t in (s, G.invert(s))
                if (self.profile[s] == self.profile[t]) != same:
                    return False
        return all(self.profile[t] <= 6 for t in self.S if t not in self.S0)


def build_discrete_genset(
    G: Group,
    S0: GenSet,
    gamma: Element,
    search_bound: int = 100_000,
    max_steps: int = 500,
) -> DiscreteGenset:
    """Augment ``S0`` until its triangle counts single out each inversion class."""
    _require_infinite(G, gamma)
    chain = closure_chain(G, S0)
    S = S0
    steps: list[AugmentResult] = []
    finished: list[tuple[Element, ...]] = []
    for block in chain:
        while True:
            prof = n3_profile(G, S)
            floor = max([6] + [prof[c[0]] for c in finished])
            values = [prof[c[0]] for c in block]
            bad = [
                i for i, v in enumerate(values)
                if v <= floor or values.count(v) > 1
            ]
            if not bad:
                break
            if len(steps) >= max_steps:
                raise AugmentationFailed("too many augmentation steps", [])
            i = min(bad, key=lambda j: (values[j], j))
            res = augment_genset(G, S, block[i][0], gamma, search_bound)
            steps.append(res)
            S = res.S
        finished.extend(block)
    out = DiscreteGenset(S, S0, n3_profile(G, S), tuple(steps), tuple(tuple(b) for b in chain))
    if not out.separated():
        raise AugmentationFailed("final triangle counts do not separate the classes of S0", [])
    return out


# ----------------------------------------------------------------------
# Padding by cyclic groups
# ----------------------------------------------------------------------

def primes_above(bound: int, count: int) -> list[int]:
    out = []
    p = bound + 1
    while len(out) < count:
        if p >= 2 and all(p % q for q in range(2, math.isqrt(p) + 1)):
            out.append(p)
        p += 1
    return out


def padding_violation(G: Group, S: GenSet, S0: Iterable[Element] | None = None) -> Element | None:
    """First ``s`` in ``S0`` lacking ``s'`` with ``s s' in S`` and ``s not in {s', s'^-1, s s', (s s')^-1}``."""
    for s in (S if S0 is None else S0):
        ok = False
        for t in S:
            st = G.multiply(s, t)
            if st in S and s not in (t, G.invert(t), st, G.invert(st)):
                ok = True
                break
        if not ok:
            return s
    return None


@dataclass(frozen=True)
class PaddedGenset:
    group: DirectProduct
    F: FiniteAbelian
    primes: tuple[int, ...]
    clique_number: int
    S: GenSet
    classes: tuple[tuple[Element, ...], ...]

    def fiber(self, gamma: Element) -> list[Element]:
        return [(gamma, f) for f in self.F.elements()]


def build_padded_genset(G: Group, S: GenSet, S0: Iterable[Element] | None = None) -> PaddedGenset:
    """Generating set of ``G x F`` (``F`` a product of cyclic groups of prime order)
    whose largest cliques are exactly the fibres ``{g} x F``."""
    if len(S) < 3:
        raise PreconditionError("S must have at least 3 elements")
    bad = padding_violation(G, S, S0)
    if bad is not None:
        raise PreconditionError(f"no suitable partner for {G.serialize(bad)} in S")
    # any clique can be translated to contain the identity, so radius 1 suffices
    ball = cayley_ball(G, S, 1)
    R = max_clique_size(ball.graph)
    classes = S.inversion_classes
    primes = primes_above(R, len(classes))
    F = FiniteAbelian(primes)
    GF = DirectProduct(G, F)
    out: list[Element] = []
    for i, (cls, p) in enumerate(zip(classes, primes)):
        for s in cls:
            for x in range(p):
                f = [0] * len(primes)
                f[i] = x
                out.append((s, tuple(f)))
    zero = F.identity()
    out += [(G.identity(), f) for f in F.elements() if f != zero]
    return PaddedGenset(GF, F, tuple(primes), R, GenSet(GF, out), classes)


@dataclass(frozen=True)
class FiberCliqueCertificate:
    clique_number: int
    fibers_only: bool
    cliques_at_max: int
    fiber_edge_counts: dict[int, int] = field(default_factory=dict)


def fiber_clique_certificate(padded: PaddedGenset, budget: Budget | int | None = 5_000_000) -> FiberCliqueCertificate:
    """Enumerate maximal cliques of the padded Cayley graph (finite base only)."""
    GF = padded.group
    g = cayley_graph(GF, padded.S)
    elems = GF.elements()
    cliques = list(maximal_cliques(g, budget))
    top = max(len(c) for c in cliques)
    at_top = [c for c in cliques if len(c) == top]
    fibers_only = all(len({elems[v][0] for v in c}) == 1 for c in at_top)
    index = {x: i for i, x in enumerate(elems)}
    e = GF.left.identity()
    counts = {}
    for i, cls in enumerate(padded.classes):
        src = [index[(e, f)] for f in padded.F.elements()]
        dst = {index[(cls[0], f)] for f in padded.F.elements()}
        counts[i] = sum(1 for a in src for b in g.neighbors(a) if b in dst)
    return FiberCliqueCertificate(top, fibers_only and top == padded.F.order(), len(at_top), counts)


# ----------------------------------------------------------------------
# Discreteness probe
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class DiscretenessCertificate:
    r_c: int | None
    stabilizer_orders: tuple[int, ...]

    @property
    def discrete(self) -> bool:
        return self.r_c is not None


def discreteness_certificate(
    g: SimpleGraph,
    probe_radius: int,
    vertices: Iterable[int] | None = None,
    budget: Budget | int | None = 1_000_000,
) -> DiscretenessCertificate:
    """Least ``r <= probe_radius`` with trivial pointwise stabilizers of all ``B(v, r)``.

    ``stabilizer_orders[r]`` is the largest stabilizer order seen at radius ``r``.
    """
    verts = list(range(g.n) if vertices is None else vertices)
    bud = as_budget(budget, "discreteness probe")
    worst: list[int] = []
    for r in range(probe_radius + 1):
        top = max(local_stabilizer_probe(g, v, r, bud) for v in verts)
        worst.append(top)
        if top == 1:
            return DiscretenessCertificate(r, tuple(worst))
    return DiscretenessCertificate(None, tuple(worst))
