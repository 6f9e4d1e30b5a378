"""Z/2-valued 2-cocycles on finite groups, coboundary tests, central extensions and
the double covers of Cayley graphs they induce."""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product
from typing import Any, Iterable, Mapping

from . import gf2
from .cayley import GenSet, cayley_graph, word_lengths
from .errors import PreconditionError
from .graph import SimpleGraph, ball_vertices
from .groups import CentralExtension, Cyclic, Element, Group, group_from_json
from .rigidity import CoveringMap, verify_covering


class Cocycle2:
    """Dense ``G x G -> Z/2`` table over a finite group, stored as its support."""

    def __init__(self, group: Group, support: Iterable[tuple[Element, Element]] | Mapping = ()):
        if not group.is_finite():
            raise PreconditionError("cocycle tables need a finite group")
        self.group = group
        if isinstance(support, Mapping):
            support = [k for k, v in support.items() if int(v) & 1]
        self.support = frozenset(support)

    def __call__(self, g: Element, h: Element) -> int:
        return 1 if (g, h) in self.support else 0

    def __eq__(self, other) -> bool:
        return isinstance(other, Cocycle2) and self.group == other.group and self.support == other.support

    def __hash__(self) -> int:
        return hash(self.support)

    def __add__(self, other: "Cocycle2") -> "Cocycle2":
        return Cocycle2(self.group, self.support ^ other.support)

    @classmethod
    def from_function(cls, group: Group, f) -> "Cocycle2":
        els = group.elements()
        return cls(group, [(g, h) for g in els for h in els if f(g, h) & 1])

    @classmethod
    def coboundary(cls, group: Group, psi: Mapping[Element, int]) -> "Cocycle2":
        """``(g, h) -> psi(g) + psi(h) + psi(gh)``."""
        p = lambda x: psi.get(x, 0) & 1
        return cls.from_function(group, lambda g, h: p(g) ^ p(h) ^ p(group.multiply(g, h)))

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> "Cocycle2":
        G = group_from_json(obj["group"])
        entries = []
        for g, h, bit in obj.get("entries", []):
            if int(bit) & 1:
                entries.append((G.parse(g), G.parse(h)))
        return cls(G, entries)

    def to_json(self) -> dict[str, Any]:
        G = self.group
        order = {g: i for i, g in enumerate(G.elements())}
        entries = sorted(self.support, key=lambda p: (order[p[0]], order[p[1]]))
        return {"group": G.to_json(), "entries": [[G.serialize(g), G.serialize(h), 1] for g, h in entries]}

    @property
    def normalized(self) -> bool:
        e = self.group.identity()
        return all(self(e, g) == 0 and self(g, e) == 0 for g in self.group.elements())

    def normalize(self) -> "Cocycle2":
        """Shift by a constant coboundary so that ``phi(e, .) = phi(., e) = 0``.

        For a cocycle both rows equal ``phi(e, e)``, and the constant map 1 has
        coboundary identically 1.
        """
        e = self.group.identity()
        if self(e, e) == 0:
            return self
        els = self.group.elements()
        return Cocycle2(self.group, {(g, h) for g in els for h in els} - self.support)

    def extension(self) -> CentralExtension:
        desc = {"kind": "central_ext", "base": self.group.to_json(), "cocycle": self.to_json()["entries"]}
        return CentralExtension(self.group, self, desc)


def carry_cocycle(n: int) -> Cocycle2:
    """Carry of addition modulo ``n``: ``phi(a, b) = 1`` iff ``a + b >= n``."""
    return Cocycle2.from_function(Cyclic(n), lambda a, b: int(a + b >= n))


def validate_cocycle(phi: Cocycle2) -> tuple[Element, Element, Element] | None:
    """First triple violating the cocycle identity, or ``None``."""
    G = phi.group
    els = G.elements()
    mul = G.multiply
    for a, b, c in product(els, repeat=3):
        if phi(a, mul(b, c)) ^ phi(b, c) != phi(mul(a, b), c) ^ phi(a, b):
            return (a, b, c)
    return None


@dataclass(frozen=True)
class CoboundaryResult:
    """``psi`` with ``d psi = phi`` or, failing that, pairs whose values sum to 1
    while every coboundary sums to 0 over them."""

    is_coboundary: bool
    psi: dict[Element, int] | None
    certificate: tuple[tuple[Element, Element], ...] | None


def _coboundary_rows(G: Group) -> tuple[list[Element], dict[Element, int], list[tuple[Element, Element]], list[int]]:
    els = G.elements()
    idx = {g: i for i, g in enumerate(els)}
    pairs = [(g, h) for g in els for h in els]
    rows = []
    for g, h in pairs:
        rows.append((1 << idx[g]) ^ (1 << idx[h]) ^ (1 << idx[G.multiply(g, h)]))
    return els, idx, pairs, rows


def is_coboundary(phi: Cocycle2) -> CoboundaryResult:
    G = phi.group
    els, idx, pairs, rows = _coboundary_rows(G)
    # any solution has psi(e) = phi(e, e), so normalized cocycles get psi(e) = 0
    res = gf2.solve(rows, [phi(g, h) for g, h in pairs], len(els))
    if res.solvable:
        return CoboundaryResult(True, {g: res.solution >> i & 1 for i, g in enumerate(els)}, None)
    return CoboundaryResult(False, None, tuple(pairs[i] for i in res.certificate))


def certificate_holds(phi: Cocycle2, cert: Iterable[tuple[Element, Element]]) -> bool:
    """Check that the functional summing over ``cert`` kills every coboundary and not ``phi``."""
    G = phi.group
    els, idx, _, _ = _coboundary_rows(G)
    acc = 0
    val = 0
    for g, h in cert:
        acc ^= (1 << idx[g]) ^ (1 << idx[h]) ^ (1 << idx[G.multiply(g, h)])
        val ^= phi(g, h)
    return acc == 0 and val == 1


def central_extension(phi: Cocycle2) -> CentralExtension:
    return phi.normalize().extension()


def section_lift(E: CentralExtension, S: GenSet) -> GenSet:
    """``{(0, s) : s in S}``, checked to be closed under inversion in ``E``."""
    lifted = [(0, s) for s in S]
    T = GenSet(E, lifted, require_symmetric=False)
    if not T.symmetric:
        bad = next(s for s in S if E.invert((0, s)) not in T)
        raise PreconditionError(
            f"lifted generating set is not symmetric: phi(s, s^-1) = 1 for s = {E.base.serialize(bad)}"
        )
    return T


@dataclass(frozen=True)
class TwoCovering:
    extension: CentralExtension
    lifted: GenSet
    covering: CoveringMap
    elements: tuple[Element, ...]
    connected: bool

    @property
    def total(self) -> SimpleGraph:
        return self.covering.source

    @property
    def base(self) -> SimpleGraph:
        return self.covering.target


def adapt_to_generators(phi: Cocycle2, S: GenSet) -> Cocycle2:
    """Cohomologous normalized cocycle with ``phi(s, s^-1) = 0`` for every non-involution ``s``.

    Uses ``psi(s) = phi(s, s^-1)`` on one element of each class ``{s, s^-1}``.
    Involutions are left alone; ``section_lift`` reports them if ``phi(s, s) = 1``.
    """
    phi = phi.normalize()
    G = phi.group
    psi = {}
    for cls in S.inversion_classes:
        if len(cls) == 2 and phi(cls[0], cls[1]):
            psi[cls[0]] = 1
    return phi + Cocycle2.coboundary(G, psi) if psi else phi


def two_covering_from_cocycle(G: Group, S: GenSet, phi: Cocycle2, adapt: bool = True) -> TwoCovering:
    """Cayley graph of the extension with lifted generators, projected onto ``(G, S)``.

    With ``adapt`` the cocycle is first replaced by :func:`adapt_to_generators`,
    which leaves the extension unchanged up to isomorphism.
    """
    bad = validate_cocycle(phi)
    if bad is not None:
        raise PreconditionError(f"cocycle identity fails at {[G.serialize(x) for x in bad]}")
    E = central_extension(adapt_to_generators(phi, S) if adapt else phi)
    T = section_lift(E, S)
    Z = cayley_graph(E, T)
    X = cayley_graph(G, S)
    base_idx = {g: i for i, g in enumerate(G.elements())}
    els = tuple(E.elements())
    cov = verify_covering([base_idx[x[1]] for x in els], Z, X)
    return TwoCovering(E, T, cov, els, Z.is_connected())


# ----------------------------------------------------------------------
# Cocycles vanishing on short pairs
# ----------------------------------------------------------------------

def _cocycle_equations(G: Group) -> tuple[list[tuple[Element, Element]], dict, list[int]]:
    els = G.elements()
    pairs = [(g, h) for g in els for h in els]
    pidx = {p: i for i, p in enumerate(pairs)}
    mul = G.multiply
    rows = set()
    for a, b, c in product(els, repeat=3):
        r = (1 << pidx[(a, mul(b, c))]) ^ (1 << pidx[(b, c)]) ^ (1 << pidx[(mul(a, b), c)]) ^ (1 << pidx[(a, b)])
        if r:
            rows.add(r)
    return pairs, pidx, sorted(rows)


def short_pairs(G: Group, S: GenSet, n: int) -> list[tuple[Element, Element]]:
    """Pairs with ``|g|_S + |h|_S <= n``."""
    lengths = word_lengths(G, S, G.elements())
    els = G.elements()
    return [(g, h) for g in els for h in els
            if lengths[g] is not None and lengths[h] is not None and lengths[g] + lengths[h] <= n]


def short_vanishing_cocycle_search(G: Group, S: GenSet, n: int) -> Cocycle2 | None:
    """A non-coboundary cocycle vanishing on all pairs with ``|g| + |h| <= n``, or ``None``
    when every such cocycle is a coboundary."""
    pairs, pidx, rows = _cocycle_equations(G)
    for p in short_pairs(G, S, n):
        rows.append(1 << pidx[p])
    space = gf2.nullspace(rows, len(pairs))
    _, _, _, cob_rows = _coboundary_rows(G)
    # columns of the coboundary map, packed over pair coordinates
    els = G.elements()
    bound = gf2.Echelon()
    for i in range(len(els)):
        col = 0
        for j, r in enumerate(cob_rows):
            if r >> i & 1:
                col |= 1 << j
        bound.add(col)
    for v in space:
        if not bound.contains(v):
            return Cocycle2(G, [pairs[j] for j in gf2.bits(v)])
    return None


def disconnection_radius(cover: TwoCovering, max_radius: int | None = None) -> int:
    """Largest ``m`` such that the preimage of every ``B(x, r)``, ``r <= m``, is disconnected.

    Returns ``-1`` if even single-vertex preimages were connected (impossible for a covering).
    """
    X, Z = cover.base, cover.total
    pm = cover.covering.vertex_map
    fibers: list[list[int]] = [[] for _ in range(X.n)]
    for z, x in enumerate(pm):
        fibers[x].append(z)
    limit = X.diameter() if max_radius is None else max_radius
    best = -1
    for m in range(limit + 1):
        for x in range(X.n):
            pre = [z for y in ball_vertices(X, x, m) for z in fibers[y]]
            if Z.induced_subgraph(pre).is_connected():
                return best
        best = m
    return best


def random_coboundary(G: Group, rng: random.Random) -> tuple[dict[Element, int], Cocycle2]:
    e = G.identity()
    psi = {g: (0 if g == e else rng.getrandbits(1)) for g in G.elements()}
    return psi, Cocycle2.coboundary(G, psi)
