"""Group oracles: identity, multiplication, inversion and canonical element forms.

Elements are plain hashable Python values in a canonical normal form, so
``==`` is the group equality and elements can key dictionaries directly.
"""

from __future__ import annotations

import math
from collections import deque
from itertools import product as iproduct
from typing import Any, Callable, Hashable, Iterable, Iterator, Sequence

from .errors import BudgetExceeded, PreconditionError, TruncationError

Element = Hashable
INFINITE = math.inf


class Group:
    """Abstract group oracle."""

    kind = "abstract"

    def identity(self) -> Element:
        raise NotImplementedError

    def multiply(self, a: Element, b: Element) -> Element:
        raise NotImplementedError

    def invert(self, a: Element) -> Element:
        raise NotImplementedError

    # finite groups override these two
    def is_finite(self) -> bool:
        return False

    def elements(self) -> list[Element]:
        raise PreconditionError(f"{self.kind} group is not finite")

    def order(self) -> int:
        return len(self.elements())

    def serialize(self, a: Element) -> Any:
        return a

    def parse(self, obj: Any) -> Element:
        return obj

    def to_json(self) -> dict[str, Any]:
        raise NotImplementedError

    # -- derived operations ------------------------------------------------
    def power(self, a: Element, n: int) -> Element:
        if n < 0:
            a, n = self.invert(a), -n
        result, base = self.identity(), a
        while n:
            if n & 1:
                result = self.multiply(result, base)
            base = self.multiply(base, base)
            n >>= 1
        return result

    def product_of(self, items: Iterable[Element]) -> Element:
        out = self.identity()
        for x in items:
            out = self.multiply(out, x)
        return out

    def order_of(self, a: Element, limit: int = 10_000) -> float | int | None:
        """Element order: an int, ``math.inf`` (known infinite) or ``None`` (unknown)."""
        e = self.identity()
        x = a
        for k in range(1, limit + 1):
            if x == e:
                return k
            x = self.multiply(x, a)
        return None

    def commutator(self, a: Element, b: Element) -> Element:
        return self.product_of((a, b, self.invert(a), self.invert(b)))

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.to_json()}>"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Group) and type(self) is type(other) and self.to_json() == other.to_json()

    def __hash__(self) -> int:
        return hash(repr(self.to_json()))


class Cyclic(Group):
    """``Z/n`` with elements ``0..n-1``."""

    kind = "cyclic"

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("cyclic group order must be positive")
        self.n = n

    def identity(self) -> int:
        return 0

    def multiply(self, a: int, b: int) -> int:
        return (a + b) % self.n

    def invert(self, a: int) -> int:
        return (-a) % self.n

    def is_finite(self) -> bool:
        return True

    def elements(self) -> list[int]:
        return list(range(self.n))

    def order(self) -> int:
        return self.n

    def order_of(self, a: int, limit: int = 10_000) -> int:
        return self.n // math.gcd(a % self.n, self.n)

    def parse(self, obj: Any) -> int:
        return int(obj) % self.n

    def to_json(self) -> dict[str, Any]:
        return {"kind": "cyclic", "n": self.n}


class FiniteAbelian(Group):
    """``Z/m_1 x ... x Z/m_k`` with tuple elements."""

    kind = "abelian"

    def __init__(self, moduli: Sequence[int]):
        self.moduli = tuple(int(m) for m in moduli)

    def identity(self) -> tuple[int, ...]:
        return (0,) * len(self.moduli)

    def multiply(self, a, b):
        return tuple((x + y) % m for x, y, m in zip(a, b, self.moduli))

    def invert(self, a):
        return tuple((-x) % m for x, m in zip(a, self.moduli))

    def is_finite(self) -> bool:
        return True

    def elements(self):
        return list(iproduct(*(range(m) for m in self.moduli)))

    def order(self) -> int:
        return math.prod(self.moduli)

    def order_of(self, a, limit: int = 10_000) -> int:
        return math.lcm(*(m // math.gcd(x, m) for x, m in zip(a, self.moduli)), 1)

    def serialize(self, a):
        return list(a)

    def parse(self, obj):
        return tuple(int(x) % m for x, m in zip(obj, self.moduli))

    def to_json(self):
        return {"kind": "abelian", "moduli": list(self.moduli)}


class FreeAbelian(Group):
    """``Z^d`` with integer tuple elements (``d = 1`` uses tuples of length one)."""

    kind = "zd"

    def __init__(self, d: int):
        self.d = d

    def identity(self):
        return (0,) * self.d

    def multiply(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def invert(self, a):
        return tuple(-x for x in a)

    def power(self, a, n: int):
        return tuple(n * x for x in a)

    def order_of(self, a, limit: int = 10_000):
        return 1 if not any(a) else INFINITE

    def serialize(self, a):
        return list(a)

    def parse(self, obj):
        if isinstance(obj, int):
            obj = [obj]
        if len(obj) != self.d:
            raise ValueError(f"expected {self.d} coordinates, got {obj!r}")
        return tuple(int(x) for x in obj)

    def to_json(self):
        return {"kind": "zd", "d": self.d}


class PermutationGroup(Group):
    """Subgroup of ``Sym(degree)`` generated by ``gens``; elements are one-line tuples.

    Composition convention: ``multiply(a, b)`` applies ``b`` first, then ``a``.
    """

    kind = "perm"

    def __init__(self, degree: int, gens: Sequence[Sequence[int]]):
        self.degree = degree
        self.gens = tuple(tuple(int(x) for x in g) for g in gens)
        for g in self.gens:
            if sorted(g) != list(range(degree)):
                raise ValueError(f"{g!r} is not a permutation of degree {degree}")
        self._elements: list[tuple[int, ...]] | None = None

    def identity(self):
        return tuple(range(self.degree))

    def multiply(self, a, b):
        return tuple(a[i] for i in b)

    def invert(self, a):
        inv = [0] * len(a)
        for i, j in enumerate(a):
            inv[j] = i
        return tuple(inv)

    def is_finite(self) -> bool:
        return True

    def elements(self):
        if self._elements is None:
            e = self.identity()
            seen = {e}
            out = [e]
            queue = deque([e])
            while queue:
                x = queue.popleft()
                for g in self.gens:
                    y = self.multiply(x, g)
                    if y not in seen:
                        seen.add(y)
                        out.append(y)
                        queue.append(y)
            self._elements = out
        return list(self._elements)

    def order_of(self, a, limit: int = 10_000):
        seen = [False] * len(a)
        lengths = []
        for i in range(len(a)):
            k = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = a[j]
                k += 1
            if k:
                lengths.append(k)
        return math.lcm(*lengths, 1)

    def serialize(self, a):
        return list(a)

    def parse(self, obj):
        return tuple(int(x) for x in obj)

    def to_json(self):
        return {"kind": "perm", "degree": self.degree, "gens": [list(g) for g in self.gens]}


class FreeGroup(Group):
    """Free group of rank ``rank`` on reduced words.

    A word is a tuple of nonzero ints; ``i`` stands for generator ``i-1`` and
    ``-i`` for its inverse.  Results longer than ``trunc`` raise
    :class:`TruncationError`.
    """

    kind = "free"

    def __init__(self, rank: int, trunc: int):
        self.rank = rank
        self.trunc = trunc

    def identity(self):
        return ()

    def _check(self, w):
        if len(w) > self.trunc:
            raise TruncationError(f"word of length {len(w)} exceeds truncation {self.trunc}")
        return w

    def multiply(self, a, b):
        k = 0
        while k < len(a) and k < len(b) and a[-1 - k] == -b[k]:
            k += 1
        return self._check(a[: len(a) - k] + b[k:])

    def invert(self, a):
        return tuple(-x for x in reversed(a))

    def generator(self, i: int):
        return (i + 1,)

    def order_of(self, a, limit: int = 10_000):
        return 1 if not a else INFINITE

    def serialize(self, a):
        letters = "abcdefghijklmnopqrstuvwxyz"
        return "".join(letters[x - 1] if x > 0 else letters[-x - 1].upper() for x in a)

    def parse(self, obj):
        """Letters ``a``/``A`` or signed ints; the word is freely reduced."""
        w = []
        if isinstance(obj, str):
            for ch in obj:
                i = ord(ch.lower()) - ord("a") + 1
                w.append(i if ch.islower() else -i)
        else:
            w = [int(x) for x in obj]
        out: tuple[int, ...] = ()
        for x in w:
            if not 1 <= abs(x) <= self.rank:
                raise ValueError(f"letter {x!r} outside rank {self.rank}")
            out = self.multiply(out, (x,))
        return out

    def to_json(self):
        return {"kind": "free", "rank": self.rank, "trunc": self.trunc}


class DirectProduct(Group):
    """``left x right`` with pair elements."""

    kind = "product"

    def __init__(self, left: Group, right: Group):
        self.left, self.right = left, right

    def identity(self):
        return (self.left.identity(), self.right.identity())

    def multiply(self, a, b):
        return (self.left.multiply(a[0], b[0]), self.right.multiply(a[1], b[1]))

    def invert(self, a):
        return (self.left.invert(a[0]), self.right.invert(a[1]))

    def is_finite(self) -> bool:
        return self.left.is_finite() and self.right.is_finite()

    def elements(self):
        return [(x, y) for x in self.left.elements() for y in self.right.elements()]

    def order_of(self, a, limit: int = 10_000):
        o1 = self.left.order_of(a[0], limit)
        o2 = self.right.order_of(a[1], limit)
        if INFINITE in (o1, o2):
            return INFINITE
        if o1 is None or o2 is None:
            return None
        return math.lcm(o1, o2)

    def serialize(self, a):
        return [self.left.serialize(a[0]), self.right.serialize(a[1])]

    def parse(self, obj):
        return (self.left.parse(obj[0]), self.right.parse(obj[1]))

    def to_json(self):
        return {"kind": "product", "left": self.left.to_json(), "right": self.right.to_json()}


class SemidirectProduct(Group):
    """``normal ⋊ acting`` with ``(n1, q1)(n2, q2) = (n1 · action(q1)(n2), q1 q2)``.

    ``action(q)`` must return an automorphism of ``normal`` as a callable.
    ``desc`` is an optional JSON description used for serialization.
    """

    kind = "semidirect"

    def __init__(self, normal: Group, acting: Group, action: Callable[[Element], Callable[[Element], Element]],
                 desc: dict[str, Any] | None = None):
        self.normal, self.acting, self.action = normal, acting, action
        self._desc = desc

    def identity(self):
        return (self.normal.identity(), self.acting.identity())

    def multiply(self, a, b):
        return (self.normal.multiply(a[0], self.action(a[1])(b[0])), self.acting.multiply(a[1], b[1]))

    def invert(self, a):
        qi = self.acting.invert(a[1])
        return (self.action(qi)(self.normal.invert(a[0])), qi)

    def is_finite(self) -> bool:
        return self.normal.is_finite() and self.acting.is_finite()

    def elements(self):
        return [(x, y) for x in self.normal.elements() for y in self.acting.elements()]

    def serialize(self, a):
        return [self.normal.serialize(a[0]), self.acting.serialize(a[1])]

    def parse(self, obj):
        return (self.normal.parse(obj[0]), self.acting.parse(obj[1]))

    def to_json(self):
        if self._desc is None:
            raise PreconditionError("this semidirect product has no JSON description")
        return dict(self._desc)


def cyclic_semidirect(n: int, m: int, multiplier: int) -> SemidirectProduct:
    """``Z/n ⋊ Z/m`` where the generator of ``Z/m`` multiplies by ``multiplier``."""
    if pow(multiplier, m, n) != 1 % n or math.gcd(multiplier, n) != 1:
        raise PreconditionError("multiplier must be a unit whose m-th power is 1 mod n")
    N, Q = Cyclic(n), Cyclic(m)

    def action(q):
        k = pow(multiplier, q, n)
        return lambda x: (k * x) % n

    desc = {"kind": "semidirect", "n": n, "m": m, "multiplier": multiplier}
    return SemidirectProduct(N, Q, action, desc)


def _hermite_rows(basis: Sequence[Sequence[int]]) -> list[list[int]]:
    """Upper-triangular row Hermite form of a full-rank square integer basis."""
    rows = [list(map(int, r)) for r in basis]
    d = len(rows)
    if any(len(r) != d for r in rows):
        raise PreconditionError("lattice basis must be square")
    for col in range(d):
        # Euclid on column entries of rows col..d-1
        while True:
            nz = [i for i in range(col, d) if rows[i][col] != 0]
            if not nz:
                raise PreconditionError("lattice basis is not of full rank")
            piv = min(nz, key=lambda i: abs(rows[i][col]))
            rows[col], rows[piv] = rows[piv], rows[col]
            done = True
            for i in range(col + 1, d):
                if rows[i][col]:
                    q = rows[i][col] // rows[col][col]
                    rows[i] = [a - q * b for a, b in zip(rows[i], rows[col])]
                    if rows[i][col]:
                        done = False
            if done:
                break
        if rows[col][col] < 0:
            rows[col] = [-a for a in rows[col]]
        for i in range(col):
            q = rows[i][col] // rows[col][col]
            rows[i] = [a - q * b for a, b in zip(rows[i], rows[col])]
    return rows


class LatticeQuotient(Group):
    """``Z^d / L`` for a full-rank lattice ``L``; elements are reduced coordinate tuples."""

    kind = "lattice_quotient"

    def __init__(self, basis: Sequence[Sequence[int]]):
        self.basis = [list(map(int, r)) for r in basis]
        self.d = len(self.basis)
        self._hnf = _hermite_rows(self.basis)

    def reduce(self, v: Sequence[int]) -> tuple[int, ...]:
        v = list(v)
        for i, row in enumerate(self._hnf):
            q = v[i] // row[i]
            if q:
                v = [a - q * b for a, b in zip(v, row)]
        return tuple(v)

    def identity(self):
        return (0,) * self.d

    def multiply(self, a, b):
        return self.reduce([x + y for x, y in zip(a, b)])

    def invert(self, a):
        return self.reduce([-x for x in a])

    def is_finite(self) -> bool:
        return True

    def elements(self):
        ranges = [range(row[i]) for i, row in enumerate(self._hnf)]
        return [tuple(p) for p in iproduct(*ranges)]

    def order(self) -> int:
        return math.prod(row[i] for i, row in enumerate(self._hnf))

    def serialize(self, a):
        return list(a)

    def parse(self, obj):
        if isinstance(obj, int):
            obj = [obj]
        return self.reduce(obj)

    def to_json(self):
        return {"kind": "lattice_quotient", "d": self.d, "basis": self.basis}


class CentralExtension(Group):
    """Central extension of a finite group by ``Z/2`` defined by a 2-cocycle table.

    Elements are pairs ``(a, g)``; ``(a, g)(b, h) = (a + b + c(g, h), g h)``.
    ``cocycle`` is a callable ``(g, h) -> 0/1`` satisfying the cocycle identity.
    """

    kind = "central_ext"

    def __init__(self, base: Group, cocycle: Callable[[Element, Element], int],
                 desc: dict[str, Any] | None = None):
        self.base = base
        self.cocycle = cocycle
        self._desc = desc
        e = base.identity()
        self._id = (cocycle(e, e) & 1, e)

    def identity(self):
        return self._id

    def multiply(self, x, y):
        return ((x[0] + y[0] + self.cocycle(x[1], y[1])) & 1, self.base.multiply(x[1], y[1]))

    def invert(self, x):
        gi = self.base.invert(x[1])
        # solve (a, g)(b, g^-1) = identity for b
        b = (self._id[0] + x[0] + self.cocycle(x[1], gi)) & 1
        return (b, gi)

    def is_finite(self) -> bool:
        return self.base.is_finite()

    def elements(self):
        return [(a, g) for g in self.base.elements() for a in (0, 1)]

    def serialize(self, x):
        return [x[0], self.base.serialize(x[1])]

    def parse(self, obj):
        return (int(obj[0]) & 1, self.base.parse(obj[1]))

    def to_json(self):
        if self._desc is None:
            raise PreconditionError("this extension has no JSON description")
        return dict(self._desc)


# ----------------------------------------------------------------------
# JSON descriptions
# ----------------------------------------------------------------------

def group_from_json(obj: dict[str, Any]) -> Group:
    kind = obj.get("kind")
    if kind == "cyclic":
        return Cyclic(int(obj["n"]))
    if kind == "zd":
        return FreeAbelian(int(obj["d"]))
    if kind == "abelian":
        return FiniteAbelian(obj["moduli"])
    if kind == "perm":
        return PermutationGroup(int(obj["degree"]), obj["gens"])
    if kind == "free":
        return FreeGroup(int(obj["rank"]), int(obj["trunc"]))
    if kind == "product":
        return DirectProduct(group_from_json(obj["left"]), group_from_json(obj["right"]))
    if kind == "semidirect":
        return cyclic_semidirect(int(obj["n"]), int(obj["m"]), int(obj["multiplier"]))
    if kind == "lattice_quotient":
        basis = obj["basis"]
        if "d" in obj and len(basis) != int(obj["d"]):
            raise ValueError("basis size does not match d")
        return LatticeQuotient(basis)
    if kind == "central_ext":
        from .cocycles import Cocycle2

        cocycle = Cocycle2.from_json({"group": obj["base"], "entries": obj["cocycle"]})
        return cocycle.extension()
    raise ValueError(f"unknown group kind {kind!r}")


# ----------------------------------------------------------------------
# Generic finite-group utilities
# ----------------------------------------------------------------------

def generated_subgroup(G: Group, gens: Iterable[Element], limit: int = 1_000_000) -> list[Element]:
    """Elements of the subgroup generated by ``gens`` (BFS; finite subgroups only)."""
    gens = list(gens)
    gens += [G.invert(g) for g in gens]
    e = G.identity()
    seen = {e}
    out = [e]
    queue = deque([e])
    while queue:
        x = queue.popleft()
        for s in gens:
            y = G.multiply(x, s)
            if y not in seen:
                if len(seen) >= limit:
                    raise BudgetExceeded("subgroup enumeration exceeded limit", {"size": len(seen)})
                seen.add(y)
                out.append(y)
                queue.append(y)
    return out


def _small_generating_set(G: Group) -> list[Element]:
    elems = G.elements()
    gens: list[Element] = []
    span = {G.identity()}
    for x in sorted(elems, key=lambda x: -_finite_order(G, x)):
        if x not in span:
            gens.append(x)
            span = set(generated_subgroup(G, gens))
            if len(span) == len(elems):
                break
    return gens


def _finite_order(G: Group, x: Element) -> int:
    o = G.order_of(x)
    if not isinstance(o, int):
        raise PreconditionError("finite group element with non-finite order")
    return o


def find_group_isomorphism(G: Group, H: Group) -> dict[Element, Element] | None:
    """An isomorphism between two small finite groups, or ``None``.

    Backtracks over images of a small generating set of ``G`` (matching element
    orders) and checks the induced map on the multiplication table.
    """
    if G.order() != H.order():
        return None
    gens = _small_generating_set(G)
    g_orders = [_finite_order(G, g) for g in gens]
    h_by_order: dict[int, list[Element]] = {}
    for h in H.elements():
        h_by_order.setdefault(_finite_order(H, h), []).append(h)
    if sorted(_finite_order(G, g) for g in G.elements()) != sorted(
        _finite_order(H, h) for h in H.elements()
    ):
        return None

    def extend(images: list[Element]) -> dict[Element, Element] | None:
        # BFS over words in the generators; fail on inconsistency
        phi = {G.identity(): H.identity()}
        queue = deque([G.identity()])
        while queue:
            x = queue.popleft()
            for g, h in zip(gens, images):
                y = G.multiply(x, g)
                img = H.multiply(phi[x], h)
                if y in phi:
                    if phi[y] != img:
                        return None
                else:
                    phi[y] = img
                    queue.append(y)
        if len(set(phi.values())) != len(phi):
            return None
        for a in G.elements():
            for b in G.elements():
                if phi[G.multiply(a, b)] != H.multiply(phi[a], phi[b]):
                    return None
        return phi

    def rec(i: int, images: list[Element]) -> dict[Element, Element] | None:
        if i == len(gens):
            return extend(images)
        for h in h_by_order.get(g_orders[i], []):
            found = rec(i + 1, images + [h])
            if found is not None:
                return found
        return None

    return rec(0, [])
