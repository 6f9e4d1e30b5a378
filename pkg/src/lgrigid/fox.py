"""Fox-calculus chain complexes of presentations specialized along a homomorphism to Z,
exact ranks over GF(2)(t), and the resulting lower bound on H2 of the kernel."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Sequence

from .errors import PreconditionError

# ----------------------------------------------------------------------
# Polynomials over GF(2) packed into ints
# ----------------------------------------------------------------------


def clmul(a: int, b: int) -> int:
    if a.bit_length() < b.bit_length():
        a, b = b, a
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def pdivmod(a: int, b: int) -> tuple[int, int]:
    if b == 0:
        raise ZeroDivisionError("polynomial division by zero")
    q = 0
    db = b.bit_length()
    while a and a.bit_length() >= db:
        s = a.bit_length() - db
        q |= 1 << s
        a ^= b << s
    return q, a


def pgcd(a: int, b: int) -> int:
    while b:
        a, b = b, pdivmod(a, b)[1]
    return a


def _split(bits: int) -> tuple[int, int]:
    """``bits = t^s P`` with ``P(0) = 1``; returns ``(s, P)``."""
    if bits == 0:
        return 0, 0
    s = (bits & -bits).bit_length() - 1
    return s, bits >> s


class Laurent:
    """Laurent polynomial over GF(2): ``t^low * bits(t)`` with the lowest bit of ``bits`` set."""

    __slots__ = ("low", "bits")

    def __init__(self, bits: int = 0, low: int = 0):
        s, p = _split(bits)
        self.bits = p
        self.low = low + s if p else 0

    @classmethod
    def monomial(cls, k: int) -> "Laurent":
        return cls(1, k)

    @classmethod
    def from_exponents(cls, exps: Iterable[int]) -> "Laurent":
        out = cls()
        for k in exps:
            out = out + cls.monomial(k)
        return out

    def exponents(self) -> list[int]:
        out = []
        b, k = self.bits, self.low
        while b:
            if b & 1:
                out.append(k)
            b >>= 1
            k += 1
        return out

    def __bool__(self) -> bool:
        return self.bits != 0

    def __eq__(self, other) -> bool:
        return isinstance(other, Laurent) and (self.bits, self.low) == (other.bits, other.low)

    def __hash__(self) -> int:
        return hash((self.bits, self.low))

    def __add__(self, other: "Laurent") -> "Laurent":
        if not self.bits:
            return other
        if not other.bits:
            return self
        lo = min(self.low, other.low)
        return Laurent((self.bits << (self.low - lo)) ^ (other.bits << (other.low - lo)), lo)

    __sub__ = __add__

    def __mul__(self, other: "Laurent") -> "Laurent":
        if not self.bits or not other.bits:
            return Laurent()
        return Laurent(clmul(self.bits, other.bits), self.low + other.low)

    def __repr__(self) -> str:
        if not self.bits:
            return "0"
        return " + ".join("1" if k == 0 else f"t^{k}" for k in self.exponents())

    def evaluate(self, field: "GF2m", x: int) -> int:
        val = 0
        for k in self.exponents():
            val ^= field.power(x, k)
        return val

    def to_json(self) -> list[int]:
        return self.exponents()


ZERO = Laurent()
ONE = Laurent(1)


class RatFunc:
    """Element ``t^shift * num / den`` of GF(2)(t); ``num``, ``den`` coprime with constant term 1."""

    __slots__ = ("shift", "num", "den")

    def __init__(self, num: Laurent | int = 0, den: Laurent | int = 1):
        if isinstance(num, int):
            num = Laurent(num)
        if isinstance(den, int):
            den = Laurent(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            self.shift, self.num, self.den = 0, 0, 1
            return
        g = pgcd(num.bits, den.bits)
        self.shift = num.low - den.low
        self.num = pdivmod(num.bits, g)[0]
        self.den = pdivmod(den.bits, g)[0]

    def __bool__(self) -> bool:
        return self.num != 0

    def __eq__(self, other) -> bool:
        return isinstance(other, RatFunc) and (self.shift, self.num, self.den) == (other.shift, other.num, other.den)

    def __hash__(self) -> int:
        return hash((self.shift, self.num, self.den))

    def _parts(self) -> tuple[Laurent, Laurent]:
        return Laurent(self.num, self.shift), Laurent(self.den)

    def __add__(self, other: "RatFunc") -> "RatFunc":
        a, b = self._parts()
        c, d = other._parts()
        return RatFunc(a * d + c * b, b * d)

    __sub__ = __add__

    def __mul__(self, other: "RatFunc") -> "RatFunc":
        a, b = self._parts()
        c, d = other._parts()
        return RatFunc(a * c, b * d)

    def inverse(self) -> "RatFunc":
        if not self:
            raise ZeroDivisionError("zero has no inverse")
        a, b = self._parts()
        return RatFunc(b, a)

    def __truediv__(self, other: "RatFunc") -> "RatFunc":
        return self * other.inverse()

    def __repr__(self) -> str:
        a, b = self._parts()
        return f"({a!r})/({b!r})"


# ----------------------------------------------------------------------
# GF(2^m) for random specialization
# ----------------------------------------------------------------------


class GF2m:
    """``GF(2)[x] / (modulus)``; the default modulus ``x^16 + x^12 + x^3 + x + 1`` is irreducible."""

    def __init__(self, modulus: int = 0x1100B):
        self.modulus = modulus
        self.m = modulus.bit_length() - 1
        self.size = 1 << self.m

    def mul(self, a: int, b: int) -> int:
        return pdivmod(clmul(a, b), self.modulus)[1]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inverse(a), -k
        out = 1
        while k:
            if k & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            k >>= 1
        return out

    def inverse(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return self.power(a, self.size - 2)


def is_irreducible(poly: int) -> bool:
    """Rabin's test over GF(2)."""
    n = poly.bit_length() - 1
    if n < 1:
        return False

    t = pdivmod(2, poly)[1]

    def xpow2k(k):
        x = t
        for _ in range(k):
            x = pdivmod(clmul(x, x), poly)[1]
        return x

    if xpow2k(n) != t:
        return False
    primes = [p for p in range(2, n + 1) if n % p == 0 and all(p % d for d in range(2, p))]
    return all(pgcd(poly, xpow2k(n // p) ^ t) == 1 for p in primes)


# ----------------------------------------------------------------------
# Matrices and ranks
# ----------------------------------------------------------------------

Matrix = list[list[Laurent]]


def matmul(A: Matrix, B: Matrix) -> Matrix:
    if A and B and len(A[0]) != len(B):
        raise PreconditionError("matrix dimensions do not compose")
    cols = len(B[0]) if B else 0
    out = []
    for row in A:
        new = []
        for j in range(cols):
            acc = ZERO
            for k, a in enumerate(row):
                if a and B[k][j]:
                    acc = acc + a * B[k][j]
            new.append(acc)
        out.append(new)
    return out


def is_zero_matrix(M: Matrix) -> bool:
    return all(not x for row in M for x in row)


def rank_over_fraction_field(M: Matrix) -> int:
    """Exact rank over GF(2)(t) by Gaussian elimination."""
    rows = [[RatFunc(x) for x in row] for row in M]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = rows[rank][c].inverse()
        prow = [x * inv for x in rows[rank]]
        rows[rank] = prow
        for r in range(len(rows)):
            if r != rank and rows[r][c]:
                f = rows[r][c]
                rows[r] = [x - f * y for x, y in zip(rows[r], prow)]
        rank += 1
    return rank


def rank_at(M: Matrix, x: int, field: GF2m | None = None) -> int:
    """Rank over GF(2^m) of ``M`` with ``t = x``."""
    F = field or GF2m()
    rows = [[e.evaluate(F, x) for e in row] for row in M]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = F.inverse(rows[rank][c])
        prow = [F.mul(v, inv) for v in rows[rank]]
        rows[rank] = prow
        for r in range(len(rows)):
            if r != rank and rows[r][c]:
                f = rows[r][c]
                rows[r] = [a ^ F.mul(f, b) for a, b in zip(rows[r], prow)]
        rank += 1
    return rank


def random_specialization_ranks(M: Matrix, trials: int, seed: int = 0) -> list[int]:
    F = GF2m()
    rng = random.Random(seed)
    return [rank_at(M, rng.randrange(2, F.size), F) for _ in range(trials)]


# ----------------------------------------------------------------------
# Presentations and Fox derivatives
# ----------------------------------------------------------------------

Letter = tuple[int, int]  # (generator index, +1 or -1)


def parse_word(word: str | Sequence, generators: Sequence[str]) -> list[Letter]:
    """Letters ``a`` / ``A`` for a generator and its inverse, or ``[name, ±1]`` pairs."""
    index = {g: i for i, g in enumerate(generators)}
    out: list[Letter] = []
    if isinstance(word, str):
        for ch in word:
            if ch in index:
                out.append((index[ch], 1))
            elif ch.swapcase() in index and ch.isupper():
                out.append((index[ch.lower()], -1))
            else:
                raise PreconditionError(f"letter {ch!r} is not a generator")
        return out
    for item in word:
        name, e = item
        if name not in index or int(e) not in (1, -1):
            raise PreconditionError(f"bad letter {item!r}")
        out.append((index[name], int(e)))
    return out


def commutator_word(a: str, b: str) -> str:
    """``a b a^-1 b^-1``."""
    return a + b + a.upper() + b.upper()


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[tuple[Letter, ...], ...]
    u: tuple[int, ...]
    r3: int = 0
    d3: tuple[tuple[Laurent, ...], ...] | None = None

    @classmethod
    def make(cls, generators: Sequence[str], relators: Iterable, u: Mapping[str, int] | Sequence[int],
             r3: int = 0, d3: Sequence[Sequence[Laurent]] | None = None) -> "Presentation":
        gens = tuple(generators)
        if len(set(gens)) != len(gens):
            raise PreconditionError("duplicate generator names")
        rels = tuple(tuple(parse_word(w, gens)) for w in relators)
        uu = tuple(int(u[g]) for g in gens) if isinstance(u, Mapping) else tuple(int(x) for x in u)
        if len(uu) != len(gens):
            raise PreconditionError("u must give a value for each generator")
        for j, w in enumerate(rels):
            if sum(uu[i] * e for i, e in w):
                raise PreconditionError(f"u does not vanish on relator {j}")
        if d3 is not None:
            d3 = tuple(tuple(row) for row in d3)
            if len(d3) != r3 or any(len(row) != len(rels) for row in d3):
                raise PreconditionError("D3 must be an r3 x q matrix")
        elif r3:
            raise PreconditionError("three-cells need an explicit boundary matrix")
        return cls(gens, rels, uu, r3, d3)

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> "Presentation":
        d3 = obj.get("d3")
        if d3 is not None:
            d3 = [[Laurent.from_exponents(e) for e in row] for row in d3]
        return cls.make(obj["generators"], obj["relators"], obj["u"], int(obj.get("r3", 0)), d3)

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "generators": list(self.generators),
            "relators": [[[self.generators[i], e] for i, e in w] for w in self.relators],
            "u": {g: x for g, x in zip(self.generators, self.u)},
            "r3": self.r3,
        }
        if self.d3 is not None:
            out["d3"] = [[x.to_json() for x in row] for row in self.d3]
        return out

    @property
    def counts(self) -> tuple[int, int, int]:
        return len(self.generators), len(self.relators), self.r3


def fox_row(word: Sequence[Letter], u: Sequence[int], p: int) -> list[Laurent]:
    """Specialized Fox derivatives of ``word`` with respect to each generator."""
    acc = [ZERO] * p
    prefix = 0
    for i, e in word:
        if e == 1:
            acc[i] = acc[i] + Laurent.monomial(prefix)
            prefix += u[i]
        else:
            prefix -= u[i]
            acc[i] = acc[i] + Laurent.monomial(prefix)
    return acc


@dataclass(frozen=True)
class FoxMatrices:
    D1: Matrix  # p x 1
    D2: Matrix  # q x p
    D3: Matrix | None  # r x q


def fox_matrix(pres: Presentation) -> FoxMatrices:
    p = len(pres.generators)
    D1 = [[Laurent.monomial(k) + ONE] for k in pres.u]
    D2 = [fox_row(w, pres.u, p) for w in pres.relators]
    D3 = [list(row) for row in pres.d3] if pres.d3 is not None else None
    return FoxMatrices(D1, D2, D3)


@dataclass(frozen=True)
class BettiBound:
    n: int
    bound: int
    satisfied: bool
    infinite_H2_certificate: bool
    rank_D2: int
    rank_D3: int
    counts: tuple[int, int, int]

    def to_json(self) -> dict[str, Any]:
        return {
            "n": self.n, "bound": self.bound, "satisfied": self.satisfied,
            "certificate": self.infinite_H2_certificate,
            "rank_D2": self.rank_D2, "rank_D3": self.rank_D3,
            "p": self.counts[0], "q": self.counts[1], "r": self.counts[2],
        }


class ChainConditionError(PreconditionError):
    pass


def betti_bound(pres: Presentation) -> BettiBound:
    """``n = dim ker D2 / im D3`` over GF(2)(t), and the bound ``q + 1 - (p + r)``."""
    if not any(pres.u):
        raise PreconditionError("u must be nonzero")
    M = fox_matrix(pres)
    p, q, r = pres.counts
    if q and not is_zero_matrix(matmul(M.D2, M.D1)):
        raise ChainConditionError("D2 followed by D1 is not zero")
    r2 = rank_over_fraction_field(M.D2) if q else 0
    r3 = 0
    if M.D3 is not None and r:
        if not is_zero_matrix(matmul(M.D3, M.D2)):
            raise ChainConditionError("D3 followed by D2 is not zero")
        r3 = rank_over_fraction_field(M.D3)
    n = q - r2 - r3
    bound = q + 1 - (p + r)
    if n < bound:
        raise AssertionError(f"n = {n} below the bound {bound}: rank computation is inconsistent")
    return BettiBound(n, bound, n >= bound, n > 0, r2, r3, (p, q, r))


# ----------------------------------------------------------------------
# Cell counts of products
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class ProductCounts:
    p: int
    q: int
    r: int
    excess: int  # q - (p + r)
    product_formula: int  # (1 - p1 + q1)(1 - p2 + q2) - 1

    def to_json(self) -> dict[str, int]:
        return {"p": self.p, "q": self.q, "r": self.r, "excess": self.excess,
                "product_formula": self.product_formula}


def product_presentation_counts(p1: int, q1: int, p2: int, q2: int) -> ProductCounts:
    """Cells of the product of two presentation complexes, up to dimension 3.

    ``product_formula`` equals ``excess + q1 q2``; the two agree iff ``q1 q2 = 0``.
    """
    if min(p1, q1, p2, q2) < 0:
        raise PreconditionError("counts must be nonnegative")
    p = p1 + p2
    q = p1 * p2 + q1 + q2
    r = p1 * q2 + q1 * p2
    return ProductCounts(p, q, r, q - (p + r), (1 - p1 + q1) * (1 - p2 + q2) - 1)


def surface_product_counts(g1: int, g2: int) -> ProductCounts:
    """Cells of a product of closed orientable surfaces of genera ``g1``, ``g2``."""
    if min(g1, g2) < 0:
        raise PreconditionError("genera must be nonnegative")
    p = r = 2 * g1 + 2 * g2
    q = 4 * g1 * g2 + 2
    return ProductCounts(p, q, r, q - (p + r), 4 * (g1 - 1) * (g2 - 1) - 2)


# ----------------------------------------------------------------------
# Standard presentations
# ----------------------------------------------------------------------

_LETTERS = "abcdefghijklmnopqrstuvwxyz"


def free_group_product(p1: int, p2: int, u: Sequence[int] | None = None) -> Presentation:
    """``F_{p1} x F_{p2}`` with all cross commutators; ``u`` defaults to 1 on every generator."""
    gens = list(_LETTERS[: p1 + p2])
    rels = [commutator_word(a, b) for a in gens[:p1] for b in gens[p1:]]
    return Presentation.make(gens, rels, u if u is not None else [1] * (p1 + p2))


def surface_presentation(g: int, u: Sequence[int] | None = None) -> Presentation:
    gens = list(_LETTERS[: 2 * g])
    rel = "".join(commutator_word(gens[2 * i], gens[2 * i + 1]) for i in range(g))
    return Presentation.make(gens, [rel] if g else [], u if u is not None else [1] * (2 * g))
