"""Linear algebra over GF(2) with vectors packed into Python ints (bit ``i`` = coordinate ``i``)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


def bits(v: int) -> list[int]:
    out = []
    i = 0
    while v:
        if v & 1:
            out.append(i)
        v >>= 1
        i += 1
    return out


class Echelon:
    """Incrementally reduced row space; each row remembers which inputs it combines."""

    def __init__(self) -> None:
        self.rows: dict[int, tuple[int, int]] = {}  # pivot bit -> (row, tag)

    def reduce(self, v: int, tag: int = 0) -> tuple[int, int]:
        while v:
            p = v.bit_length() - 1
            hit = self.rows.get(p)
            if hit is None:
                break
            v ^= hit[0]
            tag ^= hit[1]
        return v, tag

    def add(self, v: int, tag: int = 0) -> tuple[int, int]:
        """Insert ``v``; returns the reduced remainder (0 if dependent) and its tag."""
        v, tag = self.reduce(v, tag)
        if v:
            self.rows[v.bit_length() - 1] = (v, tag)
        return v, tag

    def contains(self, v: int) -> bool:
        return self.reduce(v)[0] == 0

    @property
    def rank(self) -> int:
        return len(self.rows)


def rank(vectors: Iterable[int]) -> int:
    e = Echelon()
    for v in vectors:
        e.add(v)
    return e.rank


@dataclass(frozen=True)
class SolveResult:
    """Either a solution ``x`` or a set of equation indices summing to ``0 = 1``."""

    solution: int | None
    certificate: tuple[int, ...] | None

    @property
    def solvable(self) -> bool:
        return self.solution is not None


def solve(rows: Sequence[int], rhs: Sequence[int], nvars: int) -> SolveResult:
    """Solve ``rows[i] . x = rhs[i]``; the right-hand side rides as bit 0."""
    e = Echelon()
    for i, (r, b) in enumerate(zip(rows, rhs)):
        v, tag = e.add((r << 1) | (b & 1), 1 << i)
        if v == 1:
            return SolveResult(None, tuple(bits(tag)))
    x = 0
    # pivots are highest bits, so ascending order sees lower variables first
    for p in sorted(e.rows):
        row = e.rows[p][0]
        val = (row & 1) ^ dot(row >> 1 & ~(1 << (p - 1)), x)
        if val:
            x |= 1 << (p - 1)
    return SolveResult(x, None)


def nullspace(rows: Iterable[int], nvars: int) -> list[int]:
    """Basis of ``{x : r . x = 0 for all rows r}``."""
    e = Echelon()
    for r in rows:
        e.add(r)
    # fully reduce so every pivot column is clear in the other rows
    piv = sorted(e.rows)
    red = {p: e.rows[p][0] for p in piv}
    for p in piv:
        for q in piv:
            if q != p and red[q] >> p & 1:
                red[q] ^= red[p]
    basis = []
    for f in range(nvars):
        if f in red:
            continue
        v = 1 << f
        for p, row in red.items():
            if row >> f & 1:
                v |= 1 << p
        basis.append(v)
    return basis


def dot(a: int, b: int) -> int:
    return bin(a & b).count("1") & 1
