"""Bit-packed GF(2) elimination and Smith normal form over Z/2^N."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "F2Matrix",
    "Echelon",
    "f2_rank",
    "f2_rank_columns",
    "f2_kernel_basis",
    "f2_solve",
    "snf",
    "snf_divisors",
]


@dataclass(frozen=True)
class F2Matrix:
    """Rows are Python ints; bit j of a row is the entry in column j."""

    nrows: int
    ncols: int
    rows: tuple[int, ...]

    @classmethod
    def from_rows(cls, rows: Iterable[int], ncols: int) -> "F2Matrix":
        rows = tuple(rows)
        mask = (1 << ncols) - 1
        if any(r & ~mask for r in rows):
            raise ValueError("row has bits beyond the column count")
        return cls(len(rows), ncols, rows)

    @classmethod
    def from_dense(cls, entries: Sequence[Sequence[int]]) -> "F2Matrix":
        ncols = len(entries[0]) if entries else 0
        rows = []
        for row in entries:
            v = 0
            for j, e in enumerate(row):
                if e % 2:
                    v |= 1 << j
            rows.append(v)
        return cls(len(rows), ncols, tuple(rows))

    @classmethod
    def identity(cls, n: int) -> "F2Matrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def zero(cls, nrows: int, ncols: int) -> "F2Matrix":
        return cls(nrows, ncols, (0,) * nrows)

    def entry(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def transpose(self) -> "F2Matrix":
        cols = [0] * self.ncols
        for i, r in enumerate(self.rows):
            while r:
                low = r & -r
                cols[low.bit_length() - 1] |= 1 << i
                r ^= low
        return F2Matrix(self.ncols, self.nrows, tuple(cols))

    def to_dense(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.ncols)] for r in self.rows]


class Echelon:
    """Incremental row echelon form keyed by lowest set bit.

    Each stored row may carry a companion bitmask recording which inserted
    vectors it combines, which is how kernels and solutions are read off.
    """

    def __init__(self) -> None:
        self.pivots: dict[int, tuple[int, int]] = {}

    def __len__(self) -> int:
        return len(self.pivots)

    def reduce(self, v: int, tag: int = 0) -> tuple[int, int]:
        pivots = self.pivots
        while v:
            low = (v & -v).bit_length() - 1
            hit = pivots.get(low)
            if hit is None:
                break
            v ^= hit[0]
            tag ^= hit[1]
        return v, tag

    def reduce_fully(self, v: int, tag: int = 0) -> tuple[int, int]:
        """Clear every pivot position of v, not only the leading ones."""
        out = 0
        pivots = self.pivots
        while v:
            low = v & -v
            hit = pivots.get(low.bit_length() - 1)
            if hit is None:
                out |= low
                v ^= low
            else:
                v ^= hit[0]
                tag ^= hit[1]
        return out, tag

    def add(self, v: int, tag: int = 0) -> tuple[bool, int, int]:
        """Insert v; returns (independent, residue, residue tag)."""
        v, tag = self.reduce(v, tag)
        if v:
            self.pivots[(v & -v).bit_length() - 1] = (v, tag)
            return True, v, tag
        return False, 0, tag

    def contains(self, v: int) -> bool:
        return self.reduce(v)[0] == 0


def f2_rank(m: F2Matrix) -> int:
    """Rank by row elimination."""
    e = Echelon()
    for r in m.rows:
        e.add(r)
    return len(e)


def f2_rank_columns(m: F2Matrix) -> int:
    """Rank by eliminating columns with first-nonzero pivoting on a dense copy."""
    cols = list(m.transpose().rows)
    rank = 0
    for i in range(m.nrows):
        bit = 1 << i
        piv = next((k for k in range(rank, len(cols)) if cols[k] & bit), None)
        if piv is None:
            continue
        cols[rank], cols[piv] = cols[piv], cols[rank]
        p = cols[rank]
        for k in range(len(cols)):
            if k != rank and cols[k] & bit:
                cols[k] ^= p
        rank += 1
    return rank


def f2_kernel_basis(m: F2Matrix) -> list[int]:
    """Basis of {x in F2^ncols : M x = 0}, each vector packed as an int."""
    # Row-reduce M to reduced echelon form, then read off free columns.
    pivots: dict[int, int] = {}
    for r in m.rows:
        for p, row in pivots.items():
            if (r >> p) & 1:
                r ^= row
        if r:
            p = (r & -r).bit_length() - 1
            for q in list(pivots):
                if (pivots[q] >> p) & 1:
                    pivots[q] ^= r
            pivots[p] = r
    basis = []
    for f in range(m.ncols):
        if f in pivots:
            continue
        v = 1 << f
        for p, row in pivots.items():
            if (row >> f) & 1:
                v |= 1 << p
        basis.append(v)
    return basis


def f2_solve(rows: Sequence[int], target: int) -> int | None:
    """Find x with XOR of rows[i] over bits i of x equal to target, or None."""
    e = Echelon()
    for i, r in enumerate(rows):
        e.add(r, 1 << i)
    v, tag = e.reduce(target)
    return tag if v == 0 else None


def _val(x: int, n: int) -> int:
    if x == 0:
        return n
    return (x & -x).bit_length() - 1


def snf(matrix, n: int) -> list[int]:
    """Elementary divisors of an integer matrix over Z/2^n.

    Returns the 2-adic valuations of the nonzero diagonal entries, sorted; a
    valuation of n never appears (such entries vanish at this precision and are
    indistinguishable from zero, i.e. they count towards the free part).
    """
    mod = 1 << n
    # products of two reduced entries must fit in int64
    a = np.array(matrix, dtype=np.int64 if n <= 31 else object) % mod
    if a.ndim != 2 or a.size == 0:
        return []
    rows, cols = a.shape
    out = []
    r0 = 0
    while r0 < min(rows, cols):
        sub = a[r0:, r0:]
        nz = np.nonzero(sub)
        if len(nz[0]) == 0:
            break
        vals = sub[nz]
        lows = vals & -vals
        k = int(np.argmin(lows))
        i, j = int(nz[0][k]) + r0, int(nz[1][k]) + r0
        v = _val(int(a[i, j]), n)
        a[[r0, i], :] = a[[i, r0], :]
        a[:, [r0, j]] = a[:, [j, r0]]
        unit = int(a[r0, r0]) >> v
        inv = pow(unit, -1, mod)
        a[r0, :] = (a[r0, :] * inv) % mod
        # clear the column below the pivot
        col = a[r0 + 1:, r0] >> v
        if col.any():
            a[r0 + 1:, :] = (a[r0 + 1:, :] - np.outer(col, a[r0, :])) % mod
        # row entries are multiples of 2^v, so the row clears without touching the rest
        a[r0, r0 + 1:] = 0
        out.append(v)
        r0 += 1
    return sorted(out)


def snf_divisors(matrix, n: int) -> list[int]:
    """Elementary divisors as integers 2^v."""
    return [1 << v for v in snf(matrix, n)]
