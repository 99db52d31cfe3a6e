"""Linear algebra over GF(2) with rows packed into Python ints.

A matrix is stored as a list of row bitmasks; bit j of row i is the (i, j)
entry.  This is fast enough for the full-cube homology computations used as
oracles (a few thousand rows) and keeps the code dependency-free.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Tuple

__all__ = ["F2Matrix", "GradedComplexF2", "f2_rank"]


def f2_rank(rows: Iterable[int]) -> int:
    """Rank of a GF(2) matrix given as row bitmasks (destructive on a copy)."""
    pivots: List[int] = []
    for row in rows:
        for p in pivots:
            low = p & -p
            if row & low:
                row ^= p
        if row:
            pivots.append(row)
    return len(pivots)


@dataclass
class F2Matrix:
    """``nrows x ncols`` matrix over GF(2); ``rows[i]`` bit ``j`` = entry (i, j)."""

    nrows: int
    ncols: int
    rows: List[int] = field(default_factory=list)

    def __post_init__(self):
        if not self.rows:
            self.rows = [0] * self.nrows
        if len(self.rows) != self.nrows:
            raise ValueError("row count mismatch")
        mask = (1 << self.ncols) - 1
        if any(r & ~mask for r in self.rows):
            raise ValueError("row has bits beyond ncols")

    @classmethod
    def from_entries(cls, nrows: int, ncols: int, entries: Iterable[Tuple[int, int]]):
        rows = [0] * nrows
        for i, j in entries:
            rows[i] ^= 1 << j
        return cls(nrows, ncols, rows)

    @classmethod
    def from_dense(cls, dense: Iterable[Iterable[int]]):
        rows = []
        ncols = 0
        for r in dense:
            r = list(r)
            ncols = max(ncols, len(r))
            rows.append(sum((int(x) & 1) << j for j, x in enumerate(r)))
        return cls(len(rows), ncols, rows)

    def to_dense(self) -> List[List[int]]:
        return [[(r >> j) & 1 for j in range(self.ncols)] for r in self.rows]

    def entry(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def set(self, i: int, j: int, v: int = 1):
        if v:
            self.rows[i] |= 1 << j
        else:
            self.rows[i] &= ~(1 << j)

    def add_to(self, i: int, j: int):
        """entry += 1 (mod 2)."""
        self.rows[i] ^= 1 << j

    def rank(self) -> int:
        return f2_rank(self.rows)

    def mul(self, other: "F2Matrix") -> "F2Matrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        out = []
        for r in self.rows:
            acc = 0
            rr = r
            while rr:
                low = rr & -rr
                acc ^= other.rows[low.bit_length() - 1]
                rr ^= low
            out.append(acc)
        return F2Matrix(self.nrows, other.ncols, out)

    def transpose(self) -> "F2Matrix":
        out = [0] * self.ncols
        for i, r in enumerate(self.rows):
            rr = r
            while rr:
                low = rr & -rr
                out[low.bit_length() - 1] |= 1 << i
                rr ^= low
        return F2Matrix(self.ncols, self.nrows, out)

    def is_zero(self) -> bool:
        return all(r == 0 for r in self.rows)

    def copy(self) -> "F2Matrix":
        return F2Matrix(self.nrows, self.ncols, list(self.rows))


Bigrade = Tuple[int, int]


@dataclass
class GradedComplexF2:
    """A bigraded cochain complex over GF(2).

    Groups are indexed by ``(h, q)``; the differential raises ``h`` by one and
    preserves ``q``.  ``diffs[(h, q)]`` maps the group at ``(h, q)`` into the
    group at ``(h+1, q)`` acting on column vectors, i.e. it has
    ``dims[(h+1, q)]`` rows and ``dims[(h, q)]`` columns.
    """

    dims: Dict[Bigrade, int]
    diffs: Dict[Bigrade, F2Matrix]

    def validate(self):
        for (h, q), m in self.diffs.items():
            if m.ncols != self.dims.get((h, q), 0):
                raise ValueError(f"diff at {(h, q)} has {m.ncols} cols, group has {self.dims.get((h, q), 0)}")
            if m.nrows != self.dims.get((h + 1, q), 0):
                raise ValueError(f"diff at {(h, q)} has {m.nrows} rows, target has {self.dims.get((h + 1, q), 0)}")
        return self

    def check_d_squared(self) -> bool:
        for (h, q), m in self.diffs.items():
            nxt = self.diffs.get((h + 1, q))
            if nxt is not None and not nxt.mul(m).is_zero():
                return False
        return True

    def homology_dims(self) -> Dict[Bigrade, int]:
        """dim H^{h,q} = dim ker d_out - rank d_in, zeros omitted."""
        ranks: Dict[Bigrade, int] = {}
        for key, m in self.diffs.items():
            ranks[key] = m.rank()
        out: Dict[Bigrade, int] = {}
        for (h, q), n in self.dims.items():
            if n == 0:
                continue
            r_out = ranks.get((h, q), 0)
            r_in = ranks.get((h - 1, q), 0)
            k = n - r_out - r_in
            if k < 0:
                raise ArithmeticError("negative homology dimension; d^2 != 0?")
            if k:
                out[(h, q)] = k
        return out

    def euler_per_q(self) -> Dict[int, int]:
        """sum_h (-1)^h dim C^{h,q}, per q (equals the homology Euler char)."""
        out: Dict[int, int] = {}
        for (h, q), n in self.dims.items():
            out[q] = out.get(q, 0) + (n if h % 2 == 0 else -n)
        return {q: v for q, v in out.items() if v or any(hh[1] == q for hh in self.dims)}

    def total_dim(self) -> int:
        return sum(self.dims.values())
