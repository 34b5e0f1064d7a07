"""Binary relations on a finite universe {0..n-1}, stored as bit rows.

Row ``a`` is an integer whose bit ``b`` is set exactly when the ordered
pair ``(a, b)`` belongs to the relation.  Universes in this package stay
tiny (the bundled algebras top out at seven elements), so plain integer
bit twiddling is both the fastest and the simplest representation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import DimensionError

__all__ = [
    "BinRel",
    "RelationShape",
    "classify_shape",
    "compose",
    "converse",
    "intersect",
    "union",
    "subset",
]


def _bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of mask, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class BinRel:
    """Immutable binary relation on {0..n-1}; equality is cell-wise."""

    __slots__ = ("n", "rows")

    def __init__(self, n: int, rows: Iterable[int]):
        if n <= 0:
            raise ValueError(f"universe size must be positive, got {n}")
        rows = tuple(rows)
        if len(rows) != n:
            raise ValueError(f"expected {n} rows, got {len(rows)}")
        mask = (1 << n) - 1
        for a, row in enumerate(rows):
            if row < 0 or row & ~mask:
                raise ValueError(f"row {a} has bits outside the universe")
        self.n = n
        self.rows = rows

    @classmethod
    def empty(cls, n: int) -> BinRel:
        return cls(n, (0,) * n)

    @classmethod
    def diagonal(cls, n: int) -> BinRel:
        return cls(n, tuple(1 << a for a in range(n)))

    @classmethod
    def full(cls, n: int) -> BinRel:
        mask = (1 << n) - 1
        return cls(n, (mask,) * n)

    @classmethod
    def from_pairs(cls, n, pairs, reflexive=False, symmetric=False) -> BinRel:
        rows = [1 << a for a in range(n)] if reflexive else [0] * n
        for a, b in pairs:
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"pair ({a}, {b}) out of range for universe of size {n}")
            rows[a] |= 1 << b
            if symmetric:
                rows[b] |= 1 << a
        return cls(n, rows)

    def has(self, a: int, b: int) -> bool:
        if not (0 <= a < self.n and 0 <= b < self.n):
            raise ValueError(f"pair ({a}, {b}) out of range for universe of size {self.n}")
        return bool(self.rows[a] >> b & 1)

    def pairs(self) -> list[tuple[int, int]]:
        """All ordered pairs, sorted row-major."""
        return [(a, b) for a in range(self.n) for b in _bits(self.rows[a])]

    def pair_count(self) -> int:
        return sum(row.bit_count() for row in self.rows)

    def __eq__(self, other):
        if not isinstance(other, BinRel):
            return NotImplemented
        return self.n == other.n and self.rows == other.rows

    def __hash__(self):
        return hash((self.n, self.rows))

    def __and__(self, other):
        return intersect(self, other)

    def __or__(self, other):
        return union(self, other)

    def __le__(self, other):
        return subset(self, other)

    def __repr__(self):
        return f"BinRel({self.n}, pairs={self.pairs()!r})"


def _check_same_universe(r: BinRel, s: BinRel) -> None:
    if r.n != s.n:
        raise DimensionError(f"universe sizes differ: {r.n} vs {s.n}")


def compose(r: BinRel, s: BinRel) -> BinRel:
    """(a, b) is in r∘s when some c has (a, c) in r and (c, b) in s."""
    _check_same_universe(r, s)
    srows = s.rows
    out = []
    for row in r.rows:
        acc = 0
        for c in _bits(row):
            acc |= srows[c]
        out.append(acc)
    return BinRel(r.n, out)


def converse(r: BinRel) -> BinRel:
    """Transpose: (a, b) swapped to (b, a)."""
    out = [0] * r.n
    for a, row in enumerate(r.rows):
        for b in _bits(row):
            out[b] |= 1 << a
    return BinRel(r.n, out)


def intersect(r: BinRel, s: BinRel) -> BinRel:
    _check_same_universe(r, s)
    return BinRel(r.n, tuple(x & y for x, y in zip(r.rows, s.rows)))


def union(r: BinRel, s: BinRel) -> BinRel:
    _check_same_universe(r, s)
    return BinRel(r.n, tuple(x | y for x, y in zip(r.rows, s.rows)))


def subset(r: BinRel, s: BinRel) -> bool:
    _check_same_universe(r, s)
    return all(x & ~y == 0 for x, y in zip(r.rows, s.rows))


@dataclass(frozen=True)
class RelationShape:
    reflexive: bool
    symmetric: bool
    transitive: bool


def classify_shape(r: BinRel) -> RelationShape:
    """Reflexivity, symmetry and transitivity flags of a relation."""
    reflexive = all(r.rows[a] >> a & 1 for a in range(r.n))
    symmetric = r == converse(r)
    transitive = subset(compose(r, r), r)
    return RelationShape(reflexive, symmetric, transitive)
