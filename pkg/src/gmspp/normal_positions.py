"""Normal x-positions per (strip, item) and the column coverage sets built on them.

A normal position of item j on a strip of width W is a sum of widths of a
subset of the *other* items that still leaves room for j. Restricting
placements to these positions loses no optimality, because every packing can
be shifted left until each item touches either the strip border or another
item.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Sequence

from .instance import Instance


def subset_sums(widths: Sequence[int], cap: int) -> list[int]:
    """All subset sums of ``widths`` that are <= ``cap``, ascending.

    Uses an integer as a bitset: bit p is set iff p is reachable.
    """
    if cap < 0:
        return []
    mask = (1 << (cap + 1)) - 1
    reach = 1
    for w in widths:
        reach = (reach | (reach << w)) & mask
    return [p for p in range(cap + 1) if reach >> p & 1]


def normal_positions(widths: Sequence[int], j: int, W: int) -> list[int]:
    """Normal positions of item ``j`` on a strip of width ``W`` given all item widths."""
    others = [w for k, w in enumerate(widths) if k != j]
    return subset_sums(others, W - widths[j])


@dataclass(frozen=True)
class NormalPositionTable:
    """``positions[i][j]`` is the sorted normal-position list of item j on strip i.

    Empty when the item does not fit on the strip.
    """

    positions: tuple[tuple[tuple[int, ...], ...], ...]
    item_widths: tuple[int, ...]
    strip_widths: tuple[int, ...]

    def __getitem__(self, key: tuple[int, int]) -> tuple[int, ...]:
        i, j = key
        return self.positions[i][j]

    def coverage(self, i: int, j: int, q: int) -> list[int]:
        return coverage(self, i, j, q)

    def count(self) -> int:
        return sum(len(ps) for row in self.positions for ps in row)


def build_table(inst: Instance) -> NormalPositionTable:
    widths = [it.w for it in inst.items]
    rows = []
    for strip in inst.strips:
        row = []
        for j, w in enumerate(widths):
            row.append(tuple(normal_positions(widths, j, strip.W)) if w <= strip.W else ())
        rows.append(tuple(row))
    return NormalPositionTable(tuple(rows), tuple(widths), tuple(s.W for s in inst.strips))


def coverage(table: NormalPositionTable, i: int, j: int, q: int) -> list[int]:
    """Positions of item j on strip i at which it occupies column q."""
    W = table.strip_widths[i]
    if not 0 <= q < W:
        raise IndexError(f"column {q} outside strip {i} of width {W}")
    ps = table.positions[i][j]
    w = table.item_widths[j]
    lo = bisect_left(ps, q - w + 1)
    hi = bisect_right(ps, q)
    return list(ps[lo:hi])
