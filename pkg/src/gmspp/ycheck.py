"""Vertical feasibility of x-placed items on one strip (the y-check).

Given items with fixed x-positions, a strip width and a target height, decide
whether integer y-coordinates exist so that every item lies in
``[0, target]`` and no two items sharing a column overlap vertically.

The exact procedure enumerates packings bottom-up over a skyline. At each
node the lowest, leftmost contiguous run of columns (the niche) is either
filled by an item whose footprint fits inside it, or closed by raising it to
its lower neighbour. Any packing can be dropped until every item rests on
the floor or on another item, and the lowest item touching a niche either
sits in it or reaches past a neighbour; so the two kinds of branch lose no
solutions.

Only the column-sharing graph and the item heights matter, which is what
makes width lifting and strip shrinking verdict-preserving.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence


class YCheckUndecided(RuntimeError):
    """The enumeration hit its node limit before reaching a verdict."""


@dataclass(frozen=True)
class PlacedItem:
    j: int
    p: int
    w: int
    h: int


@dataclass(frozen=True)
class YCheckInstance:
    W: int
    H: int
    items: tuple[PlacedItem, ...]

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))
        if self.H < 0:
            raise ValueError(f"target height must be >= 0, got {self.H}")
        for it in self.items:
            if it.p < 0 or it.p + it.w > self.W or it.w < 1 or it.h < 1:
                raise ValueError(f"item {it.j} at p={it.p} (w={it.w}, h={it.h}) lies outside strip width {self.W}")

    def restrict(self, keep: Iterable[int]) -> "YCheckInstance":
        keep = set(keep)
        return replace(self, items=tuple(it for it in self.items if it.j in keep))

    def with_height(self, H: int) -> "YCheckInstance":
        return replace(self, H=H)


@dataclass(frozen=True)
class PruneConfig:
    """Switches for the enumeration.

    The first five are the bounding / dominance criteria; each one on its own
    keeps the procedure exact. ``lift`` and ``shrink`` are the preprocessing
    steps, ``memo`` caches failed search states.
    """

    column_load: bool = True
    area: bool = True
    free_space: bool = True
    symmetry: bool = True
    dominance: bool = True
    lift: bool = True
    shrink: bool = True
    memo: bool = True
    node_limit: int = 2_000_000

    CRITERIA = ("column_load", "area", "free_space", "symmetry", "dominance")

    @classmethod
    def only(cls, enabled: Iterable[str], **kw) -> "PruneConfig":
        enabled = set(enabled)
        unknown = enabled - set(cls.CRITERIA)
        if unknown:
            raise ValueError(f"unknown criteria {sorted(unknown)}")
        return cls(**{name: name in enabled for name in cls.CRITERIA}, **kw)


DEFAULT_CONFIG = PruneConfig()


@dataclass
class YCheckStats:
    nodes: int = 0
    prunes: Counter = field(default_factory=Counter)


@dataclass
class YCheckResult:
    feasible: bool
    y: Optional[dict[int, int]] = None
    stats: YCheckStats = field(default_factory=YCheckStats)

    def __bool__(self) -> bool:
        return self.feasible


# --------------------------------------------------------------------------
# geometry helpers
# --------------------------------------------------------------------------

def share_column(p1: int, w1: int, p2: int, w2: int) -> bool:
    return p1 < p2 + w2 and p2 < p1 + w1


def witness_violations(yc: YCheckInstance, y: dict[int, int]) -> list[str]:
    """Independent check of a y-assignment; empty list means valid."""
    problems = []
    for it in yc.items:
        if it.j not in y:
            problems.append(f"item {it.j} has no y")
            continue
        if y[it.j] < 0:
            problems.append(f"item {it.j} below the floor (y={y[it.j]})")
        if y[it.j] + it.h > yc.H:
            problems.append(f"item {it.j} exceeds height {yc.H} (top {y[it.j] + it.h})")
    for a, b in itertools.combinations(yc.items, 2):
        if a.j in y and b.j in y and share_column(a.p, a.w, b.p, b.w):
            if y[a.j] < y[b.j] + b.h and y[b.j] < y[a.j] + a.h:
                problems.append(f"items {a.j} and {b.j} overlap")
    return problems


def width_lift(yc: YCheckInstance) -> list[tuple[int, int]]:
    """Widened half-open column intervals ``[L, R)``, one per item (in item order).

    Items are widened one at a time against the current intervals: each
    grows left up to the right edge of the nearest interval lying wholly to
    its left (or the strip border), and right up to the left edge of the
    nearest one wholly to its right. Any interval meeting the added columns
    already shares a column with the widened item, so the column-sharing
    graph, and with it the verdict, is unchanged. Widening all items at once
    would be unsound: two neighbours could both grow into the same gap.
    """
    out = [(it.p, it.p + it.w) for it in yc.items]
    for k, (L, R) in enumerate(out):
        left, right = 0, yc.W
        for t, (Lt, Rt) in enumerate(out):
            if t == k:
                continue
            if Rt <= L:
                left = max(left, Rt)
            elif Lt >= R:
                right = min(right, Lt)
        out[k] = (left, right)
    return out


def shrink_strip(yc: YCheckInstance, intervals: Optional[Sequence[tuple[int, int]]] = None):
    """Drop every column that is not some item's left border.

    Two half-open intervals intersect iff one contains the other's left
    border, so keeping only left-border columns preserves which items share
    a column. Returns ``(compressed instance, kept)`` where ``kept[c]`` is
    the original index of compressed column ``c``.
    """
    if intervals is None:
        intervals = [(it.p, it.p + it.w) for it in yc.items]
    kept = sorted({L for L, _ in intervals})
    index = {col: c for c, col in enumerate(kept)}
    items = []
    for it, (L, R) in zip(yc.items, intervals):
        lo = index[L]
        hi = sum(1 for col in kept if col < R)
        items.append(PlacedItem(it.j, lo, hi - lo, it.h))
    return YCheckInstance(len(kept), yc.H, tuple(items)), kept


# --------------------------------------------------------------------------
# exact enumeration
# --------------------------------------------------------------------------

class _Search:
    def __init__(self, W: int, H: int, L: list[int], R: list[int], h: list[int], ids: list[int],
                 config: PruneConfig, stats: YCheckStats):
        self.W, self.H = W, H
        self.L, self.R, self.h, self.ids = L, R, h, ids
        self.n = len(h)
        self.cfg = config
        self.stats = stats
        self.sky = [0] * W
        self.y = [0] * self.n
        self.placed_area = 0
        self.waste = 0
        self.failed: set = set()
        area = [(R[k] - L[k]) * h[k] for k in range(self.n)]
        self.area = area
        # branch order: taller first, then wider, then id
        self.order = sorted(range(self.n), key=lambda k: (-h[k], -(R[k] - L[k]), ids[k]))
        # twins[k]: items with the same footprint and height that come before k
        self.twin_before = [
            [t for t in range(self.n) if t != k and (L[t], R[t], h[t]) == (L[k], R[k], h[k])
             and ids[t] < ids[k]]
            for k in range(self.n)
        ]

    def prune(self, rem: int) -> bool:
        cfg, sky, H = self.cfg, self.sky, self.H
        live = [k for k in range(self.n) if rem >> k & 1]
        rem_area = sum(self.area[k] for k in live)
        if cfg.column_load:
            demand = [0] * self.W
            for k in live:
                hk = self.h[k]
                for q in range(self.L[k], self.R[k]):
                    demand[q] += hk
            for q in range(self.W):
                if sky[q] + demand[q] > H:
                    self.stats.prunes["column_load"] += 1
                    return True
        if cfg.area:
            free = self.W * H - sum(sky)
            if rem_area > free:
                self.stats.prunes["area"] += 1
                return True
        if cfg.free_space:
            covered = [False] * self.W
            for k in live:
                for q in range(self.L[k], self.R[k]):
                    covered[q] = True
            dead = sum(H - sky[q] for q in range(self.W) if not covered[q])
            if self.placed_area + self.waste + dead + rem_area > self.W * H:
                self.stats.prunes["free_space"] += 1
                return True
        return False

    def run(self, rem: int, bar: Optional[tuple[int, int]]) -> bool:
        if rem == 0:
            return True
        stats = self.stats
        stats.nodes += 1
        if stats.nodes > self.cfg.node_limit:
            raise YCheckUndecided(f"y-check exceeded {self.cfg.node_limit} nodes")
        sky = self.sky
        s = min(sky)
        if s >= self.H:
            return False
        if bar is not None and bar[0] < s:
            bar = None
        key = None
        if self.cfg.memo:
            key = (tuple(sky), rem, bar)
            if key in self.failed:
                stats.prunes["memo"] += 1
                return False
        if self.prune(rem):
            if key is not None:
                self.failed.add(key)
            return False

        a = sky.index(s)
        b = a
        while b < self.W and sky[b] == s:
            b += 1

        for k in self.order:
            if not rem >> k & 1:
                continue
            Lk, Rk, hk = self.L[k], self.R[k], self.h[k]
            if Lk < a or Rk > b or s + hk > self.H:
                continue
            if self.cfg.dominance and bar is not None and Lk < bar[1]:
                continue
            if self.cfg.symmetry and any(rem >> t & 1 for t in self.twin_before[k]):
                continue
            for q in range(Lk, Rk):
                sky[q] = s + hk
            self.y[k] = s
            self.placed_area += self.area[k]
            ok = self.run(rem & ~(1 << k), (s, Lk) if self.cfg.dominance else None)
            self.placed_area -= self.area[k]
            for q in range(Lk, Rk):
                sky[q] = s
            if ok:
                return True

        # close the niche: raise it to its lower neighbour
        neighbours = []
        if a > 0:
            neighbours.append(sky[a - 1])
        if b < self.W:
            neighbours.append(sky[b])
        target = min(neighbours) if neighbours else self.H
        for q in range(a, b):
            sky[q] = target
        self.waste += (target - s) * (b - a)
        ok = self.run(rem, bar)
        self.waste -= (target - s) * (b - a)
        for q in range(a, b):
            sky[q] = s
        if not ok and key is not None:
            self.failed.add(key)
        return ok


def ycheck(yc: YCheckInstance, config: PruneConfig = DEFAULT_CONFIG) -> YCheckResult:
    stats = YCheckStats()
    if not yc.items:
        return YCheckResult(True, {}, stats)
    if any(it.h > yc.H for it in yc.items):
        stats.prunes["column_load"] += 1
        return YCheckResult(False, None, stats)
    intervals = width_lift(yc) if config.lift else [(it.p, it.p + it.w) for it in yc.items]
    if config.shrink:
        work, _ = shrink_strip(yc, intervals)
        intervals = [(it.p, it.p + it.w) for it in work.items]
        W = work.W
    else:
        W = yc.W
    L = [iv[0] for iv in intervals]
    R = [iv[1] for iv in intervals]
    search = _Search(W, yc.H, L, R, [it.h for it in yc.items], [it.j for it in yc.items], config, stats)
    full = (1 << len(yc.items)) - 1
    if not search.run(full, None):
        return YCheckResult(False, None, stats)
    y = {it.j: search.y[k] for k, it in enumerate(yc.items)}
    problems = witness_violations(yc, y)
    if problems:
        raise AssertionError(f"y-check produced an invalid witness: {problems}")
    return YCheckResult(True, y, stats)


def min_height(yc: YCheckInstance, config: PruneConfig = DEFAULT_CONFIG) -> tuple[int, dict[int, int]]:
    """Smallest target height for which the items fit, with a witness."""
    if not yc.items:
        return 0, {}
    lo = max(column_loads(yc))
    hi = sum(it.h for it in yc.items)
    best = ycheck(yc.with_height(hi), config)
    while lo < hi:
        mid = (lo + hi) // 2
        res = ycheck(yc.with_height(mid), config)
        if res.feasible:
            hi, best = mid, res
        else:
            lo = mid + 1
    if best.y is None or max(best.y[it.j] + it.h for it in yc.items) > hi:
        best = ycheck(yc.with_height(hi), config)
    return hi, best.y


def column_loads(yc: YCheckInstance) -> list[int]:
    loads = [0] * yc.W
    for it in yc.items:
        for q in range(it.p, it.p + it.w):
            loads[q] += it.h
    return loads


# --------------------------------------------------------------------------
# brute-force reference
# --------------------------------------------------------------------------

ORACLE_MAX_ITEMS = 8


def oracle_ycheck(yc: YCheckInstance) -> YCheckResult:
    """Exhaustive reference decision over normal y-positions.

    Every feasible assignment can be dropped until each item rests on the
    floor or on top of another item, so each y lies in the subset sums of
    the other items' heights. All such combinations are enumerated; a
    partial combination is abandoned as soon as one pair overlaps.
    """
    items = yc.items
    n = len(items)
    if n > ORACLE_MAX_ITEMS:
        raise ValueError(f"oracle_ycheck handles at most {ORACLE_MAX_ITEMS} items, got {n}")
    stats = YCheckStats()
    if n == 0:
        return YCheckResult(True, {}, stats)
    heights = [it.h for it in items]
    choices = []
    for k, it in enumerate(items):
        cap = yc.H - it.h
        if cap < 0:
            return YCheckResult(False, None, stats)
        sums = {0}
        for t, ht in enumerate(heights):
            if t != k:
                sums |= {v + ht for v in sums if v + ht <= cap}
        choices.append(sorted(sums))
    conflict = [[share_column(a.p, a.w, b.p, b.w) for b in items] for a in items]
    y = [0] * n

    def assign(k: int) -> bool:
        if k == n:
            return True
        for v in choices[k]:
            stats.nodes += 1
            if all(not conflict[k][t] or v >= y[t] + heights[t] or y[t] >= v + heights[k] for t in range(k)):
                y[k] = v
                if assign(k + 1):
                    return True
        return False

    if assign(0):
        return YCheckResult(True, {it.j: y[k] for k, it in enumerate(items)}, stats)
    return YCheckResult(False, None, stats)
