"""Benders cuts for the master: standard, combinatorial (MIS) and LP-lifted.

Every cut has the height-aware form

    T * sum_{j in C} sum_{p in [lo_j, hi_j]} x[i, j, p]  -  H_i  <=  T * (|C| - 1)

i.e. if every item of C sits on strip i inside its interval, then H_i >= T.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .instance import Instance
from .mip import GE, LE, LinearModel, LpStatus, solve_lp
from .mip.lp import LpError
from .mip.model import Constraint
from .normal_positions import NormalPositionTable
from .ycheck import (DEFAULT_CONFIG, PlacedItem, PruneConfig, YCheckInstance, oracle_ycheck,
                     share_column, ycheck)


class CutStage(enum.Enum):
    STANDARD = "standard"
    COMBINATORIAL = "combinatorial"
    LIFTED = "lifted"


@dataclass(frozen=True)
class CutTerm:
    """Item ``j`` placed anywhere in the closed position interval ``[lo, hi]``."""

    j: int
    lo: int
    hi: int

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi


@dataclass(frozen=True)
class BendersCut:
    strip: int
    threshold: int
    terms: tuple[CutTerm, ...]
    stage: CutStage

    def __post_init__(self):
        if self.threshold < 1:
            raise ValueError(f"cut threshold must be >= 1, got {self.threshold}")
        if not self.terms:
            raise ValueError("cut needs at least one term")

    @property
    def items(self) -> list[int]:
        return [t.j for t in self.terms]

    def support(self, table: NormalPositionTable) -> list[tuple[int, int, int]]:
        """Master variables ``(i, j, p)`` carrying the threshold coefficient."""
        out = []
        for t in self.terms:
            out += [(self.strip, t.j, p) for p in table[self.strip, t.j] if t.lo <= p <= t.hi]
        return out

    def to_constraint(self, model: LinearModel, x: dict, H: Sequence[int], table: NormalPositionTable,
                      name: str = "") -> Constraint:
        coeffs = {x[key]: self.threshold for key in self.support(table)}
        coeffs[H[self.strip]] = -1
        return model.make_constraint(coeffs, LE, self.threshold * (len(self.terms) - 1), name)

    def holds(self, placement: dict[int, tuple[int, int]], height: int) -> bool:
        """Evaluate the cut on a concrete packing.

        ``placement`` maps item -> (strip, x); ``height`` is strip ``i``'s realized height.
        """
        inside = sum(1 for t in self.terms
                     if placement.get(t.j, (None, None))[0] == self.strip
                     and t.lo <= placement[t.j][1] <= t.hi)
        return self.threshold * inside - height <= self.threshold * (len(self.terms) - 1)

    def log_line(self) -> str:
        items = ";".join(str(t.j) for t in self.terms)
        where = ";".join(str(t.lo) if t.is_point else f"{t.lo}-{t.hi}" for t in self.terms)
        return f"{self.strip},{self.stage.value},{self.threshold},{len(self.terms)},{items},{where}"


CUT_LOG_HEADER = "strip,stage,threshold,|C|,items,positions_or_intervals"


def next_height(H_star: float) -> int:
    """Smallest integer strictly above the failed target ceil(H_star)."""
    return math.ceil(H_star - 1e-6) + 1


def standard_cut(i: int, placed: Sequence[PlacedItem], H_star: float) -> BendersCut:
    terms = tuple(CutTerm(it.j, it.p, it.p) for it in placed)
    return BendersCut(i, next_height(H_star), terms, CutStage.STANDARD)


def combinatorial_cut(i: int, placed: Sequence[PlacedItem], threshold: int) -> BendersCut:
    terms = tuple(CutTerm(it.j, it.p, it.p) for it in placed)
    return BendersCut(i, threshold, terms, CutStage.COMBINATORIAL)


def lifted_cut(i: int, intervals: dict[int, tuple[int, int]], threshold: int) -> BendersCut:
    terms = tuple(CutTerm(j, lo, hi) for j, (lo, hi) in sorted(intervals.items()))
    return BendersCut(i, threshold, terms, CutStage.LIFTED)


def minimal_infeasible_subset(yc: YCheckInstance, config: PruneConfig = DEFAULT_CONFIG) -> list[int]:
    """Deletion-based irreducible infeasible subset of the placed items.

    Items are tried for removal smallest area first (ties by id); a removal
    sticks whenever the rest stays infeasible. Since any subset of a feasible
    set is feasible, one pass leaves a set from which no single item can be
    dropped.
    """
    if ycheck(yc, config).feasible:
        raise ValueError("minimal_infeasible_subset needs an infeasible y-check instance")
    keep = [it.j for it in yc.items]
    for it in sorted(yc.items, key=lambda it: (it.w * it.h, it.j)):
        trial = [j for j in keep if j != it.j]
        if not ycheck(yc.restrict(trial), config).feasible:
            keep = trial
    return keep


def build_conflicts(items: Sequence[PlacedItem]) -> dict[int, set[int]]:
    """``K[j]``: items sharing at least one column with ``j`` at the given positions."""
    K = {it.j: set() for it in items}
    for a, b in itertools.combinations(items, 2):
        if share_column(a.p, a.w, b.p, b.w):
            K[a.j].add(b.j)
            K[b.j].add(a.j)
    return K


class NoConflicts(ValueError):
    """No pair of cut items shares a column; lifting does not apply."""


@dataclass
class LiftResult:
    intervals: dict[int, tuple[int, int]]
    lp_objective: float


def lift_intervals(items: Sequence[PlacedItem], W: int, backend: str = "highs") -> LiftResult:
    """Widest position intervals that keep every original column-sharing pair.

    Solves  max sum (r_j - l_j)  s.t.  l_j + w_j >= r_k + 1 for conflicting
    (j, k), 0 <= l_j <= p_j <= r_j <= W - w_j, then rounds inward and repairs
    any pair the rounding broke. Items without conflicts keep their point.
    """
    K = build_conflicts(items)
    if not any(K.values()):
        raise NoConflicts("no column-sharing pairs among the cut items")
    by_id = {it.j: it for it in items}
    active = [it for it in items if K[it.j]]

    lp = LinearModel("lift")
    lvar, rvar = {}, {}
    for it in active:
        lvar[it.j] = lp.add_var(f"l_{it.j}", 0, it.p, obj=1)
        rvar[it.j] = lp.add_var(f"r_{it.j}", it.p, W - it.w, obj=-1)
    for it in active:
        for k in sorted(K[it.j]):
            lp.add_constraint({lvar[it.j]: 1, rvar[k]: -1}, GE, 1 - it.w, f"keep_{it.j}_{k}")
    res = solve_lp(lp, backend)
    if res.status is not LpStatus.OPTIMAL:
        raise LpError(f"lifting LP ended with status {res.status.value}")

    lo = {it.j: it.p for it in items}
    hi = {it.j: it.p for it in items}
    for it in active:
        lo[it.j] = min(it.p, max(0, math.ceil(res.x[lvar[it.j]] - 1e-9)))
        hi[it.j] = max(it.p, min(W - it.w, math.floor(res.x[rvar[it.j]] + 1e-9)))
    # repair: shrink r toward p first, then raise l; points always satisfy the rows
    changed = True
    while changed:
        changed = False
        for it in active:
            for k in K[it.j]:
                if lo[it.j] + it.w >= hi[k] + 1:
                    continue
                changed = True
                hi[k] = max(by_id[k].p, lo[it.j] + it.w - 1)
                if lo[it.j] + it.w < hi[k] + 1:
                    lo[it.j] = min(it.p, hi[k] + 1 - it.w)
    intervals = {j: (lo[j], hi[j]) for j in lo}
    return LiftResult(intervals, -res.objective)


def intervals_keep_conflicts(items: Sequence[PlacedItem], intervals: dict[int, tuple[int, int]]) -> bool:
    """Pairwise check of the lifting rows after rounding."""
    K = build_conflicts(items)
    w = {it.j: it.w for it in items}
    return all(intervals[j][0] + w[j] >= intervals[k][1] + 1 for j in K for k in K[j])


@dataclass
class CutValidation:
    valid: bool
    checked: int
    counterexample: Optional[dict] = None


def validate_cut(cut: BendersCut, inst: Instance, max_placements: int = 200_000) -> CutValidation:
    """Check a cut against every placement of its own items.

    For each integer x-position vector inside the cut's intervals, the
    brute-force y-check must show the cut items cannot fit below the
    threshold on that strip. If that holds, every packing that puts all cut
    items inside their intervals has ``H_i >= threshold``, so the cut removes
    no feasible packing.
    """
    W = inst.strips[cut.strip].W
    ranges = []
    for t in cut.terms:
        w = inst.items[t.j].w
        if w > W:
            return CutValidation(True, 0)
        ranges.append(range(max(0, t.lo), min(t.hi, W - w) + 1))
    total = math.prod(len(r) for r in ranges)
    if total > max_placements:
        raise ValueError(f"cut has {total} placements to check (limit {max_placements})")
    checked = 0
    for xs in itertools.product(*ranges):
        placed = tuple(PlacedItem(t.j, x, inst.items[t.j].w, inst.items[t.j].h) for t, x in zip(cut.terms, xs))
        yc = YCheckInstance(W, cut.threshold - 1, placed)
        checked += 1
        res = oracle_ycheck(yc)
        if res.feasible:
            return CutValidation(False, checked, {"x": dict(zip(cut.items, xs)), "y": res.y})
    return CutValidation(True, checked)
