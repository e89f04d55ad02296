"""Brute-force exact solver for tiny instances (the reference for equivalence tests).

Strips interact only through the item assignment, so the optimum is the
minimum over assignments of the sum of per-strip costs, each strip's height
being the exact strip-packing optimum of its item set. That optimum is found
by enumerating x-position vectors and, per vector, the smallest height the
exhaustive y-oracle accepts.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .bendm import Packing, Placement, verify_packing
from .instance import Instance
from .ycheck import PlacedItem, YCheckInstance, oracle_ycheck

MAX_ITEMS = 7
MAX_STRIPS = 3


class OracleGuardError(ValueError):
    """Instance too large for exhaustive enumeration."""


@dataclass
class OracleResult:
    objective: Fraction
    packing: Packing
    heights: list[int]


def _subset_sums(values, cap: int) -> list[int]:
    sums = {0}
    for v in values:
        sums |= {s + v for s in sums if s + v <= cap}
    return sorted(sums)


def strip_min_height(W: int, dims: tuple[tuple[int, int], ...], normal: bool = True,
                     ) -> tuple[int, Optional[list[tuple[int, int]]]]:
    """Minimal height of one strip holding items ``dims`` (w, h), with (x, y) per item.

    ``normal=False`` enumerates every integer x instead of normal positions.
    """
    return _strip_min_height(W, tuple(dims), normal)


@lru_cache(maxsize=None)
def _strip_min_height(W: int, dims: tuple[tuple[int, int], ...], normal: bool):
    n = len(dims)
    if n == 0:
        return 0, []
    if any(w > W for w, _ in dims):
        raise ValueError(f"an item is wider than the strip ({W})")
    choices = []
    for k, (w, _) in enumerate(dims):
        if normal:
            choices.append(_subset_sums([dims[t][0] for t in range(n) if t != k], W - w))
        else:
            choices.append(list(range(W - w + 1)))

    # stacking everything at x = 0 always works
    best = sum(h for _, h in dims)
    best_xy = [(0, sum(h for _, h in dims[:k])) for k in range(n)]
    loads = [0] * W
    xs = [0] * n

    def placed(upto: int, H: int) -> YCheckInstance:
        return YCheckInstance(W, H, tuple(PlacedItem(k, xs[k], dims[k][0], dims[k][1]) for k in range(upto)))

    def search(k: int) -> None:
        nonlocal best, best_xy
        if k == n:
            lo, hi = max(loads), best - 1
            if lo > hi or not oracle_ycheck(placed(n, hi)).feasible:
                return
            while lo < hi:
                mid = (lo + hi) // 2
                if oracle_ycheck(placed(n, mid)).feasible:
                    hi = mid
                else:
                    lo = mid + 1
            y = oracle_ycheck(placed(n, hi)).y
            best, best_xy = hi, [(xs[t], y[t]) for t in range(n)]
            return
        w, h = dims[k]
        for x in choices[k]:
            if any(loads[q] + h >= best for q in range(x, x + w)):
                continue
            for q in range(x, x + w):
                loads[q] += h
            xs[k] = x
            # the items placed so far must already fit strictly below the incumbent
            if k == 0 or oracle_ycheck(placed(k + 1, best - 1)).feasible:
                search(k + 1)
            for q in range(x, x + w):
                loads[q] -= h

    search(0)
    return best, best_xy


def solve_exact(inst: Instance, normal: bool = True) -> OracleResult:
    if inst.n > MAX_ITEMS or inst.m > MAX_STRIPS:
        raise OracleGuardError(f"oracle handles n <= {MAX_ITEMS} and m <= {MAX_STRIPS}, got n={inst.n}, m={inst.m}")
    options = [inst.feasible_strips(j) for j in range(inst.n)]
    best_obj: Optional[Fraction] = None
    best_assign = None
    # assignments in lexicographic order; first minimum wins
    for assign in itertools.product(*options):
        total = Fraction(0)
        for i, strip in enumerate(inst.strips):
            dims = tuple((inst.items[j].w, inst.items[j].h) for j in range(inst.n) if assign[j] == i)
            total += strip.area_cost * _strip_min_height(strip.W, dims, normal)[0]
            if best_obj is not None and total >= best_obj:
                break
        else:
            if best_obj is None or total < best_obj:
                best_obj, best_assign = total, assign

    placements = {}
    for i, strip in enumerate(inst.strips):
        members = [j for j in range(inst.n) if best_assign[j] == i]
        dims = tuple((inst.items[j].w, inst.items[j].h) for j in members)
        _, xy = _strip_min_height(strip.W, dims, normal)
        for j, (x, y) in zip(members, xy):
            placements[j] = Placement(i, x, y)
    packing = Packing(placements)
    check = verify_packing(inst, packing)
    if not check.ok or check.objective != best_obj:
        raise AssertionError(f"oracle packing fails verification: {check.violations}")
    return OracleResult(best_obj, packing, check.heights)
