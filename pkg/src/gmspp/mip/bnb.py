"""LP-based branch-and-bound with a lazy-constraint callback.

Node selection is best-bound (ties: deeper first, then creation order);
branching picks the most fractional integer variable (ties: lowest index).
Children are evaluated when created, so every queued node carries its own
LP bound.

A lazy callback sees each integer-feasible LP solution that would improve
the incumbent. If it returns constraints they are appended to the model
globally and the node is re-solved; the candidate becomes the incumbent
only when the callback returns nothing.
"""

from __future__ import annotations

import enum
import heapq
import itertools
import logging
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .lp import LpError, LpStatus, make_engine
from .model import Constraint, LinearModel

log = logging.getLogger(__name__)

INT_TOL = 1e-6
CUT_TOL = 1e-6

LazyCallback = Callable[[np.ndarray], Sequence[Constraint]]


class MipStatus(enum.Enum):
    OPTIMAL = "Optimal"
    FEASIBLE = "Feasible"
    INFEASIBLE = "Infeasible"
    TIME_LIMIT = "TimeLimit"


class LazyCutError(RuntimeError):
    """A lazy callback returned a constraint its candidate does not violate."""


@dataclass
class MipResult:
    status: MipStatus
    values: Optional[np.ndarray]
    objective: float
    bound: float
    nodes: int
    wall_time: float
    lazy_constraints: list = field(default_factory=list)
    incumbents: list = field(default_factory=list)

    @property
    def gap(self) -> float:
        if self.values is None or not math.isfinite(self.bound):
            return math.inf
        if self.objective > 0:
            return max(0.0, (self.objective - self.bound) / self.objective)
        return 0.0 if self.objective - self.bound <= 1e-9 else math.inf


@dataclass
class _Node:
    bound: float
    depth: int
    parent: Optional["_Node"]
    change: Optional[tuple[int, float, float]]
    x: Optional[np.ndarray] = None
    branch_var: int = -1


def _fractionality(x: np.ndarray, int_idx: np.ndarray) -> tuple[int, float]:
    if int_idx.size == 0:
        return -1, 0.0
    vals = x[int_idx]
    frac = np.abs(vals - np.round(vals))
    k = int(np.argmax(frac))  # argmax takes the first maximum: lowest index on ties
    return int(int_idx[k]), float(frac[k])


def solve_mip(model: LinearModel, callback: Optional[LazyCallback] = None, time_limit: float = math.inf,
              *, node_limit: Optional[int] = None, backend: str = "highs",
              objective_step: Optional[float] = None, engine=None) -> MipResult:
    """Minimize ``model`` by branch-and-bound.

    ``objective_step`` declares that every solution worth finding has an
    objective on a lattice with this spacing. Node bounds are then rounded up
    to the lattice, so a node is pruned unless it can beat the incumbent by a
    full step, and nodes on a common bound plateau are taken deepest first.
    """
    if not time_limit > 0:
        raise ValueError(f"time_limit must be positive, got {time_limit}")
    start = time.perf_counter()
    deadline = start + time_limit
    engine = engine or make_engine(model, backend)
    _, root_lb, root_ub, _, _, _ = model.arrays()
    int_idx = np.array(model.integer_indices(), dtype=int)
    # integer variables get integral bounds
    if int_idx.size:
        root_lb[int_idx] = np.ceil(root_lb[int_idx] - INT_TOL)
        root_ub[int_idx] = np.floor(root_ub[int_idx] + INT_TOL)

    added: list[Constraint] = []
    incumbents: list[float] = []
    best_x: Optional[np.ndarray] = None
    best_obj = math.inf
    nodes = 0
    seq = itertools.count()

    def cutoff() -> float:
        if best_x is None:
            return math.inf
        tol = 1e-6 * max(1.0, abs(best_obj))
        if objective_step:
            return best_obj - objective_step + tol
        return best_obj - tol

    def lattice(bound: float) -> float:
        if not objective_step or not math.isfinite(bound):
            return bound
        q = bound / objective_step
        return objective_step * math.ceil(q - 1e-6 * max(1.0, abs(q)))

    def bounds_of(node: _Node):
        lb, ub = root_lb.copy(), root_ub.copy()
        chain = []
        cur = node
        while cur is not None and cur.change is not None:
            chain.append(cur.change)
            cur = cur.parent
        for var, lo, hi in reversed(chain):
            lb[var] = max(lb[var], lo)
            ub[var] = min(ub[var], hi)
        return lb, ub

    def evaluate(node: _Node) -> bool:
        """Solve ``node``; return True if it must be branched on."""
        nonlocal best_x, best_obj, nodes
        lb, ub = bounds_of(node)
        if np.any(lb > ub):
            return False
        engine.set_bounds(lb, ub)
        nodes += 1
        while True:
            res = engine.solve()
            if res.status is LpStatus.INFEASIBLE:
                return False
            if res.status is LpStatus.UNBOUNDED:
                raise LpError("LP relaxation is unbounded; branch-and-bound needs bounded relaxations")
            if res.status is not LpStatus.OPTIMAL:
                raise LpError(f"node LP ended with status {res.status.value}")
            if res.objective > cutoff():
                return False
            var, frac = _fractionality(res.x, int_idx)
            if frac > INT_TOL:
                node.bound = lattice(res.objective)
                node.x = res.x
                node.branch_var = var
                return True
            cand = res.x.copy()
            if int_idx.size:
                cand[int_idx] = np.round(cand[int_idx])
            cuts = list(callback(cand)) if callback is not None else []
            if cuts:
                for con in cuts:
                    if con.violation(cand) <= CUT_TOL:
                        raise LazyCutError(
                            f"lazy constraint {con.name!r} is not violated by its candidate "
                            f"(violation {con.violation(cand):.3g})")
                    added.append(con)
                engine.add_constraints(cuts)
                continue
            obj = model.objective_value(cand)
            if obj < best_obj:
                best_obj = obj
                best_x = cand
                incumbents.append(obj)
                log.debug("incumbent %.6g at node %d", obj, nodes)
            return False

    def result(status: MipStatus, bound: float) -> MipResult:
        return MipResult(status, best_x, best_obj if best_x is not None else math.inf, bound, nodes,
                         time.perf_counter() - start, added, incumbents)

    root = _Node(-math.inf, 0, None, None)
    heap: list = []
    if evaluate(root):
        heapq.heappush(heap, (root.bound, 0, next(seq), root))

    while heap:
        if time.perf_counter() >= deadline:
            bound = min(heap[0][0], best_obj)
            return result(MipStatus.TIME_LIMIT, bound)
        if node_limit is not None and nodes >= node_limit:
            bound = min(heap[0][0], best_obj)
            return result(MipStatus.FEASIBLE if best_x is not None else MipStatus.TIME_LIMIT, bound)
        bound, _, _, node = heapq.heappop(heap)
        if bound > cutoff():
            continue
        var = node.branch_var
        val = node.x[var]
        node.x = None  # only the bound is needed from here on
        for change in ((var, -math.inf, math.floor(val)), (var, math.ceil(val), math.inf)):
            child = _Node(bound, node.depth + 1, node, change)
            if evaluate(child):
                heapq.heappush(heap, (child.bound, -child.depth, next(seq), child))

    if best_x is None:
        return result(MipStatus.INFEASIBLE, math.inf)
    return result(MipStatus.OPTIMAL, best_obj)
