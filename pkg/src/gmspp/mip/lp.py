"""LP relaxation solves and re-solvable LP engines used by branch-and-bound."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import highspy
import numpy as np

from .model import Constraint, LinearModel, csr_rows, row_bounds
from .simplex import simplex

DEFAULT_ITERATION_LIMIT = 1_000_000


class LpStatus(enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"
    ITERATION_LIMIT = "IterationLimit"


@dataclass
class LpResult:
    status: LpStatus
    objective: float
    x: np.ndarray
    duals: Optional[np.ndarray] = None
    iterations: int = 0

    @property
    def ok(self) -> bool:
        return self.status is LpStatus.OPTIMAL


class LpError(RuntimeError):
    pass


class HighsEngine:
    """Persistent HiGHS LP with cheap bound changes and row appends.

    Integrality is ignored: the engine always solves the continuous relaxation.
    The basis survives between solves, so re-solves after bound changes or
    appended rows warm start from the previous optimum.
    """

    def __init__(self, model: LinearModel, iteration_limit: int = DEFAULT_ITERATION_LIMIT):
        self.n = model.num_vars
        h = highspy.Highs()
        h.setOptionValue("output_flag", False)
        h.setOptionValue("simplex_iteration_limit", int(iteration_limit))
        h.setOptionValue("presolve", "off")
        c, lb, ub, (indptr, indices, data), senses, rhs = model.arrays()
        inf = highspy.kHighsInf
        self._lb = lb.copy()
        self._ub = ub.copy()
        h.addVars(self.n, np.where(np.isinf(lb), -inf, lb), np.where(np.isinf(ub), inf, ub))
        if self.n:
            h.changeColsCost(self.n, np.arange(self.n, dtype=np.int32), c)
        self.h = h
        self.c = c
        self._add_rows(model.constraints)

    def _add_rows(self, constraints: Sequence[Constraint]) -> None:
        if not constraints:
            return
        indptr, indices, data = csr_rows(constraints)
        inf = highspy.kHighsInf
        lo, hi = zip(*(row_bounds(con.sense, float(con.rhs)) for con in constraints))
        lo = np.array([-inf if math.isinf(v) else v for v in lo])
        hi = np.array([inf if math.isinf(v) else v for v in hi])
        self.h.addRows(len(constraints), lo, hi, len(indices), indptr[:-1], indices, data)

    def add_constraints(self, constraints: Sequence[Constraint]) -> None:
        self._add_rows(constraints)

    def set_bounds(self, lb: np.ndarray, ub: np.ndarray) -> None:
        changed = np.nonzero((lb != self._lb) | (ub != self._ub))[0]
        if changed.size:
            inf = highspy.kHighsInf
            lo = np.where(np.isinf(lb[changed]), -inf, lb[changed])
            hi = np.where(np.isinf(ub[changed]), inf, ub[changed])
            self.h.changeColsBounds(changed.size, changed.astype(np.int32), lo, hi)
            self._lb[changed] = lb[changed]
            self._ub[changed] = ub[changed]

    def solve(self) -> LpResult:
        h = self.h
        h.run()
        status = h.getModelStatus()
        S = highspy.HighsModelStatus
        if status == S.kUnboundedOrInfeasible:
            # rerun without presolve to get a definite answer
            h.setOptionValue("presolve", "off")
            h.run()
            status = h.getModelStatus()
        info = h.getInfo()
        iters = int(info.simplex_iteration_count)
        if status == S.kOptimal:
            sol = h.getSolution()
            x = np.array(sol.col_value)
            duals = np.array(sol.row_dual)
            return LpResult(LpStatus.OPTIMAL, float(self.c @ x) if self.n else 0.0, x, duals, iters)
        if status == S.kInfeasible:
            return LpResult(LpStatus.INFEASIBLE, math.nan, np.zeros(self.n), None, iters)
        if status in (S.kUnbounded, S.kUnboundedOrInfeasible):
            return LpResult(LpStatus.UNBOUNDED, -math.inf, np.zeros(self.n), None, iters)
        if status == S.kIterationLimit:
            return LpResult(LpStatus.ITERATION_LIMIT, math.nan, np.zeros(self.n), None, iters)
        raise LpError(f"HiGHS returned unexpected status {h.modelStatusToString(status)}")


class SimplexEngine:
    """Same interface as :class:`HighsEngine`, backed by the native dense simplex (cold solves)."""

    def __init__(self, model: LinearModel, iteration_limit: int = 20000):
        self.model = model
        self.extra: list[Constraint] = []
        c, lb, ub, _, _, _ = model.arrays()
        self.c = c
        self.lb = lb
        self.ub = ub
        self.iteration_limit = iteration_limit

    def add_constraints(self, constraints: Sequence[Constraint]) -> None:
        self.extra.extend(constraints)

    def set_bounds(self, lb: np.ndarray, ub: np.ndarray) -> None:
        self.lb = lb.copy()
        self.ub = ub.copy()

    def solve(self) -> LpResult:
        rows = list(self.model.constraints) + self.extra
        n = len(self.c)
        A = np.zeros((len(rows), n))
        for r, con in enumerate(rows):
            for v, a in con.coeffs.items():
                A[r, v] = float(a)
        out = simplex(self.c, A, [con.sense for con in rows], [float(con.rhs) for con in rows],
                      self.lb, self.ub, max_iter=self.iteration_limit)
        status = {"optimal": LpStatus.OPTIMAL, "infeasible": LpStatus.INFEASIBLE,
                  "unbounded": LpStatus.UNBOUNDED, "iteration_limit": LpStatus.ITERATION_LIMIT}[out.status]
        return LpResult(status, out.objective, out.x, out.duals, out.iterations)


BACKENDS = {"highs": HighsEngine, "simplex": SimplexEngine}


def make_engine(model: LinearModel, backend: str = "highs"):
    try:
        return BACKENDS[backend](model)
    except KeyError:
        raise ValueError(f"unknown LP backend {backend!r}; choose from {sorted(BACKENDS)}") from None


def solve_lp(model: LinearModel, backend: str = "highs") -> LpResult:
    """Solve the continuous relaxation of ``model`` (integrality flags are ignored)."""
    return make_engine(model, backend).solve()


def dual_bound(model: LinearModel, duals: np.ndarray) -> float:
    """Lagrangian lower bound implied by row multipliers ``duals``.

    Valid for any multipliers with the correct sign per row; equals the LP
    optimum when ``duals`` are optimal. Returns -inf when the multipliers do
    not yield a finite bound.
    """
    c, lb, ub, _, senses, rhs = model.arrays()
    A = model.dense_matrix()
    d = c - A.T @ duals
    total = 0.0
    for r, (sense, b) in enumerate(zip(senses, rhs)):
        y = duals[r]
        if sense == "<=" and y > 1e-12:
            return -math.inf
        if sense == ">=" and y < -1e-12:
            return -math.inf
        total += y * b
    for j, dj in enumerate(d):
        if abs(dj) <= 1e-12:
            continue
        bound = lb[j] if dj > 0 else ub[j]
        if math.isinf(bound):
            return -math.inf
        total += dj * bound
    return total
