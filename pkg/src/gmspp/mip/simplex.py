"""Dense bounded-variable primal simplex.

Solves ``min c^T x  s.t.  A x <sense> b,  lb <= x <= ub`` by adding one slack
per row (bounded according to the row sense) and running a two-phase primal
simplex in which nonbasic variables sit at either bound. Dantzig pricing is
used until a run of degenerate pivots, after which Bland's rule takes over
to rule out cycling.

Meant for small models and as an independent cross-check of the HiGHS
backend; it refactors the basis with a dense solve on every iteration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

FEAS_TOL = 1e-7
PIVOT_TOL = 1e-9
OPT_TOL = 1e-9
DEGENERATE_STREAK = 30

_LB, _UB, _FREE, _BASIC = 0, 1, 2, 3


@dataclass
class SimplexOutcome:
    status: str  # "optimal" | "infeasible" | "unbounded" | "iteration_limit"
    x: np.ndarray
    objective: float
    duals: np.ndarray
    iterations: int


class _Tableau:
    def __init__(self, A, b, cost, lb, ub, basis, status):
        self.A = A
        self.b = b
        self.cost = cost
        self.lb = lb
        self.ub = ub
        self.basis = basis
        self.status = status
        self.iterations = 0

    def nonbasic_values(self) -> np.ndarray:
        x = np.zeros(self.A.shape[1])
        at_lb = self.status == _LB
        at_ub = self.status == _UB
        x[at_lb] = self.lb[at_lb]
        x[at_ub] = self.ub[at_ub]
        return x

    def basic_solution(self):
        x = self.nonbasic_values()
        B = self.A[:, self.basis]
        x[self.basis] = 0.0
        xB = np.linalg.solve(B, self.b - self.A @ x)
        x[self.basis] = xB
        return x, B

    def run(self, max_iter: int, detect_unbounded: bool = True) -> str:
        streak = 0
        bland = False
        m, n = self.A.shape
        while True:
            if self.iterations >= max_iter:
                return "iteration_limit"
            x, B = self.basic_solution()
            y = np.linalg.solve(B.T, self.cost[self.basis])
            d = self.cost - self.A.T @ y

            candidates = []
            for j in range(n):
                st = self.status[j]
                if st == _BASIC:
                    continue
                if st == _LB and d[j] < -OPT_TOL:
                    candidates.append(j)
                elif st == _UB and d[j] > OPT_TOL:
                    candidates.append(j)
                elif st == _FREE and abs(d[j]) > OPT_TOL:
                    candidates.append(j)
            if not candidates:
                return "optimal"
            if bland:
                enter = candidates[0]
            else:
                enter = max(candidates, key=lambda j: (abs(d[j]), -j))
            direction = 1.0 if d[enter] < 0 else -1.0

            alpha = np.linalg.solve(B, self.A[:, enter])
            rate = -direction * alpha  # d x_B / d t
            step = math.inf
            leave = -1
            leave_to = _LB
            best_pivot = 0.0
            for r in range(m):
                k = self.basis[r]
                if rate[r] < -PIVOT_TOL and math.isfinite(self.lb[k]):
                    t = max((x[k] - self.lb[k]) / -rate[r], 0.0)
                    to = _LB
                elif rate[r] > PIVOT_TOL and math.isfinite(self.ub[k]):
                    t = max((self.ub[k] - x[k]) / rate[r], 0.0)
                    to = _UB
                else:
                    continue
                better = t < step - 1e-12
                tie = not better and abs(t - step) <= 1e-12
                if tie:
                    if bland:
                        better = k < self.basis[leave]
                    else:
                        better = abs(rate[r]) > best_pivot
                if better:
                    step, leave, leave_to, best_pivot = t, r, to, abs(rate[r])

            span = self.ub[enter] - self.lb[enter]
            self.iterations += 1
            if span <= step:
                if not math.isfinite(span):
                    if detect_unbounded:
                        return "unbounded"
                    return "optimal"
                # bound flip, basis unchanged
                self.status[enter] = _UB if self.status[enter] == _LB else _LB
                step = span
            else:
                if leave < 0:
                    return "unbounded"
                out = self.basis[leave]
                self.status[out] = leave_to
                self.basis[leave] = enter
                self.status[enter] = _BASIC
            if step <= FEAS_TOL:
                streak += 1
                if streak >= DEGENERATE_STREAK:
                    bland = True
            else:
                streak = 0


def simplex(c, A, senses, b, lb, ub, max_iter: int = 20000) -> SimplexOutcome:
    """Minimize ``c @ x`` over ``A x <senses> b``, ``lb <= x <= ub`` (dense arrays)."""
    c = np.asarray(c, dtype=float)
    A = np.asarray(A, dtype=float).reshape(len(senses), len(c))
    b = np.asarray(b, dtype=float)
    lb = np.asarray(lb, dtype=float)
    ub = np.asarray(ub, dtype=float)
    m, n = A.shape
    if np.any(lb > ub + FEAS_TOL):
        return SimplexOutcome("infeasible", np.zeros(n), math.nan, np.zeros(m), 0)

    # structural | slack | artificial
    slack_lb = np.array([0.0 if s == "<=" else (-math.inf if s == ">=" else 0.0) for s in senses])
    slack_ub = np.array([math.inf if s == "<=" else 0.0 for s in senses])
    full_lb = np.concatenate([lb, slack_lb])
    full_ub = np.concatenate([ub, slack_ub])
    status = np.empty(n + m, dtype=int)
    for j in range(n + m):
        if math.isfinite(full_lb[j]):
            status[j] = _LB
        elif math.isfinite(full_ub[j]):
            status[j] = _UB
        else:
            status[j] = _FREE
    A_full = np.hstack([A, np.eye(m)])
    tmp = _Tableau(A_full, b, np.zeros(n + m), full_lb, full_ub, np.array([], dtype=int), status)
    residual = b - A_full @ tmp.nonbasic_values()
    signs = np.where(residual >= 0, 1.0, -1.0)

    A_p1 = np.hstack([A_full, np.diag(signs)])
    lb_p1 = np.concatenate([full_lb, np.zeros(m)])
    ub_p1 = np.concatenate([full_ub, np.full(m, math.inf)])
    cost_p1 = np.concatenate([np.zeros(n + m), np.ones(m)])
    status_p1 = np.concatenate([status, np.full(m, _BASIC)])
    basis = np.arange(n + m, n + 2 * m)
    tab = _Tableau(A_p1, b, cost_p1, lb_p1, ub_p1, basis, status_p1)
    outcome = tab.run(max_iter, detect_unbounded=False)
    if outcome == "iteration_limit":
        return SimplexOutcome(outcome, np.zeros(n), math.nan, np.zeros(m), tab.iterations)
    x, _ = tab.basic_solution()
    if x[n + m:].sum() > FEAS_TOL * max(1.0, np.abs(b).max(initial=0.0)):
        return SimplexOutcome("infeasible", x[:n], math.nan, np.zeros(m), tab.iterations)

    # phase 2: artificials pinned at zero
    tab.ub[n + m:] = 0.0
    for k in range(n + m, n + 2 * m):
        if tab.status[k] != _BASIC:
            tab.status[k] = _LB
    tab.cost = np.concatenate([c, np.zeros(2 * m)])
    outcome = tab.run(max_iter)
    x, B = tab.basic_solution()
    y = np.linalg.solve(B.T, tab.cost[tab.basis])
    xs = x[:n]
    # snap values that are within tolerance of a bound
    xs = np.where(np.abs(xs - lb) <= FEAS_TOL, lb, xs)
    xs = np.where(np.abs(xs - ub) <= FEAS_TOL, ub, xs)
    obj = float(c @ xs) if outcome == "optimal" else math.nan
    return SimplexOutcome(outcome, xs, obj, y, tab.iterations)
