"""Solve drivers (BendM, BigM, BigM-LE), packings and their verification."""

from __future__ import annotations

import json
import logging
import math
import time
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .cuts import (BendersCut, CutStage, NoConflicts, combinatorial_cut, lift_intervals, lifted_cut,
                   minimal_infeasible_subset, standard_cut)
from .formulations import (BigMVarMap, build_bigm, build_master, inject_lower_bound, lp_pc_bound,
                           objective_lattice)
from .instance import Instance, InstanceError, parse_fraction
from .mip import MipStatus, solve_mip
from .normal_positions import build_table
from .ycheck import DEFAULT_CONFIG, PlacedItem, PruneConfig, YCheckInstance, share_column, ycheck

log = logging.getLogger(__name__)


class SolveError(RuntimeError):
    """A solver produced something that fails verification."""


# --------------------------------------------------------------------------
# packings
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Placement:
    strip: int
    x: int
    y: int


@dataclass
class Packing:
    placements: dict[int, Placement]

    def heights(self, inst: Instance) -> list[int]:
        H = [0] * inst.m
        for j, pl in self.placements.items():
            H[pl.strip] = max(H[pl.strip], pl.y + inst.items[j].h)
        return H

    def objective(self, inst: Instance) -> Fraction:
        return sum((s.area_cost * h for s, h in zip(inst.strips, self.heights(inst))), Fraction(0))


@dataclass
class PackingCheck:
    ok: bool
    objective: Optional[Fraction]
    heights: list[int]
    violations: list[str]


def verify_packing(inst: Instance, packing: Packing) -> PackingCheck:
    problems = []
    for j in range(inst.n):
        if j not in packing.placements:
            problems.append(f"item {j} is not packed")
    for j, pl in packing.placements.items():
        if not 0 <= j < inst.n:
            problems.append(f"unknown item {j}")
            continue
        if not 0 <= pl.strip < inst.m:
            problems.append(f"item {j} on unknown strip {pl.strip}")
            continue
        it = inst.items[j]
        if pl.x < 0 or pl.y < 0:
            problems.append(f"item {j} has negative coordinates ({pl.x}, {pl.y})")
        if pl.x + it.w > inst.strips[pl.strip].W:
            problems.append(f"item {j} crosses the border of strip {pl.strip}")
    placed = sorted((j, pl) for j, pl in packing.placements.items() if 0 <= j < inst.n and 0 <= pl.strip < inst.m)
    for a in range(len(placed)):
        ja, pa = placed[a]
        for b in range(a + 1, len(placed)):
            jb, pb = placed[b]
            if pa.strip != pb.strip:
                continue
            ia, ib = inst.items[ja], inst.items[jb]
            if share_column(pa.x, ia.w, pb.x, ib.w) and pa.y < pb.y + ib.h and pb.y < pa.y + ia.h:
                problems.append(f"items {ja} and {jb} overlap on strip {pa.strip}")
    if problems:
        return PackingCheck(False, None, [], problems)
    return PackingCheck(True, packing.objective(inst), packing.heights(inst), [])


def solution_to_dict(inst: Instance, packing: Packing) -> dict:
    heights = packing.heights(inst)
    strips = []
    for i in range(inst.m):
        items = [{"j": j, "x": pl.x, "y": pl.y}
                 for j, pl in sorted(packing.placements.items()) if pl.strip == i]
        strips.append({"i": i, "H": heights[i], "items": items})
    obj = packing.objective(inst)
    return {"objective": f"{obj.numerator}/{obj.denominator}", "strips": strips}


def solution_from_dict(data: dict) -> tuple[Fraction, Packing]:
    try:
        placements = {}
        for st in data["strips"]:
            for it in st["items"]:
                placements[int(it["j"])] = Placement(int(st["i"]), int(it["x"]), int(it["y"]))
        return parse_fraction(data["objective"]), Packing(placements)
    except (KeyError, TypeError, ValueError) as exc:
        raise InstanceError(f"solution JSON schema violation: {exc}") from None


def save_solution(inst: Instance, packing: Packing) -> str:
    return json.dumps(solution_to_dict(inst, packing), indent=1)


# --------------------------------------------------------------------------
# reports
# --------------------------------------------------------------------------

@dataclass
class SolveConfig:
    time_limit: float = 900.0
    cut_stage: CutStage = CutStage.LIFTED
    prune: PruneConfig = DEFAULT_CONFIG
    backend: str = "highs"
    node_limit: Optional[int] = None


@dataclass
class SolveReport:
    method: str
    status: str
    packing: Optional[Packing]
    objective: Optional[Fraction]
    lower_bound: Fraction
    wall_time: float
    nodes: int = 0
    cuts: Counter = field(default_factory=Counter)
    ycheck_calls: int = 0
    ycheck_time: float = 0.0
    cut_log: list = field(default_factory=list)
    lp_pc: Optional[float] = None

    @property
    def gap(self) -> float:
        """Relative gap (obj - lb) / obj."""
        if self.objective is None:
            return math.inf
        if self.objective == 0:
            return 0.0
        return float(max(Fraction(0), self.objective - Fraction(self.lower_bound)) / self.objective)

    @property
    def optimal(self) -> bool:
        return self.status == MipStatus.OPTIMAL.value


def _as_fraction(value: float) -> Fraction:
    """Recover a short rational from a float LP value (LP data here are rational)."""
    if not math.isfinite(value):
        raise ValueError(f"non-finite bound {value}")
    snapped = Fraction(value).limit_denominator(10 ** 6)
    if abs(float(snapped) - value) <= 1e-9 * max(1.0, abs(value)):
        return snapped
    return Fraction(value)


def _safe_lower(value: float) -> Fraction:
    """Rational not above ``value`` up to solver tolerance."""
    snapped = _as_fraction(value)
    if float(snapped) > value + 1e-9 * max(1.0, abs(value)):
        snapped = Fraction(value) - Fraction(1, 10 ** 6)
    return snapped


# --------------------------------------------------------------------------
# BendM
# --------------------------------------------------------------------------

class _BendmCallback:
    def __init__(self, inst: Instance, model, varmap, table, config: SolveConfig):
        self.inst = inst
        self.model = model
        self.vm = varmap
        self.table = table
        self.cfg = config
        self.key_of = {v: key for key, v in varmap.x.items()}
        self.x_vars = sorted(varmap.x.values())
        self.best: Optional[Packing] = None
        self.best_obj: Optional[Fraction] = None
        self.cuts = Counter()
        self.cut_log: list[BendersCut] = []
        self.ycheck_calls = 0
        self.ycheck_time = 0.0
        self.rounds = 0

    def _ycheck(self, yc: YCheckInstance):
        t0 = time.perf_counter()
        try:
            return ycheck(yc, self.cfg.prune)
        finally:
            self.ycheck_calls += 1
            self.ycheck_time += time.perf_counter() - t0

    def _cut(self, i: int, yc: YCheckInstance, Hbar: int) -> BendersCut:
        stage = self.cfg.cut_stage
        if stage is CutStage.STANDARD:
            return standard_cut(i, yc.items, Hbar)
        t0 = time.perf_counter()
        core = minimal_infeasible_subset(yc, self.cfg.prune)
        self.ycheck_time += time.perf_counter() - t0
        self.ycheck_calls += len(yc.items) + 1
        placed = [it for it in yc.items if it.j in set(core)]
        if stage is CutStage.LIFTED:
            try:
                lift = lift_intervals(placed, yc.W, self.cfg.backend)
                return lifted_cut(i, lift.intervals, Hbar + 1)
            except NoConflicts:
                pass
        return combinatorial_cut(i, placed, Hbar + 1)

    def __call__(self, cand):
        inst = self.inst
        self.rounds += 1
        per_strip: list[list[PlacedItem]] = [[] for _ in range(inst.m)]
        for v in self.x_vars:
            if cand[v] > 0.5:
                i, j, p = self.key_of[v]
                it = inst.items[j]
                per_strip[i].append(PlacedItem(j, p, it.w, it.h))
        new_cuts = []
        witnesses = {}
        for i in range(inst.m):
            H_star = float(cand[self.vm.H[i]])
            Hbar = round(H_star)
            if abs(H_star - Hbar) > 1e-6:
                raise SolveError(f"master height H_{i} = {H_star!r} is not integral at an integer candidate")
            yc = YCheckInstance(inst.strips[i].W, Hbar, tuple(per_strip[i]))
            res = self._ycheck(yc)
            if res.feasible:
                witnesses[i] = res.y
                continue
            cut = self._cut(i, yc, Hbar)
            self.cuts[cut.stage.value] += 1
            self.cut_log.append(cut)
            new_cuts.append(cut.to_constraint(self.model, self.vm.x, self.vm.H, self.table,
                                              f"benders_{len(self.cut_log)}"))
        if new_cuts:
            return new_cuts

        placements = {}
        for i, items in enumerate(per_strip):
            for it in items:
                placements[it.j] = Placement(i, it.p, witnesses[i][it.j])
        packing = Packing(placements)
        check = verify_packing(inst, packing)
        if not check.ok:
            raise SolveError(f"assembled packing fails verification: {check.violations}")
        master_obj = self.model.objective_value(cand)
        if abs(float(check.objective) - master_obj) > 1e-6 * max(1.0, abs(master_obj)):
            raise SolveError(f"realized objective {check.objective} differs from master value {master_obj}")
        if self.best_obj is None or check.objective < self.best_obj:
            self.best, self.best_obj = packing, check.objective
        return []


def solve_bendm(inst: Instance, config: SolveConfig = SolveConfig()) -> SolveReport:
    start = time.perf_counter()
    table = build_table(inst)
    model, vm = build_master(inst, table)
    cb = _BendmCallback(inst, model, vm, table, config)
    remaining = config.time_limit - (time.perf_counter() - start)
    if remaining <= 0:
        return SolveReport("bendm", MipStatus.TIME_LIMIT.value, None, None, Fraction(0),
                           time.perf_counter() - start)
    res = solve_mip(model, cb, remaining, node_limit=config.node_limit, backend=config.backend,
                    objective_step=float(objective_lattice(inst)))
    if res.status is MipStatus.INFEASIBLE:
        raise SolveError("master reported infeasible; every instance has a feasible packing")
    obj = cb.best_obj
    if res.status is MipStatus.OPTIMAL:
        lb = obj
    else:
        lb = _safe_lower(res.bound) if math.isfinite(res.bound) else Fraction(0)
        if obj is not None:
            lb = min(lb, obj)
    return SolveReport("bendm", res.status.value, cb.best, obj, lb, time.perf_counter() - start, res.nodes,
                       cb.cuts, cb.ycheck_calls, cb.ycheck_time, cb.cut_log)


# --------------------------------------------------------------------------
# big-M methods
# --------------------------------------------------------------------------

def _compact(inst: Instance, vm: BigMVarMap, values, strip_of: dict[int, int]) -> Packing:
    """Coordinates from the relative-position binaries: every item as low/left as the order allows."""
    placements = {}
    for i in range(inst.m):
        members = sorted(j for j, s in strip_of.items() if s == i)
        left = {(j, k) for j in members for k in members if j != k and values[vm.l[j, k]] > 0.5}
        below = {(j, k) for j in members for k in members if j != k and values[vm.b[j, k]] > 0.5}
        xs = _longest_path(members, left, {j: inst.items[j].w for j in members})
        ys = _longest_path(members, below, {j: inst.items[j].h for j in members})
        for j in members:
            placements[j] = Placement(i, xs[j], ys[j])
    return Packing(placements)


def _longest_path(nodes, arcs, length) -> dict[int, int]:
    pos = {j: 0 for j in nodes}
    for _ in range(len(nodes)):
        changed = False
        for j, k in arcs:
            if pos[j] + length[j] > pos[k]:
                pos[k] = pos[j] + length[j]
                changed = True
        if not changed:
            return pos
    raise SolveError("relative-position binaries contain a cycle")


def decode_bigm(inst: Instance, vm: BigMVarMap, values) -> Packing:
    strip_of = {}
    for j in range(inst.n):
        options = [(values[vm.z[i, j]], i) for i in inst.feasible_strips(j)]
        strip_of[j] = max(options)[1]
    solver_H = [float(values[v]) for v in vm.H]
    placements = {j: Placement(i, round(values[vm.x[i, j]]), round(values[vm.y[i, j]])) for j, i in strip_of.items()}
    packing = Packing(placements)
    check = verify_packing(inst, packing)
    if not check.ok or any(h > Hs + 1e-6 for h, Hs in zip(check.heights, solver_H)):
        packing = _compact(inst, vm, values, strip_of)
        check = verify_packing(inst, packing)
    if not check.ok:
        raise SolveError(f"big-M solution does not decode to a valid packing: {check.violations}")
    if any(h > Hs + 1e-6 for h, Hs in zip(check.heights, solver_H)):
        raise SolveError(f"decoded heights {check.heights} exceed solver heights {solver_H}")
    return packing


def _solve_bigm_model(inst, model, vm, method, config, start, injected=None, lp_pc=None) -> SolveReport:
    remaining = config.time_limit - (time.perf_counter() - start)
    if remaining <= 0:
        lb = injected if injected is not None else Fraction(0)
        return SolveReport(method, MipStatus.TIME_LIMIT.value, None, None, lb, time.perf_counter() - start,
                           lp_pc=lp_pc)
    res = solve_mip(model, None, remaining, node_limit=config.node_limit, backend=config.backend,
                    objective_step=float(objective_lattice(inst)))
    if res.status is MipStatus.INFEASIBLE:
        raise SolveError("big-M model reported infeasible")
    packing = decode_bigm(inst, vm, res.values) if res.values is not None else None
    obj = packing.objective(inst) if packing is not None else None
    if res.status is MipStatus.OPTIMAL:
        lb = obj
    else:
        lb = _safe_lower(res.bound) if math.isfinite(res.bound) else Fraction(0)
        if injected is not None:
            lb = max(lb, injected)
        if obj is not None:
            lb = min(lb, obj)
    return SolveReport(method, res.status.value, packing, obj, lb, time.perf_counter() - start, res.nodes,
                       lp_pc=lp_pc)


def solve_bigm(inst: Instance, config: SolveConfig = SolveConfig()) -> SolveReport:
    start = time.perf_counter()
    model, vm = build_bigm(inst)
    return _solve_bigm_model(inst, model, vm, "bigm", config, start)


def solve_bigm_le(inst: Instance, config: SolveConfig = SolveConfig()) -> SolveReport:
    """Big-M MIP with the LP-PC value added as an objective lower bound; one shared time budget."""
    start = time.perf_counter()
    value = lp_pc_bound(inst, backend=config.backend)
    injected = _safe_lower(value)
    model, vm = build_bigm(inst)
    model = inject_lower_bound(model, injected)
    return _solve_bigm_model(inst, model, vm, "bigm-le", config, start, injected, value)
