"""Model builders: the big-M MIP, the normal-position master, and bound helpers."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional

from .instance import Instance
from .mip import EQ, GE, INF, LE, LinearModel, LpStatus, solve_lp
from .mip.lp import LpError
from .normal_positions import NormalPositionTable, build_table


@dataclass
class BigMVarMap:
    x: dict[tuple[int, int], int]
    y: dict[tuple[int, int], int]
    z: dict[tuple[int, int], int]
    l: dict[tuple[int, int], int]
    b: dict[tuple[int, int], int]
    H: list[int]
    M_x: int
    M_y: int


@dataclass
class MasterVarMap:
    x: dict[tuple[int, int, int], int]
    H: list[int]
    by_item: dict[int, list[tuple[int, int, int]]] = field(default_factory=dict)

    def z(self, values, i: int, j: int) -> float:
        """Assignment indicator: sum over positions of x[i, j, p]."""
        return sum(values[v] for (ii, jj, _), v in self.x.items() if ii == i and jj == j)


def build_bigm(inst: Instance) -> tuple[LinearModel, BigMVarMap]:
    model = LinearModel(f"bigm_{inst.name}")
    M_x = max(s.W for s in inst.strips)
    M_y = sum(it.h for it in inst.items)
    F = [inst.feasible_strips(j) for j in range(inst.n)]

    H = [model.add_var(f"H_{i}", 0, INF, False, s.area_cost) for i, s in enumerate(inst.strips)]
    x, y, z = {}, {}, {}
    for j in range(inst.n):
        for i in F[j]:
            x[i, j] = model.add_var(f"x_{i}_{j}", 0, INF)
            y[i, j] = model.add_var(f"y_{i}_{j}", 0, INF)
            z[i, j] = model.add_binary(f"z_{i}_{j}")
    l, b = {}, {}
    for j in range(inst.n):
        for k in range(inst.n):
            if j != k:
                l[j, k] = model.add_binary(f"l_{j}_{k}")
                b[j, k] = model.add_binary(f"b_{j}_{k}")

    items = inst.items
    for j in range(inst.n):
        wj, hj = items[j].w, items[j].h
        for i in F[j]:
            Wi = inst.strips[i].W
            model.add_constraint({x[i, j]: 1}, LE, Wi - wj, f"xfit_{i}_{j}")
            # y + h <= H + h (1 - z)  <=>  y - H + h z <= 0
            model.add_constraint({y[i, j]: 1, H[i]: -1, z[i, j]: hj}, LE, 0, f"ylink_{i}_{j}")
            model.add_constraint({x[i, j]: 1, z[i, j]: -Wi}, LE, 0, f"xoff_{i}_{j}")
            model.add_constraint({y[i, j]: 1, z[i, j]: -M_y}, LE, 0, f"yoff_{i}_{j}")
        model.add_constraint({z[i, j]: 1 for i in F[j]}, EQ, 1, f"assign_{j}")

    for j in range(inst.n):
        for k in range(inst.n):
            if j == k:
                continue
            for i in F[j]:
                if i not in F[k]:
                    continue
                # x_ij + w_j <= x_ik + M_x (3 - l_jk - z_ij - z_ik)
                model.add_constraint(
                    {x[i, j]: 1, x[i, k]: -1, l[j, k]: M_x, z[i, j]: M_x, z[i, k]: M_x},
                    LE, 3 * M_x - items[j].w, f"sepx_{i}_{j}_{k}")
                model.add_constraint(
                    {y[i, j]: 1, y[i, k]: -1, b[j, k]: M_y, z[i, j]: M_y, z[i, k]: M_y},
                    LE, 3 * M_y - items[j].h, f"sepy_{i}_{j}_{k}")
    for j in range(inst.n):
        for k in range(j + 1, inst.n):
            model.add_constraint({l[j, k]: 1, l[k, j]: 1, b[j, k]: 1, b[k, j]: 1}, EQ, 1, f"disj_{j}_{k}")
    return model, BigMVarMap(x, y, z, l, b, H, M_x, M_y)


def build_master(inst: Instance, table: Optional[NormalPositionTable] = None) -> tuple[LinearModel, MasterVarMap]:
    table = table or build_table(inst)
    model = LinearModel(f"master_{inst.name}")
    H = [model.add_var(f"H_{i}", 0, INF, False, s.area_cost) for i, s in enumerate(inst.strips)]
    x: dict[tuple[int, int, int], int] = {}
    by_item: dict[int, list] = {j: [] for j in range(inst.n)}
    for j in range(inst.n):
        for i in inst.feasible_strips(j):
            for p in table[i, j]:
                x[i, j, p] = model.add_binary(f"x_{i}_{j}_{p}")
                by_item[j].append((i, j, p))
    for j in range(inst.n):
        model.add_constraint({x[key]: 1 for key in by_item[j]}, EQ, 1, f"assign_{j}")
    for i, strip in enumerate(inst.strips):
        # loads[q] collects h_j * x_ijp over positions covering column q
        loads: list[dict[int, int]] = [dict() for _ in range(strip.W)]
        for j, it in enumerate(inst.items):
            for p in table[i, j]:
                v = x[i, j, p]
                for q in range(p, p + it.w):
                    loads[q][v] = it.h
        for q, row in enumerate(loads):
            if not row:
                continue
            row[H[i]] = -1
            model.add_constraint(row, LE, 0, f"load_{i}_{q}")
    return model, MasterVarMap(x, H, by_item)


def lp_pc_bound(inst: Instance, table: Optional[NormalPositionTable] = None, backend: str = "highs") -> float:
    """Value of the LP relaxation of the assignment + column-load master (no cuts)."""
    model, _ = build_master(inst, table)
    res = solve_lp(model, backend)
    if res.status is not LpStatus.OPTIMAL:
        raise LpError(f"LP-PC relaxation ended with status {res.status.value}")
    return res.objective


def lp_bigm_bound(inst: Instance, backend: str = "highs") -> float:
    """Value of the big-M model with all binaries relaxed to [0, 1]."""
    model, _ = build_bigm(inst)
    res = solve_lp(model, backend)
    if res.status is not LpStatus.OPTIMAL:
        raise LpError(f"LP-BigM relaxation ended with status {res.status.value}")
    return res.objective


def inject_lower_bound(model: LinearModel, value) -> LinearModel:
    """Copy of ``model`` with the row ``objective >= value`` appended."""
    out = model.copy()
    out.add_constraint(out.objective_row(), GE, value, "objective_lower_bound")
    return out


def objective_lattice(inst: Instance) -> Fraction:
    """Spacing of achievable objective values when all strip heights are integers.

    Every objective is an integer combination of the per-height costs
    C_i * W_i, so their rational gcd divides every difference.
    """
    costs = [s.area_cost for s in inst.strips]
    den = 1
    for c in costs:
        den = den * c.denominator // gcd(den, c.denominator)
    g = 0
    for c in costs:
        g = gcd(g, int(c * den))
    return Fraction(g, den)
