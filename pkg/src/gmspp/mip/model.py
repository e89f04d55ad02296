"""Solver-agnostic linear / mixed-integer model."""

from __future__ import annotations

import copy
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

LE, GE, EQ = "<=", ">=", "=="
SENSES = (LE, GE, EQ)
INF = math.inf


def _num(x):
    """Keep ints/Fractions exact; floats pass through (infinities included)."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, float):
        return x
    if isinstance(x, Real):
        return float(x)
    raise TypeError(f"not a number: {x!r}")


@dataclass
class Variable:
    name: str
    lb: object = 0
    ub: object = INF
    integer: bool = False
    obj: object = 0

    @property
    def is_binary(self) -> bool:
        return self.integer and self.lb == 0 and self.ub == 1


@dataclass
class Constraint:
    """Sparse row ``sum(coeffs[v] * x[v]) <sense> rhs``."""

    coeffs: dict
    sense: str
    rhs: object
    name: str = ""

    def __post_init__(self):
        if self.sense not in SENSES:
            raise ValueError(f"bad constraint sense {self.sense!r}")
        self.coeffs = {int(v): _num(a) for v, a in self.coeffs.items() if a != 0}
        self.rhs = _num(self.rhs)

    def activity(self, values: Sequence[float]) -> float:
        return float(sum(float(a) * values[v] for v, a in self.coeffs.items()))

    def violation(self, values: Sequence[float]) -> float:
        """Positive amount by which ``values`` violate the row, else <= 0."""
        lhs = self.activity(values)
        rhs = float(self.rhs)
        if self.sense == LE:
            return lhs - rhs
        if self.sense == GE:
            return rhs - lhs
        return abs(lhs - rhs)

    def exact_violation(self, values: Sequence) -> Fraction:
        lhs = sum(Fraction(a) * Fraction(values[v]) for v, a in self.coeffs.items())
        rhs = Fraction(self.rhs)
        if self.sense == LE:
            return lhs - rhs
        if self.sense == GE:
            return rhs - lhs
        return abs(lhs - rhs)


class ModelError(ValueError):
    pass


class LinearModel:
    """Minimization model with bounded (optionally integer) variables and linear rows."""

    def __init__(self, name: str = "model"):
        self.name = name
        self.variables: list[Variable] = []
        self.constraints: list[Constraint] = []
        self._var_index: dict[str, int] = {}
        self._con_names: set[str] = set()

    # -- construction -----------------------------------------------------
    def add_var(self, name: str, lb=0, ub=INF, integer: bool = False, obj=0) -> int:
        if name in self._var_index:
            raise ModelError(f"duplicate variable name {name!r}")
        lb, ub = _num(lb), _num(ub)
        if lb > ub:
            raise ModelError(f"variable {name!r}: lb {lb} > ub {ub}")
        idx = len(self.variables)
        self.variables.append(Variable(name, lb, ub, integer, _num(obj)))
        self._var_index[name] = idx
        return idx

    def add_binary(self, name: str, obj=0) -> int:
        return self.add_var(name, 0, 1, True, obj)

    def make_constraint(self, coeffs: Mapping[int, object], sense: str, rhs, name: str = "") -> Constraint:
        con = Constraint(dict(coeffs), sense, rhs, name)
        n = len(self.variables)
        for v in con.coeffs:
            if not 0 <= v < n:
                raise ModelError(f"constraint {name!r} references unknown variable {v}")
        return con

    def add_constraint(self, coeffs: Mapping[int, object], sense: str, rhs, name: str = "") -> Constraint:
        con = self.make_constraint(coeffs, sense, rhs, name or f"c{len(self.constraints)}")
        self.append(con)
        return con

    def append(self, con: Constraint) -> None:
        if not con.name:
            con.name = f"c{len(self.constraints)}"
        if con.name in self._con_names:
            raise ModelError(f"duplicate constraint name {con.name!r}")
        self._con_names.add(con.name)
        self.constraints.append(con)

    # -- queries ----------------------------------------------------------
    @property
    def num_vars(self) -> int:
        return len(self.variables)

    @property
    def num_constraints(self) -> int:
        return len(self.constraints)

    def var(self, name: str) -> int:
        return self._var_index[name]

    def has_var(self, name: str) -> bool:
        return name in self._var_index

    def integer_indices(self) -> list[int]:
        return [k for k, v in enumerate(self.variables) if v.integer]

    def objective_row(self) -> dict[int, object]:
        return {k: v.obj for k, v in enumerate(self.variables) if v.obj != 0}

    def objective_value(self, values: Sequence[float]) -> float:
        return float(sum(float(v.obj) * values[k] for k, v in enumerate(self.variables) if v.obj != 0))

    def exact_objective(self, values: Sequence) -> Fraction:
        return sum((Fraction(v.obj) * Fraction(values[k])
                    for k, v in enumerate(self.variables) if v.obj != 0), Fraction(0))

    def max_violation(self, values: Sequence[float], extra: Iterable[Constraint] = ()) -> float:
        worst = 0.0
        for con in list(self.constraints) + list(extra):
            worst = max(worst, con.violation(values))
        for k, v in enumerate(self.variables):
            worst = max(worst, float(v.lb) - values[k], values[k] - float(v.ub))
        return worst

    # -- transforms -------------------------------------------------------
    def copy(self) -> "LinearModel":
        return copy.deepcopy(self)

    def relaxed(self) -> "LinearModel":
        out = self.copy()
        for v in out.variables:
            v.integer = False
        return out

    def arrays(self):
        """Float data: (c, lb, ub, A_rows, senses, rhs) with A_rows as CSR triplet."""
        n = self.num_vars
        c = np.array([float(v.obj) for v in self.variables], dtype=float).reshape(n)
        lb = np.array([float(v.lb) for v in self.variables], dtype=float).reshape(n)
        ub = np.array([float(v.ub) for v in self.variables], dtype=float).reshape(n)
        indptr, indices, data = csr_rows(self.constraints)
        senses = [con.sense for con in self.constraints]
        rhs = np.array([float(con.rhs) for con in self.constraints], dtype=float)
        return c, lb, ub, (indptr, indices, data), senses, rhs

    def dense_matrix(self) -> np.ndarray:
        A = np.zeros((self.num_constraints, self.num_vars))
        for r, con in enumerate(self.constraints):
            for v, a in con.coeffs.items():
                A[r, v] = float(a)
        return A

    def __repr__(self) -> str:
        return f"LinearModel({self.name!r}, vars={self.num_vars}, rows={self.num_constraints})"


def csr_rows(constraints: Sequence[Constraint]):
    indptr = [0]
    indices: list[int] = []
    data: list[float] = []
    for con in constraints:
        for v in sorted(con.coeffs):
            indices.append(v)
            data.append(float(con.coeffs[v]))
        indptr.append(len(indices))
    return (np.array(indptr, dtype=np.int32), np.array(indices, dtype=np.int32),
            np.array(data, dtype=float))


def row_bounds(sense: str, rhs: float) -> tuple[float, float]:
    if sense == LE:
        return -INF, rhs
    if sense == GE:
        return rhs, INF
    return rhs, rhs
