"""Linear/integer modelling, LP solving, branch-and-bound and MPS export."""

from .bnb import LazyCutError, MipResult, MipStatus, solve_mip
from .lp import LpResult, LpStatus, dual_bound, solve_lp
from .model import EQ, GE, INF, LE, Constraint, LinearModel, ModelError, Variable
from .mps import read_mps, write_mps

__all__ = [
    "EQ", "GE", "INF", "LE", "Constraint", "LazyCutError", "LinearModel", "LpResult", "LpStatus",
    "MipResult", "MipStatus", "ModelError", "Variable", "dual_bound", "read_mps", "solve_lp",
    "solve_mip", "write_mps",
]
