"""Exact solvers for the cost-weighted generalized multiple strip packing problem."""

__version__ = "0.1.0"
