"""Embedded LP/MILP kernel: revised simplex plus branch and bound.

Hot dense primitives run on the backend chosen in :mod:`.backend`
(compiled extension when built, numpy otherwise).
"""

from . import backend
from .lp import (
    ROW_EQ,
    ROW_GE,
    ROW_LE,
    LpOptions,
    LpSolution,
    LpStatus,
    StandardLp,
    VerifyReport,
    make_lp,
    solve_lp,
    verify_solution,
)
from .milp import solve_milp

__all__ = [
    "backend",
    "ROW_LE",
    "ROW_GE",
    "ROW_EQ",
    "LpOptions",
    "LpSolution",
    "LpStatus",
    "StandardLp",
    "VerifyReport",
    "make_lp",
    "solve_lp",
    "solve_milp",
    "verify_solution",
]
