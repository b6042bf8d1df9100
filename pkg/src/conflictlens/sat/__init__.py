from .cdcl import CdclSolver, luby
from .cnf import CnfFormula, VarPool
from .dimacs import load_dimacs, read_dimacs, write_dimacs
from .solver import (
    SolveResult,
    SolveStatus,
    count_models,
    enumerate_models,
    minimize_core,
    shrink_core,
    solve,
)

__all__ = [
    "CdclSolver",
    "CnfFormula",
    "SolveResult",
    "SolveStatus",
    "VarPool",
    "count_models",
    "enumerate_models",
    "load_dimacs",
    "luby",
    "minimize_core",
    "read_dimacs",
    "shrink_core",
    "solve",
    "write_dimacs",
]
