"""Exact weighted k-center solving on trees, continuous and discrete."""

from .feasibility import FeasibilityOutcome, dftest0, ftest0
from .oracle import oracle_solve
from .scalars import EXACT, FLOAT
from .sorted_matrix import LambdaRange, SortedMatrix, msearch
from .tree import (
    ParseError,
    RootedTree,
    Tree,
    parse_tree,
    path_distance,
    random_tree,
    root_at,
    serialize_tree,
)

__all__ = [
    "EXACT",
    "FLOAT",
    "FeasibilityOutcome",
    "LambdaRange",
    "ParseError",
    "RootedTree",
    "SortedMatrix",
    "Tree",
    "dftest0",
    "ftest0",
    "msearch",
    "oracle_solve",
    "parse_tree",
    "path_distance",
    "random_tree",
    "root_at",
    "serialize_tree",
    "solve",
    "SolverConfig",
    "SolveResult",
]


def __getattr__(name):
    # solver imports are deferred to keep light imports fast
    if name in ("solve", "SolverConfig", "SolveResult"):
        from . import solver

        return getattr(solver, name)
    raise AttributeError(name)
