"""bnblab: a branch-and-bound laboratory with an exact rational LP core.

Building blocks: deterministic exact LP solving over constraint rows or
vertex lists (lp), MILP instances and hypercube faces (model), a recorded
branch-and-bound simulator with pluggable variable-selection rules
(engine), provably optimal tree sizes via a 3^n dynamic program (opttree),
seeded benchmark generators (generators), vertex-cover theory oracles
(vertexcover), indicator-lifted formulations (lifting), and batch
experiment tooling (harness).
"""

from .engine import BnbConfig, BnbTrace, DeltaPair, ScoreParams
from .generators import FAMILIES, GenSpec, generate
from .lp import LinearProgram, LpSolution, VPolytope
from .model import Face, IpResult, MilpInstance, Variable, ip_optimum
from .opttree import DpTable, OptTree, optimal_tree
from .rational import INF, Q
from .vertexcover import VcGraph

__version__ = "0.1.0"

__all__ = [
    "BnbConfig", "BnbTrace", "DeltaPair", "DpTable", "FAMILIES", "Face",
    "GenSpec", "INF", "IpResult", "LinearProgram", "LpSolution",
    "MilpInstance", "OptTree", "Q", "ScoreParams", "VPolytope", "VcGraph",
    "Variable", "generate", "ip_optimum", "optimal_tree",
]
