"""Indicator-lifted formulations and the cross-polytope hard instance.

The lift maps each vertex x of a base polytope in [0,1]^n to (x, y) where
y_i = 1 exactly when x_i is integral.  Branching y_j = 0 leaves only
vertices with x_j fractional, so the two grandchildren fixing x_j are
empty; walking y_1, ..., y_n this way closes the whole search in 4n + 1
nodes, while any rule restricted to fractional candidates must fix every
x coordinate on the cross-polytope and pay for 2^n leaves.
"""

from dataclasses import dataclass
from itertools import product

from .lp import VPolytope
from .model import Face, MilpInstance, Variable
from .rational import Q

HALF = Q(1, 2)


class LiftError(Exception):
    """Invalid lifting request."""


@dataclass(frozen=True)
class LiftedInstance:
    """The lifted polytope with its V-form branching instance.

    Variables are ordered x_1..x_n then y_1..y_n; all 2n are branched.
    """

    base: VPolytope
    lifted: VPolytope
    objective: tuple
    instance: MilpInstance


def indicator_lift(base: VPolytope, objective) -> LiftedInstance:
    """Lift every base vertex with per-coordinate integrality indicators."""
    if len(objective) != base.dimension:
        raise LiftError("objective dimension mismatch")
    n = base.dimension
    lifted_rows = []
    for v in base.vertices:
        y = tuple(Q(1) if (x == 0 or x == 1) else Q(0) for x in v)
        lifted_rows.append(tuple(v) + y)
    lifted = VPolytope(2 * n, tuple(lifted_rows))
    names = [f"x{i + 1}" for i in range(n)] + [f"y{i + 1}" for i in range(n)]
    inst = MilpInstance(
        name=f"lifted-{n}", family="indicator-lift", seed=0, sense="max",
        variables=tuple(Variable(nm, "binary", Q(0), Q(1)) for nm in names),
        objective=tuple(objective) + (Q(0),) * n,
        vertices=lifted)
    return LiftedInstance(base, lifted, tuple(objective), inst)


def cross_polytope(n) -> VPolytope:
    """All points with one coordinate at 1/2 and the rest in {0, 1}.

    The hull contains no integer point, yet every coordinate pattern with
    a free position supports a vertex, which is what forces fractional-only
    branching into a full binary tree over the x coordinates.
    """
    if not (2 <= n <= 6):
        raise LiftError("cross_polytope supports 2 <= n <= 6")
    rows = []
    for i in range(n):
        for bits in product((Q(0), Q(1)), repeat=n - 1):
            row = list(bits[:i]) + [HALF] + list(bits[i:])
            rows.append(tuple(row))
    return VPolytope(n, tuple(rows))


def cross_instance(n) -> LiftedInstance:
    """The lifted cross-polytope with a zero objective (pure infeasibility)."""
    poly = cross_polytope(n)
    return indicator_lift(poly, (Q(0),) * n)


def reference_plan(n) -> dict:
    """Scripted branching plan: face code -> position, walking y then x.

    Stage j branches y_j at the face with y_1..y_{j-1} = 1; its y_j = 0
    child branches x_j (both grandchildren die), and the y_j = 1 child
    starts stage j + 1.  The terminal all-y-fixed node is empty, giving
    4n + 1 nodes in total on any lifted instance.
    """
    plan = {}
    for j in range(n):
        trunk = Face.all_free(2 * n)
        for i in range(j):
            trunk = trunk.child(n + i, 1)
        plan[trunk.index()] = n + j
        plan[trunk.child(n + j, 0).index()] = j
    return plan
