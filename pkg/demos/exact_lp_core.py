#!/usr/bin/env python3
"""A tour of the exact LP core: rational solves, face fixings, vertex hulls.

Everything below is exact arithmetic; there is no tolerance anywhere.
"""

from bnblab.lp import (FIX0, FIX1, FREE, LinearProgram, VPolytope, solve,
                       solve_fixed, vsolve)
from bnblab.rational import Q


def main():
    # a two-variable knapsack relaxation: max x1 + x2, x1 + x2 <= 3/2
    prog = LinearProgram(
        sense="max",
        lower=(Q(0), Q(0)), upper=(Q(1), Q(1)),
        objective=(Q(1), Q(1)),
        rows=(((0, Q(1)), (1, Q(1))),),
        relations=("<=",), rhs=(Q(3, 2),),
        binaries=(0, 1))
    sol = solve(prog)
    print("knapsack relaxation:", sol.status, "value", sol.value,
          "point", sol.primal)
    print("fractional positions:", sol.fractional_set)

    # branching is just bound collapsing: fix x1 = 1
    child = solve_fixed(prog, (FIX1, FREE))
    print("after fixing x1=1:   ", child.status, "value", child.value,
          "point", child.primal)
    dead = solve_fixed(prog, (FIX1, FIX1))
    print("after fixing both:   ", dead.status)

    # a triangle's cover relaxation is uniquely half-integral
    tri = LinearProgram(
        sense="min",
        lower=(Q(0),) * 3, upper=(Q(1),) * 3,
        objective=(Q(1),) * 3,
        rows=(((0, Q(1)), (1, Q(1))), ((0, Q(1)), (2, Q(1))),
              ((1, Q(1)), (2, Q(1)))),
        relations=(">=",) * 3, rhs=(Q(1),) * 3,
        binaries=(0, 1, 2))
    print("triangle cover LP:   ", solve(tri).primal)

    # V-form: optimize over a hull given by its vertices; 0/1 fixings
    # restrict to the matching vertex subset
    square = VPolytope(2, ((Q(0), Q(0)), (Q(1), Q(0)),
                           (Q(0), Q(1)), (Q(1), Q(1))))
    print("square corner:       ",
          vsolve(square, (Q(1), Q(1)), (FREE, FREE)).primal)
    print("edge x1=0:           ",
          vsolve(square, (Q(1), Q(1)), (FIX0, FREE)).primal)


if __name__ == "__main__":
    main()
