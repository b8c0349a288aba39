#!/usr/bin/env python3
"""Why branching on integral variables can matter exponentially.

The cross-polytope hull contains no integer point, but every vertex has
exactly one fractional coordinate, so any rule that only branches on
fractional variables must fix all n original coordinates: at least
2^(n+1) - 1 nodes.  Lifting the hull with per-coordinate integrality
indicators y_i admits a scripted tree that branches y_1..y_n (integral at
every vertex!) and closes in 4n + 1 nodes.
"""

from bnblab.engine import BnbConfig, run
from bnblab.lifting import cross_instance, reference_plan
from bnblab.model import ip_optimum
from bnblab.opttree import optimal_tree


def main():
    for n in (3, 4):
        lifted = cross_instance(n)
        inst = lifted.instance
        print(f"n={n}: {len(lifted.base.vertices)} base vertices, "
              f"{inst.n_binary} binaries")
        ip = ip_optimum(inst)
        print(f"  integer feasible: {ip.status}")

        scripted = run(inst, BnbConfig(
            rule="scripted", plan=reference_plan(n),
            prune_mode="known-optimum", ip_result=ip))
        print(f"  scripted y-then-x plan: {scripted.node_count} nodes "
              f"(bound 4n+1 = {4 * n + 1}), "
              f"{scripted.int_branch_count} integral branchings")

        for rule in ("sb-p", "most-infeasible"):
            trace = run(inst, BnbConfig(rule=rule,
                                        prune_mode="known-optimum",
                                        ip_result=ip))
            print(f"  {rule:16s} {trace.node_count} nodes "
                  f"(floor 2^(n+1)-1 = {2 ** (n + 1) - 1})")

        tree = optimal_tree(inst, ip)
        print(f"  optimal tree: {tree.node_count} nodes, "
              f"{tree.int_branch_count}/{tree.branch_count} integral "
              f"branchings")


if __name__ == "__main__":
    main()
