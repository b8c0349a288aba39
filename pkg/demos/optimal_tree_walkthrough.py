#!/usr/bin/env python3
"""Anatomy of an optimal-tree computation on one knapsack instance.

Phase 1 classifies all 3^n faces (with cascading, so only a fraction of
them ever reach the LP); phase 2 fills the subtree-size recurrence bottom
up; the canonical tree falls out of the stored argmins.
"""

import numpy as np

from bnblab.engine import BnbConfig, run
from bnblab.generators import GenSpec, generate
from bnblab.model import Face, ip_optimum
from bnblab.opttree import optimal_tree, phase1, phase2


def main():
    inst = generate(GenSpec("K-P5", seed=7, size={"n": 10}))
    print(f"instance {inst.name}: {inst.n_binary} binaries, "
          f"{len(inst.rows)} rows")
    ip = ip_optimum(inst)
    print("IP optimum:", ip.value)

    pruned = phase1(inst, ip)
    total = 3 ** inst.n_binary
    print(f"phase 1: {total} faces, {int(pruned.sum())} pruned, "
          f"{int((~pruned).sum())} open")

    table = phase2(pruned, inst.n_binary)
    print("phase 2: optimal branchings =", table.root_branchings)

    tree = optimal_tree(inst, ip)
    print(f"reconstructed tree: {tree.node_count} nodes, "
          f"{tree.int_branch_count}/{tree.branch_count} integral "
          f"branchings")
    print("first branchings (face, position):")
    for node in tree.internal[:5]:
        face = Face.from_index(node.face_code, inst.n_binary)
        tag = "integral" if node.int_branch else "fractional"
        print(f"  depth {node.depth}: {face} -> x{node.var} ({tag})")

    trace = run(inst, BnbConfig(rule="sb-p", prune_mode="known-optimum",
                                ip_result=ip))
    print(f"strong branching for comparison: {trace.branch_count} "
          f"branchings vs optimal {tree.branch_count}")


if __name__ == "__main__":
    main()
