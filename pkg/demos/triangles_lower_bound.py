#!/usr/bin/env python3
"""Disjoint triangles force every tree to the same exponential size.

With m triangles the cover IP costs 2m while the relaxation sits at 3m/2,
and each branching recovers only 1/2 of that gap on both sides, so every
rule needs the full binary tree of depth m: 2^(m+1) - 1 nodes.  The
dynamic program confirms there is nothing better.
"""

from bnblab.engine import BnbConfig, ScoreParams, run
from bnblab.model import ip_optimum
from bnblab.opttree import optimal_tree
from bnblab.vertexcover import disjoint_triangles, integrality_gap


def main():
    for m in (1, 2, 3):
        graph = disjoint_triangles(m)
        inst = graph.to_instance(name=f"triangles-{m}")
        gap = integrality_gap(graph)
        ip = ip_optimum(inst)
        print(f"m={m}: IP={ip.value} gap={gap}")
        for rule in ("sb-p", "sb-l", "most-infeasible"):
            cfg = BnbConfig(rule=rule, score=ScoreParams.theory(),
                            prune_mode="known-optimum", ip_result=ip)
            trace = run(inst, cfg)
            print(f"  {rule:16s} nodes={trace.node_count}")
        tree = optimal_tree(inst, ip)
        print(f"  optimal tree     nodes={tree.node_count} "
              f"(forced minimum {2 ** (m + 1) - 1})")


if __name__ == "__main__":
    main()
