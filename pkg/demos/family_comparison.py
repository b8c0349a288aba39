#!/usr/bin/env python3
"""A small end-to-end experiment: batch, CSV, aggregates, plots.

Writes demo-out/VertexCover.csv plus profile, scatter and ratio SVGs.
Scale count/sizes up for real studies; everything is seeded.
"""

from bnblab.harness import (ExperimentConfig, aggregate, perf_profile,
                            plot_profiles, plot_ratio_bars, plot_scatter,
                            run_experiment)

OUT = "demo-out"


def main():
    cfg = ExperimentConfig(
        family="VertexCover", size={"N": 9}, count=8, seed_base=0,
        strategies=("sb-l", "sb-p", "most-infeasible", "random"),
        out_dir=OUT)
    rows = run_experiment(cfg)
    failed = [r for r in rows if r.error]
    print(f"{len(rows)} instances, {len(failed)} failed")

    agg = aggregate(rows, cfg.strategies)
    print(f"optimal geomean {agg['opt']['geomean']:.2f}")
    for strat in cfg.strategies:
        stats = agg["strategies"][strat]
        print(f"  {strat:16s} geomean {stats['geomean']:6.2f} "
              f"ratio {stats['ratio_to_opt']:.3f}")
    print(f"integral branchings (weighted): "
          f"{agg['int_branch_pct_weighted']:.1f}%")

    prof = perf_profile(rows, "sb-p")
    at_zero = prof[0][1]
    print(f"share of instances where strong branching ties the optimum: "
          f"{at_zero:.2f}")

    plot_profiles(rows, cfg.strategies, f"{OUT}/VertexCover-profile.svg")
    plot_scatter(rows, cfg.strategies, f"{OUT}/VertexCover-scatter.svg")
    plot_ratio_bars([("VertexCover", agg)], f"{OUT}/VertexCover-ratio.svg")
    print(f"wrote {OUT}/VertexCover.csv and three SVG plots")


if __name__ == "__main__":
    main()
