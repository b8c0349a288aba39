"""Command-line front end: generate | solve | opttree | compare | report.

The default output directory is taken from BNBLAB_OUT when set.
"""

import argparse
import os
import sys

from .engine import RULES, BnbConfig, ScoreParams, format_trace, run
from .generators import FAMILIES, GenSpec, generate
from .harness import (DEFAULT_STRATEGIES, ExperimentConfig, aggregate,
                      plot_profiles, plot_ratio_bars, plot_scatter,
                      read_csv, run_experiment)
from .model import ip_optimum, load, save, serialize
from .opttree import optimal_tree
from .rational import parse_rat


def _default_out():
    return os.environ.get("BNBLAB_OUT", ".")


def _parse_size(pairs):
    size = {}
    for kv in pairs or ():
        try:
            key, raw = kv.split("=", 1)
        except ValueError:
            raise SystemExit(f"--size needs key=value, got {kv!r}")
        if key == "p":
            size[key] = raw
        else:
            try:
                size[key] = int(raw)
            except ValueError:
                raise SystemExit(f"size {key} must be an integer: {raw!r}")
    return size


def _cmd_generate(args):
    spec = GenSpec(args.family, args.seed, _parse_size(args.size))
    inst = generate(spec)
    if args.out:
        save(inst, args.out)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(serialize(inst))


def _cmd_solve(args):
    inst = load(args.instance)
    score = ScoreParams(mu=parse_rat(args.mu), epsilon=parse_rat(args.epsilon))
    ip = None
    if args.prune_mode == "known-optimum":
        ip = ip_optimum(inst, limit=args.binary_limit)
    cfg = BnbConfig(rule=args.rule, score=score, prune_mode=args.prune_mode,
                    ip_result=ip, seed=args.seed, node_cap=args.node_cap)
    trace = run(inst, cfg)
    print(f"rule={args.rule} branchings={trace.branch_count} "
          f"nodes={trace.node_count} complete={trace.complete}")
    if trace.incumbent_value is not None:
        print(f"incumbent={trace.incumbent_value}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(format_trace(trace))
        print(f"wrote {args.out}")


def _cmd_opttree(args):
    inst = load(args.instance)
    tree = optimal_tree(inst, jobs=args.jobs, limit=args.face_limit,
                        cache_dir=args.cache)
    pct = float(tree.int_branch_fraction) * 100
    print(f"optimal branchings={tree.branch_count} nodes={tree.node_count} "
          f"integral-branch={pct:.2f}%")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write("# face_code depth position int_branch\n")
            for node in tree.internal:
                fh.write(f"{node.face_code} {node.depth} {node.var} "
                         f"{int(node.int_branch)}\n")
        print(f"wrote {args.out}")


def _cmd_compare(args):
    cfg = ExperimentConfig(
        family=args.family, size=_parse_size(args.size), count=args.count,
        seed_base=args.seed, strategies=tuple(args.rule or
                                              DEFAULT_STRATEGIES),
        out_dir=args.out, jobs=args.jobs, mu=parse_rat(args.mu),
        epsilon=parse_rat(args.epsilon), node_cap=args.node_cap)
    rows = run_experiment(cfg)
    failed = [r for r in rows if r.error]
    agg = aggregate(rows, cfg.strategies)
    print(f"{cfg.family}: {agg['count']} instances "
          f"({len(failed)} failed), opt geomean "
          f"{agg['opt']['geomean']:.2f}")
    for s in cfg.strategies:
        stats = agg["strategies"][s]
        print(f"  {s:16s} geomean {stats['geomean']:8.2f} "
              f"ratio {stats['ratio_to_opt']:.3f}")
    print(f"  integral branchings in optimal trees: "
          f"{agg['int_branch_pct_weighted']:.1f}% (weighted)")
    print(f"wrote {os.path.join(args.out, cfg.family + '.csv')}")


def _cmd_report(args):
    rows, strategies = read_csv(args.csv)
    agg = aggregate(rows, strategies)
    label = rows[0].family if rows else "results"
    print(f"{label}: {agg['count']} instances")
    print(f"  opt geomean {agg['opt']['geomean']:.2f}  "
          f"mean {agg['opt']['mean']:.2f}")
    for s in strategies:
        stats = agg["strategies"][s]
        print(f"  {s:16s} geomean {stats['geomean']:8.2f} "
              f"mean {stats['mean']:8.2f} ratio {stats['ratio_to_opt']:.3f}")
    print(f"  integral branchings: {agg['int_branch_pct_weighted']:.1f}% "
          f"weighted, {agg['int_branch_pct_mean']:.1f}% per-instance mean")
    os.makedirs(args.out, exist_ok=True)
    base = os.path.join(args.out, label)
    plot_profiles(rows, strategies, base + "-profile.svg")
    plot_scatter(rows, strategies, base + "-scatter.svg")
    plot_ratio_bars([(label, agg)], base + "-ratio.svg")
    print(f"wrote {base}-profile.svg, {base}-scatter.svg, {base}-ratio.svg")


def main(argv=None):
    top = argparse.ArgumentParser(
        prog="bnblab",
        description="branch-and-bound laboratory: instances, branching "
                    "rules, provably optimal trees")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write one benchmark instance")
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--size", action="append", metavar="KEY=VALUE")
    p.add_argument("-o", "--out")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("solve", help="run one branching rule on an instance")
    p.add_argument("instance")
    p.add_argument("--rule", default="sb-p", choices=RULES)
    p.add_argument("--epsilon", default="1/10000")
    p.add_argument("--mu", default="1/6")
    p.add_argument("--prune-mode", default="known-optimum",
                   choices=("known-optimum", "incumbent"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--node-cap", type=int, default=10 ** 6)
    p.add_argument("--binary-limit", type=int, default=24,
                   help="cap on binaries for the exact IP bootstrap")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("opttree", help="compute the optimal tree exactly")
    p.add_argument("instance")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--face-limit", type=int, default=16,
                   help="cap on binaries for the 3^n face table")
    p.add_argument("--cache", help="phase-1 bitmap cache directory")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_opttree)

    p = sub.add_parser("compare", help="run a seeded batch of instances")
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--size", action="append", metavar="KEY=VALUE")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rule", action="append", choices=RULES)
    p.add_argument("--epsilon", default="1/10000")
    p.add_argument("--mu", default="1/6")
    p.add_argument("--node-cap", type=int, default=10 ** 6)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default=_default_out())
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("report", help="aggregate a results CSV into plots")
    p.add_argument("csv")
    p.add_argument("--out", default=_default_out())
    p.set_defaults(func=_cmd_report)

    args = top.parse_args(argv)
    args.func(args)


if __name__ == "__main__":
    main()
