"""Experiment orchestration: batches, strategy comparisons, summaries.

A run generates seeded instances of one family, computes the optimal tree
for each, replays every requested strategy under known-optimum pruning,
and emits one CSV row per instance.  Dominance of the optimal count is a
hard assertion, not a recorded result.  Aggregation reports arithmetic and
geometric means (zero counts enter the geometric mean as 1), the ratio of
each strategy's geometric mean to the optimal one, and the share of
integral branchings in the optimal trees.
"""

import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .engine import BnbConfig, ScoreParams, run
from .generators import GenSpec, generate
from .model import ip_optimum
from .opttree import optimal_tree
from .rational import Q

DEFAULT_STRATEGIES = ("sb-l", "sb-p", "most-infeasible", "random")

#: performance profiles are tabulated on this fixed percent-gap grid
GAP_GRID = tuple(range(0, 301, 10))


@dataclass(frozen=True)
class ExperimentConfig:
    family: str
    size: dict = field(default_factory=dict)
    count: int = 100
    seed_base: int = 0
    strategies: tuple = DEFAULT_STRATEGIES
    out_dir: str = None
    jobs: int = 1
    mu: object = Q(1, 6)
    epsilon: object = Q(1, 10000)
    node_cap: int = 10 ** 6

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("count must be at least 1")
        if not self.strategies:
            raise ValueError("need at least one strategy")


@dataclass
class ResultRow:
    index: int
    family: str
    seed: int
    n_binary: int
    opt_branches: int
    counts: dict              # strategy -> branch count
    int_branch_fraction: object
    error: str = ""

    @property
    def opt_nodes(self):
        return 2 * self.opt_branches + 1


def measure_instance(inst, strategies=DEFAULT_STRATEGIES, mu=Q(1, 6),
                     epsilon=Q(1, 10000), node_cap=10 ** 6, seed=0,
                     ip=None):
    """Optimal tree plus one trace per strategy, dominance asserted."""
    ip = ip or ip_optimum(inst)
    opt = optimal_tree(inst, ip)
    score = ScoreParams(mu=mu, epsilon=epsilon)
    traces = {}
    for strat in strategies:
        cfg = BnbConfig(rule=strat, score=score, prune_mode="known-optimum",
                        ip_result=ip, seed=seed, node_cap=node_cap)
        trace = run(inst, cfg)
        if not trace.complete:
            raise RuntimeError(f"{strat} exceeded the node cap")
        assert opt.branch_count <= trace.branch_count, \
            f"optimal tree beaten by {strat}"
        traces[strat] = trace
    return opt, traces


def _run_single(args):
    cfg, index = args
    seed = cfg.seed_base + index
    try:
        inst = generate(GenSpec(cfg.family, seed, cfg.size))
        opt, traces = measure_instance(
            inst, cfg.strategies, mu=cfg.mu, epsilon=cfg.epsilon,
            node_cap=cfg.node_cap, seed=seed)
        return ResultRow(
            index=index, family=cfg.family, seed=seed,
            n_binary=inst.n_binary, opt_branches=opt.branch_count,
            counts={s: traces[s].branch_count for s in cfg.strategies},
            int_branch_fraction=opt.int_branch_fraction)
    except AssertionError:
        raise
    except Exception as exc:  # error rows keep the batch alive
        return ResultRow(index=index, family=cfg.family, seed=seed,
                         n_binary=0, opt_branches=0, counts={},
                         int_branch_fraction=Q(0), error=str(exc))


def run_experiment(cfg: ExperimentConfig):
    """One ResultRow per instance, in index order; CSV written if out_dir."""
    payloads = [(cfg, i) for i in range(cfg.count)]
    if cfg.jobs <= 1:
        rows = [_run_single(p) for p in payloads]
    else:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            rows = list(pool.map(_run_single, payloads))
    rows.sort(key=lambda r: r.index)
    if cfg.out_dir:
        os.makedirs(cfg.out_dir, exist_ok=True)
        path = os.path.join(cfg.out_dir, f"{cfg.family}.csv")
        write_csv(rows, cfg.strategies, path)
    return rows


def csv_columns(strategies):
    cols = ["index", "family", "seed", "n_binary", "opt_branches",
            "opt_nodes"]
    for s in strategies:
        cols += [f"{s}_branches", f"{s}_nodes"]
    cols += ["int_branch_pct", "error"]
    return cols


def write_csv(rows, strategies, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(csv_columns(strategies))
        for r in rows:
            rec = [r.index, r.family, r.seed, r.n_binary,
                   r.opt_branches, r.opt_nodes]
            for s in strategies:
                b = r.counts.get(s, "")
                rec += [b, 2 * b + 1 if b != "" else ""]
            rec += [f"{float(r.int_branch_fraction) * 100:.4f}", r.error]
            writer.writerow(rec)


def read_csv(path):
    """Rows plus the strategy list recovered from the header."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        strategies = [c[:-9] for c in reader.fieldnames
                      if c.endswith("_branches") and c != "opt_branches"]
        rows = []
        for rec in reader:
            if rec["error"]:
                continue
            rows.append(ResultRow(
                index=int(rec["index"]), family=rec["family"],
                seed=int(rec["seed"]), n_binary=int(rec["n_binary"]),
                opt_branches=int(rec["opt_branches"]),
                counts={s: int(rec[f"{s}_branches"]) for s in strategies},
                int_branch_fraction=Q(rec["int_branch_pct"].replace(".", ""))
                / Q(10 ** 4) / 100))
    return rows, strategies


def _geomean(values):
    # zero counts (root pruned immediately) enter as 1
    logs = [math.log(max(v, 1)) for v in values]
    return math.exp(sum(logs) / len(logs))


def aggregate(rows, strategies=None):
    """Means, geometric means, ratios to optimal, integral-branch shares."""
    rows = [r for r in rows if not r.error]
    if not rows:
        raise ValueError("no successful rows to aggregate")
    if strategies is None:
        strategies = sorted({s for r in rows for s in r.counts})
    opt = [r.opt_branches for r in rows]
    out = {
        "count": len(rows),
        "opt": {"mean": sum(opt) / len(opt), "geomean": _geomean(opt)},
        "strategies": {},
    }
    for s in strategies:
        vals = [r.counts[s] for r in rows]
        geo = _geomean(vals)
        out["strategies"][s] = {
            "mean": sum(vals) / len(vals),
            "geomean": geo,
            "ratio_to_opt": geo / out["opt"]["geomean"],
        }
    weighted_num = sum((r.int_branch_fraction * r.opt_branches for r in rows),
                       Q(0))
    weighted_den = sum(r.opt_branches for r in rows)
    out["int_branch_pct_weighted"] = (
        float(weighted_num / weighted_den) * 100 if weighted_den else 0.0)
    out["int_branch_pct_mean"] = (
        float(sum((r.int_branch_fraction for r in rows), Q(0)) / len(rows))
        * 100)
    return out


def perf_profile(rows, strategy, grid=GAP_GRID):
    """Cumulative share of instances with percent gap to optimal <= x."""
    rows = [r for r in rows if not r.error]
    if not rows:
        raise ValueError("no rows")
    if any(strategy not in r.counts for r in rows):
        raise KeyError(f"strategy {strategy!r} missing from rows")
    gaps = []
    for r in rows:
        opt = max(r.opt_branches, 1)
        val = max(r.counts[strategy], 1)
        gaps.append(Q(100) * (Q(val, opt) - 1))
    return [(x, sum(1 for g in gaps if g <= x) / len(gaps)) for x in grid]


def plot_profiles(rows, strategies, path):
    """Cumulative-gap curves, one line per strategy (SVG)."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    for s in strategies:
        prof = perf_profile(rows, s)
        ax.plot([x for x, _ in prof], [y for _, y in prof], label=s)
    ax.set_xlabel("% more nodes than the optimal tree")
    ax.set_ylabel("cumulative fraction of instances")
    ax.set_ylim(0, 1.05)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def plot_scatter(rows, strategies, path):
    """Per-instance branch counts against the optimal count (SVG)."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    xs = [r.opt_branches for r in rows if not r.error]
    top = max(xs, default=1)
    for s in strategies:
        ys = [r.counts[s] for r in rows if not r.error]
        ax.scatter(xs, ys, s=12, label=s)
        top = max(top, max(ys, default=1))
    ax.plot([0, top], [0, top], linestyle=":", color="grey")
    ax.set_xlabel("optimal tree branchings")
    ax.set_ylabel("strategy branchings")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def plot_ratio_bars(labelled_aggregates, path):
    """Grouped bars of geomean ratios to optimal, one group per label (SVG)."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    labels = [lab for lab, _ in labelled_aggregates]
    strategies = sorted({s for _, agg in labelled_aggregates
                         for s in agg["strategies"]})
    fig, ax = plt.subplots(figsize=(1.8 + 1.2 * len(labels), 4))
    width = 0.8 / max(len(strategies), 1)
    for k, s in enumerate(strategies):
        xs = [i + k * width for i in range(len(labels))]
        ys = [agg["strategies"].get(s, {}).get("ratio_to_opt", 0)
              for _, agg in labelled_aggregates]
        ax.bar(xs, ys, width=width, label=s)
    ax.axhline(1.0, linestyle=":", color="grey")
    ax.set_xticks([i + 0.4 - width / 2 for i in range(len(labels))])
    ax.set_xticklabels(labels, rotation=20, ha="right")
    ax.set_ylabel("geomean ratio to optimal tree")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
