"""Experiment rows, aggregation, profiles, CSV round trips, plot smoke."""

import os

import pytest

from bnblab.harness import (ExperimentConfig, ResultRow, aggregate,
                            csv_columns, measure_instance, perf_profile,
                            plot_profiles, plot_ratio_bars, plot_scatter,
                            read_csv, run_experiment, write_csv)
from bnblab.model import ip_optimum
from bnblab.rational import Q
from bnblab.vertexcover import disjoint_triangles


def _row(index, opt, counts, frac=Q(0)):
    return ResultRow(index=index, family="fam", seed=index, n_binary=5,
                     opt_branches=opt, counts=counts,
                     int_branch_fraction=frac)


def test_geometric_mean_example():
    rows = [_row(0, 2, {"sb-p": 2}), _row(1, 8, {"sb-p": 8})]
    agg = aggregate(rows)
    assert agg["opt"]["geomean"] == pytest.approx(4.0)
    assert agg["strategies"]["sb-p"]["ratio_to_opt"] == pytest.approx(1.0)


def test_aggregate_permutation_invariant():
    rows = [_row(i, i + 1, {"sb-p": 2 * i + 1}) for i in range(6)]
    a = aggregate(rows)
    b = aggregate(list(reversed(rows)))
    assert a == b


def test_profile_identical_strategy_jumps_at_zero():
    rows = [_row(i, 3, {"sb-p": 3}) for i in range(4)]
    prof = perf_profile(rows, "sb-p")
    assert prof[0] == (0, 1.0)


def test_profile_mixed_gaps():
    rows = [_row(0, 2, {"sb-p": 3}), _row(1, 2, {"sb-p": 5})]
    prof = dict(perf_profile(rows, "sb-p"))
    assert prof[80] == 0.5          # gaps are 50% and 150%
    assert prof[40] == 0.0
    assert prof[150] == 1.0


def test_profile_monotone_and_complete():
    rows = [_row(i, 1 + i, {"sb-p": 1 + 3 * i}) for i in range(5)]
    prof = perf_profile(rows, "sb-p")
    values = [y for _, y in prof]
    assert values == sorted(values)
    assert values[-1] <= 1.0
    with pytest.raises(KeyError):
        perf_profile(rows, "nope")


def test_measure_instance_triangles():
    inst = disjoint_triangles(3).to_instance()
    opt, traces = measure_instance(inst, ("sb-p",))
    assert opt.branch_count == 7
    assert traces["sb-p"].branch_count == 7


def test_run_experiment_small_batch(tmp_path):
    cfg = ExperimentConfig(family="VertexCover", size={"N": 7}, count=5,
                           seed_base=0, strategies=("sb-p", "random"),
                           out_dir=str(tmp_path))
    rows = run_experiment(cfg)
    assert [r.index for r in rows] == list(range(5))
    assert all(not r.error for r in rows)
    for r in rows:
        for s in ("sb-p", "random"):
            assert r.opt_branches <= r.counts[s]
    path = tmp_path / "VertexCover.csv"
    assert path.exists()
    first = path.read_bytes()
    run_experiment(cfg)
    assert path.read_bytes() == first       # byte-identical rerun


def test_csv_roundtrip(tmp_path):
    rows = [_row(0, 2, {"sb-p": 4, "random": 6}, Q(1, 3)),
            _row(1, 5, {"sb-p": 5, "random": 9}, Q(0))]
    path = str(tmp_path / "out.csv")
    write_csv(rows, ("sb-p", "random"), path)
    back, strategies = read_csv(path)
    assert strategies == ["sb-p", "random"]
    assert [r.opt_branches for r in back] == [2, 5]
    assert back[0].counts == {"sb-p": 4, "random": 6}
    assert abs(float(back[0].int_branch_fraction) - 1 / 3) < 1e-3


def test_csv_schema_pinned():
    assert csv_columns(("sb-p",)) == [
        "index", "family", "seed", "n_binary", "opt_branches", "opt_nodes",
        "sb-p_branches", "sb-p_nodes", "int_branch_pct", "error"]


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(family="K-P5", count=0)
    with pytest.raises(ValueError):
        ExperimentConfig(family="K-P5", strategies=())


def test_failures_become_error_rows():
    # a one-branching cap makes every strategy run bail out
    cfg = ExperimentConfig(family="K-P5", size={"n": 7}, count=3,
                           strategies=("sb-p",), node_cap=1)
    rows = run_experiment(cfg)
    assert len(rows) == 3
    assert all(r.error for r in rows)
    with pytest.raises(ValueError):
        aggregate(rows)


def test_plots_write_svg(tmp_path):
    rows = [_row(i, 2 + i, {"sb-p": 3 + i, "random": 4 + 2 * i})
            for i in range(6)]
    strategies = ("sb-p", "random")
    p1 = str(tmp_path / "profile.svg")
    p2 = str(tmp_path / "scatter.svg")
    p3 = str(tmp_path / "ratio.svg")
    plot_profiles(rows, strategies, p1)
    plot_scatter(rows, strategies, p2)
    plot_ratio_bars([("fam", aggregate(rows))], p3)
    for p in (p1, p2, p3):
        data = open(p, "rb").read()
        assert data.startswith(b"<?xml")
