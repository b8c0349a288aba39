"""Branching scores, variable selection, and full simulated trees."""

import pytest

from bnblab.engine import (BnbConfig, DeltaPair, EngineError, PlanError,
                           ScoreParams, delta_pair, format_trace, run,
                           score_linear, score_product, select_variable)
from bnblab.lifting import cross_instance, reference_plan
from bnblab.model import Face, IpResult, MilpInstance, Variable, ip_optimum, node_lp
from bnblab.rational import INF, Q
from bnblab.vertexcover import (adversarial_oracle, diamond,
                                disjoint_triangles, maximal_integer_set,
                                triangles_and_diamonds)
from bnblab.generators import GenSpec, generate


def knapsack2():
    return MilpInstance(
        name="k2", family="custom", seed=0, sense="max",
        variables=(Variable("x1", "binary", Q(0), Q(1)),
                   Variable("x2", "binary", Q(0), Q(1))),
        objective=(Q(1), Q(1)),
        rows=(((0, Q(1)), (1, Q(1))),),
        relations=("<=",), rhs=(Q(3, 2),))


HALF = Q(1, 2)


def test_delta_pair_on_diamond_degree_three_vertex():
    g = diamond()
    inst = g.to_instance()
    oracle = adversarial_oracle(g)
    root = Face.all_free(4)
    sol = oracle(inst, root)
    assert sol.value == Q(2)
    d = delta_pair(inst, root, 0, sol.value, solver=oracle)
    assert d == DeltaPair(Q(1), Q(0))     # fixing a=0 costs 1, a=1 nothing
    d_b = delta_pair(inst, root, 1, sol.value, solver=oracle)
    assert d_b == DeltaPair(Q(0), HALF)


def test_delta_pair_on_triangle_vertex():
    g = disjoint_triangles(1)
    inst = g.to_instance()
    root = Face.all_free(3)
    sol = node_lp(inst, root)
    d = delta_pair(inst, root, 0, sol.value)
    assert d == DeltaPair(HALF, HALF)


def test_delta_pair_infeasible_child_is_inf():
    inst = knapsack2()
    face = Face.all_free(2).child(0, 1)
    sol = node_lp(inst, face)
    d = delta_pair(inst, face, 1, sol.value)
    assert d.up == INF and d.down == HALF


def test_linear_score_values():
    p = ScoreParams.theory()
    assert score_linear(DeltaPair(Q(1), Q(0)), p) == Q(1, 6)
    assert score_linear(DeltaPair(HALF, HALF), p) == HALF
    assert score_linear(DeltaPair(INF, Q(0)), p) == INF
    assert score_linear(DeltaPair(INF, INF), p) == INF


def test_product_score_values():
    p = ScoreParams.theory()
    assert score_product(DeltaPair(Q(1), Q(0)), p) == Q(0)
    assert score_product(DeltaPair(HALF, HALF), p) == Q(1, 4)
    assert score_product(DeltaPair(Q(0), INF), p) == Q(0)
    assert score_product(DeltaPair(INF, INF), p) == INF
    pe = ScoreParams.experiment()
    assert score_product(DeltaPair(Q(0), INF), pe) == INF
    assert score_product(DeltaPair(Q(0), Q(0)), pe) == Q(1, 10 ** 8)


def test_strong_branching_prefers_triangles_over_diamonds():
    g = triangles_and_diamonds(2)
    inst = g.to_instance()
    oracle = adversarial_oracle(g)
    root = Face.all_free(10)
    sol = oracle(inst, root)
    pick = select_variable("sb-p", inst, root, sol,
                           params=ScoreParams.theory(), solver=oracle)
    assert pick < 6      # a triangle vertex, not a diamond vertex


def test_single_candidate_any_rule():
    inst = knapsack2()
    face = Face.all_free(2).child(1, 1)
    sol = node_lp(inst, face)
    assert sol.fractional_set == (0,)
    for rule in ("sb-l", "sb-p", "most-infeasible"):
        assert select_variable(rule, inst, face, sol) == 0


def test_most_infeasible_takes_closest_to_half():
    inst = MilpInstance(
        name="mi", family="custom", seed=0, sense="max",
        variables=(Variable("a", "binary", Q(0), Q(1)),
                   Variable("b", "binary", Q(0), Q(1))),
        objective=(Q(1), Q(2)),
        rows=(((0, Q(2)), (1, Q(10))),),
        relations=("<=",), rhs=(Q(10),))
    sol = node_lp(inst, Face.all_free(2))
    fake = type(sol)("optimal", sol.value, (HALF, Q(9, 10)), (0, 1))
    assert select_variable("most-infeasible", inst, Face.all_free(2),
                           fake) == 0


def test_random_rule_needs_seed():
    with pytest.raises(EngineError):
        BnbConfig(rule="random", prune_mode="incumbent")


def test_known_optimum_needs_ip():
    with pytest.raises(EngineError):
        BnbConfig(rule="sb-p", prune_mode="known-optimum")


def test_scripted_requires_plan_coverage():
    li = cross_instance(2)
    ip = ip_optimum(li.instance)
    bad_plan = {0: 2}     # root only; children are not covered
    cfg = BnbConfig(rule="scripted", plan=bad_plan, prune_mode="known-optimum",
                    ip_result=ip)
    with pytest.raises(PlanError):
        run(li.instance, cfg)


def test_knapsack_tree_two_branchings():
    inst = knapsack2()
    ip = ip_optimum(inst)
    cfg = BnbConfig(rule="sb-p", prune_mode="known-optimum", ip_result=ip)
    trace = run(inst, cfg)
    assert trace.branch_count == 2
    assert trace.node_count == 5


def test_disjoint_triangles_tree_sizes():
    for m in (1, 2):
        inst = disjoint_triangles(m).to_instance()
        ip = ip_optimum(inst)
        cfg = BnbConfig(rule="sb-p", score=ScoreParams.theory(),
                        prune_mode="known-optimum", ip_result=ip)
        trace = run(inst, cfg)
        assert trace.node_count == 2 ** (m + 1) - 1
        assert trace.branch_count == 2 ** m - 1


def test_fractional_rules_on_lifted_cross():
    li = cross_instance(3)
    ip = ip_optimum(li.instance)
    for rule, seed in [("sb-p", None), ("sb-l", None),
                       ("most-infeasible", None), ("random", 7)]:
        cfg = BnbConfig(rule=rule, prune_mode="known-optimum", ip_result=ip,
                        seed=seed)
        trace = run(li.instance, cfg)
        assert trace.node_count >= 2 ** 4 - 1


def test_scripted_plan_hits_4n_plus_1():
    for n in (2, 3, 4):
        li = cross_instance(n)
        ip = ip_optimum(li.instance)
        cfg = BnbConfig(rule="scripted", plan=reference_plan(n),
                        prune_mode="known-optimum", ip_result=ip)
        trace = run(li.instance, cfg)
        assert trace.node_count == 4 * n + 1
        assert trace.int_branch_count == n   # every y branch is integral


def test_child_bound_dominance_and_node_invariant():
    for family, size, seed in [("K-P5", {"n": 7}, 0), ("LotSizing", {"n": 5}, 1),
                               ("VertexCover", {"N": 7}, 2)]:
        inst = generate(GenSpec(family, seed, size))
        ip = ip_optimum(inst)
        cfg = BnbConfig(rule="sb-p", prune_mode="known-optimum",
                        ip_result=ip)
        trace = run(inst, cfg)
        assert trace.node_count == 2 * trace.branch_count + 1
        by_id = {r.node_id: r for r in trace.records}
        for r in trace.records:
            if r.parent is None or r.value is None:
                continue
            parent = by_id[r.parent]
            if inst.sense == "max":
                assert r.value <= parent.value
            else:
                assert r.value >= parent.value


def test_incumbent_trees_never_smaller():
    for seed in range(4):
        inst = generate(GenSpec("K-P5", seed, {"n": 7}))
        ip = ip_optimum(inst)
        known = run(inst, BnbConfig(rule="sb-p", prune_mode="known-optimum",
                                    ip_result=ip))
        inc = run(inst, BnbConfig(rule="sb-p", prune_mode="incumbent"))
        assert inc.node_count >= known.node_count
        assert inc.incumbent_value == ip.value


def test_run_deterministic():
    inst = generate(GenSpec("K-G22", 5, {"n": 7}))
    ip = ip_optimum(inst)
    cfg = BnbConfig(rule="random", seed=123, prune_mode="known-optimum",
                    ip_result=ip)
    assert format_trace(run(inst, cfg)) == format_trace(run(inst, cfg))


def test_vertex_cover_half_step_on_fresh_branchings():
    # when a node below the optimum branches outside the maximal integer
    # set, both children must climb by at least 1/2
    inst = generate(GenSpec("VertexCover", 3, {"N": 8}))
    edges = tuple((row[0][0], row[1][0]) for row in inst.rows)
    from bnblab.vertexcover import VcGraph
    g = VcGraph.from_edges(inst.n_binary, edges)
    ip = ip_optimum(inst)
    cfg = BnbConfig(rule="sb-p", score=ScoreParams.theory(),
                    prune_mode="known-optimum", ip_result=ip)
    trace = run(inst, cfg)
    by_id = {r.node_id: r for r in trace.records}
    checked = 0
    for r in trace.records:
        if r.action != "branched" or r.value >= ip.value:
            continue
        face = Face.from_index(r.face_code, inst.n_binary)
        fixings = {v: (0 if s == 1 else 1)
                   for v, s in enumerate(face.symbols) if s != 0}
        mis = maximal_integer_set(g, fixings)
        if r.chosen in mis.indices:
            continue
        kids = [k for k in trace.records if k.parent == r.node_id]
        assert len(kids) == 2
        for kid in kids:
            if kid.value is not None:
                assert kid.value >= r.value + HALF
                checked += 1
    assert checked > 0


def test_node_cap_marks_incomplete():
    inst = generate(GenSpec("K-P5", 1, {"n": 8}))
    ip = ip_optimum(inst)
    cfg = BnbConfig(rule="sb-p", prune_mode="known-optimum", ip_result=ip,
                    node_cap=2)
    trace = run(inst, cfg)
    assert not trace.complete
    assert trace.branch_count == 2
    assert any(r.action == "open" for r in trace.records)


def test_trace_format_lines():
    inst = knapsack2()
    ip = ip_optimum(inst)
    trace = run(inst, BnbConfig(rule="sb-p", prune_mode="known-optimum",
                                ip_result=ip))
    text = format_trace(trace)
    lines = text.strip().splitlines()
    assert len(lines) == trace.node_count + 1
    assert lines[1].startswith("0 -1 0 0 3/2 branched:")
