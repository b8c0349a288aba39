"""Vertex-cover oracles: half-integrality, integer sets, adversarial runs."""

import random

import pytest

from bnblab.engine import BnbConfig, ScoreParams, run
from bnblab.model import Face, ip_optimum
from bnblab.rational import Q
from bnblab.vertexcover import (MergeError, TopologyError, VcGraph,
                                VcLpSolution, adversarial_oracle,
                                adversarial_solution, diamond,
                                disjoint_triangles, face_from_fixings,
                                greedy_select, integrality_gap,
                                maximal_integer_set, merge_optima,
                                persistency_verify, triangles_and_diamonds,
                                vc_lp)

HALF = Q(1, 2)


def random_graph(rng, n, p=0.5):
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)
             if rng.random() < p]
    return VcGraph.from_edges(n, edges)


def test_builders_shapes():
    g = disjoint_triangles(2)
    assert g.n == 6 and len(g.edges) == 6
    td = triangles_and_diamonds(2)
    assert td.n == 10 and len(td.edges) == 2 * 3 + 5
    d = diamond()
    degs = sorted(len(v) for v in d.adjacency())
    assert degs == [2, 2, 3, 3]
    deg = [len(d.adjacency()[v]) for v in range(4)]
    assert deg == [3, 2, 3, 2]
    with pytest.raises(ValueError):
        triangles_and_diamonds(3)
    with pytest.raises(ValueError):
        disjoint_triangles(0)


def test_single_edge_lp_value():
    g = VcGraph.from_edges(2, [(0, 1)])
    sol = vc_lp(g)
    assert sol.value == Q(1)
    assert integrality_gap(g) == Q(0)


def test_diamond_fixed_b_unique_halves():
    sol = vc_lp(diamond(), {1: 1})
    assert sol.value == Q(5, 2)
    assert sol.assignment == (HALF, Q(1), HALF, HALF)


def test_half_integrality_everywhere():
    rng = random.Random(8)
    for _ in range(25):
        g = random_graph(rng, rng.randint(2, 9))
        fixings = {}
        for v in range(g.n):
            if rng.random() < 0.2:
                fixings[v] = rng.randint(0, 1)
        sol = vc_lp(g, fixings)
        if sol.status != "optimal":
            continue
        assert all(x in (Q(0), HALF, Q(1)) for x in sol.assignment)
        for u, v in g.edges:
            assert sol.assignment[u] + sol.assignment[v] >= 1


def test_max_integral_mode_on_diamond():
    sol = vc_lp(diamond(), mode="max-integral")
    assert sol.value == Q(2)
    assert sol.assignment == (Q(1), Q(0), Q(1), Q(0))
    assert sol.integer_set == frozenset(range(4))


def test_maximal_integer_set_examples():
    assert maximal_integer_set(disjoint_triangles(1)).indices == frozenset()
    td = triangles_and_diamonds(2)
    assert maximal_integer_set(td).indices == frozenset(range(6, 10))
    assert maximal_integer_set(diamond(), {1: 1}).indices == frozenset({1})


def test_merge_keeps_integer_supports():
    g = diamond()
    allhalf = VcLpSolution.from_assignment(Q(2), (HALF,) * 4)
    integral = VcLpSolution.from_assignment(Q(2), (Q(1), Q(0), Q(1), Q(0)))
    merged = merge_optima(allhalf, integral, g)
    assert merged.assignment == integral.assignment
    assert merge_optima(integral, integral, g) == integral
    # integral second argument lifts every half coordinate
    assert merge_optima(allhalf, integral, g).integer_set >= \
        integral.integer_set
    with pytest.raises(MergeError):
        merge_optima(allhalf,
                     VcLpSolution.from_assignment(Q(3), (Q(1),) * 3 + (Q(0),)),
                     g)


def test_merge_random_probe_pairs():
    rng = random.Random(5)
    for _ in range(10):
        g = random_graph(rng, rng.randint(3, 8), 0.6)
        base = vc_lp(g)
        mis = maximal_integer_set(g)
        merged = merge_optima(base, mis.witness, g)
        assert merged.value == base.value
        assert merged.integer_set >= base.integer_set


def test_integrality_gap_families():
    for m in (1, 2, 3):
        assert integrality_gap(disjoint_triangles(m)) == Q(m, 2)
    for m in (2, 4):
        assert integrality_gap(triangles_and_diamonds(m)) == Q(m, 2)


def test_persistency_on_samples():
    assert persistency_verify(diamond())
    assert persistency_verify(VcGraph.from_edges(3, []))   # no edges at all
    rng = random.Random(77)
    bip = VcGraph.from_edges(6, [(0, 3), (0, 4), (1, 4), (2, 5), (1, 5)])
    assert persistency_verify(bip)
    for _ in range(8):
        assert persistency_verify(random_graph(rng, rng.randint(2, 8)))


def test_greedy_prefers_degree_three():
    g = diamond()
    sol = adversarial_solution(g)
    assert greedy_select(g, {}, sol) == 0
    tri = disjoint_triangles(1)
    assert greedy_select(tri, {}, adversarial_solution(tri)) == 0
    single = VcLpSolution.from_assignment(Q(2), (Q(1), HALF, Q(1), Q(0)))
    assert greedy_select(diamond(), {}, single) == 1


def test_adversarial_components():
    g = triangles_and_diamonds(2)
    root = adversarial_solution(g)
    assert root.value == Q(5)
    assert all(x == HALF for x in root.assignment)
    # fixing a diamond's degree-three vertex to 1 resolves it integrally
    sol = adversarial_solution(g, {6: 1})
    assert sol.assignment[6:] == (Q(1), Q(0), Q(1), Q(0))
    assert sol.value == Q(5)
    # fixing it to 0 forces the rest of the diamond to one
    sol0 = adversarial_solution(g, {6: 0})
    assert sol0.assignment[6:] == (Q(0), Q(1), Q(1), Q(1))
    assert sol0.value == Q(6)
    # triangle vertex fixed to 1 leaves an integral edge
    sol1 = adversarial_solution(g, {0: 1})
    assert sol1.assignment[0] == Q(1)
    assert sorted(sol1.assignment[1:3]) == [Q(0), Q(1)]


def test_adversarial_rejects_other_topologies():
    c5 = VcGraph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])
    with pytest.raises(TopologyError):
        adversarial_solution(c5)


def test_adversarial_infeasible_on_zero_edge():
    g = disjoint_triangles(1)
    sol = adversarial_solution(g, {0: 0, 1: 0})
    assert sol.status == "infeasible"


def test_greedy_vs_strong_branching_separation_small():
    m = 2
    g = triangles_and_diamonds(m)
    inst = g.to_instance()
    ip = ip_optimum(inst)
    assert ip.value == Q(3 * m)
    oracle = adversarial_oracle(g)
    greedy = run(inst, BnbConfig(rule="vc-greedy", prune_mode="known-optimum",
                                 ip_result=ip, lp_oracle=oracle))
    strong = run(inst, BnbConfig(rule="sb-p", score=ScoreParams.theory(),
                                 prune_mode="known-optimum", ip_result=ip,
                                 lp_oracle=oracle))
    assert greedy.node_count > 5 ** (m // 2) - 1
    assert strong.node_count <= 2 ** (m + 1) + 10 * m
    assert strong.node_count < greedy.node_count


def test_containment_of_integer_sets_under_branching():
    # child nodes keep every vertex of the parent's maximal integer set
    rng = random.Random(13)
    checked = 0
    for _ in range(6):
        g = random_graph(rng, 7, 0.6)
        inst = g.to_instance()
        ip = ip_optimum(inst)
        trace = run(inst, BnbConfig(rule="sb-p", score=ScoreParams.theory(),
                                    prune_mode="incumbent"))
        faces = {r.node_id: Face.from_index(r.face_code, g.n)
                 for r in trace.records}
        for r in trace.records:
            if r.action != "branched":
                continue
            fix = _fixings(faces[r.node_id])
            mis = maximal_integer_set(g, fix)
            if r.chosen in mis.indices:
                continue
            for kid in trace.records:
                if kid.parent != r.node_id or kid.value is None:
                    continue
                kid_mis = maximal_integer_set(g, _fixings(faces[kid.node_id]))
                assert mis.indices <= kid_mis.indices
                checked += 1
    assert checked > 0


def _fixings(face):
    return {v: (0 if s == 1 else 1)
            for v, s in enumerate(face.symbols) if s != 0}
