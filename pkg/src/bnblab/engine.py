"""Deterministic branch-and-bound simulator with pluggable variable rules.

Nodes are explored worst-bound first (best LP value; ties to the deeper
node, then the lower id), every node's LP is solved at creation, and the
complete run is recorded as a trace.  Pruning is by infeasibility, by
integrality of the returned solution, and by bound -- either against a
precomputed IP optimum ("known-optimum", the mode used for comparisons
against optimal trees) or against the best integral solution found so far
("incumbent", the bootstrap mode).
"""

import heapq
from dataclasses import dataclass, field

import numpy as np

from .model import Face, IpResult, MilpInstance, node_lp
from .rational import INF, Q

RULES = ("sb-l", "sb-p", "most-infeasible", "random", "vc-greedy", "scripted")


class EngineError(Exception):
    """Configuration or rule failure."""


class PlanError(EngineError):
    """A scripted plan was applied to a tree it does not cover."""


@dataclass(frozen=True)
class ScoreParams:
    """Strong-branching score parameters.

    ``epsilon == 0`` selects the theory convention 0 * inf = 0 in the
    product score; the experiment setting uses epsilon = 1/10000.
    """

    mu: object = Q(1, 6)
    epsilon: object = Q(1, 10000)

    def __post_init__(self):
        if not (0 <= self.mu <= 1):
            raise EngineError("mu must lie in [0, 1]")
        if self.epsilon < 0:
            raise EngineError("epsilon must be nonnegative")

    @classmethod
    def theory(cls, mu=Q(1, 6)):
        return cls(mu=mu, epsilon=Q(0))

    @classmethod
    def experiment(cls, mu=Q(1, 6)):
        return cls(mu=mu, epsilon=Q(1, 10000))

    @property
    def zero_times_inf_is_zero(self):
        return self.epsilon == 0


@dataclass(frozen=True)
class DeltaPair:
    """Bound degradations of the two children of a branching candidate.

    ``down`` belongs to the x_j = 0 child and ``up`` to the x_j = 1 child;
    both are nonnegative rationals, or INF for an infeasible child.
    """

    down: object
    up: object


def delta_pair(inst, face, j, parent_value, solver=None) -> DeltaPair:
    """Solve both children of free position ``j`` and report degradations."""
    solver = solver or node_lp
    vals = []
    for bit in (0, 1):
        sol = solver(inst, face.child(j, bit))
        if sol.status != "optimal":
            vals.append(INF)
            continue
        d = (parent_value - sol.value if inst.sense == "max"
             else sol.value - parent_value)
        assert d >= 0, "child bound beat its parent"
        vals.append(d)
    return DeltaPair(vals[0], vals[1])


def score_linear(d: DeltaPair, p: ScoreParams):
    """(1 - mu) * min + mu * max, with an infinite side absorbing."""
    if d.down <= d.up:
        mn, mx = d.down, d.up
    else:
        mn, mx = d.up, d.down
    if mn == INF:
        return INF
    if mx == INF:
        return INF if p.mu > 0 else mn
    return (1 - p.mu) * mn + p.mu * mx


def score_product(d: DeltaPair, p: ScoreParams):
    """max(up, eps) * max(down, eps); with eps = 0, 0 * inf counts as 0."""
    a = d.down if d.down > p.epsilon else p.epsilon
    b = d.up if d.up > p.epsilon else p.epsilon
    if a == INF or b == INF:
        other = b if a == INF else a
        if other == 0:
            return Q(0)
        return INF
    return a * b


def _strong_branching_pick(inst, face, solution, params, solver, score_fn):
    best = None
    best_j = None
    for j in solution.fractional_set:
        s = score_fn(delta_pair(inst, face, j, solution.value, solver),
                     params)
        if best is None or s > best:
            best, best_j = s, j
    return best_j


def select_variable(rule, inst, face, solution, rng=None, params=None,
                    solver=None, plan=None) -> int:
    """Pick the branching position for a node; ties break to lowest index."""
    solver = solver or node_lp
    params = params or ScoreParams()
    if rule == "scripted":
        if plan is None:
            raise PlanError("scripted rule requires a plan")
        try:
            return plan[face.index()]
        except KeyError:
            raise PlanError(f"plan has no entry for face {face}")
    candidates = solution.fractional_set
    if not candidates:
        raise EngineError("no fractional candidates to branch on")
    if rule == "sb-l":
        return _strong_branching_pick(inst, face, solution, params, solver,
                                      score_linear)
    if rule == "sb-p":
        return _strong_branching_pick(inst, face, solution, params, solver,
                                      score_product)
    if rule == "most-infeasible":
        half = Q(1, 2)
        return min(candidates,
                   key=lambda j: (abs(solution.primal[inst.binary_indices[j]]
                                      - half), j))
    if rule == "random":
        if rng is None:
            raise EngineError("random rule requires a seeded generator")
        return candidates[int(rng.integers(len(candidates)))]
    if rule == "vc-greedy":
        from .vertexcover import most_fractional_neighbors_pick
        adj = _vc_adjacency(inst)
        return most_fractional_neighbors_pick(adj, solution.primal,
                                              candidates)
    raise EngineError(f"unknown rule {rule!r}")


def _vc_adjacency(inst):
    if inst.is_vform or inst.n_continuous:
        raise EngineError("the greedy rule needs a vertex-cover instance")
    n = inst.n_vars
    adj = [[] for _ in range(n)]
    for row, rel, b in zip(inst.rows, inst.relations, inst.rhs):
        if rel != ">=" or b != 1 or len(row) != 2 or \
                any(a != 1 for _, a in row):
            raise EngineError("the greedy rule needs pure covering edges")
        (u, _), (v, _) = row
        adj[u].append(v)
        adj[v].append(u)
    return adj


@dataclass(frozen=True)
class BnbConfig:
    """Everything that determines a run besides the instance itself."""

    rule: str = "sb-p"
    score: ScoreParams = field(default_factory=ScoreParams)
    prune_mode: str = "known-optimum"
    ip_result: IpResult = None
    seed: int = None
    node_cap: int = 10 ** 6
    plan: dict = None
    lp_oracle: object = None

    def __post_init__(self):
        if self.rule not in RULES:
            raise EngineError(f"unknown rule {self.rule!r}")
        if self.prune_mode not in ("known-optimum", "incumbent"):
            raise EngineError(f"unknown prune mode {self.prune_mode!r}")
        if self.rule == "random" and self.seed is None:
            raise EngineError("the random rule requires a seed")
        if self.rule == "scripted" and self.plan is None:
            raise EngineError("the scripted rule requires a plan")
        if self.prune_mode == "known-optimum" and self.ip_result is None:
            raise EngineError("known-optimum pruning requires an IpResult")


@dataclass
class NodeRecord:
    node_id: int
    parent: int
    face_code: int
    depth: int
    status: str
    value: object
    action: str = "open"
    chosen: int = None
    int_branch: bool = False
    dual_bound: object = None


@dataclass
class BnbTrace:
    """Complete record of one simulated tree."""

    rule: str
    sense: str
    records: list
    branch_count: int
    node_count: int
    int_branch_count: int
    seed: int = None
    complete: bool = True
    incumbent_value: object = None
    incumbent_point: tuple = None

    @property
    def pruned_counts(self):
        out = {}
        for r in self.records:
            if r.action.startswith("pruned:"):
                key = r.action.split(":", 1)[1]
                out[key] = out.get(key, 0) + 1
        return out


def run(inst: MilpInstance, config: BnbConfig) -> BnbTrace:
    """Simulate branch-and-bound from the all-free face."""
    solver = config.lp_oracle or node_lp
    sense = inst.sense
    rng = (np.random.default_rng(config.seed)
           if config.rule == "random" else None)
    ip = config.ip_result
    known = config.prune_mode == "known-optimum"

    records = []
    heap = []
    open_nodes = {}
    incumbent_value = None
    incumbent_point = None

    def better(a, b):
        return a > b if sense == "max" else a < b

    def heap_key(value):
        return -value if sense == "max" else value

    def make_node(face, depth, parent):
        nonlocal incumbent_value, incumbent_point
        sol = solver(inst, face)
        rid = len(records)
        rec = NodeRecord(rid, parent, face.index(), depth, sol.status,
                         sol.value)
        records.append(rec)
        if sol.status == "infeasible":
            rec.action = "pruned:infeasible"
            return
        if sol.status != "optimal":
            raise EngineError(f"unexpected LP status {sol.status!r}")
        if not sol.fractional_set:
            if not known and (incumbent_value is None
                              or better(sol.value, incumbent_value)):
                incumbent_value = sol.value
                incumbent_point = sol.primal
            rec.action = "pruned:integral"
            return
        if known:
            if ip.status == "optimal" and not better(sol.value, ip.value):
                rec.action = "pruned:bound"
                return
        elif incumbent_value is not None and \
                not better(sol.value, incumbent_value):
            rec.action = "pruned:bound"
            return
        heapq.heappush(heap, (heap_key(sol.value), -depth, rid))
        open_nodes[rid] = (face, sol)

    make_node(Face.all_free(inst.n_binary), 0, None)
    branch_count = 0
    int_branch_count = 0
    complete = True
    while heap:
        _, _, rid = heapq.heappop(heap)
        face, sol = open_nodes.pop(rid)
        rec = records[rid]
        if not known and incumbent_value is not None and \
                not better(sol.value, incumbent_value):
            rec.action = "pruned:bound"
            continue
        if branch_count >= config.node_cap:
            complete = False
            rec.action = "open"
            for _, _, other in heap:
                records[other].action = "open"
            break
        j = select_variable(config.rule, inst, face, sol, rng=rng,
                            params=config.score, solver=solver,
                            plan=config.plan)
        var_index = inst.binary_indices[j]
        rec.action = "branched"
        rec.chosen = j
        rec.int_branch = not (0 < sol.primal[var_index] < 1)
        rec.dual_bound = sol.value
        branch_count += 1
        if rec.int_branch:
            int_branch_count += 1
        make_node(face.child(j, 0), rec.depth + 1, rid)
        make_node(face.child(j, 1), rec.depth + 1, rid)

    return BnbTrace(
        rule=config.rule, sense=sense, records=records,
        branch_count=branch_count, node_count=len(records),
        int_branch_count=int_branch_count, seed=config.seed,
        complete=complete, incumbent_value=incumbent_value,
        incumbent_point=incumbent_point)


def format_trace(trace: BnbTrace) -> str:
    """One node per line: id, parent, face code, depth, value, action."""
    lines = [f"# rule {trace.rule} sense {trace.sense} "
             f"branchings {trace.branch_count} nodes {trace.node_count} "
             f"seed {trace.seed} complete {int(trace.complete)}"]
    for r in trace.records:
        value = "-" if r.value is None else str(r.value)
        action = r.action
        if r.action == "branched":
            action = f"branched:{r.chosen}"
        parent = -1 if r.parent is None else r.parent
        lines.append(f"{r.node_id} {parent} {r.face_code} {r.depth} "
                     f"{value} {action}")
    return "\n".join(lines) + "\n"
