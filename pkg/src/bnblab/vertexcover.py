"""Vertex-cover specific theory made executable.

Covers the half-integral LP oracle, the maximal set of integer variables
at a node (probing plus merging of optima), persistency verification, the
adversarial most-fractional LP oracle on unions of triangles and diamonds,
and the "most fractional neighbors" greedy pick.  Graphs are undirected,
loop-free, and branch on one binary per vertex.
"""

import itertools
from dataclasses import dataclass

from . import lp
from .lp import FIX0, FIX1, FREE, LpSolution
from .model import Face, MilpInstance, Variable, ip_optimum, node_lp
from .rational import Q

HALF = Q(1, 2)


class TopologyError(Exception):
    """The adversarial oracle met a free subgraph it cannot certify."""


class MergeError(Exception):
    """Merge inputs were not two optima of the same node."""


@dataclass(frozen=True)
class VcGraph:
    """An undirected graph whose minimum vertex cover we relax and branch."""

    n: int
    edges: tuple

    def __post_init__(self):
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < v < self.n):
                raise ValueError(f"bad edge ({u}, {v})")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))

    @classmethod
    def from_edges(cls, n, edges):
        return cls(n, tuple(sorted(tuple(sorted(e)) for e in edges)))

    def adjacency(self):
        adj = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def to_instance(self, name="vc", seed=0) -> MilpInstance:
        return MilpInstance(
            name=name, family="VertexCover", seed=seed, sense="min",
            variables=tuple(Variable(f"x{v}", "binary", Q(0), Q(1))
                            for v in range(self.n)),
            objective=(Q(1),) * self.n,
            rows=tuple(((u, Q(1)), (v, Q(1))) for u, v in self.edges),
            relations=(">=",) * len(self.edges),
            rhs=(Q(1),) * len(self.edges),
        )


def diamond() -> VcGraph:
    """K4 minus one edge on vertices (a, b, c, d) = (0, 1, 2, 3); b-d absent."""
    return VcGraph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])


def disjoint_triangles(m) -> VcGraph:
    if m < 1:
        raise ValueError("need at least one triangle")
    edges = []
    for t in range(m):
        base = 3 * t
        edges += [(base, base + 1), (base, base + 2), (base + 1, base + 2)]
    return VcGraph.from_edges(3 * m, edges)


def triangles_and_diamonds(m) -> VcGraph:
    """m triangles plus m/2 diamonds (m even), triangles on low indices."""
    if m < 2 or m % 2:
        raise ValueError("m must be even and at least 2")
    edges = []
    for t in range(m):
        base = 3 * t
        edges += [(base, base + 1), (base, base + 2), (base + 1, base + 2)]
    for d in range(m // 2):
        a = 3 * m + 4 * d
        b, c, e = a + 1, a + 2, a + 3
        edges += [(a, b), (b, c), (c, e), (e, a), (a, c)]
    return VcGraph.from_edges(5 * m, edges)


def face_from_fixings(n, fixings) -> Face:
    syms = [FREE] * n
    for v, b in (fixings or {}).items():
        if not (0 <= v < n):
            raise ValueError(f"fixing of unknown vertex {v}")
        if b not in (0, 1):
            raise ValueError(f"fixing value must be 0/1, got {b!r}")
        syms[v] = FIX0 if b == 0 else FIX1
    return Face(tuple(syms))


@dataclass(frozen=True)
class VcLpSolution:
    """A half-integral relaxation optimum over the whole vertex set."""

    value: object
    assignment: tuple
    integer_set: frozenset
    status: str = "optimal"

    @classmethod
    def from_assignment(cls, value, assignment):
        return cls(value, tuple(assignment),
                   frozenset(j for j, x in enumerate(assignment)
                             if x == 0 or x == 1))


@dataclass(frozen=True)
class MaximalIntegerSet:
    """The union of integer supports over all optima at one node."""

    face: Face
    indices: frozenset
    witness: VcLpSolution


def _check_cover(graph, assignment):
    return all(assignment[u] + assignment[v] >= 1 for u, v in graph.edges)


def vc_lp(graph, fixings=None, mode="basic") -> VcLpSolution:
    """Relaxation optimum at a node, under one of three oracles.

    'basic' returns the deterministic simplex vertex; 'max-integral'
    returns an optimum whose integer support is the full maximal set of
    integer variables; 'adversarial' returns the most fractional extreme
    point and only supports free parts that are disjoint unions of
    triangles and diamonds (and their branching remnants).
    """
    if mode == "adversarial":
        return adversarial_solution(graph, fixings)
    if mode == "max-integral":
        return maximal_integer_set(graph, fixings).witness
    if mode != "basic":
        raise ValueError(f"unknown mode {mode!r}")
    face = face_from_fixings(graph.n, fixings)
    sol = node_lp(graph.to_instance(), face)
    if sol.status != "optimal":
        return VcLpSolution(None, (), frozenset(), status=sol.status)
    for x in sol.primal:
        assert x == 0 or x == 1 or x == HALF, "lost half-integrality"
    return VcLpSolution.from_assignment(sol.value, sol.primal)


def merge_optima(x: VcLpSolution, y: VcLpSolution, graph: VcGraph) \
        -> VcLpSolution:
    """Combine two optima into one carrying both integer supports.

    Case table: keep x's integers; where x is 1/2 adopt y's value.  The
    result is checked to be a cover of identical value, which fails
    exactly when the inputs were not both optimal for the same node.
    """
    if x.status != "optimal" or y.status != "optimal" or x.value != y.value:
        raise MergeError("inputs must be optima of the same node")
    z = []
    for xv, yv in zip(x.assignment, y.assignment):
        z.append(xv if xv != HALF else yv)
    total = sum(z, Q(0))
    if total != x.value or not _check_cover(graph, z):
        raise MergeError("merge broke feasibility; inputs were not optima")
    return VcLpSolution.from_assignment(x.value, z)


def maximal_integer_set(graph, fixings=None) -> MaximalIntegerSet:
    """Probe every fractional vertex both ways and merge the witnesses.

    A vertex belongs to the set iff fixing it to 0 or to 1 preserves the
    relaxation optimum; vertices already integral in the returned basic
    solution are members for free.
    """
    face = face_from_fixings(graph.n, fixings)
    inst = graph.to_instance()
    base = node_lp(inst, face)
    if base.status != "optimal":
        raise ValueError("relaxation is infeasible at this node")
    witness = VcLpSolution.from_assignment(base.value, base.primal)
    prog = inst.to_lp()
    for j in range(graph.n):
        if witness.assignment[j] != HALF:
            continue
        for sym in (FIX0, FIX1):
            probe_face = face.symbols[:j] + (sym,) + face.symbols[j + 1:]
            verdict = lp.solve_fixed(prog, probe_face)
            if verdict.status == "optimal" and verdict.value == base.value:
                probe = VcLpSolution.from_assignment(verdict.value,
                                                     verdict.primal)
                witness = merge_optima(witness, probe, graph)
                break
    return MaximalIntegerSet(face, witness.integer_set, witness)


def integrality_gap(graph) -> object:
    """IP optimum minus relaxation optimum (nonnegative for vertex cover)."""
    inst = graph.to_instance()
    root = node_lp(inst, Face.all_free(graph.n))
    ip = ip_optimum(inst)
    return ip.value - root.value


def persistency_verify(graph) -> bool:
    """Fixing the maximal-integer-set values must keep an IP optimum."""
    inst = graph.to_instance()
    ip = ip_optimum(inst)
    mis = maximal_integer_set(graph)
    fixed = {j: int(mis.witness.assignment[j]) for j in mis.indices}
    best = None
    free = [v for v in range(graph.n) if v not in fixed]
    for bits in itertools.product((0, 1), repeat=len(free)):
        assign = dict(fixed)
        assign.update(zip(free, bits))
        if all(assign[u] + assign[v] >= 1 for u, v in graph.edges):
            total = sum(assign.values())
            if best is None or total < best:
                best = total
    return best is not None and Q(best) == ip.value


def most_fractional_neighbors_pick(adj, primal, candidates) -> int:
    """Argmax of fractional-neighbor count; ties to the lowest index."""
    best = None
    best_v = None
    for v in candidates:
        count = sum(1 for u in adj[v] if 0 < primal[u] < 1)
        if best is None or count > best:
            best, best_v = count, v
    return best_v


def greedy_select(graph, fixings, solution) -> int:
    """The greedy rule: branch on the vertex with most fractional neighbors."""
    assignment = (solution.assignment if isinstance(solution, VcLpSolution)
                  else tuple(solution))
    candidates = [v for v in range(graph.n) if 0 < assignment[v] < 1]
    if not candidates:
        raise ValueError("no fractional vertex to branch on")
    return most_fractional_neighbors_pick(graph.adjacency(), assignment,
                                          candidates)


# ---------------------------------------------------------------------------
# adversarial oracle (most fractional extreme point) for triangle/diamond
# unions and the remnants branching creates in them


def adversarial_solution(graph, fixings=None) -> VcLpSolution:
    adj = graph.adjacency()
    det = {}
    for v, b in (fixings or {}).items():
        if b not in (0, 1):
            raise ValueError(f"fixing value must be 0/1, got {b!r}")
        det[v] = b
    for v, b in list(det.items()):
        if b != 0:
            continue
        for u in adj[v]:
            if det.get(u) == 0:
                return VcLpSolution(None, (), frozenset(),
                                    status="infeasible")
            det[u] = 1
    assign = [None] * graph.n
    for v, b in det.items():
        assign[v] = Q(b)
    free = [v for v in range(graph.n) if v not in det]
    free_set = set(free)
    free_adj = {v: [u for u in adj[v] if u in free_set] for v in free}
    seen = set()
    for start in free:
        if start in seen:
            continue
        comp = _component(start, free_adj, seen)
        _fill_component(comp, free_adj, assign)
    value = sum(assign, Q(0))
    return VcLpSolution.from_assignment(value, assign)


def _component(start, free_adj, seen):
    comp = [start]
    seen.add(start)
    stack = [start]
    while stack:
        v = stack.pop()
        for u in free_adj[v]:
            if u not in seen:
                seen.add(u)
                comp.append(u)
                stack.append(u)
    return sorted(comp)


def _fill_component(comp, free_adj, assign):
    k = len(comp)
    degs = sorted(len(free_adj[v]) for v in comp)
    nedges = sum(degs) // 2
    if k == 1:
        assign[comp[0]] = Q(0)
        return
    if k == 2 and nedges == 1:
        assign[comp[0]] = Q(1)
        assign[comp[1]] = Q(0)
        return
    if k == 3 and nedges == 2:           # path: middle vertex covers it
        middle = next(v for v in comp if len(free_adj[v]) == 2)
        for v in comp:
            assign[v] = Q(1) if v == middle else Q(0)
        return
    if k == 3 and nedges == 3:           # triangle
        for v in comp:
            assign[v] = HALF
        return
    if k == 4 and nedges == 5 and degs == [2, 2, 3, 3]:   # diamond
        for v in comp:
            assign[v] = HALF
        return
    raise TopologyError(
        f"free component {comp} is not a triangle/diamond remnant")


def adversarial_oracle(graph):
    """An engine-compatible LP oracle backed by adversarial_solution."""

    def solver(inst, face) -> LpSolution:
        symbols = face.symbols if isinstance(face, Face) else tuple(face)
        fixings = {v: (0 if s == FIX0 else 1)
                   for v, s in enumerate(symbols) if s != FREE}
        sol = adversarial_solution(graph, fixings)
        if sol.status != "optimal":
            return LpSolution("infeasible")
        frac = tuple(v for v, x in enumerate(sol.assignment) if 0 < x < 1)
        return LpSolution("optimal", sol.value, sol.assignment, frac)

    return solver
