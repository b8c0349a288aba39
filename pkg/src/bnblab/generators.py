"""Seeded random generators for the ten benchmark instance families.

Every family draws from numpy's default_rng (PCG64) in a fixed, documented
order (see docs/formats.md), and every continuous-looking parameter is
drawn as an exact rational on a 1/1000 grid, so the same GenSpec always
yields a byte-identical instance file and the LP core stays exact.  Sizes
are configurable below the reference values so the 3^n dynamic program
stays affordable.
"""

from dataclasses import dataclass, field

import numpy as np

from .model import MilpInstance, Variable, ip_optimum
from .rational import INF, Q, rat

FAMILIES = ("K-P5", "K-C5", "K-G22", "LotSizing", "CapLotSizing",
            "BigBucketLotSizing", "CcpPower", "CcpPortfolio",
            "StableSetKnapsack", "VertexCover")


class GenError(Exception):
    """Invalid generation request."""


@dataclass(frozen=True)
class GenSpec:
    """Family, seed, and family-specific size parameters."""

    family: str
    seed: int
    size: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise GenError(f"unknown family {self.family!r}")
        for k, v in self.size.items():
            if k == "p":
                continue
            if not isinstance(v, int) or v <= 0:
                raise GenError(f"size parameter {k}={v!r} must be positive")


def _u(rng, lo, hi):
    """Uniform integer on the inclusive range {lo, ..., hi}."""
    return int(rng.integers(lo, hi + 1))


def _grid(rng, lo_th, hi_th):
    """Uniform rational on the 1/1000 grid between lo_th/1000 and hi_th/1000."""
    return Q(_u(rng, lo_th, hi_th), 1000)


def _bernoulli(rng, prob):
    """Exact biased coin for a rational probability."""
    prob = rat(prob) if not hasattr(prob, "denominator") else prob
    return _u(rng, 0, int(prob.denominator) - 1) < int(prob.numerator)


def generate(spec: GenSpec) -> MilpInstance:
    rng = np.random.default_rng(spec.seed)
    builder = _BUILDERS[spec.family]
    return builder(spec, rng)


# ---------------------------------------------------------------------------
# multidimensional knapsack variants


def _knapsack(spec, rng, n_pack, n_cover, c_lo, c_hi):
    n = spec.size.get("n", 20)
    rows = []
    relations = []
    rhs = []
    for i in range(n_pack + n_cover):
        coeffs = []
        for j in range(n):
            if _u(rng, 0, 3) == 0:            # zero with probability 1/4
                coeffs.append(Q(0))
            else:
                coeffs.append(Q(_u(rng, 1, 200)))
        total = sum(coeffs, Q(0))
        b = Q(int(total) // 2)
        rows.append(tuple((j, a) for j, a in enumerate(coeffs) if a != 0))
        relations.append("<=" if i < n_pack else ">=")
        rhs.append(b)
    objective = tuple(Q(_u(rng, c_lo, c_hi)) for _ in range(n))
    return MilpInstance(
        name=f"{spec.family}-s{spec.seed}", family=spec.family,
        seed=spec.seed, sense="max",
        variables=tuple(Variable(f"x{j}", "binary", Q(0), Q(1))
                        for j in range(n)),
        objective=objective,
        rows=tuple(rows), relations=tuple(relations), rhs=tuple(rhs))


def _kp5(spec, rng):
    return _knapsack(spec, rng, 5, 0, 1, 200)


def _kc5(spec, rng):
    return _knapsack(spec, rng, 0, 5, -200, -1)


def _kg22(spec, rng):
    return _knapsack(spec, rng, 2, 2, -100, 100)


# ---------------------------------------------------------------------------
# lot-sizing variants


def _lot_sizing(spec, rng, capacitated=False):
    n = spec.size.get("n", 17)
    if n < 2:
        raise GenError("lot-sizing needs at least two periods")
    c = [Q(_u(rng, 1, 10)) for _ in range(n)]
    f = [Q(_u(rng, 200, 400)) for _ in range(n)]
    h = [Q(_u(rng, 1, 10)) for _ in range(n - 1)]
    d = [Q(_u(rng, 0, 100)) for _ in range(n)]
    u = [Q(_u(rng, 150, 250)) for _ in range(n)] if capacitated else None

    # variables: x_1..x_n, s_1..s_{n-1}, y_1..y_n
    variables = []
    for i in range(n):
        variables.append(Variable(f"x{i + 1}", "continuous", Q(0), INF))
    for i in range(n - 1):
        variables.append(Variable(f"s{i + 1}", "continuous", Q(0), INF))
    for i in range(n):
        variables.append(Variable(f"y{i + 1}", "binary", Q(0), Q(1)))
    x = lambda i: i - 1
    s = lambda i: n + i - 1
    y = lambda i: 2 * n - 1 + i - 1

    objective = [Q(0)] * (3 * n - 1)
    for i in range(1, n + 1):
        objective[x(i)] = c[i - 1]
        objective[y(i)] = f[i - 1]
    for i in range(1, n):
        objective[s(i)] = h[i - 1]

    rows, relations, rhs = [], [], []
    rows.append(((x(1), Q(1)), (s(1), Q(-1))))
    relations.append("=")
    rhs.append(d[0])
    for i in range(2, n):
        rows.append(((s(i - 1), Q(1)), (x(i), Q(1)), (s(i), Q(-1))))
        relations.append("=")
        rhs.append(d[i - 1])
    rows.append(((s(n - 1), Q(1)), (x(n), Q(1))))
    relations.append("=")
    rhs.append(d[n - 1])
    for i in range(1, n + 1):
        cap = u[i - 1] if capacitated else sum(d[i - 1:], Q(0))
        rows.append(((x(i), Q(1)), (y(i), -cap)))
        relations.append("<=")
        rhs.append(Q(0))

    return MilpInstance(
        name=f"{spec.family}-s{spec.seed}", family=spec.family,
        seed=spec.seed, sense="min",
        variables=tuple(variables), objective=tuple(objective),
        rows=tuple(rows), relations=tuple(relations), rhs=tuple(rhs))


def _lotsizing(spec, rng):
    return _lot_sizing(spec, rng, capacitated=False)


def _cap_lotsizing(spec, rng):
    return _lot_sizing(spec, rng, capacitated=True)


def _big_bucket(spec, rng):
    T = spec.size.get("T", 9)
    P = spec.size.get("P", 2)
    if T < 2:
        raise GenError("big-bucket lot-sizing needs at least two periods")
    f = [[Q(_u(rng, 200, 400)) for _ in range(T)] for _ in range(P)]
    h = [[Q(_u(rng, 1, 10)) for _ in range(T - 1)] for _ in range(P)]
    d = [[Q(_u(rng, 0, 100)) for _ in range(T)] for _ in range(P)]
    ts = [[Q(_u(rng, 200, 500)) for _ in range(T)] for _ in range(P)]
    tu = [[Q(_u(rng, 1, 10)) for _ in range(T)] for _ in range(P)]
    C = [Q(_u(rng, 1000 * P, 2000 * P)) for _ in range(T)]
    z = [Q(_u(rng, 0, 200)) for _ in range(P)]

    variables = []
    for p in range(P):
        for i in range(T):
            variables.append(Variable(f"x{p + 1}_{i + 1}", "continuous",
                                      Q(0), INF))
    for p in range(P):
        for i in range(1, T):
            variables.append(Variable(f"s{p + 1}_{i + 1}", "continuous",
                                      Q(0), INF))
    for p in range(P):
        for i in range(T):
            variables.append(Variable(f"y{p + 1}_{i + 1}", "binary",
                                      Q(0), Q(1)))
    x = lambda p, i: p * T + (i - 1)
    s = lambda p, i: P * T + p * (T - 1) + (i - 1)
    y = lambda p, i: P * T + P * (T - 1) + p * T + (i - 1)

    objective = [Q(0)] * len(variables)
    for p in range(P):
        for i in range(1, T + 1):
            objective[y(p, i)] = f[p][i - 1]
        for i in range(1, T):
            objective[s(p, i)] = h[p][i - 1]

    rows, relations, rhs = [], [], []
    for p in range(P):
        rows.append(((x(p, 1), Q(1)), (s(p, 1), Q(-1))))
        relations.append("=")
        rhs.append(d[p][0] - z[p])
        for i in range(2, T):
            rows.append(((s(p, i - 1), Q(1)), (x(p, i), Q(1)),
                         (s(p, i), Q(-1))))
            relations.append("=")
            rhs.append(d[p][i - 1])
        rows.append(((s(p, T - 1), Q(1)), (x(p, T), Q(1))))
        relations.append("=")
        rhs.append(d[p][T - 1])
        for i in range(1, T + 1):
            cap = sum(d[p][i - 1:], Q(0))
            rows.append(((x(p, i), Q(1)), (y(p, i), -cap)))
            relations.append("<=")
            rhs.append(Q(0))
    for i in range(1, T + 1):
        terms = []
        for p in range(P):
            terms.append((y(p, i), ts[p][i - 1]))
            terms.append((x(p, i), tu[p][i - 1]))
        rows.append(tuple(sorted(terms)))
        relations.append("<=")
        rhs.append(C[i - 1])

    return MilpInstance(
        name=f"{spec.family}-s{spec.seed}", family=spec.family,
        seed=spec.seed, sense="min",
        variables=tuple(variables), objective=tuple(objective),
        rows=tuple(rows), relations=tuple(relations), rhs=tuple(rhs))


# ---------------------------------------------------------------------------
# chance-constrained models


def _grid_floor(value):
    """Round a rational down onto the 1/1000 grid."""
    scaled = value * 1000
    return Q(int(scaled.numerator) // int(scaled.denominator), 1000)


def _ccp_power(spec, rng):
    T = spec.size.get("T", 30)
    N = spec.size.get("N", 20)
    Tc, Tn = 15, 10
    fcap = Q(1, 5)        # nuclear at most 20% of total capacity
    eps = Q(1, 5)         # demand may go unserved with probability <= 0.2
    pi = Q(1, N)
    d = [[Q(_u(rng, 300, 700)) for _ in range(T)] for _ in range(N)]
    c = [Q(_u(rng, 100, 300)) for _ in range(T)]
    nn = [Q(_u(rng, 100, 200)) for _ in range(T)]
    e1 = Q(_u(rng, 100, 500))
    r = Q(_u(rng, 700, 999), 1000)
    e = [e1]
    for _ in range(1, T):
        e.append(_grid_floor(e[-1] * r))

    variables = []
    for tag in ("x", "y", "u", "v"):
        for t in range(T):
            variables.append(Variable(f"{tag}{t + 1}", "continuous",
                                      Q(0), INF))
    for i in range(N):
        variables.append(Variable(f"z{i + 1}", "binary", Q(0), Q(1)))
    x = lambda t: t - 1
    yv = lambda t: T + t - 1
    u = lambda t: 2 * T + t - 1
    v = lambda t: 3 * T + t - 1
    z = lambda i: 4 * T + i - 1

    objective = [Q(0)] * len(variables)
    for t in range(1, T + 1):
        objective[x(t)] = c[t - 1]
        objective[yv(t)] = nn[t - 1]

    rows, relations, rhs = [], [], []
    for t in range(1, T + 1):
        terms = [(u(t), Q(1))]
        terms += [(x(sv), Q(-1)) for sv in range(max(1, t - Tc + 1), t + 1)]
        rows.append(tuple(sorted(terms)))
        relations.append("=")
        rhs.append(Q(0))
    for t in range(1, T + 1):
        terms = [(v(t), Q(1))]
        terms += [(yv(sv), Q(-1)) for sv in range(max(1, t - Tn + 1), t + 1)]
        rows.append(tuple(sorted(terms)))
        relations.append("=")
        rhs.append(Q(0))
    for t in range(1, T + 1):
        rows.append(((u(t), 1 - fcap), (v(t), -fcap)))
        relations.append("<=")
        rhs.append(fcap * e[t - 1])
    for t in range(1, T + 1):
        for i in range(1, N + 1):
            gap = d[i - 1][t - 1] - e[t - 1]
            rows.append(tuple(sorted(((u(t), Q(1)), (v(t), Q(1)),
                                      (z(i), gap)))))
            relations.append(">=")
            rhs.append(gap)
    rows.append(tuple((z(i), pi) for i in range(1, N + 1)))
    relations.append("<=")
    rhs.append(eps)

    return MilpInstance(
        name=f"{spec.family}-s{spec.seed}", family=spec.family,
        seed=spec.seed, sense="min",
        variables=tuple(variables), objective=tuple(objective),
        rows=tuple(rows), relations=tuple(relations), rhs=tuple(rhs))


def _ccp_portfolio(spec, rng):
    n = spec.size.get("n", 30)
    m = spec.size.get("m", 20)
    k = spec.size.get("k", 4)
    r = Q(11, 10)
    a = [[_grid(rng, 800, 1500) for _ in range(n)] for _ in range(m)]

    variables = [Variable(f"x{j + 1}", "continuous", Q(0), INF)
                 for j in range(n)]
    variables += [Variable(f"z{i + 1}", "binary", Q(0), Q(1))
                  for i in range(m)]
    objective = [Q(1)] * n + [Q(0)] * m

    rows, relations, rhs = [], [], []
    for i in range(m):
        terms = [(j, a[i][j]) for j in range(n)] + [(n + i, r)]
        rows.append(tuple(terms))
        relations.append(">=")
        rhs.append(r)
    rows.append(tuple((n + i, Q(1)) for i in range(m)))
    relations.append("<=")
    rhs.append(Q(k))

    return MilpInstance(
        name=f"{spec.family}-s{spec.seed}", family=spec.family,
        seed=spec.seed, sense="min",
        variables=tuple(variables), objective=tuple(objective),
        rows=tuple(rows), relations=tuple(relations), rhs=tuple(rhs))


# ---------------------------------------------------------------------------
# stable set with knapsack cutoff, vertex cover


def _stable_set_knapsack(spec, rng):
    n = spec.size.get("n", 20)
    m = spec.size.get("m", 30)
    fr = _grid(rng, 300, 500)
    n1 = int(fr * n)
    if n1 < 1 or n1 >= n:
        raise GenError("degenerate bipartition; increase n")
    perm = [int(v) for v in rng.permutation(n)]
    side1 = sorted(perm[:n1])
    side2 = sorted(perm[n1:])
    pairs = [(min(u, v), max(u, v)) for u in side1 for v in side2]
    pairs.sort()
    if m > len(pairs):
        raise GenError(f"cannot place {m} edges in a {n1}x{n - n1} bipartition")
    chosen = sorted(int(i) for i in rng.choice(len(pairs), size=m,
                                               replace=False))
    edges = [pairs[i] for i in chosen]
    c = [Q(_u(rng, 1, 50)) for _ in range(n)]
    rcut = _grid(rng, 750, 900)

    variables = tuple(Variable(f"x{j}", "binary", Q(0), Q(1))
                      for j in range(n))
    base_rows = tuple(((u, Q(1)), (v, Q(1))) for u, v in edges)
    stable = MilpInstance(
        name=f"{spec.family}-base-s{spec.seed}", family=spec.family,
        seed=spec.seed, sense="max", variables=variables,
        objective=tuple(c), rows=base_rows,
        relations=("<=",) * m, rhs=(Q(1),) * m)
    delta = ip_optimum(stable)
    assert delta.status == "optimal"

    rows = base_rows + (tuple((j, c[j]) for j in range(n) if c[j] != 0),)
    relations = ("<=",) * m + ("<=",)
    rhs = (Q(1),) * m + (rcut * delta.value,)
    return MilpInstance(
        name=f"{spec.family}-s{spec.seed}", family=spec.family,
        seed=spec.seed, sense="max", variables=variables,
        objective=tuple(c), rows=rows, relations=relations, rhs=rhs)


def _vertex_cover(spec, rng):
    N = spec.size.get("N", 20)
    p = rat(spec.size.get("p", "3/4"))
    if not (0 < p <= 1):
        raise GenError("edge probability must lie in (0, 1]")
    edges = []
    for i in range(N):
        for j in range(i + 1, N):
            if _bernoulli(rng, p):
                edges.append((i, j))
    return MilpInstance(
        name=f"{spec.family}-s{spec.seed}", family=spec.family,
        seed=spec.seed, sense="min",
        variables=tuple(Variable(f"x{v}", "binary", Q(0), Q(1))
                        for v in range(N)),
        objective=(Q(1),) * N,
        rows=tuple(((u, Q(1)), (v, Q(1))) for u, v in edges),
        relations=(">=",) * len(edges),
        rhs=(Q(1),) * len(edges))


_BUILDERS = {
    "K-P5": _kp5,
    "K-C5": _kc5,
    "K-G22": _kg22,
    "LotSizing": _lotsizing,
    "CapLotSizing": _cap_lotsizing,
    "BigBucketLotSizing": _big_bucket,
    "CcpPower": _ccp_power,
    "CcpPortfolio": _ccp_portfolio,
    "StableSetKnapsack": _stable_set_knapsack,
    "VertexCover": _vertex_cover,
}
