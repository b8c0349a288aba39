"""Independent oracles shared by the test suite.

Everything in here is deliberately naive and kept separate from the package
internals: brute-force enumeration over active sets, exhaustive recursions,
Fraction-based Gaussian elimination.  The point is that these paths share no
code with what they check.
"""

import itertools
from fractions import Fraction

INF = float("inf")


def to_fr(x):
    """Convert package rationals (mpq or Fraction) to a stdlib Fraction."""
    if hasattr(x, "numerator"):
        return Fraction(int(x.numerator), int(x.denominator))
    return Fraction(x)


def gauss_solve(A, b):
    """Exact solve of a square system; None when singular."""
    n = len(A)
    M = [list(A[i]) + [b[i]] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        pv = M[col][col]
        M[col] = [v / pv for v in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [v - f * w for v, w in zip(M[r], M[col])]
    return [M[i][n] for i in range(n)]


def _dense_rows(lp):
    rows = []
    for row, rel, rhs in zip(lp.rows, lp.relations, lp.rhs):
        dense = [Fraction(0)] * lp.n
        for j, a in row:
            dense[j] = to_fr(a)
        rows.append((dense, rel, to_fr(rhs)))
    return rows


def _is_feasible(lp, rows, x):
    for j in range(lp.n):
        if x[j] < to_fr(lp.lower[j]):
            return False
        if lp.upper[j] != INF and x[j] > to_fr(lp.upper[j]):
            return False
    for dense, rel, rhs in rows:
        lhs = sum(a * v for a, v in zip(dense, x))
        if rel == "<=" and lhs > rhs:
            return False
        if rel == ">=" and lhs < rhs:
            return False
        if rel == "=" and lhs != rhs:
            return False
    return True


def enumerate_basic_points(lp):
    """All vertices of the feasible region via active-set enumeration.

    Only sensible for small programs with every variable bounded (so that
    the region is a polytope and every vertex has n tight constraints).
    """
    rows = _dense_rows(lp)
    hyper = [(dense, rhs) for dense, _, rhs in rows]
    for j in range(lp.n):
        e = [Fraction(0)] * lp.n
        e[j] = Fraction(1)
        hyper.append((list(e), to_fr(lp.lower[j])))
        if lp.upper[j] != INF:
            hyper.append((list(e), to_fr(lp.upper[j])))
    seen = set()
    points = []
    for combo in itertools.combinations(range(len(hyper)), lp.n):
        A = [hyper[i][0] for i in combo]
        b = [hyper[i][1] for i in combo]
        x = gauss_solve(A, b)
        if x is None:
            continue
        pt = tuple(x)
        if pt in seen or not _is_feasible(lp, rows, x):
            continue
        seen.add(pt)
        points.append(pt)
    return points


def oracle_lp_value(lp):
    """(status, value) by scanning every vertex of the region."""
    points = enumerate_basic_points(lp)
    if not points:
        return "infeasible", None
    obj = [to_fr(c) for c in lp.objective]
    vals = [sum(c * v for c, v in zip(obj, p)) for p in points]
    return "optimal", (max(vals) if lp.sense == "max" else min(vals))


def brute_force_ip(inst):
    """IP optimum by enumerating every binary assignment.

    Each assignment is completed by solving the remaining LP through the
    face interface; only the enumeration itself is independent of the
    branch-and-bound path under test.
    """
    from bnblab import lp as lpmod
    from bnblab.model import node_lp, Face

    nb = inst.n_binary
    best = None
    witness = None
    for bits in itertools.product((0, 1), repeat=nb):
        face = Face(tuple(lpmod.FIX1 if b else lpmod.FIX0 for b in bits))
        sol = node_lp(inst, face)
        if sol.status != "optimal":
            continue
        if best is None or (sol.value > best if inst.sense == "max"
                            else sol.value < best):
            best = sol.value
            witness = sol.primal
    if best is None:
        return "infeasible", None, None
    return "optimal", best, witness


def exhaustive_tree_size(inst, ip, _cache=None):
    """Optimal branch count by plain recursion over faces (no d.p. table).

    LP outcomes are cached per face (they are pure), but the recursion
    itself recomputes every subtree from scratch.
    """
    from bnblab.model import Face, node_lp
    from bnblab import lp as lpmod

    cache = {} if _cache is None else _cache

    def pruned(face):
        code = face.index()
        if code not in cache:
            sol = node_lp(inst, face)
            if sol.status != "optimal":
                cache[code] = True
            elif ip.status != "optimal":
                cache[code] = False
            elif inst.sense == "max":
                cache[code] = sol.value <= ip.value
            else:
                cache[code] = sol.value >= ip.value
        return cache[code]

    def rec(face):
        if pruned(face):
            return 0
        free = [p for p, s in enumerate(face.symbols) if s == lpmod.FREE]
        assert free, "a fully fixed face can never be open"
        return 1 + min(rec(face.child(j, 0)) + rec(face.child(j, 1))
                       for j in free)

    return rec(Face.all_free(inst.n_binary))
