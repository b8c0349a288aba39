"""Exact linear programming over H-form constraints and V-form vertex lists.

The H-form solver is a bounded-variable two-phase primal simplex run
entirely in exact rational arithmetic with Bland's anti-cycling rule and
the declared variable order as the tie-break, so every call is
deterministic and repeated calls return bit-identical output.  A light
presolve (fixed-variable substitution, singleton rows to bounds, interval
redundancy) shrinks the tableau; it only rewrites the representation, never
the feasible set, so the returned point is still an extreme point of the
original region.

The V-form path exploits that branching only ever fixes coordinates to the
cube bounds 0/1: a point of conv(V) has coordinate j at 0 (or 1) exactly
when its whole support does, so the face-restricted polytope is the convex
hull of the matching vertices and the optimum is attained at one of them.
The returned solution is therefore always a vertex of the original
polytope.

This is a correctness-first solver for desk-size instances, not a
performance LP code: no warm starts, no dual simplex, no scaling.
"""

from dataclasses import dataclass

from .rational import INF, Q

# Face symbols: per binary variable, free or fixed to 0/1.
FREE, FIX0, FIX1 = 0, 1, 2

LE, EQ, GE = "<=", "=", ">="
_RELATIONS = (LE, EQ, GE)

OPTIMAL, INFEASIBLE, UNBOUNDED = "optimal", "infeasible", "unbounded"

_PIVOT_LIMIT = 200_000  # safety net; Bland's rule terminates well before this


class LpError(Exception):
    """Base class for solver errors."""


class InvalidProgramError(LpError):
    """Structured validation failure for a malformed program."""


@dataclass(frozen=True)
class LinearProgram:
    """An LP over bounded variables with sparse rational constraint rows.

    ``rows[i]`` is a tuple of ``(var_index, coefficient)`` pairs;
    ``binaries`` lists the variable indices branched as binaries, in the
    order used by faces.  Lower bounds are finite rationals; upper bounds
    may be the float INF sentinel.
    """

    sense: str
    lower: tuple
    upper: tuple
    objective: tuple
    rows: tuple = ()
    relations: tuple = ()
    rhs: tuple = ()
    binaries: tuple = ()
    names: tuple = ()

    def __post_init__(self):
        n = len(self.lower)
        if self.sense not in ("max", "min"):
            raise InvalidProgramError(f"bad sense {self.sense!r}")
        if len(self.upper) != n or len(self.objective) != n:
            raise InvalidProgramError("bounds/objective length mismatch")
        if self.names and len(self.names) != n:
            raise InvalidProgramError("names length mismatch")
        for j in range(n):
            if isinstance(self.lower[j], float):
                raise InvalidProgramError(f"variable {j}: lower must be rational")
            if self.upper[j] != INF and self.lower[j] > self.upper[j]:
                raise InvalidProgramError(f"variable {j}: lower > upper")
        if not (len(self.rows) == len(self.relations) == len(self.rhs)):
            raise InvalidProgramError("rows/relations/rhs length mismatch")
        for i, row in enumerate(self.rows):
            seen = set()
            for j, _ in row:
                if not (0 <= j < n):
                    raise InvalidProgramError(
                        f"row {i} references undeclared variable {j}")
                if j in seen:
                    raise InvalidProgramError(f"row {i} repeats variable {j}")
                seen.add(j)
            if self.relations[i] not in _RELATIONS:
                raise InvalidProgramError(
                    f"row {i}: bad relation {self.relations[i]!r}")
        for j in self.binaries:
            if not (0 <= j < n):
                raise InvalidProgramError(f"binary index {j} out of range")
            if self.lower[j] < 0 or self.upper[j] == INF or self.upper[j] > 1:
                raise InvalidProgramError(
                    f"binary variable {j} must have bounds within [0, 1]")

    @property
    def n(self) -> int:
        return len(self.lower)


@dataclass(frozen=True)
class LpSolution:
    """Result of one solve.

    ``value`` and ``primal`` are exact rationals, present iff optimal.
    ``fractional_set`` holds the *positions within the binary list* whose
    value is strictly inside (0, 1); these positions are what faces and
    branching rules index.
    """

    status: str
    value: object = None
    primal: tuple = None
    fractional_set: tuple = ()


@dataclass(frozen=True)
class VPolytope:
    """A polytope in [0,1]^n given by its vertex list (rows of rationals)."""

    dimension: int
    vertices: tuple

    def __post_init__(self):
        if not self.vertices:
            raise InvalidProgramError("vertex list is empty")
        for i, v in enumerate(self.vertices):
            if len(v) != self.dimension:
                raise InvalidProgramError(f"vertex {i} has wrong dimension")
            for x in v:
                if x < 0 or x > 1:
                    raise InvalidProgramError(
                        f"vertex {i} coordinate outside [0, 1]")


def _check_face(face, nb):
    if len(face) != nb:
        raise LpError(f"face length {len(face)} != number of binaries {nb}")
    for sym in face:
        if sym not in (FREE, FIX0, FIX1):
            raise LpError(f"bad face symbol {sym!r}")


# ---------------------------------------------------------------------------
# presolve


def _presolve(lp, lo, hi):
    """Tighten bounds and drop rows without changing the feasible set.

    Returns (alive_rows, status): alive_rows is a list of (terms, rel, rhs)
    restricted to unfixed variables; status is INFEASIBLE or None.
    ``lo``/``hi`` are mutated in place.
    """
    alive = [(list(row), rel, b)
             for row, rel, b in zip(lp.rows, lp.relations, lp.rhs)]
    changed = True
    while changed:
        changed = False
        kept = []
        for terms, rel, b in alive:
            const = Q(0)
            free = []
            for j, a in terms:
                if a == 0:
                    continue
                if lo[j] == hi[j]:
                    const += a * lo[j]
                else:
                    free.append((j, a))
            rhs = b - const
            if not free:
                ok = ((rel == LE and rhs >= 0) or (rel == GE and rhs <= 0)
                      or (rel == EQ and rhs == 0))
                if not ok:
                    return [], INFEASIBLE
                changed = True
                continue
            if len(free) == 1:
                j, a = free[0]
                v = rhs / a
                if rel == EQ:
                    new_lo, new_hi = v, v
                elif (rel == LE) == (a > 0):   # implies x_j <= v
                    new_lo, new_hi = None, v
                else:                          # implies x_j >= v
                    new_lo, new_hi = v, None
                if new_lo is not None and new_lo > lo[j]:
                    lo[j] = new_lo
                if new_hi is not None and (hi[j] == INF or new_hi < hi[j]):
                    hi[j] = new_hi
                if hi[j] != INF and lo[j] > hi[j]:
                    return [], INFEASIBLE
                changed = True
                continue
            # interval activity of the free support
            mn, mx = Q(0), Q(0)
            mn_inf = mx_inf = False
            for j, a in free:
                if a > 0:
                    mn += a * lo[j]
                    if hi[j] == INF:
                        mx_inf = True
                    else:
                        mx += a * hi[j]
                else:
                    mx += a * lo[j]
                    if hi[j] == INF:
                        mn_inf = True
                    else:
                        mn += a * hi[j]
            if rel == LE:
                if not mn_inf and mn > rhs:
                    return [], INFEASIBLE
                if not mx_inf and mx <= rhs:
                    changed = True
                    continue
            elif rel == GE:
                if not mx_inf and mx < rhs:
                    return [], INFEASIBLE
                if not mn_inf and mn >= rhs:
                    changed = True
                    continue
            else:
                if (not mn_inf and mn > rhs) or (not mx_inf and mx < rhs):
                    return [], INFEASIBLE
            kept.append((free, rel, rhs))
        alive = kept
    return alive, None


# ---------------------------------------------------------------------------
# bounded-variable two-phase simplex

_BASIC, _AT_LO, _AT_HI = 0, 1, 2


class _Simplex:
    """One solve: build from (lp, face), run the phases, extract."""

    def __init__(self, lp, face=None):
        self.lp = lp
        self.negate = lp.sense == "min"
        lo = list(lp.lower)
        hi = list(lp.upper)
        if face is not None:
            _check_face(face, len(lp.binaries))
            for pos, sym in enumerate(face):
                if sym == FREE:
                    continue
                j = lp.binaries[pos]
                v = Q(0) if sym == FIX0 else Q(1)
                if v < lo[j] or (hi[j] != INF and v > hi[j]):
                    self.presolve_status = INFEASIBLE
                    return
                lo[j] = hi[j] = v
        self.lo_orig, self.hi_orig = lo, hi
        rows, status = _presolve(lp, lo, hi)
        self.presolve_status = status
        if status is not None:
            return
        self._build(rows)

    def _build(self, rows):
        lo, hi = self.lo_orig, self.hi_orig
        lp = self.lp
        m = len(rows)
        self.m = m
        # column order: free structural variables (declared order), then one
        # slack per row, then artificials.  GE rows are negated so every
        # slack has coefficient +1 and bounds [0, inf) ([0, 0] for EQ rows).
        structural = [j for j in range(lp.n) if lo[j] != hi[j]]
        colpos = {j: c for c, j in enumerate(structural)}
        self.structural = structural
        ns = len(structural)
        dense_rows = []
        b = []
        for terms, rel, rhs in rows:
            flip = rel == GE
            dense = [Q(0)] * ns
            for j, a in terms:
                dense[colpos[j]] = -a if flip else a
            dense_rows.append(dense)
            b.append(-rhs if flip else rhs)

        col_lo = [lo[j] for j in structural]
        col_hi = [hi[j] for j in structural]
        col_orig = list(structural)
        # start each structural variable at the bound favoured by a sign
        # vote over the (flipped, all-<=) rows: fewer violated rows means
        # fewer artificials.  Deterministic, ties to the lower bound.
        vote = [0] * ns
        for dense in dense_rows:
            for c in range(ns):
                a = dense[c]
                if a > 0:
                    vote[c] -= 1
                elif a < 0:
                    vote[c] += 1
        status_col = [_AT_HI if (vote[c] > 0 and col_hi[c] != INF) else _AT_LO
                      for c in range(ns)]
        for i in range(m):
            col_lo.append(Q(0))
            col_hi.append(Q(0) if rows[i][1] == EQ else INF)
            col_orig.append(("slack", i))
            status_col.append(_AT_LO)  # overwritten below when basic

        # residual of each row at the chosen starting point
        resid = list(b)
        for c, j in enumerate(structural):
            v = col_lo[c] if status_col[c] == _AT_LO else col_hi[c]
            if v != 0:
                for i in range(m):
                    a = dense_rows[i][c]
                    if a != 0:
                        resid[i] -= a * v

        basis = [None] * m
        beta = [None] * m
        art_rows = []
        for i in range(m):
            sc = ns + i
            if resid[i] >= col_lo[sc] and (col_hi[sc] == INF
                                           or resid[i] <= col_hi[sc]):
                basis[i] = sc
                beta[i] = resid[i]
                status_col[sc] = _BASIC
            else:
                art_rows.append(i)

        # extend rows with slack identity and artificial columns
        nart = len(art_rows)
        T = []
        for i in range(m):
            row = dense_rows[i]
            row.extend(Q(1) if r == i else Q(0) for r in range(m))
            row.extend(Q(0) for _ in range(nart))
            T.append(row)
        self.art_cols = set()
        for k, i in enumerate(art_rows):
            ac = ns + m + k
            sigma = 1 if resid[i] > 0 else -1
            T[i][ac] = Q(sigma)
            if sigma < 0:
                T[i] = [-x for x in T[i]]
            col_lo.append(Q(0))
            col_hi.append(INF)
            col_orig.append(("art", i))
            status_col.append(_BASIC)
            basis[i] = ac
            beta[i] = sigma * resid[i]
            self.art_cols.add(ac)

        self.T = T
        self.col_lo = col_lo
        self.col_hi = col_hi
        self.col_orig = col_orig
        self.status_col = status_col
        self.basis = basis
        self.beta = beta
        self.ncols = len(col_lo)

    # -- helpers ----------------------------------------------------------

    def _bound_value(self, c):
        return self.col_lo[c] if self.status_col[c] == _AT_LO else self.col_hi[c]

    def _reduced_costs(self, cost):
        d = list(cost)
        z = Q(0)
        for c in range(self.ncols):
            if self.status_col[c] != _BASIC and cost[c] != 0:
                z += cost[c] * self._bound_value(c)
        for i in range(self.m):
            cb = cost[self.basis[i]]
            z += cb * self.beta[i]
            if cb != 0:
                row = self.T[i]
                for c in range(self.ncols):
                    if row[c] != 0:
                        d[c] -= cb * row[c]
        return d, z

    def _optimize(self, cost, cutoff=None):
        """Maximize ``cost`` from the current basis (Bland's rule).

        Returns (status, z); status is OPTIMAL, UNBOUNDED, or 'above' when
        z exceeded ``cutoff`` (early exit used by prune probes).
        """
        d, z = self._reduced_costs(cost)
        if cutoff is not None and z > cutoff:
            return "above", z
        pivots = 0
        while True:
            pivots += 1
            if pivots > _PIVOT_LIMIT:  # pragma: no cover - safety net
                raise LpError("pivot limit exceeded")
            enter = -1
            for c in range(self.ncols):
                st = self.status_col[c]
                if st == _BASIC or self.col_lo[c] == self.col_hi[c]:
                    continue
                if c in self.art_cols:
                    continue  # artificials are dropped once they leave
                if (st == _AT_LO and d[c] > 0) or (st == _AT_HI and d[c] < 0):
                    enter = c
                    break
            if enter < 0:
                return OPTIMAL, z
            t = 1 if self.status_col[enter] == _AT_LO else -1
            # ratio test: entering variable moves by t * theta, theta >= 0
            theta = None
            leave_row = -1
            if self.col_hi[enter] != INF:
                theta = self.col_hi[enter] - self.col_lo[enter]
            for i in range(self.m):
                a = self.T[i][enter]
                if a == 0:
                    continue
                ta = a if t == 1 else -a
                bv = self.basis[i]
                if ta > 0:
                    lim = (self.beta[i] - self.col_lo[bv]) / ta
                else:
                    if self.col_hi[bv] == INF:
                        continue
                    lim = (self.col_hi[bv] - self.beta[i]) / (-ta)
                if theta is None or lim < theta:
                    theta = lim
                    leave_row = i
                elif lim == theta and leave_row >= 0 and \
                        bv < self.basis[leave_row]:
                    leave_row = i
            if theta is None:
                return UNBOUNDED, z
            z += d[enter] * t * theta
            if leave_row < 0:
                # bound flip: the entering variable crosses to its other bound
                if theta != 0:
                    for i in range(self.m):
                        a = self.T[i][enter]
                        if a != 0:
                            self.beta[i] -= t * theta * a
                self.status_col[enter] = _AT_HI if t == 1 else _AT_LO
            else:
                leave = self.basis[leave_row]
                newval = self._bound_value(enter) + t * theta
                if theta != 0:
                    for i in range(self.m):
                        if i == leave_row:
                            continue
                        a = self.T[i][enter]
                        if a != 0:
                            self.beta[i] -= t * theta * a
                a = self.T[leave_row][enter]
                ta = a if t == 1 else -a
                self.status_col[leave] = _AT_LO if ta > 0 else _AT_HI
                self.status_col[enter] = _BASIC
                self.basis[leave_row] = enter
                self.beta[leave_row] = newval
                self._eliminate(leave_row, enter, d)
            if cutoff is not None and z > cutoff:
                return "above", z

    def _eliminate(self, r, c, d):
        piv = self.T[r][c]
        if piv != 1:
            self.T[r] = [x / piv for x in self.T[r]]
        prow = self.T[r]
        for i in range(self.m):
            if i == r:
                continue
            f = self.T[i][c]
            if f != 0:
                self.T[i] = [x - f * p for x, p in zip(self.T[i], prow)]
        f = d[c]
        if f != 0:
            d[:] = [x - f * p for x, p in zip(d, prow)]

    def find_feasible(self):
        """Phase 1.  True when a basic feasible point has been reached."""
        if not self.art_cols:
            return True
        cost = [Q(0)] * self.ncols
        for c in self.art_cols:
            cost[c] = Q(-1)
        status, z = self._optimize(cost)
        if status != OPTIMAL or z != 0:
            return False
        for c in self.art_cols:
            self.col_hi[c] = Q(0)  # pinned; can never re-enter
        for i in range(self.m):
            bc = self.basis[i]
            if bc not in self.art_cols:
                continue
            row = self.T[i]
            pivot_col = -1
            for c in range(self.ncols):
                if c in self.art_cols or row[c] == 0:
                    continue
                pivot_col = c
                break
            if pivot_col < 0:
                continue  # redundant row; inert for the rest of the solve
            old_status = self.status_col[pivot_col]
            self.status_col[bc] = _AT_LO
            self.status_col[pivot_col] = _BASIC
            self.basis[i] = pivot_col
            self.beta[i] = (self.col_lo[pivot_col] if old_status == _AT_LO
                            else self.col_hi[pivot_col])
            dummy = [Q(0)] * self.ncols
            self._eliminate(i, pivot_col, dummy)
        return True

    def phase2_cost(self):
        cost = [Q(0)] * self.ncols
        for c, j in enumerate(self.structural):
            cj = self.lp.objective[j]
            cost[c] = -cj if self.negate else cj
        return cost

    def extract(self):
        vals = list(self.lo_orig)  # presolve-fixed variables sit at lo == hi
        pos = {c: i for i, c in enumerate(self.basis)}
        for c, j in enumerate(self.structural):
            if self.status_col[c] == _BASIC:
                vals[j] = self.beta[pos[c]]
            else:
                vals[j] = self._bound_value(c)
        return tuple(vals)


def _finish(lp, sim):
    if not sim.find_feasible():
        return LpSolution(INFEASIBLE)
    status, _ = sim._optimize(sim.phase2_cost())
    if status == UNBOUNDED:
        return LpSolution(UNBOUNDED)
    primal = sim.extract()
    value = sum((c * v for c, v in zip(lp.objective, primal)), Q(0))
    frac = tuple(p for p, j in enumerate(lp.binaries) if 0 < primal[j] < 1)
    return LpSolution(OPTIMAL, value, primal, frac)


def solve(lp: LinearProgram) -> LpSolution:
    """Exact optimal basic solution of ``lp`` under deterministic pivoting."""
    sim = _Simplex(lp)
    if sim.presolve_status == INFEASIBLE:
        return LpSolution(INFEASIBLE)
    return _finish(lp, sim)


def solve_fixed(lp: LinearProgram, face) -> LpSolution:
    """Solve ``lp`` with the face's binary fixings collapsed into bounds."""
    sim = _Simplex(lp, face)
    if sim.presolve_status == INFEASIBLE:
        return LpSolution(INFEASIBLE)
    return _finish(lp, sim)


def compare_to_bound(lp: LinearProgram, face, bound):
    """Is the face optimum strictly better than ``bound``?

    Returns 'infeasible', 'better' or 'not-better'.  "Better" means larger
    for max programs, smaller for min programs.  The simplex stops as soon
    as the running objective proves 'better', which makes this the cheap
    probe behind prune tests.  ``bound=None`` degrades to a feasibility
    test that reports any feasible face as 'better'.
    """
    sim = _Simplex(lp, face)
    if sim.presolve_status == INFEASIBLE:
        return "infeasible"
    if not sim.find_feasible():
        return "infeasible"
    if bound is None:
        return "better"
    # the simplex objective only spans non-fixed columns; shift the cutoff
    # by the objective mass sitting on (face- or presolve-) fixed variables
    offset = Q(0)
    for j in range(lp.n):
        if sim.lo_orig[j] == sim.hi_orig[j]:
            c = lp.objective[j]
            if c != 0:
                offset += (-c if lp.sense == "min" else c) * sim.lo_orig[j]
    cutoff = (-bound if lp.sense == "min" else bound) - offset
    status, z = sim._optimize(sim.phase2_cost(), cutoff=cutoff)
    if status in ("above", UNBOUNDED):
        return "better"
    return "better" if z > cutoff else "not-better"


def vsolve(poly: VPolytope, objective, face, sense="max") -> LpSolution:
    """Optimize over conv(vertices) restricted to the 0/1 fixings of ``face``.

    Fixings sit at the cube bounds, so the restriction is the hull of the
    vertices matching them and the optimum is attained at one; ties break
    to the lowest vertex row.  All coordinates count as binaries for
    ``fractional_set``.
    """
    if len(objective) != poly.dimension:
        raise LpError("objective dimension mismatch")
    _check_face(face, poly.dimension)
    best = None
    best_v = None
    for v in poly.vertices:
        ok = True
        for pos, sym in enumerate(face):
            if sym == FREE:
                continue
            if v[pos] != (Q(0) if sym == FIX0 else Q(1)):
                ok = False
                break
        if not ok:
            continue
        val = sum((c * x for c, x in zip(objective, v)), Q(0))
        if best is None or (val > best if sense == "max" else val < best):
            best, best_v = val, v
    if best is None:
        return LpSolution(INFEASIBLE)
    frac = tuple(p for p, x in enumerate(best_v) if 0 < x < 1)
    return LpSolution(OPTIMAL, best, tuple(best_v), frac)
