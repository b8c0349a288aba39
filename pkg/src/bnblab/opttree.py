"""Exact optimal branch-and-bound tree sizes via a 3^n dynamic program.

Phase 1 classifies every face of the binary hypercube as pruned (LP
infeasible, or LP value not strictly better than the IP optimum) or open.
Faces are processed in groups that share the first n1 fixed-coordinate
pattern; within a group, faces are visited by decreasing dimension and a
face whose immediate in-group superface is already pruned inherits the
mark without an LP call (pruning is closed under taking subfaces).  Groups
never read each other, so they can be farmed out to parallel workers and
the resulting bitmap is independent of scheduling.

Phase 2 fills, layer by increasing dimension,

    opt(F) = 1 + min over free j of  opt(F_{j,0}) + opt(F_{j,1})

with opt = 0 on pruned faces, breaking ties towards the lowest variable
index so the reconstructed tree is canonical.
"""

import functools
import hashlib
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import lp
from .model import Face, IpResult, MilpInstance, ip_optimum, node_lp, serialize
from .rational import Q

#: 3^16 is ~43M faces; anything beyond needs an explicit override.
DEFAULT_FACE_LIMIT = 16

_CHUNK = 1 << 20


def _pow3(n):
    out = [1] * (n + 1)
    for i in range(1, n + 1):
        out[i] = out[i - 1] * 3
    return out


@functools.lru_cache(maxsize=8)
def _local_tables(n2):
    """Digit matrix and descending-dimension layers for a 3^n2 block."""
    size = 3 ** n2
    codes = np.arange(size, dtype=np.int64)
    digits = np.empty((n2, size), dtype=np.int64)
    tmp = codes.copy()
    for k in range(n2 - 1, -1, -1):   # k indexes positions, MSD first
        digits[k] = tmp % 3
        tmp //= 3
    dims = (digits == 0).sum(axis=0)
    layers = tuple(codes[dims == d] for d in range(n2, -1, -1))
    return digits, layers


def _dims_global(n):
    size = 3 ** n
    out = np.empty(size, dtype=np.int8)
    for start in range(0, size, _CHUNK):
        stop = min(start + _CHUNK, size)
        tmp = np.arange(start, stop, dtype=np.int64)
        acc = np.zeros(stop - start, dtype=np.int8)
        for _ in range(n):
            acc += tmp % 3 == 0
            tmp //= 3
        out[start:stop] = acc
    return out


def _prune_probe(inst, threshold):
    """Face -> pruned? with early exit as soon as the bound test fails."""
    if inst.is_vform:
        poly, obj, sense = inst.vertices, inst.objective, inst.sense

        def probe(symbols):
            sol = lp.vsolve(poly, obj, symbols, sense)
            if sol.status != "optimal":
                return True
            if threshold is None:
                return False
            return (sol.value <= threshold if sense == "max"
                    else sol.value >= threshold)
    else:
        prog = inst.to_lp()

        def probe(symbols):
            return lp.compare_to_bound(prog, symbols, threshold) != "better"

    return probe


def _phase1_group(inst, threshold, key_syms, n2):
    digits, layers = _local_tables(n2)
    probe = _prune_probe(inst, threshold)
    pow3 = _pow3(n2)
    pruned = np.zeros(3 ** n2, dtype=bool)
    for codes in layers:
        if codes.size == 0:
            continue
        casc = np.zeros(codes.size, dtype=bool)
        for k in range(n2):
            dg = digits[k][codes]
            fixed = dg != 0
            if fixed.any():
                parents = codes[fixed] - dg[fixed] * pow3[n2 - 1 - k]
                casc[fixed] |= pruned[parents]
        for code in codes[~casc]:
            symbols = key_syms + tuple(int(digits[k][code])
                                       for k in range(n2))
            pruned[code] = probe(symbols)
        pruned[codes[casc]] = True
    return pruned


def _key_symbols(key, n1):
    syms = []
    for _ in range(n1):
        syms.append(key % 3)
        key //= 3
    return tuple(reversed(syms))


def _phase1_worker(args):
    inst, threshold, n1, n2, keys = args
    return [(key, _phase1_group(inst, threshold, _key_symbols(key, n1), n2))
            for key in keys]


def phase1(inst: MilpInstance, ip: IpResult, n1=None, jobs=1,
           limit=DEFAULT_FACE_LIMIT) -> np.ndarray:
    """Pruned-face bitmap over all 3^n faces (index = face code)."""
    n = inst.n_binary
    if n > limit:
        raise lp.LpError(f"{n} binaries exceed the face limit {limit}")
    n1 = n // 2 if n1 is None else n1
    if not (0 <= n1 <= n):
        raise ValueError("n1 out of range")
    n2 = n - n1
    threshold = ip.value if ip.status == "optimal" else None
    block = 3 ** n2
    out = np.zeros(3 ** n, dtype=bool)
    keys = range(3 ** n1)
    if jobs <= 1:
        for key in keys:
            out[key * block:(key + 1) * block] = _phase1_group(
                inst, threshold, _key_symbols(key, n1), n2)
        return out
    chunks = [list(keys)[i::jobs] for i in range(jobs)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for part in pool.map(_phase1_worker,
                             [(inst, threshold, n1, n2, chunk)
                              for chunk in chunks if chunk]):
            for key, local in part:
                out[key * block:(key + 1) * block] = local
    return out


def phase1_naive(inst: MilpInstance, ip: IpResult) -> np.ndarray:
    """Reference bitmap: one full LP solve per face, no cascading."""
    n = inst.n_binary
    out = np.zeros(3 ** n, dtype=bool)
    for code in range(3 ** n):
        face = Face.from_index(code, n)
        sol = node_lp(inst, face)
        if sol.status != "optimal":
            out[code] = True
        elif ip.status == "optimal":
            out[code] = (sol.value <= ip.value if inst.sense == "max"
                         else sol.value >= ip.value)
    return out


@dataclass
class DpTable:
    """Dense optimal-subtree sizes: opt[code] = branchings below that face."""

    n: int
    opt: np.ndarray
    arg: np.ndarray
    pruned: np.ndarray

    @property
    def root_branchings(self) -> int:
        return int(self.opt[0])


def phase2(pruned: np.ndarray, n: int) -> DpTable:
    size = 3 ** n
    assert pruned.shape == (size,)
    pow3 = _pow3(n)
    opt = np.zeros(size, dtype=np.int32)
    arg = np.full(size, -1, dtype=np.int16)
    dims = _dims_global(n)
    big = np.iinfo(np.int64).max
    if size and not pruned[dims == 0].all():
        raise AssertionError("a fully fixed face survived phase 1")
    for d in range(1, n + 1):
        codes = np.nonzero((dims == d) & ~pruned)[0]
        if codes.size == 0:
            continue
        best = np.full(codes.size, big, dtype=np.int64)
        bestj = np.full(codes.size, -1, dtype=np.int16)
        for j in range(n):
            p = pow3[n - 1 - j]
            digit = (codes // p) % 3
            freemask = digit == 0
            if not freemask.any():
                continue
            sub = codes[freemask]
            total = opt[sub + p].astype(np.int64) + opt[sub + 2 * p]
            cur = best[freemask]
            upd = total < cur
            if upd.any():
                cur[upd] = total[upd]
                best[freemask] = cur
                bj = bestj[freemask]
                bj[upd] = j
                bestj[freemask] = bj
        opt[codes] = 1 + best
        arg[codes] = bestj
    return DpTable(n, opt, arg, pruned)


@dataclass(frozen=True)
class OptTreeNode:
    face_code: int
    depth: int
    var: int          # branching position; -1 on pruned leaves
    int_branch: bool = False


@dataclass
class OptTree:
    """One canonical optimal tree plus its headline counts."""

    branch_count: int
    node_count: int
    int_branch_count: int
    internal: tuple
    table: DpTable

    @property
    def int_branch_fraction(self):
        if self.branch_count == 0:
            return Q(0)
        return Q(self.int_branch_count, self.branch_count)


def reconstruct(table: DpTable):
    """Internal nodes of the canonical optimal tree, preorder."""
    if table.pruned[0]:
        return ()
    out = []
    pow3 = _pow3(table.n)
    stack = [(0, 0)]
    while stack:
        code, depth = stack.pop()
        j = int(table.arg[code])
        out.append((code, depth, j))
        p = pow3[table.n - 1 - j]
        for child in (code + 2 * p, code + p):
            if not table.pruned[child]:
                stack.append((child, depth + 1))
    return tuple(out)


def optimal_tree(inst: MilpInstance, ip: IpResult = None, n1=None, jobs=1,
                 limit=DEFAULT_FACE_LIMIT, cache_dir=None) -> OptTree:
    """IP bootstrap, phase 1 (optionally cached), phase 2, reconstruction.

    Every internal node's LP is re-solved to classify the branching as
    integral or fractional in the deterministic returned solution.
    """
    if ip is None:
        ip = ip_optimum(inst)
    pruned = None
    if cache_dir:
        pruned = _cache_load(cache_dir, inst, ip)
    if pruned is None:
        pruned = phase1(inst, ip, n1=n1, jobs=jobs, limit=limit)
        if cache_dir:
            _cache_store(cache_dir, inst, ip, pruned)
    table = phase2(pruned, inst.n_binary)
    internal = []
    int_count = 0
    for code, depth, j in reconstruct(table):
        sol = node_lp(inst, Face.from_index(code, inst.n_binary))
        assert sol.status == "optimal"
        x = sol.primal[inst.binary_indices[j]]
        integral = not (0 < x < 1)
        int_count += integral
        internal.append(OptTreeNode(code, depth, j, integral))
    branch = table.root_branchings
    assert branch == len(internal)
    return OptTree(branch_count=branch, node_count=2 * branch + 1,
                   int_branch_count=int_count, internal=tuple(internal),
                   table=table)


def _cache_key(inst, ip):
    text = serialize(inst) + f"|{ip.status}|{ip.value}"
    return hashlib.sha256(text.encode()).hexdigest()


def _cache_load(cache_dir, inst, ip):
    path = os.path.join(cache_dir, _cache_key(inst, ip) + ".npy")
    if os.path.exists(path):
        return np.load(path)
    return None


def _cache_store(cache_dir, inst, ip, pruned):
    os.makedirs(cache_dir, exist_ok=True)
    path = os.path.join(cache_dir, _cache_key(inst, ip) + ".npy")
    np.save(path, pruned)
