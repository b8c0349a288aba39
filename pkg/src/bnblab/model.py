"""MILP instances, hypercube faces, exact file I/O, and IP optima.

An instance carries either H-form constraint rows or a V-form vertex list
over its binary variables.  Faces are partial 0/1 fixings of the binaries,
convertible to a base-3 code (free=0, zero=1, one=2, most significant digit
is binary 0); they are the node currency of every search in this package.
"""

import functools
from dataclasses import dataclass

from . import lp
from .lp import (FIX0, FIX1, FREE, InvalidProgramError, LinearProgram,
                 LpSolution, VPolytope)
from .rational import INF, Q, parse_rat, rat_str

BINARY, CONTINUOUS = "binary", "continuous"

#: Hard cap on exact IP solves; override explicitly for bigger studies.
DEFAULT_BINARY_LIMIT = 24

_FACE_CHARS = {FREE: "*", FIX0: "0", FIX1: "1"}


class FaceError(Exception):
    """Illegal face operation (e.g. fixing an already fixed variable)."""


class ParseError(Exception):
    """Instance text rejected; carries a 1-based line number."""

    def __init__(self, line, message):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class Face:
    """A face of the binary hypercube: one symbol per binary variable."""

    symbols: tuple

    def __post_init__(self):
        for s in self.symbols:
            if s not in (FREE, FIX0, FIX1):
                raise FaceError(f"bad face symbol {s!r}")

    @classmethod
    def all_free(cls, n):
        return cls((FREE,) * n)

    @classmethod
    def from_index(cls, code, n):
        if not (0 <= code < 3 ** n):
            raise FaceError(f"face code {code} out of range for n={n}")
        digits = []
        for _ in range(n):
            digits.append(code % 3)
            code //= 3
        return cls(tuple(reversed(digits)))

    def index(self) -> int:
        code = 0
        for s in self.symbols:
            code = code * 3 + s
        return code

    def child(self, j, bit) -> "Face":
        """Fix free variable ``j`` to ``bit`` (0 or 1)."""
        if self.symbols[j] != FREE:
            raise FaceError(f"variable {j} is already fixed")
        if bit not in (0, 1):
            raise FaceError(f"bit must be 0 or 1, got {bit!r}")
        sym = FIX0 if bit == 0 else FIX1
        return Face(self.symbols[:j] + (sym,) + self.symbols[j + 1:])

    def free_positions(self):
        return tuple(p for p, s in enumerate(self.symbols) if s == FREE)

    def dimension(self) -> int:
        return sum(1 for s in self.symbols if s == FREE)

    def __len__(self):
        return len(self.symbols)

    def __str__(self):
        return "".join(_FACE_CHARS[s] for s in self.symbols)


@dataclass(frozen=True)
class Variable:
    name: str
    kind: str
    lower: object
    upper: object


@dataclass(frozen=True)
class MilpInstance:
    """A binary/mixed MILP in H-form (rows) or V-form (vertex list).

    Binary variables have bounds [0,1] and are the only branched variables;
    ``binary_indices`` lists them in face order.  V-form instances are pure
    binary and live entirely inside the unit cube.
    """

    name: str
    family: str
    seed: int
    sense: str
    variables: tuple
    objective: tuple
    rows: tuple = ()
    relations: tuple = ()
    rhs: tuple = ()
    vertices: VPolytope = None

    def __post_init__(self):
        if self.sense not in ("max", "min"):
            raise InvalidProgramError(f"bad sense {self.sense!r}")
        if len(self.objective) != len(self.variables):
            raise InvalidProgramError("objective length mismatch")
        for i, v in enumerate(self.variables):
            if v.kind not in (BINARY, CONTINUOUS):
                raise InvalidProgramError(f"variable {i}: bad kind {v.kind!r}")
            if v.kind == BINARY and (v.lower != 0 or v.upper != 1):
                raise InvalidProgramError(
                    f"binary variable {v.name} must have bounds [0, 1]")
        if self.n_binary < 1:
            raise InvalidProgramError("need at least one binary variable")
        if self.vertices is not None:
            if self.rows:
                raise InvalidProgramError("both rows and vertices present")
            if self.n_continuous:
                raise InvalidProgramError(
                    "V-form instances must be purely binary")
            if self.vertices.dimension != self.n_binary:
                raise InvalidProgramError("vertex dimension mismatch")

    @property
    def n_vars(self):
        return len(self.variables)

    @property
    def binary_indices(self):
        return tuple(i for i, v in enumerate(self.variables)
                     if v.kind == BINARY)

    @property
    def n_binary(self):
        return len(self.binary_indices)

    @property
    def n_continuous(self):
        return self.n_vars - self.n_binary

    @property
    def is_vform(self):
        return self.vertices is not None

    def to_lp(self) -> LinearProgram:
        return _instance_lp(self)


@functools.lru_cache(maxsize=256)
def _instance_lp(inst: MilpInstance) -> LinearProgram:
    if inst.is_vform:
        raise InvalidProgramError("V-form instance has no H-form program")
    return LinearProgram(
        sense=inst.sense,
        lower=tuple(v.lower for v in inst.variables),
        upper=tuple(v.upper for v in inst.variables),
        objective=inst.objective,
        rows=inst.rows,
        relations=inst.relations,
        rhs=inst.rhs,
        binaries=inst.binary_indices,
        names=tuple(v.name for v in inst.variables),
    )


def node_lp(inst: MilpInstance, face) -> LpSolution:
    """LP relaxation of the node given by ``face`` (H- or V-form)."""
    symbols = face.symbols if isinstance(face, Face) else tuple(face)
    if inst.is_vform:
        return lp.vsolve(inst.vertices, inst.objective, symbols, inst.sense)
    return lp.solve_fixed(inst.to_lp(), symbols)


@dataclass(frozen=True)
class IpResult:
    status: str            # "optimal" | "infeasible"
    value: object = None
    witness: tuple = None

    def better(self, candidate, sense) -> bool:
        """Is ``candidate`` strictly better than this optimum?"""
        if self.status != "optimal":
            return True
        return candidate > self.value if sense == "max" else \
            candidate < self.value


def ip_optimum(inst: MilpInstance, limit=DEFAULT_BINARY_LIMIT) -> IpResult:
    """Exact IP optimum.

    H-form instances run an incumbent-pruned branch-and-bound with the
    product-score strong-branching rule; V-form instances only need a scan
    of the integral vertices (an all-integer point of a 0/1-bounded hull is
    itself a vertex).
    """
    if inst.n_binary > limit:
        raise InvalidProgramError(
            f"{inst.n_binary} binaries exceed the limit {limit}; "
            f"pass a bigger limit explicitly to override")
    if inst.is_vform:
        best = None
        witness = None
        for v in inst.vertices.vertices:
            if any(x != 0 and x != 1 for x in v):
                continue
            val = sum((c * x for c, x in zip(inst.objective, v)), Q(0))
            if best is None or (val > best if inst.sense == "max"
                                else val < best):
                best, witness = val, v
        if best is None:
            return IpResult("infeasible")
        return IpResult("optimal", best, tuple(witness))
    from . import engine  # deferred: engine builds on this module

    config = engine.BnbConfig(rule="sb-p", prune_mode="incumbent")
    trace = engine.run(inst, config)
    if not trace.complete:
        raise lp.LpError("node cap hit while solving the IP")
    if trace.incumbent_value is None:
        return IpResult("infeasible")
    return IpResult("optimal", trace.incumbent_value, trace.incumbent_point)


# ---------------------------------------------------------------------------
# instance text format (see docs/formats.md for the grammar)

_MAGIC = "bnblab-instance v1"


def serialize(inst: MilpInstance) -> str:
    out = [_MAGIC]
    out.append(f"name {inst.name}")
    out.append(f"family {inst.family}")
    out.append(f"seed {inst.seed}")
    out.append(f"sense {inst.sense}")
    out.append(f"n_binary {inst.n_binary}")
    out.append(f"n_continuous {inst.n_continuous}")
    out.append("")
    out.append("VARIABLES")
    for v in inst.variables:
        out.append(f"{v.name} {v.kind} {rat_str(v.lower)} {rat_str(v.upper)}")
    out.append("")
    out.append("OBJECTIVE")
    for v, c in zip(inst.variables, inst.objective):
        out.append(f"{v.name} {rat_str(c)}")
    out.append("")
    if inst.is_vform:
        out.append("VERTICES")
        for row in inst.vertices.vertices:
            out.append(" ".join(rat_str(x) for x in row))
    else:
        out.append("CONSTRAINTS")
        for row, rel, b in zip(inst.rows, inst.relations, inst.rhs):
            terms = " ".join(f"{inst.variables[j].name} {rat_str(a)}"
                             for j, a in row)
            out.append(f"{rel} {rat_str(b)} : {terms}")
    out.append("END")
    out.append("")
    return "\n".join(out)


class _Reader:
    def __init__(self, text):
        self.lines = text.splitlines()
        self.pos = 0

    def next(self, skip_blank=True):
        while self.pos < len(self.lines):
            line = self.lines[self.pos]
            self.pos += 1
            if skip_blank and not line.strip():
                continue
            return self.pos, line.strip()
        return self.pos, None

    def fail(self, message):
        raise ParseError(self.pos, message)


def _header_field(reader, key):
    ln, line = reader.next()
    if line is None or not line.startswith(key + " "):
        raise ParseError(ln, f"expected '{key} ...'")
    return line[len(key) + 1:]


def _int_field(reader, key):
    raw = _header_field(reader, key)
    try:
        return int(raw)
    except ValueError:
        raise ParseError(reader.pos, f"{key} must be an integer, got {raw!r}")


def _rat_field(reader, raw, what):
    try:
        return parse_rat(raw)
    except ValueError:
        raise ParseError(reader.pos, f"bad rational in {what}: {raw!r}")


def parse(text: str) -> MilpInstance:
    reader = _Reader(text)
    ln, magic = reader.next()
    if magic != _MAGIC:
        raise ParseError(ln, f"expected header {_MAGIC!r}")
    name = _header_field(reader, "name")
    family = _header_field(reader, "family")
    seed = _int_field(reader, "seed")
    sense = _header_field(reader, "sense")
    if sense not in ("max", "min"):
        raise ParseError(reader.pos, f"sense must be max or min, got {sense!r}")
    nb = _int_field(reader, "n_binary")
    nc = _int_field(reader, "n_continuous")

    ln, tok = reader.next()
    if tok != "VARIABLES":
        raise ParseError(ln, "expected VARIABLES block")
    variables = []
    index_of = {}
    for _ in range(nb + nc):
        ln, line = reader.next()
        if line is None:
            raise ParseError(ln, "unexpected end of VARIABLES block")
        parts = line.split()
        if len(parts) != 4:
            raise ParseError(ln, "variable line needs: name kind lower upper")
        vname, kind, lo_raw, hi_raw = parts
        if kind not in (BINARY, CONTINUOUS):
            raise ParseError(ln, f"unknown variable kind {kind!r}")
        lo = _rat_field(reader, lo_raw, "lower bound")
        hi = INF if hi_raw == "inf" else _rat_field(reader, hi_raw,
                                                    "upper bound")
        if kind == BINARY and (lo != 0 or hi != 1):
            raise ParseError(ln, f"binary {vname} must have bounds 0 1")
        if vname in index_of:
            raise ParseError(ln, f"duplicate variable name {vname!r}")
        index_of[vname] = len(variables)
        variables.append(Variable(vname, kind, lo, hi))
    if sum(1 for v in variables if v.kind == BINARY) != nb:
        raise ParseError(reader.pos, "n_binary does not match VARIABLES")

    ln, tok = reader.next()
    if tok != "OBJECTIVE":
        raise ParseError(ln, "expected OBJECTIVE block")
    objective = [None] * len(variables)
    for _ in range(len(variables)):
        ln, line = reader.next()
        if line is None:
            raise ParseError(ln, "unexpected end of OBJECTIVE block")
        parts = line.split()
        if len(parts) != 2 or parts[0] not in index_of:
            raise ParseError(ln, f"bad objective line {line!r}")
        objective[index_of[parts[0]]] = _rat_field(reader, parts[1],
                                                   "objective")

    ln, tok = reader.next()
    rows, relations, rhs = [], [], []
    vertices = None
    if tok == "CONSTRAINTS":
        while True:
            ln, line = reader.next()
            if line is None:
                raise ParseError(ln, "missing END")
            if line == "END":
                break
            try:
                head, terms_raw = line.split(":", 1)
                rel, rhs_raw = head.split()
            except ValueError:
                raise ParseError(ln, f"bad constraint line {line!r}")
            if rel not in ("<=", "=", ">="):
                raise ParseError(ln, f"bad relation {rel!r}")
            toks = terms_raw.split()
            if len(toks) % 2 or not toks:
                raise ParseError(ln, "constraint terms must be name/coef pairs")
            terms = []
            for vname, coef in zip(toks[::2], toks[1::2]):
                if vname not in index_of:
                    raise ParseError(ln, f"unknown variable {vname!r}")
                terms.append((index_of[vname], _rat_field(reader, coef,
                                                          "coefficient")))
            rows.append(tuple(terms))
            relations.append(rel)
            rhs.append(_rat_field(reader, rhs_raw, "right-hand side"))
    elif tok == "VERTICES":
        vrows = []
        while True:
            ln, line = reader.next()
            if line is None:
                raise ParseError(ln, "missing END")
            if line == "END":
                break
            coords = tuple(_rat_field(reader, t, "vertex") for t in
                           line.split())
            if len(coords) != nb:
                raise ParseError(ln, f"vertex needs {nb} coordinates")
            vrows.append(coords)
        if not vrows:
            raise ParseError(ln, "VERTICES block is empty")
        vertices = VPolytope(nb, tuple(vrows))
    else:
        raise ParseError(ln, "expected CONSTRAINTS or VERTICES block")

    try:
        return MilpInstance(
            name=name, family=family, seed=seed, sense=sense,
            variables=tuple(variables), objective=tuple(objective),
            rows=tuple(rows), relations=tuple(relations), rhs=tuple(rhs),
            vertices=vertices)
    except InvalidProgramError as exc:
        raise ParseError(reader.pos, str(exc))


def load(path) -> MilpInstance:
    with open(path, "r", encoding="utf-8") as fh:
        return parse(fh.read())


def save(inst: MilpInstance, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(inst))
