"""Gluing data, quad reduction, row selection and peripheral reduction."""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from .linalg import independent_rows, rank

FIXTURES = Path(__file__).parent / "fixtures"


class SchemaError(ValueError):
    pass


class RankError(ValueError):
    pass


@dataclass(frozen=True)
class PeripheralRow:
    A: Tuple[int, ...]
    B: Tuple[int, ...]
    C: Tuple[int, ...]


@dataclass(frozen=True)
class Cusp:
    meridian: PeripheralRow
    longitude: PeripheralRow


@dataclass(frozen=True)
class GluingData:
    num_tet: int
    edge_A: Tuple[Tuple[int, ...], ...]
    edge_B: Tuple[Tuple[int, ...], ...]
    edge_C: Tuple[Tuple[int, ...], ...]
    num_cusps: int
    cusps: Tuple[Cusp, ...]
    name: str = ""
    comment: str = ""

    def lint(self) -> List[str]:
        """Soft checks: every tetrahedron should meet the edges six times."""
        msgs = []
        for j in range(self.num_tet):
            tot = sum(self.edge_A[i][j] + self.edge_B[i][j] + self.edge_C[i][j]
                      for i in range(len(self.edge_A)))
            if tot != 6:
                msgs.append(f"tetrahedron {j}: edge incidences sum to {tot}, expected 6")
        return msgs


@dataclass(frozen=True)
class IndexInput:
    """M = (A | B | nu) with R rows and s columns."""
    A: Tuple[Tuple[int, ...], ...]
    B: Tuple[Tuple[int, ...], ...]
    nu: Tuple[int, ...]

    @property
    def R(self) -> int:
        return len(self.nu)

    @property
    def s(self) -> int:
        return len(self.A[0]) if self.A else 0

    def col(self, i: int) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        return tuple(r[i] for r in self.A), tuple(r[i] for r in self.B)

    @classmethod
    def make(cls, A, B, nu) -> "IndexInput":
        A = tuple(tuple(int(x) for x in r) for r in A)
        B = tuple(tuple(int(x) for x in r) for r in B)
        nu = tuple(int(x) for x in nu)
        if not (len(A) == len(B) == len(nu)):
            raise ValueError("A, B and nu must have the same number of rows")
        if A and any(len(r) != len(A[0]) for r in A + B):
            raise ValueError("ragged A or B")
        return cls(A, B, nu)

    def to_json(self) -> dict:
        return {"A": [list(r) for r in self.A], "B": [list(r) for r in self.B], "nu": list(self.nu)}


@dataclass(frozen=True)
class PeripheralReduced:
    """Columns are cusps; a, b from meridians and c, d from longitudes (each N x r)."""
    a: Tuple[Tuple[int, ...], ...]
    b: Tuple[Tuple[int, ...], ...]
    c: Tuple[Tuple[int, ...], ...]
    d: Tuple[Tuple[int, ...], ...]
    meridian_const: Tuple[int, ...] = field(default=())
    longitude_const: Tuple[int, ...] = field(default=())

    def charges(self, m: Sequence[int], e: Sequence[int]) -> Tuple[List[int], List[int]]:
        """Per-tetrahedron charges (d m - b e, -c m + a e)."""
        n = len(self.a)
        mt = [sum(self.d[i][j] * m[j] - self.b[i][j] * e[j] for j in range(len(m))) for i in range(n)]
        et = [sum(-self.c[i][j] * m[j] + self.a[i][j] * e[j] for j in range(len(m))) for i in range(n)]
        return mt, et


# --- JSON ---------------------------------------------------------------------

def _int_row(v, where: str, n: int) -> Tuple[int, ...]:
    if not isinstance(v, list):
        raise SchemaError(f"{where}: expected a list")
    if len(v) != n:
        raise SchemaError(f"{where}: expected {n} entries, got {len(v)}")
    for j, x in enumerate(v):
        if isinstance(x, bool) or not isinstance(x, int):
            raise SchemaError(f"{where}[{j}]: expected an integer, got {x!r}")
    return tuple(v)


def _matrix(d: dict, key: str, n: int) -> Tuple[Tuple[int, ...], ...]:
    if key not in d:
        raise SchemaError(f"missing key {key!r}")
    rows = d[key]
    if not isinstance(rows, list) or len(rows) != n:
        raise SchemaError(f"{key}: expected {n} rows")
    return tuple(_int_row(r, f"{key}[{i}]", n) for i, r in enumerate(rows))


def _prow(d, where: str, n: int) -> PeripheralRow:
    if not isinstance(d, dict):
        raise SchemaError(f"{where}: expected an object")
    try:
        return PeripheralRow(*(_int_row(d[k], f"{where}.{k}", n) for k in "ABC"))
    except KeyError as exc:
        raise SchemaError(f"{where}: missing key {exc.args[0]!r}") from None


def from_dict(d: dict) -> GluingData:
    if not isinstance(d, dict):
        raise SchemaError("top level: expected an object")
    for key in ("num_tetrahedra", "num_cusps"):
        if not isinstance(d.get(key), int) or d[key] < 0:
            raise SchemaError(f"{key}: expected a nonnegative integer")
    n, r = d["num_tetrahedra"], d["num_cusps"]
    A, B, C = (_matrix(d, k, n) for k in ("edge_A", "edge_B", "edge_C"))
    cusps_raw = d.get("cusps")
    if not isinstance(cusps_raw, list) or len(cusps_raw) != r:
        raise SchemaError(f"cusps: expected a list of {r} cusps")
    cusps = []
    for i, c in enumerate(cusps_raw):
        if not isinstance(c, dict) or "meridian" not in c or "longitude" not in c:
            raise SchemaError(f"cusps[{i}]: needs meridian and longitude")
        cusps.append(Cusp(_prow(c["meridian"], f"cusps[{i}].meridian", n),
                          _prow(c["longitude"], f"cusps[{i}].longitude", n)))
    return GluingData(n, A, B, C, r, tuple(cusps), str(d.get("name", "")), str(d.get("comment", "")))


def to_dict(g: GluingData) -> dict:
    def pr(p: PeripheralRow):
        return {"A": list(p.A), "B": list(p.B), "C": list(p.C)}
    d = {"name": g.name}
    if g.comment:
        d["comment"] = g.comment
    d.update({
        "num_tetrahedra": g.num_tet,
        "num_cusps": g.num_cusps,
        "edge_A": [list(r) for r in g.edge_A],
        "edge_B": [list(r) for r in g.edge_B],
        "edge_C": [list(r) for r in g.edge_C],
        "cusps": [{"meridian": pr(c.meridian), "longitude": pr(c.longitude)} for c in g.cusps],
    })
    return d


def parse(data) -> GluingData:
    """Parse gluing data from JSON bytes or text."""
    if isinstance(data, (bytes, bytearray)):
        data = data.decode("utf-8")
    try:
        d = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return from_dict(d)


def serialize(g: GluingData) -> bytes:
    return (json.dumps(to_dict(g), indent=1) + "\n").encode("utf-8")


def load(path) -> GluingData:
    return parse(Path(path).read_bytes())


def load_fixture(name: str, fixtures_dir=None) -> GluingData:
    base = Path(fixtures_dir) if fixtures_dir else FIXTURES
    p = base / (name if name.endswith(".json") else name + ".json")
    return load(p)


# --- quad reduction -------------------------------------------------------------

def _rotate_triple(a, b, c, k: int):
    """k-fold S on one column: (a|b|c) -> (b|c|a)."""
    for _ in range(k % 3):
        a, b, c = b, c, a
    return a, b, c


def _check_quad(quad, n: int) -> Tuple[int, ...]:
    if quad is None:
        return (0,) * n
    quad = tuple(int(x) % 3 for x in quad)
    if len(quad) != n:
        raise ValueError(f"quad choice has length {len(quad)}, expected {n}")
    return quad


def rotate_columns(g: GluingData, quad) -> GluingData:
    """Apply S^quad[i] to the (Z, Z', Z'') columns of every tetrahedron."""
    quad = _check_quad(quad, g.num_tet)

    def rot_rows(A, B, C):
        A2, B2, C2 = [list(r) for r in A], [list(r) for r in B], [list(r) for r in C]
        for i in range(len(A)):
            for j, k in enumerate(quad):
                A2[i][j], B2[i][j], C2[i][j] = _rotate_triple(A[i][j], B[i][j], C[i][j], k)
        return (tuple(map(tuple, A2)), tuple(map(tuple, B2)), tuple(map(tuple, C2)))

    eA, eB, eC = rot_rows(g.edge_A, g.edge_B, g.edge_C)
    cusps = []
    for c in g.cusps:
        rows = []
        for p in (c.meridian, c.longitude):
            (a,), (b,), (cc,) = rot_rows((p.A,), (p.B,), (p.C,))
            rows.append(PeripheralRow(a, b, cc))
        cusps.append(Cusp(*rows))
    return GluingData(g.num_tet, eA, eB, eC, g.num_cusps, tuple(cusps), g.name, g.comment)


def _reduce_row(a, b, c):
    """Eliminate the Z' entries of one row using beta = 1 - alpha - gamma."""
    return (tuple(x - y for x, y in zip(a, b)), tuple(z - y for z, y in zip(c, b)), -sum(b))


def reduce(g: GluingData, quad=None) -> IndexInput:
    """Full (A | B | nu) over all edge rows, for the given quad choice.

    quad[i] = k means the i-th column is acted on k times by S.
    """
    g = rotate_columns(g, quad)
    A, B, nu = [], [], []
    for ra, rb, rc in zip(g.edge_A, g.edge_B, g.edge_C):
        a, b, c0 = _reduce_row(ra, rb, rc)
        A.append(a)
        B.append(b)
        nu.append(2 + c0)
    return IndexInput.make(A, B, nu)


def select_rows(M: IndexInput, r: int) -> IndexInput:
    """First maximal independent row subset; its size must be N - r."""
    rows = [a + b for a, b in zip(M.A, M.B)]
    keep = independent_rows(rows)
    expected = M.s - r
    if len(keep) != expected:
        raise RankError(f"rank of (A|B) is {len(keep)}, expected {expected}")
    return IndexInput.make([M.A[i] for i in keep], [M.B[i] for i in keep], [M.nu[i] for i in keep])


def index_input(g: GluingData, quad=None) -> IndexInput:
    return select_rows(reduce(g, quad), g.num_cusps)


def reduce_peripheral(g: GluingData, quad=None) -> PeripheralReduced:
    g = rotate_columns(g, quad)
    n, r = g.num_tet, g.num_cusps
    cols = {k: [[0] * r for _ in range(n)] for k in "abcd"}
    mconst, lconst = [], []
    for j, cusp in enumerate(g.cusps):
        ma, mb, m0 = _reduce_row(cusp.meridian.A, cusp.meridian.B, cusp.meridian.C)
        la, lb, l0 = _reduce_row(cusp.longitude.A, cusp.longitude.B, cusp.longitude.C)
        for i in range(n):
            cols["a"][i][j], cols["b"][i][j] = ma[i], mb[i]
            cols["c"][i][j], cols["d"][i][j] = la[i], lb[i]
        mconst.append(m0)
        lconst.append(l0)
    t = {k: tuple(map(tuple, v)) for k, v in cols.items()}
    return PeripheralReduced(t["a"], t["b"], t["c"], t["d"], tuple(mconst), tuple(lconst))


def permute_tetrahedra(g: GluingData, perm: Sequence[int]) -> GluingData:
    """New tetrahedron j is old tetrahedron perm[j]."""
    def p(row):
        return tuple(row[k] for k in perm)
    cusps = tuple(Cusp(*(PeripheralRow(p(x.A), p(x.B), p(x.C)) for x in (c.meridian, c.longitude)))
                  for c in g.cusps)
    return GluingData(g.num_tet, tuple(map(p, g.edge_A)), tuple(map(p, g.edge_B)),
                      tuple(map(p, g.edge_C)), g.num_cusps, cusps, g.name, g.comment)


def warn_lint(g: GluingData) -> None:
    for msg in g.lint():
        warnings.warn(msg)


def check_rank(g: GluingData, quad=None) -> int:
    M = reduce(g, quad)
    return rank([a + b for a, b in zip(M.A, M.B)])
