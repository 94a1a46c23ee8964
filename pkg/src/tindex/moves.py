"""2-3 and 3-2 moves on gluing data, and the angle-structure maps between them.

Variable labels follow the bipyramid picture: the two tetrahedra of T carry
(X1, X1', X1'') and (X2, X2', X2''), the three of T~ carry (Wt, Wt', Wt'') for
t = 1, 2, 3, and Wt' are the angles at the new internal edge.  An alignment is a
per-tetrahedron Z/3 rotation applied before the move, so that the caller can
match their own labeling to this one.

Column layout: two_three puts W1 in the slot of X1, W2 in the slot of X2 and
appends W3 as the last tetrahedron.  three_two does the reverse (W1 -> X1,
W2 -> X2, the W3 column is dropped).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .linalg import hermite_normal_form, independent_rows
from .nzdata import Cusp, GluingData, PeripheralRow, reduce, reduce_peripheral, rotate_columns
from .structures import StructureWitness


class PatternError(ValueError):
    """The site does not look like the three tetrahedra around an internal edge."""


class NotApplicable(ValueError):
    """The special-structure predicate needs a strict witness."""


@dataclass(frozen=True)
class MoveSite:
    tets: Tuple[int, ...]
    alignment: Tuple[int, ...] = ()

    def __post_init__(self):
        if len(set(self.tets)) != len(self.tets):
            raise ValueError(f"site indices must be distinct: {self.tets}")
        if self.alignment and len(self.alignment) != len(self.tets):
            raise ValueError("alignment must have one rotation per site tetrahedron")

    def check(self, n: int) -> None:
        for t in self.tets:
            if not 0 <= t < n:
                raise IndexError(f"tetrahedron {t} out of range 0..{n - 1}")

    def quad(self, n: int) -> Tuple[int, ...]:
        q = [0] * n
        for t, r in zip(self.tets, self.alignment or (0,) * len(self.tets)):
            q[t] = r % 3
        return tuple(q)


def _site(site, size: int, align=None) -> MoveSite:
    if isinstance(site, MoveSite):
        s = site
    else:
        s = MoveSite(tuple(int(x) for x in site), tuple(align) if align else ())
    if len(s.tets) != size:
        raise ValueError(f"site needs {size} tetrahedra, got {len(s.tets)}")
    return s


def _rows(g: GluingData):
    """All rows (edges first, then meridian/longitude per cusp) as [A, B, C] lists."""
    rows = [[list(a), list(b), list(c)] for a, b, c in zip(g.edge_A, g.edge_B, g.edge_C)]
    for c in g.cusps:
        for p in (c.meridian, c.longitude):
            rows.append([list(p.A), list(p.B), list(p.C)])
    return rows


def _assemble(g: GluingData, n: int, edges, periph) -> GluingData:
    eA = tuple(tuple(r[0]) for r in edges)
    eB = tuple(tuple(r[1]) for r in edges)
    eC = tuple(tuple(r[2]) for r in edges)
    cusps = []
    for k in range(g.num_cusps):
        m, l = periph[2 * k], periph[2 * k + 1]
        cusps.append(Cusp(PeripheralRow(*map(tuple, m)), PeripheralRow(*map(tuple, l))))
    return GluingData(n, eA, eB, eC, g.num_cusps, tuple(cusps), g.name, g.comment)


# --- 2 -> 3 ---------------------------------------------------------------------

def _sub23(row, i: int, j: int):
    a, b, c = row
    a1, b1, c1 = a[i], b[i], c[i]
    a2, b2, c2 = a[j], b[j], c[j]
    # X1=W2+W3'', X1'=W3+W1'', X1''=W1+W2'', X2=W2''+W3, X2'=W1''+W2, X2''=W3''+W1
    wa = (c1 + c2, a1 + b2, a2 + b1)
    wc = (b1 + b2, a2 + c1, a1 + c2)
    na, nb, nc = list(a), list(b), list(c)
    na[i], nb[i], nc[i] = wa[0], 0, wc[0]
    na[j], nb[j], nc[j] = wa[1], 0, wc[1]
    na.append(wa[2])
    nb.append(0)
    nc.append(wc[2])
    return [na, nb, nc]


def two_three(g: GluingData, site, align=None) -> GluingData:
    """Replace tetrahedra (i, j) by three around a new internal edge."""
    s = _site(site, 2, align)
    s.check(g.num_tet)
    n = g.num_tet
    g = rotate_columns(g, s.quad(n))
    i, j = s.tets
    rows = [_sub23(r, i, j) for r in _rows(g)]
    ne = len(g.edge_A)
    internal = [[0] * (n + 1), [0] * (n + 1), [0] * (n + 1)]
    for t in (i, j, n):
        internal[1][t] = 1
    return _assemble(g, n + 1, rows[:ne] + [internal], rows[ne:])


def two_three_rows(g: GluingData, quad=None) -> List[int]:
    """Edge rows of two_three(g, ...) to use for the index: the internal edge plus
    the rows chosen for g.

    The substituted rows agree with the true edge equations of the new
    triangulation only up to multiples of the internal edge equation, so that row
    has to be part of the basis.
    """
    M = reduce(g, quad)
    keep = independent_rows([a + b for a, b in zip(M.A, M.B)])
    return [len(g.edge_A)] + keep


# --- 3 -> 2 ---------------------------------------------------------------------

# Angles of W1..W3 as affine forms over (W1, X1, X1', X2, X2', 1).
_W = {
    (0, 0): (1, 0, 0, 0, 0, 0),
    (1, 0): (1, 1, 0, 1, 1, -1),
    (2, 0): (1, 1, 1, 1, 0, -1),
    (0, 1): (0, 1, 0, 1, 0, 0),
    (1, 1): (0, 0, 1, -1, -1, 1),
    (2, 1): (0, -1, -1, 0, 1, 1),
    (0, 2): (-1, -1, 0, -1, 0, 1),
    (1, 2): (-1, -1, -1, 0, 0, 1),
    (2, 2): (-1, 0, 0, -1, -1, 1),
}


def _is_internal(row, tets, n: int) -> bool:
    a, b, c = row
    return all(a[t] == 0 and c[t] == 0 and b[t] == (1 if t in tets else 0) for t in range(n))


def _sub32(row, tets):
    form = [0] * 6
    for w, t in enumerate(tets):
        for kind in range(3):
            coef = row[kind][t]
            if coef:
                form = [f + coef * v for f, v in zip(form, _W[(w, kind)])]
    if form[0]:
        raise PatternError("W1 does not cancel from a row; site does not match")
    _, p1, p1p, p2, p2p, kappa = form
    # p1 X1 + p1' X1' + kappa1 = p1 X1 + p1' X1' + kappa1 (X1 + X1' + X1'')
    k1 = -min(p1, p1p, 0)
    k2 = kappa - k1
    return (p1 + k1, p1p + k1, k1), (p2 + k2, p2p + k2, k2)


def three_two(g: GluingData, site, align=None) -> GluingData:
    """Inverse move at tetrahedra (W1, W2, W3) = site; raises PatternError on mismatch."""
    s = _site(site, 3, align)
    s.check(g.num_tet)
    n = g.num_tet
    g = rotate_columns(g, s.quad(n))
    tets = s.tets
    rows = _rows(g)
    ne = len(g.edge_A)
    internal = next((r for r in range(ne) if _is_internal(rows[r], tets, n)), None)
    if internal is None:
        raise PatternError(f"no internal edge row W1'+W2'+W3' = 2 at tetrahedra {tets}")
    i, j, k = tets
    keep = [t for t in range(n) if t != k]
    out = []
    for r, row in enumerate(rows):
        if r == internal:
            continue
        x1, x2 = _sub32(row, tets)
        new = [list(v) for v in row]
        for kind in range(3):
            new[kind][i] = x1[kind]
            new[kind][j] = x2[kind]
        out.append([[v[t] for t in keep] for v in new])
    edges = out[:ne - 1]
    return _assemble(g, n - 1, edges, out[ne - 1:])


# --- angle maps -----------------------------------------------------------------

def _rotated(w: StructureWitness, tets, align) -> StructureWitness:
    for t, r in zip(tets, align or (0,) * len(tets)):
        for _ in range(r % 3):
            w = w.rotate(t)
    return w


def mu_32(w: StructureWitness, site, align=None) -> StructureWitness:
    """Witness on T~ -> witness on T via the longitudinal-edge relations."""
    s = _site(site, 3, align)
    w = _rotated(w, s.tets, s.alignment)
    i, j, k = s.tets
    W = w.triples()
    (w1, w1p, w1pp), (w2, w2p, w2pp), (w3, w3p, w3pp) = W[i], W[j], W[k]
    x1 = (w2 + w3pp, w3 + w1pp, w1 + w2pp)
    x2 = (w2pp + w3, w1pp + w2, w3pp + w1)
    trip = list(W)
    trip[i], trip[j] = x1, x2
    del trip[k]
    return StructureWitness(*map(tuple, zip(*trip)))


def _w_angles(x1, x2, w1):
    X1, X1p, _ = x1
    X2, X2p, _ = x2
    vals = {}
    for key, f in _W.items():
        vals[key] = f[0] * w1 + f[1] * X1 + f[2] * X1p + f[3] * X2 + f[4] * X2p + f[5]
    return [tuple(vals[(t, kind)] for kind in range(3)) for t in range(3)]


def w1_interval(w: StructureWitness, site, align=None) -> Tuple[Fraction, Fraction]:
    """Open interval of W1 values for which every W angle is positive (may be empty)."""
    s = _site(site, 2, align)
    w = _rotated(w, s.tets, s.alignment)
    (X1, X1p, _), (X2, X2p, _) = w.triples()[s.tets[0]], w.triples()[s.tets[1]]
    lo = max(Fraction(0), 1 - X1 - X2 - X2p, 1 - X1 - X1p - X2)
    hi = min(1 - X1 - X2, 1 - X1 - X1p, 1 - X2 - X2p)
    return Fraction(lo), Fraction(hi)


def mu_23(w: StructureWitness, site, W1=None, align=None,
          strict: bool = True) -> Optional[StructureWitness]:
    """Witness on T -> witness on T~ with the given free angle W1.

    Without W1 the midpoint of the admissible interval is used.  Returns None when
    ``strict`` and some new angle is <= 0.
    """
    s = _site(site, 2, align)
    s.check(len(w.alpha))
    if W1 is None:
        lo, hi = w1_interval(w, s)
        if lo >= hi and strict:
            return None
        W1 = (lo + hi) / 2
    w = _rotated(w, s.tets, s.alignment)
    i, j = s.tets
    trip = list(w.triples())
    new = _w_angles(trip[i], trip[j], Fraction(W1))
    trip[i], trip[j] = new[0], new[1]
    trip.append(new[2])
    out = StructureWitness(*map(tuple, zip(*trip)))
    if strict and out.min_angle() <= 0:
        return None
    return out


def special_status(w: StructureWitness, site, align=None) -> str:
    """'special', 'not special', or 'not applicable' for a non-strict witness."""
    try:
        return "special" if special_strict(w, site, align) else "not special"
    except NotApplicable:
        return "not applicable"


def special_strict(w: StructureWitness, site, align=None) -> bool:
    """All three equatorial angle sums of the bipyramid are < 1."""
    s = _site(site, 2, align)
    if w.min_angle() <= 0:
        raise NotApplicable("witness is not strict")
    w = _rotated(w, s.tets, s.alignment)
    (X1, X1p, X1pp), (X2, X2p, X2pp) = w.triples()[s.tets[0]], w.triples()[s.tets[1]]
    return X1 + X2 < 1 and X1pp + X2p < 1 and X1p + X2pp < 1


# --- normal form ----------------------------------------------------------------

def _reduced_rows(g: GluingData) -> List[List[int]]:
    M = reduce(g)
    return [list(a) + list(b) + [v] for a, b, v in zip(M.A, M.B, M.nu)]


def _peripheral_rows(g: GluingData) -> List[List[int]]:
    P = reduce_peripheral(g)
    out = []
    for k in range(g.num_cusps):
        out.append([r[k] for r in P.a] + [r[k] for r in P.b] + [P.meridian_const[k]])
        out.append([r[k] for r in P.c] + [r[k] for r in P.d] + [P.longitude_const[k]])
    return out


def _reduce_mod(row: List[int], hnf: List[List[int]]) -> Tuple[int, ...]:
    row = list(row)
    for h in hnf:
        p = next(c for c, v in enumerate(h) if v)
        f = row[p] // h[p]
        if f:
            row = [x - f * y for x, y in zip(row, h)]
    return tuple(row)


def normal_form(g: GluingData, rotations: bool = True):
    """Canonical form of the reduced data up to integer row operations and S-rotations.

    Edge rows are put in Hermite normal form and peripheral rows are reduced
    modulo that lattice.  With ``rotations`` the lexicographically least form over
    all per-tetrahedron rotations is returned (3^N candidates).
    """
    def form(h):
        hnf = hermite_normal_form(_reduced_rows(h))
        per = [_reduce_mod(r, hnf) for r in _peripheral_rows(h)]
        return tuple(map(tuple, hnf)), tuple(per)
    if not rotations:
        return form(g)
    return min(form(rotate_columns(g, q)) for q in itertools.product(range(3), repeat=g.num_tet))


def equivalent(g1: GluingData, g2: GluingData) -> bool:
    """Equal up to row operations and per-tetrahedron S-rotations."""
    if g1.num_tet != g2.num_tet or g1.num_cusps != g2.num_cusps:
        return False
    target = normal_form(g1, rotations=False)
    return any(normal_form(rotate_columns(g2, q), rotations=False) == target
               for q in itertools.product(range(3), repeat=g2.num_tet))
