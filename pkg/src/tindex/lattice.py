"""Lattice sums I_M over Z^R and the index of a triangulation.

The summand at k is (-q^(1/2))^(nu.k) prod_i I_Delta(m_i - b_i.k, e_i + a_i.k).
Its doubled degree is D2(k) = nu.k + sum_i delta2(M_i, E_i).  Given any solution
(alpha, beta, gamma) of the index equations, nu.k can be distributed over the
tetrahedra, giving

    D2(k) = C2 + sum_i phi_i(M_i, E_i),   phi_i(M, E) = delta2(M, E) + alpha_i E - gamma_i M,

with C2 = sum_i (gamma_i m_i - alpha_i e_i).  Lower bounds of phi_i over boxes of
(M, E) drive a branch-and-bound enumeration of the k with D2(k) < order.
For a strict witness phi_i >= min(alpha_i, beta_i, gamma_i) * max(|M|, |E|, |M+E|),
which yields a certified radius.

Enumeration runs in an LLL-reduced basis of the lattice spanned by the rows of
(A|B): the sum only depends on that lattice, and skewed bases make the box
bounds weak.  Reported terms are mapped back to the caller's coordinates.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .linalg import det, independent_rows
from .lp import LP, FREE, NONNEG
from .nzdata import (GluingData, IndexInput, RankError, index_input, reduce,
                     reduce_peripheral)
from .qseries import TruncatedQSeries, half2
from .structures import (IndexReport, RayCertificate, StructureWitness, balanced_witness,
                         index_structure, strict_index_structure)
from .tetindex import tet_degree2, tet_index2


class DivergentError(ArithmeticError):
    def __init__(self, quad, ray: Optional[RayCertificate]):
        self.quad = quad
        self.ray = ray
        super().__init__(f"no index structure: quad {list(quad)} fails, ray k0={list(ray.k0) if ray else None}")


class UnimodularError(ValueError):
    pass


# --- actions -------------------------------------------------------------------

def row_act(P: Sequence[Sequence[int]], M: IndexInput) -> IndexInput:
    """(P A | P B | P nu) for unimodular P."""
    R = M.R
    if len(P) != R or any(len(r) != R for r in P):
        raise UnimodularError(f"P must be {R}x{R}")
    if abs(det(P)) != 1:
        raise UnimodularError(f"det P = {det(P)}")

    def mul(X):
        return [[sum(P[i][k] * X[k][j] for k in range(R)) for j in range(M.s)] for i in range(R)]

    nu = [sum(P[i][k] * M.nu[k] for k in range(R)) for i in range(R)]
    return IndexInput.make(mul(M.A), mul(M.B), nu)


def col_act_S(M: IndexInput, i: int) -> IndexInput:
    """(a_i | b_i | nu) -> (-b_i | a_i - b_i | nu - b_i) on column i (0-based)."""
    if not 0 <= i < M.s:
        raise IndexError(f"column {i} out of range 0..{M.s - 1}")
    A = [list(r) for r in M.A]
    B = [list(r) for r in M.B]
    nu = list(M.nu)
    for r in range(M.R):
        a, b = A[r][i], B[r][i]
        A[r][i], B[r][i], nu[r] = -b, a - b, nu[r] - b
    return IndexInput.make(A, B, nu)


# --- degree bounds ------------------------------------------------------------------

def _delta2_piece(M: float, E: float) -> float:
    if M >= 0 and M + E >= 0:
        return M * (M + E + 1)
    if M <= 0 and E >= 0:
        return -M * E
    return E * (M + E - 1)


def _segment_min(f, p0, p1) -> float:
    """Minimum of a piecewise quadratic along p0 -> p1 (pieces split at M=0, E=0, M+E=0)."""
    (m0, e0), (m1, e1) = p0, p1
    dm, de = m1 - m0, e1 - e0
    ts = {0.0, 1.0}
    for (cm, ce) in ((1, 0), (0, 1), (1, 1)):
        den = cm * dm + ce * de
        if den:
            t = -(cm * m0 + ce * e0) / den
            if 0 < t < 1:
                ts.add(t)
    ts = sorted(ts)
    best = math.inf
    for t0, t1 in zip(ts, ts[1:]):
        # on this piece f is quadratic in t: fit it through three points
        tm = 0.5 * (t0 + t1)
        y0 = f(m0 + t0 * dm, e0 + t0 * de)
        y1 = f(m0 + tm * dm, e0 + tm * de)
        y2 = f(m0 + t1 * dm, e0 + t1 * de)
        best = min(best, y0, y2)
        h = t1 - t0
        if h <= 0:
            continue
        a2 = 2 * (y0 - 2 * y1 + y2) / (h * h)       # second derivative
        if a2 > 0:
            slope0 = (4 * y1 - 3 * y0 - y2) / h
            ts_ = t0 - slope0 / a2
            if t0 < ts_ < t1:
                best = min(best, f(m0 + ts_ * dm, e0 + ts_ * de))
    return best


@lru_cache(maxsize=500_000)
def phi_min(alpha: float, gamma: float, M0: int, M1: int, E0: int, E1: int) -> float:
    """Lower bound of delta2(M,E) + alpha E - gamma M on [M0,M1] x [E0,E1].

    Every piece is an indefinite quadratic, so the minimum over each
    (rectangle cap cone) polygon lies on its boundary: rectangle sides or the cone
    walls M=0, E=0, M+E=0.
    """
    if M0 == M1 and E0 == E1:
        return tet_degree2(M0, E0) + alpha * E0 - gamma * M0

    def f(M, E):
        return _delta2_piece(M, E) + alpha * E - gamma * M

    segs = [((M0, E0), (M1, E0)), ((M1, E0), (M1, E1)), ((M1, E1), (M0, E1)), ((M0, E1), (M0, E0))]
    if M0 < 0 < M1:
        segs.append(((0, E0), (0, E1)))
    if E0 < 0 < E1:
        segs.append(((M0, 0), (M1, 0)))
    # M + E = 0 inside the rectangle
    lo, hi = max(M0, -E1), min(M1, -E0)
    if lo < hi:
        segs.append(((lo, -lo), (hi, -hi)))
    return min(_segment_min(f, p, q) for p, q in segs)


# --- enumeration -----------------------------------------------------------------

@dataclass
class _Problem:
    M: IndexInput
    m: Tuple[int, ...]
    e: Tuple[int, ...]
    T2: int
    alpha: Tuple[float, ...]
    gamma: Tuple[float, ...]
    C2: float
    cols: List[Tuple[Tuple[int, ...], Tuple[int, ...]]]

    def D2(self, k) -> int:
        nuk = sum(v * x for v, x in zip(self.M.nu, k))
        tot = nuk
        for i, (a, b) in enumerate(self.cols):
            tot += tet_degree2(self.m[i] - _dot(b, k), self.e[i] + _dot(a, k))
        return tot


def _dot(u, v) -> int:
    return sum(x * y for x, y in zip(u, v))


def _lin_range(c, lo, hi) -> Tuple[int, int]:
    mn = mx = 0
    for cj, l, h in zip(c, lo, hi):
        if cj > 0:
            mn += cj * l
            mx += cj * h
        elif cj < 0:
            mn += cj * h
            mx += cj * l
    return mn, mx


def _box_lower_bound(P: _Problem, lo, hi) -> float:
    tot = P.C2
    for i, (a, b) in enumerate(P.cols):
        bmin, bmax = _lin_range(b, lo, hi)
        amin, amax = _lin_range(a, lo, hi)
        tot += phi_min(P.alpha[i], P.gamma[i], P.m[i] - bmax, P.m[i] - bmin,
                       P.e[i] + amin, P.e[i] + amax)
    return tot


_SMALL_BOX = 27


def _search(P: _Problem, lo: List[int], hi: List[int], out: List[Tuple[int, ...]]) -> None:
    """Append every k in the box with D2(k) < T2."""
    stack = [(lo, hi)]
    limit = P.T2 - 1 + 1e-7
    while stack:
        lo, hi = stack.pop()
        if _box_lower_bound(P, lo, hi) > limit:
            continue
        vol = 1
        for l, h in zip(lo, hi):
            vol *= h - l + 1
        if vol <= _SMALL_BOX:
            for k in _points(lo, hi):
                if P.D2(k) < P.T2:
                    out.append(k)
            continue
        j = max(range(len(lo)), key=lambda t: hi[t] - lo[t])
        mid = (lo[j] + hi[j]) // 2
        h1 = list(hi)
        h1[j] = mid
        l2 = list(lo)
        l2[j] = mid + 1
        stack.append((l2, hi))
        stack.append((lo, h1))


def _points(lo, hi):
    if not lo:
        yield ()
        return
    for x in range(lo[0], hi[0] + 1):
        for rest in _points(lo[1:], hi[1:]):
            yield (x,) + rest


def _shell_boxes(R: int, rho: int):
    if rho == 0:
        yield [0] * R, [0] * R
        return
    for j in range(R):
        for sgn in (-1, 1):
            lo = [-(rho - 1)] * j + [sgn * rho] + [-rho] * (R - j - 1)
            hi = [rho - 1] * j + [sgn * rho] + [rho] * (R - j - 1)
            yield lo, hi


# --- certified radius ---------------------------------------------------------------

def expansion_constant(M: IndexInput) -> Fraction:
    """c = min over ||k||_inf = 1 of ||A^T k||_1 + ||B^T k||_1 (exact LPs, one per face).

    k and -k give the same value, so the faces k_j = +1 suffice.
    """
    R, s = M.R, M.s
    rows = [list(a) + list(b) for a, b in zip(M.A, M.B)]
    best = None
    for j in range(R):
        lp = LP()
        k = lp.vars(R, FREE)
        u = lp.vars(2 * s, NONNEG)
        for l in range(2 * s):
            col = {k[i]: rows[i][l] for i in range(R)}
            lp.add({**{u[l]: 1}, **{key: -v for key, v in col.items()}}, ">=", 0)
            lp.add({**{u[l]: 1}, **col}, ">=", 0)
        for i in range(R):
            lp.add({k[i]: 1}, "<=", 1)
            lp.add({k[i]: 1}, ">=", -1)
        lp.add({k[j]: 1}, "==", 1)
        res = lp.solve(maximize={x: -1 for x in u})
        val = -res.value
        best = val if best is None else min(best, val)
    return best


def certified_radius(M: IndexInput, w: StructureWitness, m, e, order2: int) -> int:
    """Every k with ||k||_inf > radius has summand degree >= order."""
    t = min(min(x) for x in w.triples())
    if t <= 0:
        raise ValueError("certified radius needs a strict witness")
    c = expansion_constant(M)
    C2 = sum(g * mi - a * ei for a, g, mi, ei in zip(w.alpha, w.gamma, m, e))
    l1 = sum(abs(x) for x in m) + sum(abs(x) for x in e)
    # D2 >= C2 + (t/2) (c ||k||_inf - l1)
    bound = ((order2 - 1 - C2) * 2 / t + l1) / c
    return max(0, math.floor(bound))


# --- the sum -------------------------------------------------------------------------

@dataclass
class TruncationPolicy:
    order: object
    mode: str = "auto"          # "certified", "shell" or "auto"
    window: int = 4
    radius: Optional[int] = None    # shell mode: enumerate the full box of this radius
    reduce: bool = True             # enumerate in an LLL-reduced basis

    def __post_init__(self):
        if self.mode not in ("auto", "certified", "shell"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.window < 1:
            raise ValueError("window must be >= 1")


@dataclass
class IndexSumResult:
    series: TruncatedQSeries
    mode: str
    heuristic: bool
    radius: int
    terms: List[Tuple[int, ...]] = field(default_factory=list)


@lru_cache(maxsize=256)
def _gate(M: IndexInput) -> IndexReport:
    return index_structure(M)


@lru_cache(maxsize=256)
def _strict(M: IndexInput) -> Optional[StructureWitness]:
    return strict_index_structure(M)


@lru_cache(maxsize=256)
def _balanced(M: IndexInput) -> StructureWitness:
    return balanced_witness(M)


@lru_cache(maxsize=256)
def reduced_basis(M: IndexInput) -> Tuple[Tuple[Tuple[int, ...], ...], IndexInput]:
    """(U, U M) with the rows of U (A|B) LLL-reduced; U is unimodular."""
    from sympy import ZZ
    from sympy.polys.matrices import DomainMatrix
    from sympy.polys.matrices.exceptions import DMRankError

    rows = [[ZZ(x) for x in a + b] for a, b in zip(M.A, M.B)]
    try:
        _, T = DomainMatrix(rows, (M.R, 2 * M.s), ZZ).lll_transform()
    except DMRankError:
        raise RankError("rows of (A|B) are linearly dependent") from None
    U = tuple(tuple(int(x) for x in r) for r in T.to_list())
    return U, row_act(U, M)


def require_index_structure(M: IndexInput) -> None:
    rep = _gate(M)
    if not rep.exists:
        raise DivergentError(rep.failing_quad, rep.ray)


def summand(M: IndexInput, m, e, k, order2: int) -> TruncatedQSeries:
    """(-q^(1/2))^(nu.k) prod_i I_Delta(m_i - b_i.k, e_i + a_i.k) below q^(order2/2)."""
    nuk = _dot(M.nu, k)
    charges = []
    for i in range(M.s):
        a, b = M.col(i)
        charges.append((m[i] - _dot(b, k), e[i] + _dot(a, k)))
    degs = [tet_degree2(*c) for c in charges]
    target = order2 - nuk
    tot = sum(degs)
    prod = None
    for c, d in zip(charges, degs):
        f = tet_index2(c[0], c[1], target - (tot - d))
        prod = f if prod is None else prod * f
    if prod is None:
        prod = TruncatedQSeries(0, [1], target)
    return prod._truncate2(target).shift2(nuk, -1 if nuk & 1 else 1)


def _problem(M: IndexInput, m, e, T2: int, w: StructureWitness) -> _Problem:
    alpha = tuple(float(x) for x in w.alpha)
    gamma = tuple(float(x) for x in w.gamma)
    C2 = float(sum(g * mi - a * ei for a, g, mi, ei in zip(w.alpha, w.gamma, m, e)))
    cols = [M.col(i) for i in range(M.s)]
    return _Problem(M, tuple(m), tuple(e), T2, alpha, gamma, C2, cols)


def index_sum_detailed(M: IndexInput, m=None, e=None, policy: Optional[TruncationPolicy] = None,
                       check: bool = True) -> IndexSumResult:
    policy = policy or TruncationPolicy(order=10)
    s = M.s
    m = tuple(m) if m is not None else (0,) * s
    e = tuple(e) if e is not None else (0,) * s
    if len(m) != s or len(e) != s:
        raise ValueError(f"charge vectors must have length {s}")
    T2 = half2(policy.order)
    if check:
        require_index_structure(M)
    mode = policy.mode
    strict = _strict(M) if mode in ("auto", "certified") else None
    if mode == "certified" and strict is None:
        raise ValueError("certified mode needs a strict index structure")
    if mode == "auto":
        mode = "certified" if strict is not None else "shell"
    U = None
    if policy.reduce and M.R > 1:
        # the index equations are row-wise linear, so a witness for M serves U M too
        U, M = reduced_basis(M)

    found: List[Tuple[int, ...]] = []
    if mode == "certified":
        P = _problem(M, m, e, T2, strict)
        radius = certified_radius(M, strict, m, e, T2)
        _search(P, [-radius] * M.R, [radius] * M.R, found)
        heuristic = False
    else:
        w = strict or _balanced(M)
        P = _problem(M, m, e, T2, w)
        if policy.radius is not None:
            radius = policy.radius
            _search(P, [-radius] * M.R, [radius] * M.R, found)
        else:
            rho, empty = 0, 0
            while empty < policy.window:
                before = len(found)
                for lo, hi in _shell_boxes(M.R, rho):
                    _search(P, lo, hi, found)
                empty = empty + 1 if len(found) == before else 0
                rho += 1
            radius = rho - 1
        heuristic = True

    total = TruncatedQSeries(T2, [], T2)
    for k in sorted(found):
        total = total + summand(M, m, e, k, T2)
    if U is not None:
        # summand(U M, k) = summand(M, U^T k)
        found = [tuple(_dot(col, k) for col in zip(*U)) for k in found]
    return IndexSumResult(total, mode, heuristic, radius, sorted(found))


def index_sum(M: IndexInput, m=None, e=None, policy: Optional[TruncationPolicy] = None) -> TruncatedQSeries:
    """I_M(m, e) truncated at policy.order."""
    return index_sum_detailed(M, m, e, policy).series


def manifold_input(g: GluingData, quad=None, m=None, e=None,
                   rows: Optional[Sequence[int]] = None) -> Tuple[IndexInput, List[int], List[int]]:
    """(M, m~, e~) with I_T(m, e) = I_M(m~, e~), where m~ = d m - b e and e~ = -c m + a e.

    ``rows`` picks the edge rows explicitly (they must be independent and number
    N - r); by default the first independent rows are used.
    """
    r = g.num_cusps
    m = tuple(m) if m is not None else (0,) * r
    e = tuple(e) if e is not None else (0,) * r
    if len(m) != r or len(e) != r:
        raise ValueError(f"peripheral charges must have length {r}")
    if rows is None:
        M = index_input(g, quad)
    else:
        full = reduce(g, quad)
        rows = list(rows)
        sub = [full.A[i] + full.B[i] for i in rows]
        if len(independent_rows(sub)) != len(rows) or len(rows) != g.num_tet - r:
            raise RankError("chosen rows are not a basis of the edge equations")
        M = IndexInput.make([full.A[i] for i in rows], [full.B[i] for i in rows],
                            [full.nu[i] for i in rows])
    mt, et = reduce_peripheral(g, quad).charges(m, e)
    return M, mt, et


def manifold_index(g: GluingData, quad=None, m=None, e=None,
                   policy: Optional[TruncationPolicy] = None, rows: Optional[Sequence[int]] = None
                   ) -> TruncatedQSeries:
    """I_T(m, e) for the given quad choice and edge-row basis."""
    M, mt, et = manifold_input(g, quad, m, e, rows)
    return index_sum(M, mt, et, policy)

