"""Exact rational linear programming: two-phase simplex with Bland's rule."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from gmpy2 import mpq

FREE, NONNEG = "free", "nonneg"


@dataclass
class LPResult:
    status: str                      # "optimal", "infeasible" or "unbounded"
    x: Optional[List[Fraction]] = None
    value: Optional[Fraction] = None


def _pivot(T, r: int, c: int) -> None:
    row = T[r]
    inv = 1 / row[c]
    if inv != 1:
        T[r] = row = [v * inv for v in row]
    for i, other in enumerate(T):
        if i != r:
            f = other[c]
            if f:
                T[i] = [a - f * b for a, b in zip(other, row)]


def _run(T, basis: List[int], allowed: int) -> str:
    """Minimize the last row of T over columns < allowed; Bland's rule."""
    obj = T[-1]
    m = len(T) - 1
    while True:
        obj = T[-1]
        enter = next((j for j in range(allowed) if obj[j] < 0), None)
        if enter is None:
            return "optimal"
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return "unbounded"
        r = best[1]
        _pivot(T, r, enter)
        basis[r] = enter


def simplex_std(A: Sequence[Sequence], b: Sequence, c: Sequence) -> LPResult:
    """min c.x subject to A x = b, x >= 0 (exact; tableau entries are gmpy2 rationals)."""
    m = len(A)
    n = len(c)
    rows = []
    zero, one = mpq(0), mpq(1)
    for row, rhs in zip(A, b):
        row = [mpq(v) for v in row]
        rhs = mpq(rhs)
        if rhs < 0:
            row = [-v for v in row]
            rhs = -rhs
        rows.append((row, rhs))
    # phase one: artificials n..n+m-1
    T = []
    for i, (row, rhs) in enumerate(rows):
        art = [zero] * m
        art[i] = one
        T.append(row + art + [rhs])
    obj = [zero] * (n + m + 1)
    for row in T:
        obj = [o - v for o, v in zip(obj, row)]
    for j in range(n, n + m):
        obj[j] = zero
    T.append(obj)
    basis = list(range(n, n + m))
    _run(T, basis, n + m)
    if T[-1][-1] != 0:
        return LPResult("infeasible")
    # drive artificials out of the basis
    i = 0
    while i < len(basis):
        if basis[i] >= n:
            c_ = next((j for j in range(n) if T[i][j] != 0), None)
            if c_ is None:
                del T[i]
                del basis[i]
                continue
            _pivot(T, i, c_)
            basis[i] = c_
        i += 1
    # phase two
    T = [row[:n] + [row[-1]] for row in T[:-1]]
    obj = [mpq(v) for v in c] + [zero]
    for i, bv in enumerate(basis):
        f = obj[bv]
        if f:
            obj = [o - f * v for o, v in zip(obj, T[i])]
    T.append(obj)
    status = _run(T, basis, n)
    if status == "unbounded":
        return LPResult("unbounded")
    x = [Fraction(0)] * n
    for i, bv in enumerate(basis):
        v = T[i][-1]
        x[bv] = Fraction(int(v.numerator), int(v.denominator))
    return LPResult("optimal", x, sum(Fraction(ci) * xi for ci, xi in zip(c, x)))


class LP:
    """Small builder: variables are free or nonnegative, rows are ==, >= or <=."""

    def __init__(self):
        self.kinds: List[str] = []
        self.rows: List[Tuple[Dict[int, Fraction], str, Fraction]] = []

    def var(self, kind: str = FREE) -> int:
        self.kinds.append(kind)
        return len(self.kinds) - 1

    def vars(self, n: int, kind: str = FREE) -> List[int]:
        return [self.var(kind) for _ in range(n)]

    def add(self, coeffs: Dict[int, object], sense: str, rhs) -> None:
        if sense not in ("==", ">=", "<="):
            raise ValueError(sense)
        clean = {j: Fraction(v) for j, v in coeffs.items() if v}
        self.rows.append((clean, sense, Fraction(rhs)))

    def solve(self, maximize: Optional[Dict[int, object]] = None) -> LPResult:
        # standard form columns: nonneg vars as is, free vars as (plus, minus), one slack per inequality
        col_of: List[Tuple[int, Optional[int]]] = []
        n = 0
        for k in self.kinds:
            if k == NONNEG:
                col_of.append((n, None))
                n += 1
            else:
                col_of.append((n, n + 1))
                n += 2
        nslack = sum(1 for _, s, _ in self.rows if s != "==")
        total = n + nslack
        A, b = [], []
        si = n
        for coeffs, sense, rhs in self.rows:
            row = [Fraction(0)] * total
            for j, v in coeffs.items():
                p, mcol = col_of[j]
                row[p] += v
                if mcol is not None:
                    row[mcol] -= v
            if sense == ">=":
                row[si] = Fraction(-1)
                si += 1
            elif sense == "<=":
                row[si] = Fraction(1)
                si += 1
            A.append(row)
            b.append(rhs)
        c = [Fraction(0)] * total
        for j, v in (maximize or {}).items():
            p, mcol = col_of[j]
            c[p] -= Fraction(v)
            if mcol is not None:
                c[mcol] += Fraction(v)
        if not A:
            A, b = [[Fraction(0)] * total], [Fraction(0)]
        res = simplex_std(A, b, c)
        if res.status != "optimal":
            return LPResult(res.status)
        x = []
        for p, mcol in col_of:
            x.append(res.x[p] - (res.x[mcol] if mcol is not None else 0))
        val = sum(Fraction(v) * x[j] for j, v in (maximize or {}).items())
        return LPResult("optimal", x, val)


@dataclass
class Feasibility:
    point: Optional[List[Fraction]]
    margin: Optional[Fraction] = None
    certificate: Optional[List[Fraction]] = None     # Farkas multipliers y when infeasible


def lp_feasible(E: Sequence[Sequence], b: Sequence, strict: Sequence[int] = (),
                nonneg: Sequence[int] = (), certificate: bool = True) -> Feasibility:
    """Find x with E x = b, x_i > 0 on ``strict``, x_i >= 0 on ``nonneg``.

    Strictness uses a margin t in [0, 1] with x_i >= t on the strict set, maximized;
    the system is strictly feasible iff the optimum is positive.  On failure a
    multiplier vector y is returned with (E^T y)_i = 0 off strict and nonneg,
    (E^T y)_i >= 0 on them, b.y <= 0 and sum_strict (E^T y)_i - b.y = 1.
    """
    n = len(E[0]) if E else 0
    strict = sorted(set(strict))
    nonneg = sorted(set(nonneg) - set(strict))
    lp = LP()
    xs = [lp.var(NONNEG if (j in nonneg) else FREE) for j in range(n)]
    t = lp.var(NONNEG)
    for row, rhs in zip(E, b):
        lp.add({xs[j]: v for j, v in enumerate(row)}, "==", rhs)
    for j in strict:
        lp.add({xs[j]: 1, t: -1}, ">=", 0)
    lp.add({t: 1}, "<=", 1)
    res = lp.solve(maximize={t: 1})
    if res.status == "optimal" and (not strict or res.value > 0):
        return Feasibility(res.x[:n], res.value if strict else None)
    cert = farkas_certificate(E, b, strict, nonneg) if certificate else None
    return Feasibility(None, None, cert)


def farkas_certificate(E, b, strict, nonneg) -> Optional[List[Fraction]]:
    m = len(E)
    n = len(E[0]) if E else 0
    sset, nset = set(strict), set(nonneg)
    lp = LP()
    y = lp.vars(m, FREE)
    for j in range(n):
        coeffs = {y[i]: E[i][j] for i in range(m)}
        if j in sset or j in nset:
            lp.add(coeffs, ">=", 0)
        else:
            lp.add(coeffs, "==", 0)
    lp.add({y[i]: b[i] for i in range(m)}, "<=", 0)
    norm: Dict[int, Fraction] = {}
    for j in strict:
        for i in range(m):
            norm[y[i]] = norm.get(y[i], 0) + Fraction(E[i][j])
    for i in range(m):
        norm[y[i]] = norm.get(y[i], 0) - Fraction(b[i])
    lp.add(norm, "==", 1)
    res = lp.solve()
    return res.x if res.status == "optimal" else None


def check_certificate(E, b, strict, nonneg, y) -> bool:
    """Exact check that y proves infeasibility of the strict/nonneg system."""
    n = len(E[0]) if E else 0
    ety = [sum(Fraction(E[i][j]) * y[i] for i in range(len(E))) for j in range(n)]
    by = sum(Fraction(bi) * yi for bi, yi in zip(b, y))
    sset, nset = set(strict), set(nonneg)
    for j in range(n):
        if j in sset or j in nset:
            if ety[j] < 0:
                return False
        elif ety[j] != 0:
            return False
    if by > 0:
        return False
    return by < 0 or any(ety[j] > 0 for j in sset)


def fourier_motzkin_feasible(E, b, strict=(), nonneg=()) -> bool:
    """Independent oracle: Fourier-Motzkin elimination with strict/weak tracking.

    Constraints are (coeffs, rhs, strict) meaning coeffs.x > rhs or >= rhs.
    Only intended for tiny systems.
    """
    n = len(E[0]) if E else 0
    cons = []
    for row, rhs in zip(E, b):
        cons.append(([Fraction(v) for v in row], Fraction(rhs), False))
        cons.append(([-Fraction(v) for v in row], -Fraction(rhs), False))
    for j in range(n):
        e = [Fraction(0)] * n
        e[j] = Fraction(1)
        if j in strict:
            cons.append((e, Fraction(0), True))
        elif j in nonneg:
            cons.append((e, Fraction(0), False))
    for j in range(n):
        pos, neg, rest = [], [], []
        for c in cons:
            (pos if c[0][j] > 0 else neg if c[0][j] < 0 else rest).append(c)
        new = list(rest)
        for cp, rp, sp in pos:
            for cn, rn, sn in neg:
                fp, fn = cp[j], -cn[j]
                coeffs = [fn * a + fp * b_ for a, b_ in zip(cp, cn)]
                coeffs[j] = Fraction(0)
                new.append((coeffs, fn * rp + fp * rn, sp or sn))
        # drop duplicates to keep the blowup in check
        seen, cons = set(), []
        for c in new:
            key = (tuple(c[0]), c[1], c[2])
            if key not in seen:
                seen.add(key)
                cons.append(c)
    for _, rhs, st in cons:
        if (st and not 0 > rhs) or (not st and not 0 >= rhs):
            return False
    return True
