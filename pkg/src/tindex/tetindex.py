"""The tetrahedron index, its degree, generating series and the pentagon check."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, NamedTuple, Tuple

from .qseries import (BiSeries, Number, TruncatedQSeries, half2, inv_poch_coeffs)


class Charge(NamedTuple):
    m: int
    e: int


def _pos(x: int) -> int:
    return x if x > 0 else 0


def tet_degree2(m: int, e: int) -> int:
    """Twice the q-degree of I_Delta(m, e)."""
    return (_pos(m) * _pos(m + e) + _pos(-m) * _pos(e) + _pos(-e) * _pos(-e - m)
            + max(0, m, -e))


def tet_degree(m: int, e: int) -> Fraction:
    """Least exponent of q appearing in I_Delta(m, e)."""
    return Fraction(tet_degree2(m, e), 2)


@lru_cache(maxsize=None)
def _inv_poch_pair(a: int, b: int, nterms: int) -> Tuple[int, ...]:
    """Coefficients of 1/((q)_a (q)_b) below q^nterms."""
    a, b = min(a, nterms), min(b, nterms)
    if a > b:
        a, b = b, a
    pa = inv_poch_coeffs(a, nterms)
    pb = inv_poch_coeffs(b, nterms)
    out = [0] * nterms
    for i, x in enumerate(pa):
        if x:
            for j in range(nterms - i):
                out[i + j] += x * pb[j]
    return tuple(out)


def _summand_exp2(n: int, m: int, e: int) -> int:
    # doubled exponent of q in the n-th summand: n(n+1) - (2n + e) m
    return n * (n + 1) - (2 * n + e) * m


@lru_cache(maxsize=200_000)
def _tet_index2(m: int, e: int, order2: int) -> TruncatedQSeries:
    n = max(0, -e)
    contrib = []
    while True:
        E2 = _summand_exp2(n, m, e)
        if E2 < order2:
            contrib.append((n, E2))
        elif n >= m - 1:
            # the summand exponent is nondecreasing in n from here on
            break
        n += 1
    if not contrib:
        return TruncatedQSeries(order2, [], order2)
    lo = min(E2 for _, E2 in contrib)
    out = [0] * (order2 - lo)
    for n, E2 in contrib:
        nterms = (order2 - E2 + 1) // 2
        c = _inv_poch_pair(n, n + e, nterms)
        sgn = -1 if n & 1 else 1
        base = E2 - lo
        for j, x in enumerate(c):
            if x:
                out[base + 2 * j] += sgn * x
    return TruncatedQSeries(lo, out, order2)


def tet_index(m: int, e: int, order: Number) -> TruncatedQSeries:
    """I_Delta(m, e) truncated at ``order`` (an integer or half-integer)."""
    return _tet_index2(m, e, half2(order))


def tet_index2(m: int, e: int, order2: int) -> TruncatedQSeries:
    return _tet_index2(m, e, order2)


# --- generating series -------------------------------------------------------

def _mul_exact(a: Dict[int, int], b: Dict[int, int], cap2=None) -> Dict[int, int]:
    out: Dict[int, int] = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            t = ea + eb
            if cap2 is not None and t >= cap2:
                continue
            out[t] = out.get(t, 0) + ca * cb
    return {k: v for k, v in out.items() if v}


def _to_series(d: Dict[int, int], order2: int) -> TruncatedQSeries:
    d = {k: v for k, v in d.items() if k < order2}
    if not d:
        return TruncatedQSeries(order2, [], order2)
    lo = min(d)
    out = [0] * (order2 - lo)
    for k, v in d.items():
        out[k - lo] = v
    return TruncatedQSeries(lo, out, order2)


def _numerator_coeffs(m: int, K: int, cap2: int) -> List[Dict[int, int]]:
    """w^k coefficients (k <= K) of prod_{i>=0} (1 - q^(1 - m/2 + i) w), exact below cap2."""
    coef = [dict() for _ in range(K + 1)]
    coef[0] = {0: 1}
    i = 0
    while True:
        c2 = 2 - m + 2 * i
        # smallest doubled exponent of a k-subset of factor indices containing i
        visible = any(k * (2 - m) + (k - 1) * (k - 2) + 2 * i < cap2 for k in range(1, K + 1))
        if not visible:
            break
        prune = c2 >= 0
        for k in range(K, 0, -1):
            prev = coef[k - 1]
            if not prev:
                continue
            cur = dict(coef[k])
            for t, v in prev.items():
                t2 = t + c2
                if prune and t2 >= cap2:
                    continue
                cur[t2] = cur.get(t2, 0) - v
            coef[k] = {a: b for a, b in cur.items() if b}
        i += 1
    return coef


def _denominator_coeffs(m: int, J: int, cap2: int) -> List[Dict[int, int]]:
    """x^j coefficients (j <= J) of prod_{i>=0} 1/(1 - q^(-m/2 + i) x), exact below cap2."""
    coef = [dict() for _ in range(J + 1)]
    coef[0] = {0: 1}
    lowest = min(0, -m * J)
    i = 0
    while True:
        d2 = -m + 2 * i
        if J == 0 or d2 + lowest >= cap2:
            break
        prune = d2 >= 0
        # multiply by 1/(1 - q^d x):  new[j] = old[j] + q^d new[j-1]
        for j in range(1, J + 1):
            cur = dict(coef[j])
            for t, v in coef[j - 1].items():
                t2 = t + d2
                if prune and t2 >= cap2:
                    continue
                cur[t2] = cur.get(t2, 0) + v
            coef[j] = {a: b for a, b in cur.items() if b}
        i += 1
    return coef


def dilog_series(m: int, x_window: Tuple[int, int], q_order: Number) -> BiSeries:
    """Expansion of (q^(1-m/2) x^-1)_inf / (q^(-m/2) x)_inf on an x-window.

    Computed by multiplying out the two infinite products, independently of the
    summation formula for I_Delta.  The result is two-sided in x, so it carries
    ``bounded_below=False``.
    """
    xlo, xhi = x_window
    T2 = half2(q_order)

    def term_bound2(k, e):
        # lower bound for the doubled q-valuation of Num_k * Den_{e+k}
        return k * k + k - 2 * k * m - m * e

    ks = {}
    for e in range(xlo, xhi + 1):
        ks[e] = []
        k = max(0, -e)
        while True:
            if term_bound2(k, e) < T2:
                ks[e].append(k)
            elif k >= m:
                break
            k += 1
    K = max((max(v) for v in ks.values() if v), default=0)
    J = max((e + max(v) for e, v in ks.items() if v), default=0)
    J = max(J, 0)
    # orders needed for each factor so that every product is valid below T2
    num_cap2 = T2 + max([m * j for j in range(J + 1)] + [0])
    num = _numerator_coeffs(m, K, num_cap2)
    num_low = min([min(d) for d in num if d] + [0])
    den_cap2 = T2 - num_low
    den = _denominator_coeffs(m, J, den_cap2)
    terms = {}
    for e, klist in ks.items():
        acc = TruncatedQSeries(T2, [], T2)
        for k in klist:
            j = e + k
            if j < 0 or j > J:
                continue
            p = _to_series(num[k], num_cap2) * _to_series(den[j], den_cap2)
            acc = acc + p._truncate2(T2)
        terms[(e,)] = acc
    return BiSeries(terms, (xlo,), (xhi,), T2, bounded_below=False)


def f_series(e: int, x_order: int, q_order: Number) -> BiSeries:
    """F_e(x) = sum_n (-1)^n q^(n(n+1)/2) x^n / ((q)_n (q)_(n+e)).

    The window starts at the first possibly nonzero power max(0, -e) and holds
    ``x_order`` coefficients.
    """
    T2 = half2(q_order)
    n0 = max(0, -e)
    terms = {}
    for n in range(n0, n0 + x_order):
        E2 = n * (n + 1)
        if E2 >= T2:
            continue
        nterms = (T2 - E2 + 1) // 2
        c = _inv_poch_pair(n, n + e, nterms)
        dense = [0] * (T2 - E2)
        for j, v in enumerate(c):
            dense[2 * j] = v
        s = TruncatedQSeries(E2, dense, T2)
        terms[(n,)] = -s if n & 1 else s
    return BiSeries(terms, (n0,), (n0 + x_order - 1,), T2, True)


# --- pentagon ----------------------------------------------------------------

def pentagon_window(m1: int, m2: int, e1: int, e2: int, order: Number) -> List[int]:
    """All e3 whose pentagon summand has valuation below ``order``.

    Uses the exact degree formula, so the list is complete.
    """
    order2 = half2(order)

    def g2(e3):
        return (2 * e3 + tet_degree2(m1, e1 + e3) + tet_degree2(m2, e2 + e3)
                + tet_degree2(m1 + m2, e3))

    # for e3 >= order the prefactor alone reaches the order (degrees are >= 0);
    # for e3 <= -t with t >= |m1+m2| + 1, g >= t (t - |m1+m2| - 1) in doubled units
    x = abs(m1 + m2)
    t = x + 1
    while t * (t - x - 1) < order2:
        t += 1
    hi = (order2 + 1) // 2
    return [e3 for e3 in range(-t, hi + 1) if g2(e3) < order2]


@dataclass
class PentagonResult:
    ok: bool
    residual: TruncatedQSeries
    lhs: TruncatedQSeries
    rhs: TruncatedQSeries
    e3_range: List[int]


def verify_pentagon(m1: int, m2: int, e1: int, e2: int, order: Number,
                    clip: int = 0) -> PentagonResult:
    """Compare both sides of the pentagon identity below q^order.

    ``clip`` drops that many e3 values from the top of the summation window;
    it exists only to check that the harness detects a broken sum.
    """
    T2 = half2(order)
    d_a = tet_degree2(m1 - e2, e1)
    d_b = tet_degree2(m2 - e1, e2)
    if d_a + d_b >= T2:
        # the product starts at or beyond the order
        lhs = TruncatedQSeries(T2, [], T2)
    else:
        lhs = (tet_index2(m1 - e2, e1, T2 - d_b) * tet_index2(m2 - e1, e2, T2 - d_a))._truncate2(T2)
    window = pentagon_window(m1, m2, e1, e2, order)
    if clip:
        window = window[:-clip] if clip < len(window) else []
    rhs = TruncatedQSeries(T2, [], T2)
    for e3 in window:
        charges = [(m1, e1 + e3), (m2, e2 + e3), (m1 + m2, e3)]
        degs = [tet_degree2(*c) for c in charges]
        target = T2 - 2 * e3
        prod = None
        for i, c in enumerate(charges):
            f = tet_index2(c[0], c[1], target - (sum(degs) - degs[i]))
            prod = f if prod is None else prod * f
        rhs = rhs + prod.shift2(2 * e3)._truncate2(T2)
    residual = lhs - rhs
    return PentagonResult(residual.is_zero(), residual, lhs, rhs, window)
