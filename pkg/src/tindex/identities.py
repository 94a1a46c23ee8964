"""Residual checks for the identities satisfied by the tetrahedron index.

Every checker returns the residual series (zero when the identity holds below
the requested order).  Terms are written as ``(sign, shift2, m, e)`` meaning
``sign * q^(shift2/2) * I_Delta(m, e)``.
"""
from __future__ import annotations

from typing import Dict, Iterable, List, Tuple

from .qseries import (BiSeries, TruncatedQSeries, bi_mul, half2, inv_poch_coeffs)
from .tetindex import dilog_series, f_series, tet_degree2, tet_index2

Term = Tuple[int, int, int, int]


def combine(terms: Iterable[Term], order2: int) -> TruncatedQSeries:
    """sum of sign * q^(shift2/2) * I_Delta(m, e), valid below q^(order2/2)."""
    acc = TruncatedQSeries(order2, [], order2)
    for sign, shift2, m, e in terms:
        f = tet_index2(m, e, order2 - shift2)
        acc = acc + f.shift2(shift2, sign)
    return acc


def rec1_terms(m: int, e: int) -> List[Term]:
    # q^(e/2) f(m+1,e) + q^(-m/2) f(m,e+1) - f(m,e)
    return [(1, e, m + 1, e), (1, -m, m, e + 1), (-1, 0, m, e)]


def rec2_terms(m: int, e: int) -> List[Term]:
    # q^(e/2) f(m-1,e) + q^(-m/2) f(m,e-1) - f(m,e)
    return [(1, e, m - 1, e), (1, -m, m, e - 1), (-1, 0, m, e)]


def rec1a_terms(m: int, e: int) -> List[Term]:
    # f(m,e+1) + (q^(e+m/2) - q^(-m/2) - q^(m/2)) f(m,e) + f(m,e-1)
    return [(1, 0, m, e + 1), (1, 2 * e + m, m, e), (-1, -m, m, e), (-1, m, m, e),
            (1, 0, m, e - 1)]


def rec2a_terms(m: int, e: int) -> List[Term]:
    # f(m+1,e) + (q^(-e/2-m) - q^(-e/2) - q^(e/2)) f(m,e) + f(m-1,e)
    return [(1, 0, m + 1, e), (1, -e - 2 * m, m, e), (-1, -e, m, e), (-1, e, m, e),
            (1, 0, m - 1, e)]


def rec_i2_terms(e: int) -> List[Term]:
    # f(0,e) - (2 - q^(e-1)) f(0,e-1) + f(0,e-2)
    return [(1, 0, 0, e), (-2, 0, 0, e - 1), (1, 2 * e - 2, 0, e - 1), (1, 0, 0, e - 2)]


def _combine_signed(terms, order2):
    acc = TruncatedQSeries(order2, [], order2)
    for coeff, shift2, m, e in terms:
        f = tet_index2(m, e, order2 - shift2)
        acc = acc + f.shift2(shift2) * coeff
    return acc


def recursion_residual(name: str, m: int, e: int, order) -> TruncatedQSeries:
    order2 = half2(order)
    builders = {"rec1": rec1_terms, "rec2": rec2_terms, "rec1a": rec1a_terms,
                "rec2a": rec2a_terms}
    if name == "recI2":
        return _combine_signed(rec_i2_terms(e), order2)
    return _combine_signed(builders[name](m, e), order2)


def _minus_sqrt_q_power(k: int) -> Tuple[int, int]:
    """(-q^(1/2))^k as (sign, doubled exponent)."""
    return (-1 if k % 2 else 1), k


def triality_residuals(m: int, e: int, order) -> Tuple[TruncatedQSeries, TruncatedQSeries]:
    """f(m,e) - (-q^(1/2))^(-e) f(e,-e-m)  and  f(m,e) - (-q^(1/2))^m f(-e-m,m)."""
    order2 = half2(order)
    s1, h1 = _minus_sqrt_q_power(-e)
    s2, h2 = _minus_sqrt_q_power(m)
    r1 = _combine_signed([(1, 0, m, e), (-s1, h1, e, -e - m)], order2)
    r2 = _combine_signed([(1, 0, m, e), (-s2, h2, -e - m, m)], order2)
    return r1, r2


def parity_ok(m: int, e: int, order) -> bool:
    """Nonzero coefficients of I_Delta(m,e) sit at exponents congruent to em/2 mod 1."""
    s = tet_index2(m, e, half2(order))
    want = (e * m) % 2
    return all((t2 - want) % 2 == 0 for t2, _ in s.terms2())


def degree_ok(m: int, e: int) -> bool:
    """Valuation of I_Delta(m,e) equals the closed degree formula."""
    d2 = tet_degree2(m, e)
    s = tet_index2(m, e, d2 + 2)
    return not s.is_zero() and s.offset2 == d2


# --- generating-series identities --------------------------------------------

def dilog_coefficients_residual(m: int, x_window, q_order) -> List[Tuple[int, TruncatedQSeries]]:
    """[x^e] of the dilogarithm product minus I_Delta(m, e), for e in the window."""
    L = dilog_series(m, x_window, q_order)
    out = []
    for e in range(x_window[0], x_window[1] + 1):
        out.append((e, L.extract(e) - tet_index2(m, e, L.q_order2)))
    return out


def dilog_rec1_residual(m: int, x_window, q_order) -> BiSeries:
    """(-1 + q^(-m/2) x^-1) L(m,x) + L(m+1, q^(1/2) x), on the common window."""
    lo, hi = x_window
    big = (lo - 1, hi + 1)
    L0 = dilog_series(m, big, q_order)
    L1 = dilog_series(m + 1, big, q_order).scale_x((1,))
    res = (-L0) + L0.mul_q(-m).mul_x(-1) + L1
    return res.restrict((lo,), (hi,))


def _geometric(c2: Tuple[int, ...], q_shift2: int, lo, hi, order2: int) -> BiSeries:
    """1/(1 - q^(q_shift2/2) x^c2) expanded in the box lo..hi (all exponents >= 0)."""
    terms = {}
    k = 0
    while True:
        key = tuple(k * c for c in c2)
        if any(a > b for a, b in zip(key, hi)) or k * q_shift2 >= order2:
            break
        terms[key] = TruncatedQSeries(k * q_shift2, [1], order2)
        k += 1
    return BiSeries(terms, lo, hi, order2)


def _linear(c2: Tuple[int, ...], q_shift2: int, lo, hi, order2: int) -> BiSeries:
    """1 - q^(q_shift2/2) x^c2."""
    terms = {tuple(0 for _ in c2): TruncatedQSeries(0, [1], order2)}
    terms[tuple(c2)] = TruncatedQSeries(q_shift2, [-1], order2)
    return BiSeries(terms, lo, hi, order2)


def qpoch_inf(c2, start2: int, lo, hi, order2: int, inverse: bool = False) -> BiSeries:
    """(q^(start2/2) x^c2; q)_inf, or its inverse, as an x-power series."""
    one = BiSeries({tuple(0 for _ in c2): TruncatedQSeries(0, [1], order2)}, lo, hi, order2)
    acc = one
    i = 0
    while start2 + 2 * i < order2:
        f = (_geometric if inverse else _linear)(c2, start2 + 2 * i, lo, hi, order2)
        acc = bi_mul(acc, f)
        i += 1
    return acc


def _inv_poch_series(n: int, order2: int) -> TruncatedQSeries:
    nterms = max(0, (order2 + 1) // 2)
    c = inv_poch_coeffs(n, nterms)
    dense = [0] * max(order2, 0)
    for i, v in enumerate(c):
        if 2 * i < order2:
            dense[2 * i] = v
    return TruncatedQSeries(0, dense, order2)


def five_identities(x_max: int, q_order) -> List[Tuple[str, bool]]:
    """Check the five product/sum identities on the box [0, x_max] (in x and y)."""
    T2 = half2(q_order)
    results = []
    lo1, hi1 = (0,), (x_max,)
    lo2, hi2 = (0, 0), (x_max, x_max)

    # 1/(x)_inf = sum x^n/(q)_n
    lhs = qpoch_inf((1,), 0, lo1, hi1, T2, inverse=True)
    rhs = BiSeries({(n,): _inv_poch_series(n, T2) for n in range(x_max + 1)}, lo1, hi1, T2)
    results.append(("1/(x)_inf", lhs.agrees_with(rhs)))

    # (xq)_inf = sum (-1)^n q^(n(n+1)/2) x^n/(q)_n
    lhs = qpoch_inf((1,), 2, lo1, hi1, T2)
    rhs = BiSeries({(n,): _inv_poch_series(n, T2 - n * (n + 1)).shift2(n * (n + 1), -1 if n & 1 else 1)
                    for n in range(x_max + 1)}, lo1, hi1, T2)
    results.append(("(xq)_inf", lhs.agrees_with(rhs)))

    # (xy)_inf/(x)_inf = sum (y)_n x^n/(q)_n
    lhs = bi_mul(qpoch_inf((1, 1), 0, lo2, hi2, T2), qpoch_inf((1, 0), 0, lo2, hi2, T2, inverse=True))
    rhs = None
    for n in range(x_max + 1):
        ypoch = BiSeries({(0, 0): TruncatedQSeries(0, [1], T2)}, lo2, hi2, T2)
        for i in range(n):
            ypoch = bi_mul(ypoch, _linear((0, 1), 2 * i, lo2, hi2, T2))
        term = bi_mul(ypoch, BiSeries({(0, 0): _inv_poch_series(n, T2)}, lo2, hi2, T2)).mul_x((n, 0))
        term = BiSeries(term.terms, lo2, hi2, T2) if term.lo == lo2 else _pad(term, lo2, hi2, T2)
        rhs = term if rhs is None else rhs + term
    results.append(("(xy)_inf/(x)_inf", lhs.agrees_with(rhs)))

    # (xy)_inf/((x)_inf (y)_inf) = sum q^(rs) x^r y^s/((q)_r (q)_s)
    lhs = bi_mul(bi_mul(qpoch_inf((1, 1), 0, lo2, hi2, T2), qpoch_inf((1, 0), 0, lo2, hi2, T2, inverse=True)),
                 qpoch_inf((0, 1), 0, lo2, hi2, T2, inverse=True))
    terms = {}
    for r in range(x_max + 1):
        for s in range(x_max + 1):
            sh = 2 * r * s
            if sh >= T2:
                continue
            terms[(r, s)] = (_inv_poch_series(r, T2 - sh) * _inv_poch_series(s, T2 - sh)).shift2(sh)
    rhs = BiSeries(terms, lo2, hi2, T2)
    results.append(("(xy)_inf/((x)_inf(y)_inf)", lhs.agrees_with(rhs)))

    # (xq)_inf (yq)_inf/(xyq)_inf = sum (-1)^(r+s) q^((r-s)^2/2 + (r+s)/2) x^r y^s/((q)_r (q)_s)
    lhs = bi_mul(bi_mul(qpoch_inf((1, 0), 2, lo2, hi2, T2), qpoch_inf((0, 1), 2, lo2, hi2, T2)),
                 qpoch_inf((1, 1), 2, lo2, hi2, T2, inverse=True))
    terms = {}
    for r in range(x_max + 1):
        for s in range(x_max + 1):
            sh = (r - s) ** 2 + r + s
            if sh >= T2:
                continue
            v = (_inv_poch_series(r, T2 - sh) * _inv_poch_series(s, T2 - sh)).shift2(sh)
            terms[(r, s)] = -v if (r + s) & 1 else v
    rhs = BiSeries(terms, lo2, hi2, T2)
    results.append(("(xq)_inf(yq)_inf/(xyq)_inf", lhs.agrees_with(rhs)))
    return results


def _pad(s: BiSeries, lo, hi, order2) -> BiSeries:
    return BiSeries(s.terms, lo, hi, order2, True)


def _f_coeff(e: int, n: int, order2: int) -> TruncatedQSeries:
    """[x^n] F_e(x) below q^(order2/2)."""
    if n < 0 or n + e < 0 or n * (n + 1) >= order2:
        return TruncatedQSeries(order2, [], order2)
    base = (_inv_poch_series(n, order2) * _inv_poch_series(n + e, order2))._truncate2(order2 - n * (n + 1))
    return base.shift2(n * (n + 1), -1 if n & 1 else 1)


def f_generating_residual(e1: int, e2: int, x_max: int, q_order) -> Dict[Tuple[int, int], TruncatedQSeries]:
    """[x1^a x2^b] of LHS minus RHS of the two-variable F_e identity, 0 <= a, b <= x_max.

    LHS is q^(e1 e2) F_e1(q^e2 x1) F_e2(q^e1 x2); RHS sums
    (x1 x2 q)^e3 F_(e1+e3)(x1) F_(e2+e3)(x2) F_e3(x1 x2) over the finitely many
    e3 that reach the box.
    """
    T2 = half2(q_order)
    out = {}
    for a in range(x_max + 1):
        for b in range(x_max + 1):
            sh = 2 * (e1 * e2 + e2 * a + e1 * b)
            lhs = _f_coeff(e1, a, T2 - sh) * _f_coeff(e2, b, T2 - sh)
            lhs = lhs._truncate2(T2 - sh).shift2(sh)
            rhs = TruncatedQSeries(T2, [], T2)
            for e3 in range(max(-e1, -e2) - x_max, x_max + 1):
                W2 = T2 - 2 * e3
                for n in range(max(0, -e3), min(a, b) - e3 + 1):
                    i, j = a - e3 - n, b - e3 - n
                    # each factor has valuation >= 0, so each is needed only below W2
                    t = _f_coeff(e1 + e3, i, W2) * _f_coeff(e2 + e3, j, W2) * _f_coeff(e3, n, W2)
                    rhs = rhs + t._truncate2(W2).shift2(2 * e3)
            out[(a, b)] = (lhs - rhs)._truncate2(T2)
    return out
