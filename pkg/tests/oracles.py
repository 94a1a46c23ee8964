"""Independent reference computations used by the tests.

Everything here works on plain dicts {doubled exponent: coefficient} and shares
no code with the package, so agreement is a real cross-check.
"""
import itertools
from fractions import Fraction


def poly_mul(a, b, cap2):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            if e < cap2:
                out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


def inv_qpoch(n, cap2):
    """1/(q)_n in doubled exponents, below q^(cap2/2)."""
    out = {0: 1}
    for i in range(1, n + 1):
        geo = {2 * i * k: 1 for k in range(cap2 // (2 * i) + 1) if 2 * i * k < cap2}
        out = poly_mul(out, geo, cap2)
    return out


def tet_index_direct2(m, e, cap2, nmax=60):
    """Direct summation of sum_n (-1)^n q^(n(n+1)/2 - (n + e/2) m) / ((q)_n (q)_(n+e))."""
    total = {}
    for n in range(max(0, -e), nmax + 1):
        ex2 = n * (n + 1) - (2 * n + e) * m
        if ex2 >= cap2:
            continue
        rest = cap2 - ex2
        den = poly_mul(inv_qpoch(n, rest), inv_qpoch(n + e, rest), rest)
        for k, c in den.items():
            total[ex2 + k] = total.get(ex2 + k, 0) + (-1) ** n * c
    return {k: c for k, c in total.items() if c}


def tet_index_direct(m, e, order, nmax=60):
    return tet_index_direct2(m, e, 2 * order, nmax)


def degree_formula(m, e):
    """Degree of I(m, e) from the printed closed form."""
    p = lambda x: max(0, x)
    return Fraction(p(m) * p(m + e) + p(-m) * p(e) + p(-e) * p(-e - m) + max(0, m, -e), 2)


def as_dict(series):
    """{doubled exponent: coefficient} of a TruncatedQSeries."""
    return dict(series.terms2())


def lattice_sum_direct(A, B, nu, m, e, order, radius):
    """Box sum over |k_i| <= radius with weight (-q^(1/2))^(nu.k).

    Only valid when every summand outside the box starts at or above the order;
    the caller picks the radius.
    """
    R, s = len(nu), len(A[0])
    cap2 = 2 * order
    total = {}
    for k in itertools.product(range(-radius, radius + 1), repeat=R):
        nuk = sum(v * x for v, x in zip(nu, k))
        rest = cap2 - nuk
        if rest <= 0:
            continue
        prod = {0: 1}
        for i in range(s):
            a = sum(A[r][i] * k[r] for r in range(R))
            b = sum(B[r][i] * k[r] for r in range(R))
            prod = poly_mul(prod, tet_index_direct2(m[i] - b, e[i] + a, rest), rest)
            if not prod:
                break
        sign = -1 if nuk % 2 else 1
        for ex, c in prod.items():
            total[ex + nuk] = total.get(ex + nuk, 0) + sign * c
    return {k: c for k, c in total.items() if c}
