"""Small exact linear algebra over Z and Q."""
from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence

Matrix = List[List[int]]


def rank(rows: Sequence[Sequence]) -> int:
    return len(independent_rows(rows))


def independent_rows(rows: Sequence[Sequence]) -> List[int]:
    """Indices of the lexicographically first maximal independent row subset."""
    basis: List[List[Fraction]] = []   # echelon rows
    pivots: List[int] = []
    chosen = []
    for idx, row in enumerate(rows):
        v = [Fraction(x) for x in row]
        for b, p in zip(basis, pivots):
            if v[p]:
                f = v[p] / b[p]
                v = [x - f * y for x, y in zip(v, b)]
        piv = next((j for j, x in enumerate(v) if x), None)
        if piv is None:
            continue
        basis.append(v)
        pivots.append(piv)
        chosen.append(idx)
    return chosen


def det(m: Sequence[Sequence[int]]) -> int:
    """Integer determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(map(int, r)) for r in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list:
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def transpose(a: Sequence[Sequence]) -> list:
    return [list(c) for c in zip(*a)]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> Matrix:
    """Row-style Hermite normal form over Z, zero rows dropped.

    Pivots are positive, entries above a pivot are reduced into [0, pivot).
    """
    a = [list(map(int, r)) for r in rows]
    if not a:
        return []
    ncols = len(a[0])
    out_row = 0
    for col in range(ncols):
        # gcd-combine everything at or below out_row in this column
        while True:
            nz = [i for i in range(out_row, len(a)) if a[i][col]]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(a[i][col]))
            a[out_row], a[piv] = a[piv], a[out_row]
            done = True
            for i in range(out_row + 1, len(a)):
                if a[i][col]:
                    f = a[i][col] // a[out_row][col]
                    a[i] = [x - f * y for x, y in zip(a[i], a[out_row])]
                    if a[i][col]:
                        done = False
            if done:
                break
        if out_row < len(a) and a[out_row][col]:
            if a[out_row][col] < 0:
                a[out_row] = [-x for x in a[out_row]]
            p = a[out_row][col]
            for i in range(out_row):
                f = a[i][col] // p
                if f:
                    a[i] = [x - f * y for x, y in zip(a[i], a[out_row])]
            out_row += 1
            if out_row == len(a):
                break
    return [r for r in a if any(r)]


def solve_rational(a: Sequence[Sequence], b: Sequence) -> Optional[List[Fraction]]:
    """Some solution of a x = b over Q (free variables set to 0), or None."""
    m = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a, b)]
    n = len(a[0]) if a else 0
    piv_cols = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        piv_cols.append(c)
        r += 1
    for i in range(r, len(m)):
        if m[i][n]:
            return None
    x = [Fraction(0)] * n
    for i, c in enumerate(piv_cols):
        x[c] = m[i][n]
    return x
