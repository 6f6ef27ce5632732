"""Exact integer linear algebra used across modules."""

from __future__ import annotations

from itertools import combinations
from math import gcd


def bareiss_det(matrix) -> int:
    """Determinant of a square integer matrix by fraction-free elimination."""
    a = [list(map(int, row)) for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    if any(len(row) != n for row in a):
        raise ValueError("determinant of a non-square matrix")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


def minor_gcds(matrix) -> list[int]:
    """Determinantal divisors d_1..d_r (r = min(rows, cols)) straight from
    the definition: d_i is the gcd of every i x i minor.

    Exponential in the matrix size; used as an independent oracle.
    """
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    out = []
    for i in range(1, min(rows, cols) + 1):
        g = 0
        for rs in combinations(range(rows), i):
            for cs in combinations(range(cols), i):
                g = gcd(g, bareiss_det([[matrix[r][c] for c in cs] for r in rs]))
                if g == 1:
                    break
            if g == 1:
                break
        out.append(g)
    return out
