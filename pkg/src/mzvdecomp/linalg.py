"""Exact linear algebra over Q with fraction-free (Bareiss) elimination."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .errors import SingularMatrix


def _integer_rows(rows: Sequence[Sequence[Fraction]]) -> list[list[int]]:
    out = []
    for row in rows:
        den = math.lcm(*(Fraction(x).denominator for x in row)) if row else 1
        out.append([int(Fraction(x) * den) for x in row])
    return out


def _bareiss(m: list[list[int]], ncols: int) -> tuple[list[int], list[list[int]]]:
    """Fraction-free row echelon form on the first ``ncols`` columns; returns pivot columns."""
    rows = len(m)
    prev = 1
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, rows) if m[i][col]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][col]
        for i in range(r + 1, rows):
            a = m[i][col]
            mi = m[i]
            mr = m[r]
            for j in range(len(mi)):
                mi[j] = (p * mi[j] - a * mr[j]) // prev
        # entries left of col in rows below are zero already
        prev = p
        pivots.append(col)
        r += 1
        if r == rows:
            break
    return pivots, m


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    if not rows:
        return 0
    m = _integer_rows(rows)
    pivots, _ = _bareiss(m, len(m[0]))
    return len(pivots)


def solve(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    """Solve ``a x = b`` for square ``a``; ``b`` has one or more columns.

    Raises SingularMatrix carrying the rank when ``a`` is not invertible.
    """
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix must be square")
    if n == 0:
        return []
    aug = [list(a[i]) + list(b[i]) for i in range(n)]
    m = _integer_rows(aug)
    pivots, m = _bareiss(m, n)
    if len(pivots) < n:
        raise SingularMatrix(len(pivots), n)
    k = len(b[0])
    x = [[Fraction(0)] * k for _ in range(n)]
    for i in range(n - 1, -1, -1):
        row = m[i]
        for c in range(k):
            s = Fraction(row[n + c])
            for j in range(i + 1, n):
                if row[j]:
                    s -= row[j] * x[j][c]
            x[i][c] = s / row[i]
    return x


def inverse(a: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    n = len(a)
    ident = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    return solve(a, ident)


def mat_vec(m: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> list[Fraction]:
    return [sum((x * y for x, y in zip(row, v) if x and y), Fraction(0)) for row in m]
