"""Exact determinants and Cramer solves over rationals and polynomial rings."""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence

from .poly import PolyQ


def _is_zero(x) -> bool:
    return (not x) if not isinstance(x, PolyQ) else x.is_zero()


def _exact_div(a, b):
    if isinstance(a, PolyQ) or isinstance(b, PolyQ):
        if not isinstance(a, PolyQ):
            a = PolyQ.const(a, b.gens)
        if not isinstance(b, PolyQ):
            return a.scale(Fraction(1) / b)
        if b.is_constant():
            return a.scale(1 / b.constant_term())
        return a.divexact(b)
    return Fraction(a) / b


def det_bareiss(matrix: Sequence[Sequence]):
    """Fraction-free Bareiss elimination; entries may be Fractions or PolyQ."""
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("matrix must be square")
    if n == 0:
        return Fraction(1)
    m: List[list] = [list(row) for row in matrix]
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if _is_zero(m[k][k]):
            swap = next((r for r in range(k + 1, n) if not _is_zero(m[r][k])), None)
            if swap is None:
                return _zero_like(matrix)
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = _exact_div(m[i][j] * pivot - m[i][k] * m[k][j], prev)
            m[i][k] = _zero_like(matrix)
        prev = pivot
    result = m[n - 1][n - 1]
    return -result if sign < 0 else result


def _zero_like(matrix):
    for row in matrix:
        for x in row:
            if isinstance(x, PolyQ):
                return PolyQ.const(0, x.gens)
    return Fraction(0)


def det_cofactor(matrix: Sequence[Sequence]):
    """Division-free Laplace expansion with memoized minors.

    Works over any commutative ring, including Laurent polynomials, so it
    also serves as an independent check on `det_bareiss`.
    """
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("matrix must be square")
    if n == 0:
        return Fraction(1)
    memo = {}

    def minor(row: int, cols: tuple):
        # determinant of rows row..n-1 restricted to columns `cols`
        if row == n:
            return Fraction(1)
        key = (row, cols)
        if key in memo:
            return memo[key]
        total = None
        for pos, col in enumerate(cols):
            entry = matrix[row][col]
            if _is_zero(entry):
                continue
            sub = minor(row + 1, cols[:pos] + cols[pos + 1:])
            if _is_zero(sub):
                continue
            term = entry * sub
            if pos % 2:
                term = -term
            total = term if total is None else total + term
        if total is None:
            total = _zero_like(matrix)
        memo[key] = total
        return total

    return minor(0, tuple(range(n)))


def det(matrix: Sequence[Sequence]):
    """Exact determinant; Bareiss for polynomial entries, cofactors if Laurent."""
    for row in matrix:
        for x in row:
            if isinstance(x, PolyQ) and any(e < 0 for exp in x.terms for e in exp):
                return det_cofactor(matrix)
    return det_bareiss(matrix)


def cramer(matrix: Sequence[Sequence], rhs: Sequence):
    """Return (numerators, determinant) with solution_k = numerators[k] / determinant."""
    n = len(matrix)
    d = det(matrix)
    nums = []
    for k in range(n):
        replaced = [list(row) for row in matrix]
        for i in range(n):
            replaced[i][k] = rhs[i]
        nums.append(det(replaced))
    return nums, d


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]):
    n, m, p = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = a[i][0] * b[0][j]
            for k in range(1, m):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out
