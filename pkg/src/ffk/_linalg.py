"""Dense linear algebra over an exact field given by its element type.

Elements only need ``+ - * /`` and truthiness (zero is falsy).
"""

from __future__ import annotations

from itertools import permutations

from .errors import PreconditionError


def det(matrix, one, zero):
    """Determinant by Gaussian elimination with exact pivoting."""
    a = [list(row) for row in matrix]
    n = len(a)
    result = one
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col]), None)
        if pivot is None:
            return zero
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            result = -result
        pv = a[col][col]
        result = result * pv
        for r in range(col + 1, n):
            if a[r][col]:
                f = a[r][col] / pv
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return result


def solve(matrix, rhs):
    """Solve ``matrix @ x = rhs``; raises when the matrix is singular."""
    n = len(matrix)
    a = [list(row) + [b] for row, b in zip(matrix, rhs)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col]), None)
        if pivot is None:
            raise PreconditionError("singular linear system")
        a[col], a[pivot] = a[pivot], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


def _sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
    return sign


def det_leibniz(matrix, mul, add, neg, one, zero):
    """Determinant over a commutative ring (no division), by permutation expansion."""
    n = len(matrix)
    total = zero
    for perm in permutations(range(n)):
        term = one
        for i, j in enumerate(perm):
            term = mul(term, matrix[i][j])
        total = add(total, term if _sign(perm) > 0 else neg(term))
    return total
