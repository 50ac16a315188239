"""Small dense linear algebra over a coefficient field (n x n with n tiny)."""

from __future__ import annotations

from .errors import NotInvertible


def _pivot(field, rows, col, start):
    if field.exact:
        for r in range(start, len(rows)):
            if not field.is_zero(rows[r][col]):
                return r
        return None
    best, arg = field.eps, None
    for r in range(start, len(rows)):
        v = abs(rows[r][col])
        if v > best:
            best, arg = v, r
    return arg


def inverse(field, mat):
    n = len(mat)
    rows = [[field.coerce(x) for x in row] + [field.one if i == j else field.zero for j in range(n)]
            for i, row in enumerate(mat)]
    for c in range(n):
        p = _pivot(field, rows, c, c)
        if p is None:
            raise NotInvertible("matrix is singular")
        rows[c], rows[p] = rows[p], rows[c]
        inv = field.one / rows[c][c]
        rows[c] = [x * inv for x in rows[c]]
        for r in range(n):
            if r != c and not field.is_zero(rows[r][c]):
                f = rows[r][c]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[c])]
    return [row[n:] for row in rows]


def matvec(field, mat, v):
    out = []
    for row in mat:
        acc = field.zero
        for a, b in zip(row, v):
            acc = acc + a * b
        out.append(acc)
    return out


def matmul(field, a, b):
    cols = list(zip(*b))
    return [matvec(field, [list(c) for c in cols], row) for row in a]


def rank(field, mat):
    rows = [[field.coerce(x) for x in row] for row in mat]
    if not rows:
        return 0
    r = 0
    for c in range(len(rows[0])):
        p = _pivot(field, rows, c, r)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = field.one / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for k in range(len(rows)):
            if k != r and not field.is_zero(rows[k][c]):
                f = rows[k][c]
                rows[k] = [x - f * y for x, y in zip(rows[k], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r
