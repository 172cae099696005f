"""Dense linear algebra over ball matrices (lists of lists).

Sizes here are a few dozen rows at most, so plain Gaussian elimination with
partial pivoting is plenty.  Pivots are chosen by midpoint magnitude; a pivot
whose ball cannot be certified away from zero aborts with PrecisionLoss so
the caller can retry at higher precision.
"""

from ..errors import PrecisionLoss
from .ball import _RU


def solve_ball(ctx, A, B, real=False):
    """Solve A X = B, returning X as a list of rows of balls."""
    if real:
        add, sub, mul, div = ctx.r_add, ctx.r_sub, ctx.r_mul, ctx.r_div

        def certified_nonzero(p):
            return ctx.is_positive(p) or ctx.is_negative(p)

    else:
        add, sub, mul, div = ctx.c_add, ctx.c_sub, ctx.c_mul, ctx.c_div

        def certified_nonzero(p):
            return ctx.abs_lower(p) > 0

    n = len(A)
    k = len(B[0]) if B else 0
    M = [list(A[i]) + list(B[i]) for i in range(n)]

    for col in range(n):
        piv = max(range(col, n), key=lambda r: _RU.abs(M[r][col].mid))
        if not certified_nonzero(M[piv][col]):
            raise PrecisionLoss("matrix pivot not certified nonzero")
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
        prow = M[col]
        for r in range(col + 1, n):
            if _RU.abs(M[r][col].mid) == 0 and M[r][col].rad == 0:
                continue
            factor = div(M[r][col], prow[col])
            row = M[r]
            for c in range(col + 1, n + k):
                row[c] = sub(row[c], mul(factor, prow[c]))

    X = [[None] * k for _ in range(n)]
    for col in range(n - 1, -1, -1):
        for rhs in range(k):
            acc = M[col][n + rhs]
            for c in range(col + 1, n):
                acc = sub(acc, mul(M[col][c], X[c][rhs]))
            X[col][rhs] = div(acc, M[col][col])
    return X


def inverse_ball(ctx, A, real=False):
    n = len(A)
    if real:
        eye = [
            [ctx.one_r if i == j else ctx.zero_r for j in range(n)]
            for i in range(n)
        ]
    else:
        one = ctx.complex(1)
        zero = ctx.complex(0)
        eye = [[one if i == j else zero for j in range(n)] for i in range(n)]
    return solve_ball(ctx, A, eye, real=real)


def mat_vec_ball(ctx, A, v, real=False):
    add = ctx.r_add if real else ctx.c_add
    mul = ctx.r_mul if real else ctx.c_mul
    out = []
    for row in A:
        acc = mul(row[0], v[0])
        for c in range(1, len(v)):
            acc = add(acc, mul(row[c], v[c]))
        out.append(acc)
    return out


def mat_mul_ball(ctx, A, B, real=False):
    add = ctx.r_add if real else ctx.c_add
    mul = ctx.r_mul if real else ctx.c_mul
    n, p, k = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(k):
            acc = mul(A[i][0], B[0][j])
            for t in range(1, p):
                acc = add(acc, mul(A[i][t], B[t][j]))
            row.append(acc)
        out.append(row)
    return out


def cholesky_pd(ctx, A) -> bool:
    """Certify that every symmetric matrix inside the real ball matrix A is
    positive definite, by running Cholesky in ball arithmetic.  Returns False
    when some pivot ball cannot be certified positive (not a disproof)."""
    n = len(A)
    L = [[ctx.zero_r] * n for _ in range(n)]
    for j in range(n):
        s = A[j][j]
        for t in range(j):
            s = ctx.r_sub(s, ctx.r_mul(L[j][t], L[j][t]))
        if not ctx.is_positive(s):
            return False
        L[j][j] = ctx.r_sqrt(s)
        for i in range(j + 1, n):
            v = A[i][j]
            for t in range(j):
                v = ctx.r_sub(v, ctx.r_mul(L[i][t], L[j][t]))
            L[i][j] = ctx.r_div(v, L[j][j])
    return True
