"""Shared helpers for the test suite."""

import random
from fractions import Fraction

import gmpy2
import mpmath as mp
import pytest
import sympy


def bernoulli_coeffs(n):
    """Descending exact rational coefficients of the Bernoulli polynomial."""
    x = sympy.Symbol("x")
    p = sympy.Poly(sympy.bernoulli(n, x), x)
    return [Fraction(int(c.p), int(c.q)) for c in p.all_coeffs()]


def int_det(M):
    """Determinant of an integer matrix, exact (fraction-free would be nicer
    but Fractions are fast enough at these sizes)."""
    n = len(M)
    A = [[Fraction(x) for x in row] for row in M]
    det = Fraction(1)
    for k in range(n):
        p = next((r for r in range(k, n) if A[r][k] != 0), None)
        if p is None:
            return 0
        if p != k:
            A[k], A[p] = A[p], A[k]
            det = -det
        det *= A[k][k]
        for r in range(k + 1, n):
            f = A[r][k] / A[k][k]
            for c in range(k, n):
                A[r][c] -= f * A[k][c]
    assert det.denominator == 1
    return int(det)


def dist_to_int(v):
    """Upper bound for the distance of a real ball to the nearest integer."""
    d = abs(v.mid - gmpy2.rint(v.mid))
    return gmpy2.mpfr(d) + v.rad


def worst_dist_to_int(vec):
    w = gmpy2.mpfr(0)
    for v in vec:
        w = max(w, dist_to_int(v))
    return w


def ball_to_mpc(z):
    """CertifiedComplex midpoint as an mpmath mpc (str round-trips exactly)."""
    return mp.mpc(mp.mpf(str(z.mid.real)), mp.mpf(str(z.mid.imag)))


def ball_to_mpf(x):
    return mp.mpf(str(x.mid))


def overlap(ctx, x, y):
    """Do two complex enclosures intersect?"""
    return ctx.abs_lower(ctx.c_sub(x, y)) <= 0


def random_unimodular(N, rng, steps=40):
    S = [[1 if i == j else 0 for j in range(N)] for i in range(N)]
    for _ in range(steps):
        i, j = rng.randrange(N), rng.randrange(N)
        if i == j:
            continue
        c = rng.choice([-2, -1, 1, 2])
        for r in range(N):
            S[r][i] += c * S[r][j]
        if rng.random() < 0.3:
            for r in range(N):
                S[r][i], S[r][j] = S[r][j], S[r][i]
    return S


def random_curve(rng, mmax=5, nmax=8, cmax=10):
    """Random integer-coefficient input; caller must survive curve_new."""
    m = rng.randint(2, mmax)
    n = rng.randint(max(3, m), nmax)
    if (m, n) == (2, 3) and nmax >= 4:
        n = 4
    coeffs = [rng.randint(-cmax, cmax) for _ in range(n + 1)]
    if coeffs[0] == 0:
        coeffs[0] = rng.randint(1, cmax)
    return m, coeffs


@pytest.fixture
def rng():
    return random.Random(987123)
