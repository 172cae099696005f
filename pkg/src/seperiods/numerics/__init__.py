"""Certified arbitrary-precision arithmetic substrate."""

from .ball import (
    BallContext,
    CertifiedComplex,
    CertifiedReal,
    fractional_parts,
)
from .linalg import (
    cholesky_pd,
    inverse_ball,
    mat_mul_ball,
    mat_vec_ball,
    solve_ball,
)
from .poly import poly_derivative, poly_eval, poly_from_roots, poly_mul
from .roots import IsolatedRoots, poly_roots


def principal_mth_root(ctx: BallContext, x: CertifiedComplex, m: int):
    """Principal m-th root with arg(x) in (-pi, pi]; negative reals take the
    upper branch, so the cut itself is well defined."""
    if m < 2:
        raise ValueError("m must be >= 2")
    return ctx.c_pow_frac(x, 1, m)


__all__ = [
    "BallContext",
    "CertifiedComplex",
    "CertifiedReal",
    "IsolatedRoots",
    "fractional_parts",
    "principal_mth_root",
    "poly_roots",
    "poly_eval",
    "poly_from_roots",
    "poly_derivative",
    "poly_mul",
    "solve_ball",
    "inverse_ball",
    "mat_vec_ball",
    "mat_mul_ball",
    "cholesky_pd",
]
