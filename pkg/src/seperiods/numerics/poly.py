"""Ball polynomial helpers.

Polynomials are lists of CertifiedComplex coefficients in descending degree
order (leading coefficient first), matching how the equations are written.
"""

from .ball import BallContext, CertifiedComplex


def poly_eval(ctx: BallContext, coeffs, z) -> CertifiedComplex:
    """Horner evaluation with full enclosure propagation."""
    zc = ctx.to_complex(z) if not isinstance(z, CertifiedComplex) else z
    acc = coeffs[0]
    if not isinstance(acc, CertifiedComplex):
        acc = ctx.to_complex(acc)
    for c in coeffs[1:]:
        acc = ctx.c_mul(acc, zc)
        acc = ctx.c_add(acc, c if isinstance(c, CertifiedComplex) else ctx.to_complex(c))
    return acc


def poly_derivative(ctx: BallContext, coeffs):
    n = len(coeffs) - 1
    return [ctx.c_mul_int(c, n - k) for k, c in enumerate(coeffs[:-1])]


def poly_mul(ctx: BallContext, p, q):
    out = [ctx.complex(0) for _ in range(len(p) + len(q) - 1)]
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] = ctx.c_add(out[i + j], ctx.c_mul(a, b))
    return out


def poly_from_roots(ctx: BallContext, roots):
    """Monic polynomial with the given (ball) roots, descending coefficients."""
    coeffs = [ctx.complex(1)]
    for r in roots:
        rc = r if isinstance(r, CertifiedComplex) else ctx.to_complex(r)
        nxt = [ctx.complex(0) for _ in range(len(coeffs) + 1)]
        for i, c in enumerate(coeffs):
            nxt[i] = ctx.c_add(nxt[i], c)
            nxt[i + 1] = ctx.c_sub(nxt[i + 1], ctx.c_mul(c, rc))
        coeffs = nxt
    return coeffs


def poly_scale(ctx: BallContext, coeffs, s) -> list:
    sc = s if isinstance(s, CertifiedComplex) else ctx.to_complex(s)
    return [ctx.c_mul(c, sc) for c in coeffs]
