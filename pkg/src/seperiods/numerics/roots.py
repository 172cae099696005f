"""Certified polynomial root isolation.

Strategy: Aberth-Ehrlich simultaneous iteration in double precision, Newton
refinement up a precision ladder, then a posteriori certification: the disk
around each refined midpoint z_i with radius n*|p(z_i)/(lc * prod(z_i - z_j))|
contains a true root (Smith/Gerschgorin bound for the Weierstrass residuals),
and pairwise disjoint disks witness separability.
"""

import cmath
from dataclasses import dataclass

import gmpy2
import numpy as np
from gmpy2 import mpc, mpfr

from ..errors import InvalidInput, NotSeparable
from .ball import _RD, _RU, BallContext, CertifiedComplex


@dataclass
class IsolatedRoots:
    """Pairwise disjoint disks, one true root in each."""

    roots: list
    degree: int


def _aberth_double(coeffs):
    """All roots of a double-precision polynomial, descending coefficients."""
    c = np.asarray(coeffs, dtype=complex)
    c = c / c[0]
    n = len(c) - 1
    if n == 1:
        return np.array([-c[1]])
    # Cauchy bound seed circle, slightly irrational angle spread
    bound = 1.0 + max(abs(x) for x in c[1:])
    k = np.arange(n)
    z = bound * 0.7 * np.exp(2j * np.pi * (k / n + 0.123456))
    dc = c[:-1] * np.arange(n, 0, -1)
    # overflow/0/0 along the way is harmless: the ladder certifies later,
    # and a non-finite iterate just routes to the companion fallback
    with np.errstate(all="ignore"):
        for sweep in range(400):
            p = np.polyval(c, z)
            dp = np.polyval(dc, z)
            ratio = np.where(dp != 0, p / np.where(dp == 0, 1, dp), 0.1)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            s = np.sum(1.0 / diff, axis=1)
            w = ratio / (1.0 - ratio * s)
            z = z - w
            if not np.all(np.isfinite(z)):
                break
            if np.max(np.abs(w)) < 1e-14 * (1.0 + np.max(np.abs(z))):
                break
        if not np.all(np.isfinite(z)) or np.max(np.abs(np.polyval(c, z))) > 1e-6 * max(1.0, bound) ** n:
            # stalled; fall back to companion eigenvalues and polish once
            z = np.roots(c)
            p = np.polyval(c, z)
            dp = np.polyval(dc, z)
            z = z - np.where(dp != 0, p / np.where(dp == 0, 1, dp), 0)
    return z


def _newton_ladder(mid_coeffs, dmid_coeffs, z0_double, working: int):
    """Refine one root from a double seed up to the working precision."""
    prec = 53
    z = mpc(z0_double.real, z0_double.imag, precision=64)
    while prec < working:
        prec = min(2 * prec + 10, working)
        ctx = gmpy2.context(precision=prec)
        z = ctx.add(mpc(z, precision=prec), 0)
        for _ in range(2):
            p = mid_coeffs[0]
            for c in mid_coeffs[1:]:
                p = ctx.add(ctx.mul(p, z), c)
            dp = dmid_coeffs[0]
            for c in dmid_coeffs[1:]:
                dp = ctx.add(ctx.mul(dp, z), c)
            if dp == 0:
                break
            z = ctx.sub(z, ctx.div(p, dp))
    return z


def poly_roots(coeffs, prec) -> IsolatedRoots:
    """Certified roots of a ball-coefficient polynomial (descending order).

    prec may be an int (working bits) or any object with .working_bits.
    Raises NotSeparable when the certification disks cannot be made pairwise
    disjoint at this precision.
    """
    working = prec if isinstance(prec, int) else prec.working_bits
    ctx = BallContext(working)
    coeffs = [c if isinstance(c, CertifiedComplex) else ctx.complex(c) for c in coeffs]
    while len(coeffs) > 1 and ctx.abs_upper(coeffs[0]) == 0:
        coeffs = coeffs[1:]
    n = len(coeffs) - 1
    if n < 1:
        raise InvalidInput("polynomial must have positive degree")
    if not ctx.abs_lower(coeffs[0]) > 0:
        raise InvalidInput("leading coefficient disk contains zero")

    mid_doubles = [complex(c.mid) for c in coeffs]
    seeds = _aberth_double(mid_doubles)

    mid_coeffs = [c.mid for c in coeffs]
    nctx = gmpy2.context(precision=working)
    dmid_coeffs = [nctx.mul(c, n - k) for k, c in enumerate(mid_coeffs[:-1])]
    mids = [_newton_ladder(mid_coeffs, dmid_coeffs, z, working) for z in seeds]

    roots = _certify(ctx, coeffs, mids, n)

    if all(c.mid.imag == 0 for c in coeffs):
        roots = _conjugate_cleanup(ctx, roots)

    roots.sort(key=lambda r: (r.mid.real, r.mid.imag))
    _check_disjoint(ctx, roots)
    return IsolatedRoots(roots=roots, degree=n)


def _certify(ctx, coeffs, mids, n):
    roots = []
    for i, zi in enumerate(mids):
        z = CertifiedComplex(zi)
        pz = coeffs[0]
        for c in coeffs[1:]:
            pz = ctx.c_add(ctx.c_mul(pz, z), c)
        den = coeffs[0]
        for j, zj in enumerate(mids):
            if j == i:
                continue
            den = ctx.c_mul(den, ctx.c_sub(z, CertifiedComplex(zj)))
        if not ctx.abs_lower(den) > 0:
            raise NotSeparable("not separable at this precision")
        w_up = _RU.div(ctx.abs_upper(pz), ctx.abs_lower(den))
        roots.append(CertifiedComplex(zi, _RU.mul(w_up, n)))
    return roots


def _conjugate_cleanup(ctx, roots):
    """For real-coefficient input, snap roots to exact reals/conjugate pairs.

    A disk whose mirror image meets no other disk must hold a real root (the
    root set is closed under conjugation and each disk holds exactly one), so
    its midpoint can be pinned to the axis.  Disks pairing with a distinct
    mirror partner get exactly conjugate midpoints.
    """
    out = list(roots)
    used = set()
    for i, r in enumerate(out):
        if i in used:
            continue
        im = mpfr(r.mid.imag, ctx.prec)
        if ctx._d.sub(ctx._d.abs(im), r.rad) > 0:
            # certified off-axis: find the mirror partner
            mirror = ctx.c_conj(r)
            partners = [
                j
                for j, s in enumerate(out)
                if j != i and ctx.overlap_c(mirror, s)
            ]
            if len(partners) == 1:
                j = partners[0]
                out[j] = CertifiedComplex(mirror.mid, _RU.maxnum(r.rad, out[j].rad))
                used.add(i)
                used.add(j)
            continue
        mirror = ctx.c_conj(r)
        others = [j for j, s in enumerate(out) if j != i and ctx.overlap_c(mirror, s)]
        if not others:
            mid = mpc(mpfr(r.mid.real, ctx.prec), mpfr(0), precision=ctx.prec)
            out[i] = CertifiedComplex(mid, _RU.add(r.rad, _RU.abs(im)))
            used.add(i)
    return out


def _check_disjoint(ctx, roots):
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            gap = ctx.abs_lower(ctx.c_sub(roots[i], roots[j]))
            if not gap > 0:
                raise NotSeparable("not separable at this precision")
