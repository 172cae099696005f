"""Superelliptic curve model y^m = f(x).

The curve is normalized to a monic model internally (y absorbs an m-th root
of the leading coefficient); all reported periods and Abel-Jacobi values
refer to the normalized model.  Branches along a segment are represented by
EdgeFrame objects: an affine change of variable sends the segment to [-1, 1]
and y restricted to it factors into a frame constant, a cut-free root
product over the remaining branch points, and an explicit (1 -+ u) part
carrying the endpoint ramification.
"""

import math
from dataclasses import dataclass

import gmpy2
from gmpy2 import mpfr

from .errors import EdgeInvalid, IndeterminateBranch, InvalidInput
from .numerics import (
    BallContext,
    CertifiedComplex,
    IsolatedRoots,
    poly_eval,
    poly_roots,
)
from .numerics.ball import _RD, _RU

# low-precision context for winding-number scouting; exponent range of mpfr
# avoids the overflow a float64 atan2 could hit on large products
_A60 = gmpy2.context(precision=60)


@dataclass
class DifferentialBasis:
    """Index pairs (i, j) of the holomorphic differentials x^(i-1) dx / y^j.

    The conventional extra 1/i factor is applied once at period-matrix and
    Abel-Jacobi assembly; it rescales rows uniformly and cancels in tau and
    in reduced coordinates.
    """

    entries: list


@dataclass
class Curve:
    m: int
    coeffs: list  # monic model, descending ball coefficients
    X: IsolatedRoots
    delta: int
    genus: int
    infinite_is_branch: bool
    zeta: CertifiedComplex
    n: int
    ctx: BallContext
    lc: CertifiedComplex
    lc_is_one: bool
    cf_root: CertifiedComplex
    halfpow: list  # e^(i pi t / m), t = 0 .. 2m-1


@dataclass
class CurvePoint:
    tag: str  # "finite" | "ramification" | "infinite"
    x: object = None
    y: object = None
    index: int = None  # ramification: index into curve.X.roots
    sheet: int = None  # infinite: 1 .. delta


def finite_point(x, y) -> CurvePoint:
    return CurvePoint(tag="finite", x=x, y=y)


def ramification_point(index: int) -> CurvePoint:
    return CurvePoint(tag="ramification", index=index)


def infinite_point(sheet: int) -> CurvePoint:
    return CurvePoint(tag="infinite", sheet=sheet)


def _half_powers(ctx: BallContext, m: int):
    """Balls for e^(i pi t / m), t = 0 .. 2m-1."""
    out = []
    for t in range(2 * m):
        theta = ctx.r_div_int(ctx.r_mul_int(ctx.pi, t), m)
        out.append(ctx.c_cis(theta))
    one = ctx.complex(1)
    out[0] = one
    return out


def curve_new(m: int, coeffs, prec) -> Curve:
    if not isinstance(m, int) or m < 2:
        raise InvalidInput("m must be an integer >= 2")
    working = prec if isinstance(prec, int) else prec.working_bits
    ctx = BallContext(working)
    cs = []
    for c in coeffs:
        if isinstance(c, CertifiedComplex):
            cs.append(c)
        elif isinstance(c, tuple):  # (re, im) pair, each any exact scalar form
            cs.append(ctx.complex(*c))
        else:
            cs.append(ctx.complex(c))
    while len(cs) > 1 and _RU.abs(cs[0].mid) == 0 and cs[0].rad == 0:
        cs = cs[1:]
    n = len(cs) - 1
    if n < 3:
        raise InvalidInput("deg f must be at least 3")
    lc = cs[0]
    if not ctx.abs_lower(lc) > 0:
        raise InvalidInput("leading coefficient disk contains zero")
    lc_is_one = lc.rad == 0 and lc.mid == 1
    if lc_is_one:
        monic = cs
        cf_root = ctx.complex(1)
    else:
        monic = [ctx.complex(1)] + [ctx.c_div(c, lc) for c in cs[1:]]
        cf_root = ctx.c_pow_frac(lc, 1, m)

    X = poly_roots(monic, working)  # NotSeparable propagates (retryable)

    delta = math.gcd(m, n)
    num = (m - 1) * (n - 1) - delta + 1
    assert num % 2 == 0
    genus = num // 2
    halfpow = _half_powers(ctx, m)
    return Curve(
        m=m,
        coeffs=monic,
        X=X,
        delta=delta,
        genus=genus,
        infinite_is_branch=(delta != m),
        zeta=halfpow[2 % (2 * m)],
        n=n,
        ctx=ctx,
        lc=lc,
        lc_is_one=lc_is_one,
        cf_root=cf_root,
        halfpow=halfpow,
    )


def f_eval(curve: Curve, x) -> CertifiedComplex:
    """Monic-model f at a ball point."""
    return poly_eval(curve.ctx, curve.coeffs, x)


def differential_basis(curve: Curve) -> DifferentialBasis:
    m, n, delta = curve.m, curve.n, curve.delta
    entries = []
    for j in range(1, m):
        imax = (j * n - delta) // m
        for i in range(1, min(imax, n - 1) + 1):
            entries.append((i, j))
    assert len(entries) == curve.genus
    return DifferentialBasis(entries=entries)


@dataclass
class EdgeFrame:
    a: CertifiedComplex
    b: CertifiedComplex
    Uplus: list
    Uminus: list
    Cab: CertifiedComplex
    one_sided: bool
    m: int
    n: int
    kind: str  # "edge" | "one_sided" | "plain"
    factors: list  # (u_k ball, side); side +1 -> (u_k - u), -1 -> (u - u_k)
    center: CertifiedComplex  # (a+b)/2
    t: CertifiedComplex  # (b-a)/2
    halfpow: list
    ctx: BallContext
    a_index: int = None
    b_index: int = None


def edge_frame(curve: Curve, a, b, one_sided: bool = False) -> EdgeFrame:
    """Frame for the segment from branch point a to b (or to a target point
    x_P when one_sided).  a and b may be indices into curve.X.roots."""
    exclude = set()
    a_index = b_index = None
    if isinstance(a, int):
        a_index = a
        exclude.add(a)
        a = curve.X.roots[a]
    if isinstance(b, int):
        if one_sided:
            raise InvalidInput("one-sided target must be a point, not an index")
        b_index = b
        exclude.add(b)
        b = curve.X.roots[b]
    if not one_sided and (a_index is None or b_index is None):
        raise InvalidInput("two-sided edges are identified by root indices")
    kind = "one_sided" if one_sided else "edge"
    fr = build_frame(
        curve.ctx, curve.m, curve.X.roots, a, b, exclude, kind, curve.halfpow
    )
    fr.a_index = a_index
    fr.b_index = b_index
    return fr


def plain_frame(curve: Curve, a, b) -> EdgeFrame:
    """Frame for a segment avoiding every branch point (waypoint legs)."""
    return build_frame(
        curve.ctx, curve.m, curve.X.roots, a, b, set(), "plain", curve.halfpow
    )


def build_frame(ctx, m, roots, a, b, exclude, kind, halfpow) -> EdgeFrame:
    a = ctx.to_complex(a) if not isinstance(a, CertifiedComplex) else a
    b = ctx.to_complex(b) if not isinstance(b, CertifiedComplex) else b
    t = ctx.c_scale2(ctx.c_sub(b, a), -1)
    if not ctx.abs_lower(t) > 0:
        raise EdgeInvalid("edge invalid: endpoints coincide within radii")
    center = ctx.c_scale2(ctx.c_add(a, b), -1)
    uplus, uminus, factors = [], [], []
    for k, x_k in enumerate(roots):
        if k in exclude:
            continue
        u_k = ctx.c_div(ctx.c_sub(x_k, center), t)
        if ctx.im_sign(u_k) == 0:
            # disk touches the real u-axis; it must sit clear of [-1, 1]
            re = ctx.c_re(u_k)
            if not ctx.lower(ctx.r_abs(re)) > 1:
                raise EdgeInvalid(
                    "edge invalid: branch point disk touches the segment"
                )
        rs = ctx.re_sign(u_k)
        if rs > 0 or (rs == 0 and u_k.mid.real > 0):
            uplus.append(u_k)
            factors.append((u_k, +1))
        else:
            uminus.append(u_k)
            factors.append((u_k, -1))
    n = len(roots)
    if kind == "edge":
        r = (1 + len(uplus)) % 2
    else:
        r = len(uplus) % 2
    cab = ctx.c_mul(ctx.c_pow_frac(t, n, m), halfpow[r])
    return EdgeFrame(
        a=a,
        b=b,
        Uplus=uplus,
        Uminus=uminus,
        Cab=cab,
        one_sided=(kind == "one_sided"),
        m=m,
        n=n,
        kind=kind,
        factors=factors,
        center=center,
        t=t,
        halfpow=halfpow,
        ctx=ctx,
    )


def _arg60(ctx, z):
    """(double arg of the ball midpoint, certified angular half-width)."""
    lo = ctx.abs_lower(z)
    if not lo > 0:
        raise IndeterminateBranch("indeterminate branch: factor disk hits zero")
    s = float(_RU.div(z.rad, lo))
    if s > 0.1:
        raise IndeterminateBranch("indeterminate branch: factor disk too wide")
    arg = float(_A60.atan2(z.mid.imag, z.mid.real))
    # asin(s) <= 1.01 s for s <= 0.1; 1e-15 covers the double evaluation
    return arg, 1.02 * s + 1e-15


def ytab_eval(frame: EdgeFrame, u) -> CertifiedComplex:
    """The cut-free root product: product over U^- of (u - u_k)^(1/m) times
    product over U^+ of (u_k - u)^(1/m), each factor a principal root.

    Taking one m-th root of the full product requires the winding of the
    partial products; instead the sum of certified factor arguments pins the
    power of e^(i pi / m) relating the termwise root product to the
    principal root of the full product, which is exact once the total
    uncertainty is below half a unit."""
    ctx = frame.ctx
    if not frame.factors:
        return ctx.complex(1)
    u = ctx.to_complex(u) if not isinstance(u, CertifiedComplex) else u
    prod = None
    arg_sum = 0.0
    width = 0.0
    for u_k, side in frame.factors:
        fac = ctx.c_sub(u_k, u) if side > 0 else ctx.c_sub(u, u_k)
        if ctx.disk_hits_cut(fac):
            raise IndeterminateBranch(
                "indeterminate branch: root-product factor meets the cut"
            )
        a, hw = _arg60(ctx, fac)
        arg_sum += a
        width += hw
        prod = fac if prod is None else ctx.c_mul(prod, fac)

    prodp = prod
    if ctx.disk_hits_cut(prod):
        if ctx.re_sign(prod) < 0:
            # half-shift: root the reflected product, pay a power of
            # e^(i pi / m) through the winding count below
            prodp = ctx.c_neg(prod)
        else:
            raise IndeterminateBranch(
                "indeterminate branch: root product disk hits zero"
            )
    a, hw = _arg60(ctx, prodp)
    q2f = (arg_sum - a) / math.pi
    q2 = int(round(q2f))
    if abs(q2f - q2) + width / math.pi > 0.2:
        raise IndeterminateBranch("indeterminate branch: winding not certified")
    root = ctx.c_root_m(prodp, frame.m)
    return ctx.c_mul(frame.halfpow[q2 % (2 * frame.m)], root)


def ytab_abs_range(frame: EdgeFrame, u):
    """(lower, upper) mpfr bounds for |root product|^(1/m) over the u ball.

    Needs no winding data, so it works for arbitrary complex u balls; a zero
    lower bound means the ball may touch a branch point."""
    ctx = frame.ctx
    lo, up = mpfr(1), mpfr(1)
    for u_k, side in frame.factors:
        fac = ctx.c_sub(u_k, u) if side > 0 else ctx.c_sub(u, u_k)
        lo = _RD.mul(lo, ctx.abs_lower(fac))
        up = _RU.mul(up, ctx.abs_upper(fac))
    if lo > 0:
        lo = _RD.rootn(lo, frame.m)
    up = _RU.rootn(up, frame.m)
    return lo, up


def frame_u(frame: EdgeFrame, x) -> CertifiedComplex:
    """Affine coordinate u of a point x on the frame's segment."""
    ctx = frame.ctx
    x = ctx.to_complex(x) if not isinstance(x, CertifiedComplex) else x
    return ctx.c_div(ctx.c_sub(x, frame.center), frame.t)


def branch_eval_u(frame: EdgeFrame, u) -> CertifiedComplex:
    ctx = frame.ctx
    u = ctx.to_complex(u) if not isinstance(u, CertifiedComplex) else u
    out = ctx.c_mul(frame.Cab, ytab_eval(frame, u))
    one = ctx.complex(1)
    if frame.kind == "edge":
        out = ctx.c_mul(out, ctx.c_root_m(ctx.c_sub(one, ctx.c_mul(u, u)), frame.m))
    elif frame.kind == "one_sided":
        out = ctx.c_mul(out, ctx.c_root_m(ctx.c_add(one, u), frame.m))
    return out


def branch_eval(frame: EdgeFrame, x) -> CertifiedComplex:
    """The branch y_{a,b} at x; raises when x sits on a branch cut."""
    return branch_eval_u(frame, frame_u(frame, x))
