"""Rigorous quadrature for the edge integrals.

Two engines: double-exponential (any m) and Gauss-Chebyshev (m = 2, j = 1).
Parameter selection runs in doubles (it only affects the node count), while
every quantity entering the final error bound (M1, M2, B(r, alpha), h, N) is
evaluated in directed ball arithmetic, so the e^(-D) tail really is certified.

Convention: D is in nats and e^(-D) = 2^(-working_bits)/4, so the appended
quadrature error term is an exact dyadic and sits far enough below the
published accuracy that sums over many edges stay within the target radius.
"""

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

import gmpy2
from gmpy2 import mpfr

from .curve import EdgeFrame, ytab_abs_range, ytab_eval
from .errors import EdgeInvalid, InvalidInput, RTooLarge
from .numerics import BallContext
from .numerics.ball import _RD, _RU

LAMBDA_DEFAULT = math.pi / 2


@dataclass
class BoundReport:
    frame: EdgeFrame
    lam: float
    r0: float
    rks: list  # per-branch-point strip radii (doubles)
    tks: list  # per-branch-point abscissas (doubles)
    imax: dict  # j -> max power i present
    M1: dict = field(default_factory=dict)  # j -> certified mpfr upper bound
    M2: dict = field(default_factory=dict)
    Bralpha: dict = field(default_factory=dict)
    r: float = 0.0
    T: float = 0.0


@dataclass
class DEScheme:
    lam: float
    r: float
    h: mpfr  # exact dyadic step
    Npts: int
    alphas: list  # (j, alpha) pairs covered by this scheme
    err: mpfr  # 2^-(working_bits+2)
    report: BoundReport
    kind: str  # frame kind the weights are built for
    m: int


@dataclass
class GCScheme:
    Npts: int
    r: float
    Mr: mpfr
    err: mpfr
    imax: int


def _d_nats_up(prec) -> float:
    d = prec.d_nats
    for _ in range(2):
        d = math.nextafter(d, math.inf)
    return d


def _quad_err(prec) -> mpfr:
    # e^(-D) with D = working*ln2 + ln4, exactly
    return _RU.div_2exp(mpfr(1), prec.working_bits + 2)


# ---------------------------------------------------------------- DE engine


def de_r0(frame: EdgeFrame, lam: float):
    """(r0, r_k list, t_k list) in doubles; r_k is the strip radius at which
    the double-exponential domain first touches branch point u_k."""
    ceiling = 0.999 * math.asin(min(1.0, math.pi / (2 * lam)))
    rks, tks = [], []
    for u_k, _ in frame.factors:
        u = complex(u_k.mid)
        if abs(u.imag) < 1e-300 and abs(u.real) < 1:
            raise EdgeInvalid("edge invalid: branch point inside the segment")
        w = cmath.asinh(cmath.atanh(u) / lam)
        rks.append(abs(w.imag))
        tks.append(w.real)
    r0 = min(rks) if rks else ceiling
    r0 = min(r0, ceiling)
    if r0 <= 0:
        raise EdgeInvalid("edge invalid: vanishing integration domain")
    return r0, rks, tks


def _xr(ctx: BallContext, lam_b, r_b):
    # X_r = cos r * sqrt(pi/(2 lam sin r) - 1)
    sr = ctx.r_sin(r_b)
    inner = ctx.r_sub(
        ctx.r_div(ctx.pi, ctx.r_scale2(ctx.r_mul(lam_b, sr), 1)), ctx.one_r
    )
    return ctx.r_mul(ctx.r_cos(r_b), ctx.r_sqrt(inner))


def _pow_frac_upper(x_up, p: int, q: int) -> mpfr:
    # upper bound for x^(p/q), x >= 0 given by an upper bound
    if x_up <= 0:
        return mpfr(0)
    return _RU.pow(_RU.rootn(x_up, q), p)


def _pow_frac_lower(x_lo, p: int, q: int) -> mpfr:
    if x_lo <= 0:
        return mpfr(0)
    return _RD.pow(_RD.rootn(x_lo, q), p)


def b_r_alpha(ctx: BallContext, lam: float, r: float, alpha: Fraction) -> mpfr:
    """Certified upper bound for the strip-boundary constant B(r, alpha)."""
    lam_b = ctx.real(lam)
    r_b = ctx.real(r)
    x = _xr(ctx, lam_b, r_b)
    p, q = alpha.numerator, alpha.denominator
    x_up, x_lo = ctx.upper(x), ctx.lower(x)
    if not x_lo > 0:
        raise RTooLarge("r too large: X_r not certified positive")
    cs = ctx.r_cos(ctx.r_mul(lam_b, ctx.r_sin(r_b)))
    cs_lo = ctx.lower(cs)
    if not cs_lo > 0:
        raise RTooLarge("r too large: lam*sin(r) reaches pi/2")
    cosr_lo = ctx.lower(ctx.r_cos(r_b))
    # (2/cos r) * ( X_r/2 * (cos(lam sin r)^(-2a) + X_r^(-2a))
    #              + 1/(2a sinh(X_r)^(2a)) )
    t1 = _RU.div(x_up, _RD.mul(_pow_frac_lower(cs_lo, 2 * p, q), 2))
    t2 = _RU.div(x_up, _RD.mul(_pow_frac_lower(x_lo, 2 * p, q), 2))
    sh_lo = ctx.lower(ctx.r_scale2(ctx.r_sub(ctx.r_exp(x), ctx.r_exp(ctx.r_neg(x))), -1))
    t3 = _RU.div(mpfr(q), _RD.mul(_RD.mul(_pow_frac_lower(sh_lo, 2 * p, q), 2), p))
    return _RU.mul(_RU.div(mpfr(2), cosr_lo), _RU.add(_RU.add(t1, t2), t3))


def _dist_to_segment_lower(ctx: BallContext, z) -> mpfr:
    """Certified lower bound for the distance from ball z to [-1, 1]."""
    im_lo = ctx.lower(ctx.r_abs(ctx.c_im(z)))
    if im_lo < 0:
        im_lo = mpfr(0)
    re = ctx.c_re(z)
    re_lo, re_up = ctx.lower(re), ctx.upper(re)
    beyond = mpfr(0)
    if re_lo > 1:
        beyond = _RD.sub(re_lo, 1)
    elif re_up < -1:
        beyond = _RD.sub(-re_up, 1)
    return im_lo if im_lo >= beyond else beyond


def segment_sup_m1(frame: EdgeFrame, ctx: BallContext, j: int) -> mpfr:
    """Certified upper bound for sup over [-1,1] of |u^(i-1) ytab^(-j)|."""
    m = frame.m
    prod_lo = mpfr(1)
    for u_k, side in frame.factors:
        d = _dist_to_segment_lower(ctx, u_k)
        if not d > 0:
            raise EdgeInvalid("edge invalid: branch point touches the segment")
        prod_lo = _RD.mul(prod_lo, d)
    m1 = _RU.div(mpfr(1), _pow_frac_lower(prod_lo, j, m))
    if frame.kind == "one_sided":
        # the regular part carries an extra (1-u)^(j/m) <= 2^(j/m)
        m1 = _RU.mul(m1, _pow_frac_upper(mpfr(2), j, m))
    return m1


def _free_part_upper(frame: EdgeFrame, ctx: BallContext, u_ball, imax: int, j: int):
    """Upper bound of the regular integrand part on a u enclosure; None when
    the enclosure may touch a branch point."""
    lo, _ = ytab_abs_range(frame, u_ball)
    if not lo > 0:
        return None
    val = _RU.div(mpfr(1), _RD.pow(lo, j))
    if imax > 1:
        val = _RU.mul(val, _RU.pow(ctx.abs_upper(u_ball), imax - 1))
    if frame.kind == "one_sided":
        one_minus = ctx.c_sub(ctx.complex(1), u_ball)
        val = _RU.mul(val, _pow_frac_upper(ctx.abs_upper(one_minus), j, frame.m))
    return val


def _free_part_lower(frame: EdgeFrame, ctx: BallContext, u_ball, imax: int, j: int):
    _, up = ytab_abs_range(frame, u_ball)
    val = _RD.div(mpfr(1), _RU.pow(up, j))
    if imax > 1:
        val = _RD.mul(val, _RD.pow(ctx.abs_lower(u_ball), imax - 1))
    if frame.kind == "one_sided":
        one_minus = ctx.c_sub(ctx.complex(1), u_ball)
        val = _RD.mul(val, _pow_frac_lower(ctx.abs_lower(one_minus), j, frame.m))
    return val


def _de_boundary_point(ctx: BallContext, lam_b, t_ball, r: float):
    """u enclosure of tanh(lam*sinh(t + i r)) for a real t interval."""
    z = ctx.c_from_parts(t_ball, ctx.real(r))
    e = ctx.c_exp(z)
    sh = ctx.c_scale2(ctx.c_sub(e, ctx.c_inv(e)), -1)
    w = ctx.c_mul(ctx.to_complex(lam_b), sh)
    e2 = ctx.c_exp(ctx.c_scale2(w, 1))
    one = ctx.complex(1)
    return ctx.c_div(ctx.c_sub(e2, one), ctx.c_add(e2, one))


def bound_on_boundary(frame: EdgeFrame, region, i_max: int, j: int) -> mpfr:
    """Certified upper bound M2 of the regular integrand part on the
    truncated double-exponential boundary, by branch-and-bound subdivision
    bracketing the sup within a factor 2."""
    kind, ctx, lam_b, r, T = region
    assert kind == "de"
    lam = float(lam_b.mid)

    inf = mpfr("inf")

    # tail disks: boundary points with |t| >= T stay within rho of +-1
    rho = 2.0 / math.expm1(2 * lam * math.sinh(T) * math.cos(r))
    best_lo = mpfr(0)
    work = []
    for pm in (1, -1):
        disk = ctx.complex(pm, 0, rad=rho * (1 + 1e-9))
        v = _free_part_upper(frame, ctx, disk, i_max, j)
        if v is None:
            raise RTooLarge("r too large: branch point near an endpoint disk")
        work.append(((None, None), v))

    def eval_seg(lo_t, hi_t):
        # a wide t interval can defeat the exp enclosure; inf forces a split
        t_ball = ctx.from_endpoints(mpfr(lo_t), mpfr(hi_t))
        try:
            u0 = _de_boundary_point(ctx, lam_b, t_ball, r)
        except ZeroDivisionError:
            return inf
        # the four symmetric images of the upper-right boundary arc
        ims = [u0, ctx.c_conj(u0), ctx.c_neg(u0), ctx.c_neg(ctx.c_conj(u0))]
        vals = [_free_part_upper(frame, ctx, u, i_max, j) for u in ims]
        if any(v is None for v in vals):
            return inf
        return max(vals)

    def sample_lo(t):
        u0 = _de_boundary_point(ctx, lam_b, ctx.real(mpfr(t)), r)
        vals = [
            _free_part_lower(frame, ctx, u, i_max, j)
            for u in (u0, ctx.c_conj(u0), ctx.c_neg(u0), ctx.c_neg(ctx.c_conj(u0)))
        ]
        return max(vals)

    nseg = 16
    for k in range(nseg):
        lo_t, hi_t = k * T / nseg, (k + 1) * T / nseg
        work.append(((lo_t, hi_t), eval_seg(lo_t, hi_t)))
        best_lo = max(best_lo, sample_lo(0.5 * (lo_t + hi_t)))

    for _ in range(600):
        work.sort(key=lambda it: it[1])
        (seg, v) = work[-1]
        if best_lo > 0 and gmpy2.is_finite(v) and v <= _RU.mul(best_lo, 2):
            break
        if seg == (None, None):
            if gmpy2.is_finite(v):
                break  # a tail disk dominates; its bound stands
            raise RTooLarge("r too large: branch point near an endpoint disk")
        lo_t, hi_t = seg
        if hi_t - lo_t < 1e-9:
            if gmpy2.is_finite(v):
                break
            raise RTooLarge("r too large: branch point meets the boundary")
        mid = 0.5 * (lo_t + hi_t)
        work.pop()
        work.append(((lo_t, mid), eval_seg(lo_t, mid)))
        work.append(((mid, hi_t), eval_seg(mid, hi_t)))
        best_lo = max(best_lo, sample_lo(mid))

    out = max(v for _, v in work)
    if not gmpy2.is_finite(out):
        raise RTooLarge("r too large: boundary bound did not converge")
    return out


def _eta_solve(r0: float, A: float) -> float:
    eta = r0 / A
    for _ in range(20):
        eta = r0 / (A - math.log(eta))
    return eta


def de_choose_params(report: BoundReport, alpha_list, d_nats: float, prec) -> DEScheme:
    """Pick (r, h, N) satisfying the certified step and truncation bounds for
    every (j, alpha) pair; one scheme serves the whole edge."""
    frame = report.frame
    lam = report.lam
    m = frame.m
    r0, rks, tks = report.r0, report.rks, report.tks
    if r0 <= 0:
        raise EdgeInvalid("edge invalid: r0 <= 0")
    D = d_nats

    # eta optimization in doubles: effect on the node count only
    K = max(1, sum(1 for rk in rks if rk <= r0 * (1 + 1e-9)))
    prod = 1.0
    for (u_kb, _), rk, tk in zip(frame.factors, rks, tks):
        w = complex(tk, r0)
        if rk <= r0 * (1 + 1e-9):
            # distance to the shrinking boundary ~ |u'(w)| * eta
            du = lam * cmath.cosh(w) / cmath.cosh(lam * cmath.sinh(w)) ** 2
            prod *= abs(du)
        else:
            bnd = cmath.tanh(lam * cmath.sinh(w))
            prod *= abs(bnd - complex(u_kb.mid))
    etas = []
    for j, alpha in alpha_list:
        M0 = prod ** (-float(j) / m) if prod > 0 else 1e300
        try:
            B0 = float(
                b_r_alpha(BallContext(64), lam, r0 * 0.999, alpha)
            )
        except (RTooLarge, ValueError):
            B0 = 1e6
        A = 1 + (m / (j * K)) * (D + math.log(max(2 * B0 * M0, 1e-300)))
        etas.append(_eta_solve(r0, max(A, 2.0)))
    eta = max(etas)
    r = r0 - eta
    if r <= 1e-6:
        raise EdgeInvalid("edge invalid: integration domain too thin")

    bctx = BallContext(min(prec.working_bits, 128))
    lam_b = bctx.real(lam)
    err = _quad_err(prec)

    for _ in range(6):
        try:
            T = _pick_T(frame, lam, r)
            region = ("de", bctx, lam_b, r, T)
            h_min = None
            nh_max = mpfr(0)
            for j, alpha in alpha_list:
                m1 = segment_sup_m1(frame, bctx, j)
                m2 = bound_on_boundary(frame, region, report.imax[j], j)
                bra = b_r_alpha(bctx, lam, r, alpha)
                report.M1[j] = m1
                report.M2[j] = m2
                report.Bralpha[j] = bra
                # h <= 2 pi r / (D + log(2 M2 B + e^-D))
                denom = _RU.add(
                    mpfr(D), _RU.log(_RU.add(_RU.mul(_RU.mul(m2, bra), 2), err))
                )
                num = _RD.mul(_RD.mul(bctx.lower(bctx.pi), 2), mpfr(r))
                h_j = _RD.div(num, denom)
                h_min = h_j if h_min is None else min(h_min, h_j)
                # N h >= asinh((D + log(2^(2a+1) M1 / a)) / (2 a lam))
                p, q = alpha.numerator, alpha.denominator
                pow2 = _pow_frac_upper(mpfr(2), 2 * p + q, q)
                inner = _RU.div(
                    _RU.add(mpfr(D), _RU.log(_RU.div(_RU.mul(pow2, m1), _RD.div(mpfr(p), mpfr(q))))),
                    _RD.mul(_RD.div(mpfr(2 * p), mpfr(q)), _RD.add(mpfr(lam), 0)),
                )
                nh = _RU.log(_RU.add(inner, _RU.sqrt(_RU.add(_RU.mul(inner, inner), 1))))
                nh_max = max(nh_max, nh)
            break
        except RTooLarge:
            r *= 0.98
            if r <= 1e-6:
                raise
    else:
        raise RTooLarge("r too large: boundary bound failed after retries")

    report.r = r
    report.T = T
    h = _dyadic_floor(h_min)
    N = int(math.ceil(float(_RU.div(nh_max, h)))) + 1
    return DEScheme(
        lam=lam,
        r=r,
        h=h,
        Npts=N,
        alphas=list(alpha_list),
        err=err,
        report=report,
        kind=frame.kind,
        m=m,
    )


def _pick_T(frame: EdgeFrame, lam: float, r: float) -> float:
    # truncate the boundary arcs where they enter small disks at +-1
    dmin = 1.0
    for u_k, _ in frame.factors:
        u = complex(u_k.mid)
        dmin = min(dmin, abs(u - 1), abs(u + 1))
    target = max(1e-6, min(0.05, dmin / 4))
    T = math.asinh(math.log(2.0 / target + 1.0) / (2 * lam * math.cos(r)))
    return max(T, 1.0)


def _dyadic_floor(x: mpfr) -> mpfr:
    """Largest 12-bit dyadic <= x, as an exact mpfr."""
    xf = float(x)
    k = 12 - math.frexp(xf)[1]
    cand = math.floor(xf * 2.0**k) / 2.0**k
    while mpfr(cand) > x:
        cand -= 1.0 / 2.0**k
    return mpfr(cand)


def _de_nodes(ctx: BallContext, lam: float, h: mpfr, N: int):
    """Per-node data (u, ch_t, ch_s, E) for k = 0..N; exact h keeps kh exact."""
    lam_b = ctx.real(lam)
    eh = ctx.r_exp(ctx.real(h))
    nodes = []
    ekh = ctx.one_r
    for k in range(N + 1):
        if k > 0:
            ekh = ctx.r_mul(ekh, eh)
        inv = ctx.r_inv(ekh)
        ch_t = ctx.r_scale2(ctx.r_add(ekh, inv), -1)
        sh_t = ctx.r_scale2(ctx.r_sub(ekh, inv), -1)
        s = ctx.r_mul(lam_b, sh_t)
        e = ctx.r_exp(s)
        einv = ctx.r_inv(e)
        ch_s = ctx.r_scale2(ctx.r_add(e, einv), -1)
        sh_s = ctx.r_scale2(ctx.r_sub(e, einv), -1)
        u = ctx.r_div(sh_s, ch_s)
        nodes.append((u, ch_t, ch_s, e))
    return nodes


def _node_weights(ctx: BallContext, scheme: DEScheme, node, js, negative: bool):
    """Weight per j at one node; for one-sided frames the two half-axes
    carry different weights."""
    u, ch_t, ch_s, e = node
    lam_b = ctx.real(scheme.lam)
    ch_s2 = ctx.r_mul(ch_s, ch_s)
    wbase = ctx.r_div(ctx.r_mul(lam_b, ch_t), ch_s2)
    out = {}
    if scheme.kind == "plain":
        for j in js:
            out[j] = wbase
        return out
    if scheme.kind == "edge":
        broot = ctx.r_rootn(ch_s2, scheme.m)
    else:  # one_sided: (e^(-s) ch_s)^(1/m) on k>=0, (e^(s) ch_s)^(1/m) on k<0
        e2 = ctx.r_mul(e, e)
        q = ctx.r_scale2(ctx.r_add(ctx.one_r, e2 if negative else ctx.r_inv(e2)), -1)
        broot = ctx.r_rootn(q, scheme.m)
    acc = ctx.one_r
    last = 0
    for j in sorted(js):
        for _ in range(j - last):
            acc = ctx.r_mul(acc, broot)
        last = j
        out[j] = ctx.r_mul(wbase, acc)
    return out


def de_integrate_edge(frame: EdgeFrame, basis_entries, scheme: DEScheme, ctx: BallContext):
    """Certified values of the elementary integrals, one per (i, j) entry:
    integral over [-1,1] of u^(i-1) * weight_j(u) * ytab(u)^(-j) du."""
    js = sorted({j for _, j in basis_entries})
    imax = {j: max(i for i, jj in basis_entries if jj == j) for j in js}
    sums = {e: ctx.complex(0) for e in basis_entries}
    nodes = _de_nodes(ctx, scheme.lam, scheme.h, scheme.Npts)

    for k, node in enumerate(nodes):
        u, _, _, _ = node
        for sign in (1, -1):
            if k == 0 and sign == -1:
                continue
            un = ctx.r_neg(u) if sign == -1 else u
            uc = ctx.to_complex(un)
            w = _node_weights(ctx, scheme, node, js, negative=(sign == -1))
            ych = ytab_eval(frame, uc)
            yinv = ctx.c_inv(ych)
            ypow = ctx.complex(1)
            last = 0
            for j in js:
                for _ in range(j - last):
                    ypow = ctx.c_mul(ypow, yinv)
                last = j
                base = ctx.c_mul(ctx.to_complex(w[j]), ypow)
                term = base
                for i in range(1, imax[j] + 1):
                    if i > 1:
                        term = ctx.c_mul(term, uc)
                    if (i, j) in sums:
                        sums[(i, j)] = ctx.c_add(sums[(i, j)], term)

    h_b = ctx.real(scheme.h)
    out = []
    for e in basis_entries:
        v = ctx.c_mul(ctx.to_complex(h_b), sums[e])
        out.append(type(v)(v.mid, _RU.add(v.rad, scheme.err)))
    return out


# ------------------------------------------------------------- GC engine


def gc_choose_params(frame: EdgeFrame, i_max: int, d_nats: float, prec) -> GCScheme:
    """Gauss-Chebyshev parameters for hyperelliptic (m=2, j=1) edges."""
    if frame.m != 2:
        raise InvalidInput("Gauss-Chebyshev quadrature needs m = 2")
    D = d_nats
    bctx = BallContext(min(prec.working_bits, 128))

    us = [complex(u_k.mid) for u_k, _ in frame.factors]
    if us:
        cks = [(abs(u - 1) + abs(u + 1)) / 2 for u in us]
        c0 = min(cks)
        if c0 <= 1 + 1e-12:
            raise EdgeInvalid("edge invalid: branch point on the segment")
        r0 = math.acosh(c0)
        K = sum(1 for c in cks if c <= c0 * (1 + 1e-9))
        prod = 1.0
        for u, c in zip(us, cks):
            if c <= c0 * (1 + 1e-9):
                prod *= abs(cmath.sin(cmath.acos(u)))
            else:
                prod *= c - c0
        M0 = prod ** -0.5 if prod > 0 else 1e300
        A = max(2.0, 1 + 2 * (D + math.log(2 * math.pi * M0)) / K)
        r = r0 * (1 - 1 / (A + math.log(A / r0)))
    else:
        # entire integrand: no finite r0, minimize the node count directly
        r, best = 1.0, None
        for k in range(2, 101):
            rr = 0.05 * k
            n_est = (D + math.log(2 * math.pi) + (i_max - 1) * rr + 1) / (2 * rr)
            if best is None or n_est < best:
                best, r = n_est, rr

    err = _quad_err(prec)
    for _ in range(6):
        ch_r = bctx.r_scale2(
            bctx.r_add(bctx.r_exp(bctx.real(r)), bctx.r_exp(bctx.real(-r))), -1
        )
        ch_r_up = bctx.upper(ch_r)
        prod_lo = mpfr(1)
        ok = True
        for u_k, _ in frame.factors:
            ck = bctx.r_scale2(
                bctx.r_add(
                    bctx.c_abs(bctx.c_sub(u_k, bctx.complex(1))),
                    bctx.c_abs(bctx.c_add(u_k, bctx.complex(1))),
                ),
                -1,
            )
            d_lo = _RD.sub(bctx.lower(ck), ch_r_up)
            if not d_lo > 0:
                ok = False
                break
            prod_lo = _RD.mul(prod_lo, d_lo)
        if ok:
            break
        r *= 0.98
    else:
        raise RTooLarge("r too large: ellipse meets a branch point")

    mr = _RU.div(mpfr(1), _RD.sqrt(prod_lo))
    if i_max > 1:
        mr = _RU.mul(mr, _RU.pow(ch_r_up, i_max - 1))
    return GCScheme(Npts=gc_node_count(D, mr, r), r=r, Mr=mr, err=err, imax=i_max)


def gc_node_count(d_nats: float, mr_up: mpfr, r: float) -> int:
    """Smallest N with N >= (D + log(2 pi M(r)) + 1) / (2 r), rounded up."""
    num = _RU.add(
        _RU.add(mpfr(d_nats), _RU.log(_RU.mul(_RU.mul(mr_up, 2), _RU.const_pi()))), 1
    )
    return max(1, int(math.ceil(float(_RU.div(num, _RD.mul(mpfr(r), 2))))))


def scheme_for_frame(frame: EdgeFrame, basis_entries, lam: float, prec, force=None):
    """Build the quadrature scheme for one frame.

    force: None/"auto" picks Gauss-Chebyshev for hyperelliptic edge frames
    and double-exponential otherwise; "de"/"gc" override.
    """
    js = sorted({j for _, j in basis_entries})
    imax = {j: max(i for i, jj in basis_entries if jj == j) for j in js}
    d = _d_nats_up(prec)
    want_gc = force == "gc" or (
        force in (None, "auto") and frame.m == 2 and frame.kind == "edge"
    )
    if want_gc:
        if force == "gc" and (frame.m != 2 or frame.kind != "edge"):
            raise InvalidInput("Gauss-Chebyshev quadrature needs m = 2 edges")
        try:
            return gc_choose_params(frame, max(imax.values()), d, prec)
        except RTooLarge:
            if force == "gc":
                raise
    if frame.kind == "plain":
        alpha_list = [(j, Fraction(1)) for j in js]
    else:
        alpha_list = [(j, Fraction(frame.m - j, frame.m)) for j in js]
    r0, rks, tks = de_r0(frame, lam)
    report = BoundReport(frame=frame, lam=lam, r0=r0, rks=rks, tks=tks, imax=imax)
    return de_choose_params(report, alpha_list, d, prec)


def integrate_frame(frame: EdgeFrame, basis_entries, scheme, ctx: BallContext):
    if isinstance(scheme, GCScheme):
        return gc_integrate_edge(frame, basis_entries, scheme, ctx)
    return de_integrate_edge(frame, basis_entries, scheme, ctx)


def scheme_summary(scheme) -> dict:
    """Plain-number digest of one scheme for the integration report."""
    if isinstance(scheme, GCScheme):
        return {
            "scheme": "gc",
            "N": scheme.Npts,
            "r": scheme.r,
            "M_r": float(scheme.Mr),
        }
    rep = scheme.report
    out = {
        "scheme": "de",
        "N": scheme.Npts,
        "nodes": 2 * scheme.Npts + 1,
        "r0": rep.r0,
        "r": rep.r,
        "h": float(scheme.h),
        "M1": {str(j): float(v) for j, v in rep.M1.items()},
        "M2": {str(j): float(v) for j, v in rep.M2.items()},
        "B_r_alpha": {str(j): float(v) for j, v in rep.Bralpha.items()},
    }
    return out


def gc_integrate_edge(frame: EdgeFrame, basis_entries, scheme: GCScheme, ctx: BallContext):
    """Certified Gauss-Chebyshev values for the (i, 1) entries."""
    assert all(j == 1 for _, j in basis_entries)
    imax = max(i for i, _ in basis_entries)
    N = scheme.Npts
    w = ctx.r_div_int(ctx.pi, N)
    sums = {e: ctx.complex(0) for e in basis_entries}
    for k in range(1, N + 1):
        theta = ctx.r_div_int(ctx.r_mul_int(ctx.pi, 2 * k - 1), 2 * N)
        u = ctx.r_cos(theta)
        uc = ctx.to_complex(u)
        yinv = ctx.c_inv(ytab_eval(frame, uc))
        term = yinv
        for i in range(1, imax + 1):
            if i > 1:
                term = ctx.c_mul(term, uc)
            if (i, 1) in sums:
                sums[(i, 1)] = ctx.c_add(sums[(i, 1)], term)
    out = []
    for e in basis_entries:
        v = ctx.c_mul(ctx.to_complex(w), sums[e])
        out.append(type(v)(v.mid, _RU.add(v.rad, scheme.err)))
    return out
