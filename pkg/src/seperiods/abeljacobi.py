"""Abel-Jacobi map on degree-zero divisors.

Base point is the ramification point over the spanning-tree root, which never
appears explicitly since degree-zero sums are base-point independent.  Every
value is a vector over the differential basis (sorted by (j, i)); public
entry points reduce modulo the period lattice into [0, 1)^{2g}.

Sheet bookkeeping: a path to a target (x, y) is the shift-l lift of a frame
segment; l is snapped from m/(2 pi) times the argument of y over the frame's
own branch at the endpoint.  Points at infinity are moved to finite points
via the puncture substitution x = 1/(r^nu t^Mq), y = r^mu/t^Nq, with the line
through the puncture chosen by whether m = delta (simple vertical
intersection) or not (diagonal line).
"""

import math
from dataclasses import dataclass, field

from .curve import (
    Curve,
    CurvePoint,
    differential_basis,
    edge_frame,
    f_eval,
    plain_frame,
    ytab_eval,
)
from .errors import (
    BlockedSightLine,
    EdgeInvalid,
    IntersectionInconsistency,
    InvalidInput,
    PrecisionLoss,
    RTooLarge,
)
from .homology import HomologyData, _arg_loose
from .numerics.ball import fractional_parts
from .numerics.linalg import mat_vec_ball
from .numerics.roots import poly_roots
from .periods import (
    ElementaryIntegrals,
    PeriodData,
    frame_integrals,
    lattice_reduce,
    path_integral,
    quadrature_entries,
    zeta_power,
)
from .quadrature import LAMBDA_DEFAULT, _dist_to_segment_lower, scheme_for_frame

# perpendicular waypoint probes, in units of the blocked segment (see notes)
_WAYPOINT_PROBES = (0.5, -0.5, 1.0, -1.0, 1.5, -1.5, 2.0, -2.0)
_CLEARANCE_U = 0.1  # 0.05 of the leg length, u-plane units


@dataclass
class Divisor:
    terms: list  # (CurvePoint, integer coefficient)

    def degree(self) -> int:
        return sum(c for _, c in self.terms)


@dataclass
class AJResult:
    vector: list  # 2g CertifiedReal coordinates in [0, 1)
    flags: list  # True where the coordinate is ambiguous at target accuracy


@dataclass
class InfinityData:
    mu: int
    nu: int
    Mq: int
    Nq: int
    delta: int


@dataclass
class AJData:
    """Read-only bundle shared by all AJ evaluations of one curve."""

    hom: HomologyData
    elem: ElementaryIntegrals
    pd: PeriodData
    prec: object
    lam: float = LAMBDA_DEFAULT
    ram_cache: dict = field(default_factory=dict)
    finite_cache: dict = field(default_factory=dict)
    misc_cache: dict = field(default_factory=dict)


def _xgcd(a: int, b: int):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def infinity_data(curve: Curve) -> InfinityData:
    m, n, delta = curve.m, curve.n, curve.delta
    Mq, Nq = m // delta, n // delta
    _, _, v = _xgcd(m, n)
    nu = v % Mq
    if nu <= 0:
        nu += Mq
    while nu * n <= delta:
        nu += Mq
    mu = (delta - nu * n) // m
    assert mu * m + nu * n == delta and mu < 0 and nu > 0
    return InfinityData(mu=mu, nu=nu, Mq=Mq, Nq=Nq, delta=delta)


def zeta_delta_power(curve: Curve, k: int):
    """(e^(2 pi i / delta))^k from the shared root-of-unity table."""
    Mq = curve.m // curve.delta
    return curve.halfpow[(2 * Mq * k) % (2 * curve.m)]


# ------------------------------------------------------ tree-path integrals


def _tree_path(hom: HomologyData, k: int):
    """Edge indices from the tree root down to vertex k (all traversed
    parent-to-child, so every sign is +1)."""
    up = {child: (idx, parent) for idx, (parent, child) in enumerate(hom.tree.edges)}
    path = []
    v = k
    while v != hom.tree.root:
        if v not in up:
            raise InvalidInput("vertex %d not in the spanning tree" % v)
        idx, v = up[v]
        path.append(idx)
    path.reverse()
    return path


def aj_ramification(curve: Curve, data: AJData, k: int):
    """Vector integral from the base point to the ramification point over
    branch point k, along the spanning tree."""
    if k in data.ram_cache:
        return data.ram_cache[k]
    ctx = curve.ctx
    basis = data.elem.basis
    out = [ctx.complex(0) for _ in basis]
    for e in _tree_path(data.hom, k):
        for t, (i, j) in enumerate(basis):
            out[t] = ctx.c_add(out[t], path_integral(data.elem, e, i, j))
    data.ram_cache[k] = out
    return out


# ------------------------------------------------------ finite points


def _c_eff(curve: Curve, frame):
    """Branch constant of the curve as given (monic constant times the m-th
    root of the leading coefficient)."""
    if curve.lc_is_one:
        return frame.Cab
    return curve.ctx.c_mul(curve.cf_root, frame.Cab)


def _snap_shift(ctx, m: int, num, den) -> int:
    """Integer s mod m with zeta^s = num/den, certified by the argument
    enclosure."""
    ratio = ctx.c_div(num, den)
    arg, hw = _arg_loose(ctx, ratio)
    val = m * arg / (2 * math.pi)
    width = m * hw / (2 * math.pi) + 1e-9
    s = round(val)
    if abs(val - s) > max(width, 1e-6):
        raise IntersectionInconsistency(
            "shifting number %.3e not near an integer" % val
        )
    return s % m


def _branch_value(curve: Curve, frame, u: int):
    """y of the frame's own branch at u = +1 or -1 (frame kinds one_sided
    and plain only; the one-sided endpoint weight (1+u)^(1/m) is 2^(1/m))."""
    ctx = curve.ctx
    y = ctx.c_mul(_c_eff(curve, frame), ytab_eval(frame, ctx.complex(u)))
    if frame.kind == "one_sided":
        if u != 1:
            raise InvalidInput("one-sided branch evaluated at the singular end")
        y = ctx.c_mul(y, ctx.to_complex(ctx.r_rootn(ctx.real(2), frame.m)))
    return y


def _leg_vector(elemf: ElementaryIntegrals, s: int):
    """Per-basis-entry values zeta^(-s j) * (shift-0 path integral) of one
    frame leg."""
    ctx = elemf.ctx
    out = []
    for (i, j) in elemf.basis:
        out.append(ctx.c_mul(zeta_power(elemf, -s * j), path_integral(elemf, 0, i, j)))
    return out


def _check_on_curve(curve: Curve, x, y):
    ctx = curve.ctx
    ym = ctx.c_pow_int(y, curve.m)
    fx = f_eval(curve, x)
    if not curve.lc_is_one:
        fx = ctx.c_mul(curve.lc, fx)
    if ctx.abs_lower(ctx.c_sub(ym, fx)) > 0:
        raise InvalidInput("point does not satisfy the curve equation within radii")


def _anchor_order(curve: Curve, x):
    xm = complex(x.mid)
    order = sorted(
        range(curve.n),
        key=lambda k: (abs(complex(curve.X.roots[k].mid) - xm), k),
    )
    return order


def _clearance_ok(ctx, frame) -> bool:
    for u_k, _ in frame.factors:
        if not _dist_to_segment_lower(ctx, u_k) >= _CLEARANCE_U:
            return False
    return True


def _finite_parts(curve: Curve, data: AJData, x, y):
    """(anchor index, tail vector): the AJ vector of (x, y) is
    aj_ramification(anchor) + tail.  Tries direct one-sided segments from the
    nearest tree vertices first, then two-leg waypoint paths."""
    ctx = curve.ctx
    m = curve.m
    entries = quadrature_entries(data.elem.basis)
    order = _anchor_order(curve, x)

    for k in order:
        try:
            frame = edge_frame(curve, k, x, one_sided=True)
            scheme = scheme_for_frame(frame, entries, data.lam, data.prec)
        except (EdgeInvalid, RTooLarge):
            continue
        elemf = frame_integrals(curve, frame, scheme)
        s = _snap_shift(ctx, m, y, _branch_value(curve, frame, 1))
        return k, _leg_vector(elemf, s)

    # every sight line is blocked; try a perpendicular waypoint
    for k in order:
        a = curve.X.roots[k]
        d = ctx.c_sub(x, a)
        mid = ctx.c_scale2(ctx.c_add(a, x), -1)
        for t in _WAYPOINT_PROBES:
            w = ctx.c_add(mid, ctx.c_mul(d, ctx.complex(0, t)))
            try:
                leg1 = edge_frame(curve, k, w, one_sided=True)
                leg2 = plain_frame(curve, w, x)
                if not (_clearance_ok(ctx, leg1) and _clearance_ok(ctx, leg2)):
                    continue
                sch1 = scheme_for_frame(leg1, entries, data.lam, data.prec)
                sch2 = scheme_for_frame(leg2, entries, data.lam, data.prec)
            except (EdgeInvalid, RTooLarge):
                continue
            elem1 = frame_integrals(curve, leg1, sch1)
            elem2 = frame_integrals(curve, leg2, sch2)
            s2 = _snap_shift(ctx, m, y, _branch_value(curve, leg2, 1))
            joint = ctx.c_mul(zeta_power(data.elem, s2), _branch_value(curve, leg2, -1))
            s1 = _snap_shift(ctx, m, joint, _branch_value(curve, leg1, 1))
            v1 = _leg_vector(elem1, s1)
            v2 = _leg_vector(elem2, s2)
            return k, [ctx.c_add(p, q) for p, q in zip(v1, v2)]

    raise BlockedSightLine(
        "blocked sight line: no tree vertex or waypoint reaches the point"
    )


def aj_finite(curve: Curve, data: AJData, P):
    """Vector integral from the base point to the finite point P = (x, y)."""
    ctx = curve.ctx
    if isinstance(P, CurvePoint):
        if P.tag != "finite":
            raise InvalidInput("aj_finite needs a finite point")
        x, y = P.x, P.y
    else:
        x, y = P
    x = ctx.to_complex(x)
    y = ctx.to_complex(y)
    key = (x.mid, y.mid)
    if key in data.finite_cache:
        return data.finite_cache[key]
    _check_on_curve(curve, x, y)
    k, tail = _finite_parts(curve, data, x, y)
    base = aj_ramification(curve, data, k)
    out = [ctx.c_add(b, t) for b, t in zip(base, tail)]
    data.finite_cache[key] = out
    return out


# ------------------------------------------------------ points at infinity


def _zero_branch_index(curve: Curve):
    """Index of the branch point at x = 0, or None; decided from the exact
    constant coefficient of the monic model."""
    ctx = curve.ctx
    c0 = curve.coeffs[-1]
    if c0.rad == 0 and c0.mid == 0:
        hits = [k for k, r in enumerate(curve.X.roots) if ctx.abs_lower(r) == 0]
        if len(hits) != 1:
            raise PrecisionLoss("zero branch point not isolated at this precision")
        return hits[0]
    if ctx.abs_lower(c0) > 0:
        return None
    raise PrecisionLoss("constant coefficient not resolved against zero")


def _poly_mul_ball(ctx, A, B):
    out = [ctx.complex(0)] * (len(A) + len(B) - 1)
    for ia, ca in enumerate(A):
        for ib, cb in enumerate(B):
            out[ia + ib] = ctx.c_add(out[ia + ib], ctx.c_mul(ca, cb))
    return out


def _puncture_roots(curve: Curve, data: AJData, factors, sub):
    """Nonzero roots of h = (product of the factor polynomials) - sub.

    The roots locate the finite intersections of the chosen line with the
    second affine patch: the product side collects the defining equation's
    right hand side along the line, sub (ascending coefficients) is the left
    hand side. t = 0 is always a simple root (the puncture itself) and is
    excluded as the unique root disk containing zero."""
    ctx = curve.ctx
    h = [ctx.complex(1)]
    for fac in factors:
        h = _poly_mul_ball(ctx, h, fac)
    for l, c in enumerate(sub):
        h[l] = ctx.c_sub(h[l], c)
    lead = h[-1]
    if not ctx.abs_lower(lead) > 0:
        raise PrecisionLoss("puncture polynomial leading coefficient not resolved")
    desc = [ctx.complex(1)] + [ctx.c_div(c, lead) for c in reversed(h[:-1])]
    roots = poly_roots(desc, data.prec.working_bits).roots
    at_zero = [i for i, r in enumerate(roots) if ctx.abs_lower(r) == 0]
    if len(at_zero) != 1:
        raise PrecisionLoss("puncture root at t = 0 not simple at this precision")
    return [r for i, r in enumerate(roots) if i != at_zero[0]]


def _vec_zero(ctx, g):
    return [ctx.complex(0) for _ in range(g)]


def _vec_axpy(ctx, acc, v, c: int):
    return [ctx.c_add(a, ctx.c_mul_int(b, c)) for a, b in zip(acc, v)]


def _all_ram_sum(curve: Curve, data: AJData):
    ctx = curve.ctx
    acc = _vec_zero(ctx, len(data.elem.basis))
    for k in range(curve.n):
        acc = _vec_axpy(ctx, acc, aj_ramification(curve, data, k), 1)
    return acc


def _case_b_parts(curve: Curve, data: AJData, idata: InfinityData):
    """Anchor/tail decompositions of the puncture points on sheet delta;
    other sheets reuse them with a y-rotation (their x-coordinates agree)."""
    if "case_b" in data.misc_cache:
        return data.misc_cache["case_b"]
    ctx = curve.ctx
    k0 = _zero_branch_index(curve)
    factors = []
    for k, x_k in enumerate(curve.X.roots):
        if k == k0:
            continue  # the factor 1 - 0*t is exactly 1
        factors.append([ctx.complex(1), ctx.c_neg(x_k)])
    parts = []
    for t_i in _puncture_roots(curve, data, factors, [ctx.complex(1)]):
        x = ctx.c_inv(t_i)
        y = ctx.c_pow_int(ctx.c_inv(t_i), idata.Nq)
        if not curve.lc_is_one:
            y = ctx.c_mul(curve.cf_root, y)
        anchor, tail = _finite_parts(curve, data, x, y)
        parts.append((anchor, tail))
    data.misc_cache["case_b"] = parts
    return parts


def _case_c_points(curve: Curve, data: AJData, idata: InfinityData, s: int):
    ctx = curve.ctx
    k0 = _zero_branch_index(curve)
    zd = [zeta_delta_power(curve, s * t) for t in range(idata.nu + 1)]
    factors = []
    for k, x_k in enumerate(curve.X.roots):
        if k == k0:
            continue
        fac = [ctx.complex(0)] * (idata.Mq + idata.nu + 1)
        fac[0] = ctx.complex(1)
        for l in range(idata.nu + 1):
            c = ctx.c_mul_int(ctx.c_mul(x_k, zd[idata.nu - l]), -math.comb(idata.nu, l))
            fac[idata.Mq + l] = c
        factors.append(fac)
    # the line r = t + zeta_delta^s meets the patch where
    # prod_k (1 - x_k r^nu t^Mq) = r^delta, so subtract (t + zeta_delta^s)^delta
    sub = []
    for l in range(curve.delta + 1):
        c = ctx.c_mul_int(zeta_delta_power(curve, s * (curve.delta - l)),
                          math.comb(curve.delta, l))
        sub.append(c)
    pts = []
    zs = zeta_delta_power(curve, s)
    for t_i in _puncture_roots(curve, data, factors, sub):
        r_i = ctx.c_add(t_i, zs)
        x = ctx.c_inv(ctx.c_mul(ctx.c_pow_int(r_i, idata.nu), ctx.c_pow_int(t_i, idata.Mq)))
        y = ctx.c_div(ctx.c_pow_int(r_i, idata.mu), ctx.c_pow_int(t_i, idata.Nq))
        if not curve.lc_is_one:
            y = ctx.c_mul(curve.cf_root, y)
        pts.append((x, y))
    return pts


def aj_infinite(curve: Curve, data: AJData, s: int) -> AJResult:
    """Abel-Jacobi image of [P_inf^(s) - P_0], reduced to [0,1)^{2g}."""
    ctx = curve.ctx
    idata = infinity_data(curve)
    if not 1 <= s <= idata.delta:
        raise InvalidInput("infinite sheet index out of range")
    g = len(data.elem.basis)

    if idata.delta == 1:
        v = _vec_zero(ctx, g)
        v = _vec_axpy(ctx, v, _all_ram_sum(curve, data), idata.nu)
        out, flags = lattice_reduce(data.pd, v)
        return AJResult(vector=out, flags=flags)

    k0 = _zero_branch_index(curve)
    v = _vec_zero(ctx, g)

    if idata.Mq == 1:
        # vertical line through the puncture; sheets share x-coordinates
        rot = (idata.Mq * (idata.mu + idata.nu * idata.Nq) * s) % curve.m
        for anchor, tail in _case_b_parts(curve, data, idata):
            base = aj_ramification(curve, data, anchor)
            for t, (i, j) in enumerate(data.elem.basis):
                q = ctx.c_mul(zeta_power(data.elem, -rot * j), tail[t])
                v[t] = ctx.c_sub(v[t], ctx.c_add(base[t], q))
        if k0 is not None:
            corr = idata.Nq * (curve.m - idata.Mq)
            v = _vec_axpy(ctx, v, aj_ramification(curve, data, k0), corr)
    else:
        for x, y in _case_c_points(curve, data, idata, s):
            v = _vec_axpy(ctx, v, aj_finite(curve, data, (x, y)), -1)
        v = _vec_axpy(ctx, v, _all_ram_sum(curve, data), idata.nu)
        if k0 is not None:
            corr = idata.Nq * curve.m - idata.Mq - idata.nu
            v = _vec_axpy(ctx, v, aj_ramification(curve, data, k0), corr)

    out, flags = lattice_reduce(data.pd, v)
    return AJResult(vector=out, flags=flags)


# ------------------------------------------------------ divisors


def abel_jacobi(curve: Curve, data: AJData, divisor, basepoint=None) -> AJResult:
    """Abel-Jacobi image of a degree-zero divisor in [0,1)^{2g}.

    The basepoint argument is accepted for interface symmetry; degree-zero
    divisors are base-point independent, so it never enters the value."""
    terms = divisor.terms if isinstance(divisor, Divisor) else list(divisor)
    if sum(c for _, c in terms) != 0:
        raise InvalidInput("divisor degree must be zero")
    ctx = curve.ctx
    pd = data.pd
    g = pd.genus

    acc = _vec_zero(ctx, g)  # raw C^g contribution from finite points
    red = [ctx.zero_r for _ in range(2 * g)]  # reduced R^{2g} from infinity
    flags_in = [False] * (2 * g)

    for pt, c in terms:
        if not isinstance(pt, CurvePoint):
            raise InvalidInput("divisor terms must be curve points")
        if c == 0:
            continue
        if pt.tag == "ramification":
            acc = _vec_axpy(ctx, acc, aj_ramification(curve, data, pt.index), c)
        elif pt.tag == "finite":
            acc = _vec_axpy(ctx, acc, aj_finite(curve, data, pt), c)
        elif pt.tag == "infinite":
            res = aj_infinite(curve, data, pt.sheet)
            for t in range(2 * g):
                red[t] = ctx.r_add(red[t], ctx.r_mul_int(res.vector[t], c))
                flags_in[t] = flags_in[t] or res.flags[t]
        else:
            raise InvalidInput("unknown curve point tag %r" % pt.tag)

    iota = [ctx.c_re(z) for z in acc] + [ctx.c_im(z) for z in acc]
    w = mat_vec_ball(ctx, pd.OmegaRinv, iota, real=True)
    w = [ctx.r_add(a, b) for a, b in zip(w, red)]
    out, flags = fractional_parts(ctx, w, pd.target_bits)
    return AJResult(vector=out, flags=[a or b for a, b in zip(flags, flags_in)])
