"""Big and small period matrices from certified edge integrals.

Row order of every matrix here follows the differential basis, sorted by
(j, i).  The cycle basis is edge-major: cycle (e, l) sits at row e*(m-1)+l
of the intersection matrix, matching homology_data.  The full period matrix
over that basis is never materialized; the symplectic columns are assembled
directly as integer combinations of per-edge values, and the delta-1
homologically trivial columns are only checked against zero and dropped.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .curve import Curve, differential_basis
from .errors import PipelineInconsistency, PrecisionLoss
from .homology import HomologyData
from .numerics.ball import BallContext, fractional_parts
from .numerics.linalg import cholesky_pd, inverse_ball, mat_vec_ball, solve_ball
from .quadrature import integrate_frame, scheme_for_frame


@dataclass
class ElementaryIntegrals:
    """Raw edge moments plus the per-edge constants that turn them into
    periods.

    moments[e][(l, j)] encloses the integral over [-1, 1] of
    u^l (1-u^2)^(-j/m) ytab(u)^(-j) du on edge e.  cab_negj[e][j] is
    (cf_root * Cab)^(-j), so reconstructed values refer to the curve as
    given, not its monic model.  half_pow[e][i] is ((b-a)/2)^i and ratio[e]
    is (b+a)/(b-a).
    """

    basis: list  # (i, j) rows, sorted by (j, i)
    moments: list
    cab_negj: list
    half_pow: list
    ratio: list
    ctx: BallContext
    halfpow: list  # e^(i pi t / m) table shared with the curve
    m: int


def quadrature_entries(basis):
    """Expand a differential basis to the (i, j) set the moments need:
    for each j every i from 1 to the largest one that occurs."""
    js = sorted({j for _, j in basis})
    imax = {j: max(i for i, jj in basis if jj == j) for j in js}
    return [(i, j) for j in js for i in range(1, imax[j] + 1)]


def tree_schemes(curve: Curve, hom: HomologyData, lam: float, prec, force=None):
    """One quadrature scheme per tree edge frame."""
    entries = quadrature_entries(differential_basis(curve).entries)
    return [scheme_for_frame(fr, entries, lam, prec, force=force) for fr in hom.frames]


def _edge_constants(curve: Curve, frame, js, imax_all):
    ctx = curve.ctx
    cab = frame.Cab
    if not curve.lc_is_one:
        cab = ctx.c_mul(curve.cf_root, cab)
    inv = ctx.c_inv(cab)
    negj = {}
    acc = None
    for k in range(1, max(js) + 1):
        acc = inv if acc is None else ctx.c_mul(acc, inv)
        if k in js:
            negj[k] = acc
    half_pow = {}
    hp = None
    for i in range(1, imax_all + 1):
        hp = frame.t if hp is None else ctx.c_mul(hp, frame.t)
        half_pow[i] = hp
    ratio = ctx.c_div(frame.center, frame.t)
    return negj, half_pow, ratio


def elementary_integrals(curve: Curve, hom: HomologyData, schemes, threads: int = 1) -> ElementaryIntegrals:
    """Integrate every tree edge against the expanded basis."""
    ctx = curve.ctx
    basis = differential_basis(curve).entries
    entries = quadrature_entries(basis)
    js = sorted({j for _, j in entries})
    imax_all = max(i for i, _ in entries)

    def run(e):
        return integrate_frame(hom.frames[e], entries, schemes[e], ctx)

    ne = len(hom.frames)
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, range(ne)))
    else:
        results = [run(e) for e in range(ne)]

    moments, cab_negj, half_pow, ratio = [], [], [], []
    for e in range(ne):
        moments.append({(i - 1, j): v for (i, j), v in zip(entries, results[e])})
        negj, hp, rat = _edge_constants(curve, hom.frames[e], js, imax_all)
        cab_negj.append(negj)
        half_pow.append(hp)
        ratio.append(rat)
    return ElementaryIntegrals(
        basis=basis,
        moments=moments,
        cab_negj=cab_negj,
        half_pow=half_pow,
        ratio=ratio,
        ctx=ctx,
        halfpow=curve.halfpow,
        m=curve.m,
    )


def frame_integrals(curve: Curve, frame, scheme) -> ElementaryIntegrals:
    """Single-frame table for path integrals outside the tree (one-sided and
    waypoint legs); the frame sits at edge index 0."""
    ctx = curve.ctx
    basis = differential_basis(curve).entries
    entries = quadrature_entries(basis)
    js = sorted({j for _, j in entries})
    imax_all = max(i for i, _ in entries)
    vals = integrate_frame(frame, entries, scheme, ctx)
    moments = {(i - 1, j): v for (i, j), v in zip(entries, vals)}
    negj, hp, rat = _edge_constants(curve, frame, js, imax_all)
    return ElementaryIntegrals(
        basis=basis,
        moments=[moments],
        cab_negj=[negj],
        half_pow=[hp],
        ratio=[rat],
        ctx=ctx,
        halfpow=curve.halfpow,
        m=curve.m,
    )


def zeta_power(elem: ElementaryIntegrals, k: int):
    """zeta^k as a ball, any integer k."""
    return elem.halfpow[(2 * k) % (2 * elem.m)]


def shifted_moment(elem: ElementaryIntegrals, e: int, i: int, j: int):
    """Enclosure of the integral of (u + ratio)^(i-1) (1-u^2)^(-j/m)
    ytab^(-j) du on edge e, by binomial expansion in the raw moments."""
    ctx = elem.ctx
    mom = elem.moments[e]
    acc = mom[(i - 1, j)]
    if i == 1:
        return acc
    rp = None
    for l in range(i - 2, -1, -1):
        rp = elem.ratio[e] if rp is None else ctx.c_mul(rp, elem.ratio[e])
        term = ctx.c_mul_int(ctx.c_mul(mom[(l, j)], rp), math.comb(i - 1, l))
        acc = ctx.c_add(acc, term)
    return acc


def path_integral(elem: ElementaryIntegrals, e: int, i: int, j: int):
    """Integral of x^(i-1) dx / y^j along the shift-0 lift of edge e:
    Cab^-j ((b-a)/2)^i times the shifted moment."""
    ctx = elem.ctx
    pref = ctx.c_mul(elem.cab_negj[e][j], elem.half_pow[e][i])
    return ctx.c_mul(pref, shifted_moment(elem, e, i, j))


def edge_period(elem: ElementaryIntegrals, e: int, i: int, j: int):
    """Shift-independent part of the period of cycle (e, l):
    (1 - zeta^-j) times the shift-0 path integral."""
    ctx = elem.ctx
    pref = ctx.c_sub(ctx.complex(1), zeta_power(elem, -j))
    return ctx.c_mul(pref, path_integral(elem, e, i, j))


def period_of_cycle(elem: ElementaryIntegrals, e: int, l: int, entry):
    """Period of the cycle supported on edge e with shift l against
    differential (i, j)."""
    i, j = entry
    return elem.ctx.c_mul(zeta_power(elem, -l * j), edge_period(elem, e, i, j))


def big_period_matrix(curve: Curve, hom: HomologyData, elem: ElementaryIntegrals):
    """(OA, OB, dropped): g x g period matrices over the symplectic basis,
    plus the delta-1 dropped columns (verified to enclose zero)."""
    ctx = curve.ctx
    g = hom.g
    m = curve.m
    ncols = len(hom.cycles)
    zero = ctx.complex(0)

    OA = [[None] * g for _ in range(g)]
    OB = [[None] * g for _ in range(g)]
    dropped = [[None] * g for _ in range(ncols - 2 * g)]

    for r, (i, j) in enumerate(elem.basis):
        ev = [edge_period(elem, e, i, j) for e in range(len(hom.frames))]
        zl = [zeta_power(elem, -l * j) for l in range(m - 1)]
        for c in range(ncols):
            acc = zero
            for idx, (e, l) in enumerate(hom.cycles):
                s = hom.S[idx][c]
                if s == 0:
                    continue
                acc = ctx.c_add(acc, ctx.c_mul_int(ctx.c_mul(zl[l], ev[e]), s))
            if c < g:
                OA[r][c] = acc
            elif c < 2 * g:
                OB[r][c - g] = acc
            else:
                if ctx.abs_lower(acc) > 0:
                    raise PipelineInconsistency(
                        "pipeline inconsistency: homologically trivial column "
                        "has a period bounded away from zero"
                    )
                dropped[c - 2 * g][r] = acc
    return OA, OB, dropped


def small_period_matrix(curve: Curve, OA, OB):
    """tau = OA^-1 OB with certified symmetry and Im tau > 0 checks."""
    ctx = curve.ctx
    g = len(OA)
    tau = solve_ball(ctx, OA, OB)  # PrecisionLoss on an uncertified pivot
    for r in range(g):
        for c in range(r + 1, g):
            d = ctx.c_sub(tau[r][c], tau[c][r])
            if ctx.abs_lower(d) > 0:
                raise PipelineInconsistency(
                    "pipeline inconsistency: small period matrix not "
                    "symmetric within radii"
                )
    imt = [[ctx.c_im(tau[r][c]) for c in range(g)] for r in range(g)]
    if not cholesky_pd(ctx, imt):
        # a fat-radius Cholesky pivot is indistinguishable from a sign error,
        # so treat it as retryable and let the precision driver decide
        raise PrecisionLoss("Im tau positive definiteness not certified")
    return tau


@dataclass
class PeriodData:
    genus: int
    basis: list  # (i, j) row labels
    OA: list
    OB: list
    tau: list
    OmegaRinv: list  # real 2g x 2g, inverse of the column-stacked lattice
    ctx: BallContext
    target_bits: int
    dropped: list = field(default_factory=list)


def period_data(curve: Curve, hom: HomologyData, elem: ElementaryIntegrals, target_bits: int) -> PeriodData:
    ctx = curve.ctx
    g = hom.g
    OA, OB, dropped = big_period_matrix(curve, hom, elem)
    tau = small_period_matrix(curve, OA, OB)
    R = [[None] * (2 * g) for _ in range(2 * g)]
    for r in range(g):
        for c in range(g):
            R[r][c] = ctx.c_re(OA[r][c])
            R[r][g + c] = ctx.c_re(OB[r][c])
            R[g + r][c] = ctx.c_im(OA[r][c])
            R[g + r][g + c] = ctx.c_im(OB[r][c])
    OmegaRinv = inverse_ball(ctx, R, real=True)
    return PeriodData(
        genus=g,
        basis=list(elem.basis),
        OA=OA,
        OB=OB,
        tau=tau,
        OmegaRinv=OmegaRinv,
        ctx=ctx,
        target_bits=target_bits,
        dropped=dropped,
    )


def lattice_reduce(pd: PeriodData, v):
    """Reduce a complex g-vector modulo the period lattice.

    Returns (coords, flags): 2g fractional coordinates in [0, 1) and a flag
    per coordinate marking values too close to an integer to resolve at the
    target accuracy (those come back as the full-circle ball)."""
    ctx = pd.ctx
    iv = [ctx.c_re(z) for z in v] + [ctx.c_im(z) for z in v]
    w = mat_vec_ball(ctx, pd.OmegaRinv, iv, real=True)
    return fractional_parts(ctx, w, pd.target_bits)
