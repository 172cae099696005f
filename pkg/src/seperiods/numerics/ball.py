"""Midpoint-radius ("ball") arithmetic on top of gmpy2's MPFR/MPC types.

A CertifiedReal is an interval [mid - rad, mid + rad]; a CertifiedComplex is
a disk |z - mid| <= rad.  Midpoints live at the working precision and every
gmpy2 operation on them is correctly rounded, so one operation contributes at
most |result| * 2^(1-P) to the radius; that term plus the first-order
propagation bound is added in a dedicated low-precision round-up context.
Radii use MPFR's huge exponent range, so they do not underflow to zero the
way a float64 radius would at multi-thousand-bit scales.

All decisions (sign tests, cut tests) are conservative: when a ball cannot
certify a predicate, the operation raises rather than guessing.
"""

import fractions
import math

import gmpy2
from gmpy2 import mpc, mpfr

from ..errors import IndeterminateBranch

RPREC = 30  # radius mantissa bits

# Radius bookkeeping contexts.  _RU always rounds away from zero for the
# nonnegative quantities we track; _RD gives certified lower bounds.
_RU = gmpy2.context(precision=RPREC, round=gmpy2.RoundUp)
_RD = gmpy2.context(precision=RPREC, round=gmpy2.RoundDown)

_R0 = mpfr(0)
_R1 = mpfr(1)
_TWO = mpfr(2)


class CertifiedReal:
    """Interval value mid +- rad (rad >= 0)."""

    __slots__ = ("mid", "rad")

    def __init__(self, mid, rad=_R0):
        self.mid = mid
        self.rad = rad

    def __repr__(self):
        return "CertifiedReal(%s, rad=%s)" % (self.mid, self.rad)


class CertifiedComplex:
    """Disk value |z - mid| <= rad (rad >= 0)."""

    __slots__ = ("mid", "rad")

    def __init__(self, mid, rad=_R0):
        self.mid = mid
        self.rad = rad

    def __repr__(self):
        return "CertifiedComplex(%s, rad=%s)" % (self.mid, self.rad)


def _to_mpfr_exact(x):
    """Return (mpfr-or-mpq value, is_exact) for supported scalar types."""
    if isinstance(x, mpfr):
        return x, True
    if isinstance(x, int):
        return x, True
    if isinstance(x, float):
        return x, True
    if isinstance(x, fractions.Fraction):
        return gmpy2.mpq(x.numerator, x.denominator), True
    if isinstance(x, gmpy2.mpq):
        return x, True
    if isinstance(x, str):
        # decimal strings go through Fraction so conversion error is visible
        f = fractions.Fraction(x)
        return gmpy2.mpq(f.numerator, f.denominator), True
    raise TypeError("unsupported scalar type %r" % (type(x),))


class BallContext:
    """All ball operations at one working precision.

    Immutable after construction; the gmpy2 context objects are used through
    their methods only (never installed thread-wide), so instances are safe
    to share between threads.
    """

    def __init__(self, prec: int):
        if prec < 8:
            raise ValueError("working precision too small")
        self.prec = prec
        self._n = gmpy2.context(precision=prec)
        self._u = gmpy2.context(precision=prec, round=gmpy2.RoundUp)
        self._d = gmpy2.context(precision=prec, round=gmpy2.RoundDown)
        # one correctly rounded op errs by <= |result|*2^(-P) relative to the
        # exact value, hence <= |stored midpoint|*2^(1-P); eps is that factor
        self.eps = _RU.div_2exp(_R1, prec - 1)
        self.zero_r = CertifiedReal(mpfr(0, prec), _R0)
        self.one_r = CertifiedReal(mpfr(1, prec), _R0)
        pm = self._n.const_pi()
        self.pi = CertifiedReal(pm, _RU.mul(self.eps, _RU.abs(pm)))

    # ---------------- construction ----------------

    def real(self, x, rad=None) -> CertifiedReal:
        v, exact = _to_mpfr_exact(x)
        mid = self._n.add(mpfr(0, self.prec), v)
        if exact and mid == v:
            r = _R0
        else:
            r = _RU.mul(self.eps, _RU.abs(mid))
        if rad is not None:
            r = _RU.add(r, mpfr(rad))
        return CertifiedReal(mid, r)

    def complex(self, re, im=0, rad=None) -> CertifiedComplex:
        if isinstance(re, (complex, mpc)):
            if im != 0:
                raise TypeError("im must be 0 when re is already complex")
            re, im = re.real, re.imag
        if isinstance(re, CertifiedReal):
            reb = re
        else:
            reb = self.real(re)
        if isinstance(im, CertifiedReal):
            imb = im
        else:
            imb = self.real(im)
        mid = mpc(reb.mid, imb.mid, precision=self.prec)
        r = _RU.hypot(reb.rad, imb.rad)
        if rad is not None:
            r = _RU.add(r, mpfr(rad))
        return CertifiedComplex(mid, r)

    def from_endpoints(self, lo, hi) -> CertifiedReal:
        """Interval [lo, hi] given as mpfr endpoints."""
        mid = self._n.div(self._n.add(lo, hi), 2)
        r = _RU.maxnum(_RU.sub(hi, mid), _RU.sub(mid, lo))
        if r < 0:
            r = _R0
        return CertifiedReal(mid, r)

    def to_complex(self, a) -> CertifiedComplex:
        if isinstance(a, CertifiedComplex):
            return a
        if isinstance(a, CertifiedReal):
            return CertifiedComplex(mpc(a.mid, mpfr(0), precision=self.prec), a.rad)
        return self.complex(a)

    def shorten(self, a, ctx_small: "BallContext"):
        """Re-round a ball into a smaller working precision, soundly."""
        if isinstance(a, CertifiedReal):
            mid = ctx_small._n.add(mpfr(0, ctx_small.prec), a.mid)
            r = _RU.add(a.rad, _RU.mul(ctx_small.eps, _RU.abs(mid)))
            return CertifiedReal(mid, r)
        mid = ctx_small._n.add(mpc(0, precision=ctx_small.prec), a.mid)
        r = _RU.add(a.rad, _RU.mul(ctx_small.eps, _RU.abs(mid)))
        return CertifiedComplex(mid, r)

    # ---------------- real interval helpers ----------------

    def lower(self, a: CertifiedReal):
        return self._d.sub(a.mid, a.rad)

    def upper(self, a: CertifiedReal):
        return self._u.add(a.mid, a.rad)

    def is_positive(self, a: CertifiedReal) -> bool:
        return self.lower(a) > 0

    def is_negative(self, a: CertifiedReal) -> bool:
        return self.upper(a) < 0

    def contains_zero(self, a: CertifiedReal) -> bool:
        return not (self.is_positive(a) or self.is_negative(a))

    # ---------------- real arithmetic ----------------

    def _rnd(self, mid):
        # rounding contribution of the midpoint operation that produced mid
        return _RU.mul(self.eps, _RU.abs(mid))

    def r_neg(self, a):
        # bare operators round at the thread-default context; stay on _n
        return CertifiedReal(self._n.minus(a.mid), a.rad)

    def r_abs(self, a):
        return CertifiedReal(self._n.abs(a.mid), a.rad)

    def r_add(self, a, b):
        mid = self._n.add(a.mid, b.mid)
        return CertifiedReal(mid, _RU.add(_RU.add(a.rad, b.rad), self._rnd(mid)))

    def r_sub(self, a, b):
        mid = self._n.sub(a.mid, b.mid)
        return CertifiedReal(mid, _RU.add(_RU.add(a.rad, b.rad), self._rnd(mid)))

    def r_add_int(self, a, k: int):
        mid = self._n.add(a.mid, k)
        return CertifiedReal(mid, _RU.add(a.rad, self._rnd(mid)))

    def r_mul(self, a, b):
        mid = self._n.mul(a.mid, b.mid)
        r = _RU.add(
            _RU.add(_RU.mul(_RU.abs(a.mid), b.rad), _RU.mul(_RU.abs(b.mid), a.rad)),
            _RU.add(_RU.mul(a.rad, b.rad), self._rnd(mid)),
        )
        return CertifiedReal(mid, r)

    def r_mul_int(self, a, k: int):
        mid = self._n.mul(a.mid, k)
        return CertifiedReal(mid, _RU.add(_RU.mul(a.rad, abs(k)), self._rnd(mid)))

    def r_scale2(self, a, e: int):
        # multiplication by 2^e is exact at unchanged precision
        if e >= 0:
            return CertifiedReal(self._n.mul_2exp(a.mid, e), _RU.mul_2exp(a.rad, e))
        return CertifiedReal(self._n.div_2exp(a.mid, -e), _RU.div_2exp(a.rad, -e))

    def r_div(self, a, b):
        bmd = _RD.abs(b.mid)
        blo = _RD.sub(bmd, b.rad)
        if not blo > 0:
            raise ZeroDivisionError("ball denominator contains zero")
        mid = self._n.div(a.mid, b.mid)
        num = _RU.add(_RU.mul(a.rad, _RU.abs(b.mid)), _RU.mul(_RU.abs(a.mid), b.rad))
        r = _RU.add(_RU.div(num, _RD.mul(bmd, blo)), self._rnd(mid))
        return CertifiedReal(mid, r)

    def r_div_int(self, a, k: int):
        mid = self._n.div(a.mid, k)
        return CertifiedReal(mid, _RU.add(_RU.div(a.rad, abs(k)), self._rnd(mid)))

    def r_inv(self, a):
        return self.r_div(self.one_r, a)

    def r_pow_int(self, a, k: int):
        if k < 0:
            return self.r_inv(self.r_pow_int(a, -k))
        out = self.one_r
        base = a
        while k:
            if k & 1:
                out = self.r_mul(out, base)
            k >>= 1
            if k:
                base = self.r_mul(base, base)
        return out

    # ---------------- real functions ----------------

    def _monotone_inc(self, f_down, f_up, a):
        lo = f_down(self.lower(a))
        hi = f_up(self.upper(a))
        return self.from_endpoints(lo, hi)

    def r_sqrt(self, a):
        if self.lower(a) < 0:
            raise ValueError("sqrt of interval reaching below zero")
        return self._monotone_inc(self._d.sqrt, self._u.sqrt, a)

    def r_rootn(self, a, m: int):
        if self.lower(a) < 0:
            raise ValueError("rootn of interval reaching below zero")
        return self._monotone_inc(
            lambda x: self._d.rootn(x, m), lambda x: self._u.rootn(x, m), a
        )

    def r_log(self, a):
        if not self.is_positive(a):
            raise ValueError("log of interval reaching zero")
        return self._monotone_inc(self._d.log, self._u.log, a)

    def _expm1_rad_factor(self, rad):
        # upper bound for e^rad - 1; avoids a 30-bit expm1 blowup for tiny rad
        if rad <= 1:
            return _RU.mul(rad, _RU.add(_R1, _RU.mul(_TWO, rad)))
        return _RU.exp(rad)

    def r_exp(self, a):
        # one transcendental evaluation; radius via derivative bound
        mid = self._n.exp(a.mid)
        mu = _RU.abs(mid)
        r = _RU.add(
            _RU.mul(mu, self._expm1_rad_factor(a.rad)),
            _RU.mul(_TWO, _RU.mul(self.eps, mu)),
        )
        return CertifiedReal(mid, r)

    def r_cos(self, a):
        mid = self._n.cos(a.mid)
        return CertifiedReal(mid, _RU.add(a.rad, _RU.add(self.eps, self._rnd(mid))))

    def r_sin(self, a):
        mid = self._n.sin(a.mid)
        return CertifiedReal(mid, _RU.add(a.rad, _RU.add(self.eps, self._rnd(mid))))

    def r_floor(self, a):
        # exact on the midpoint; the interval may of course span the jump
        return self._n.floor(a.mid)

    # ---------------- complex helpers ----------------

    def c_re(self, z):
        return CertifiedReal(mpfr(z.mid.real, self.prec), z.rad)

    def c_im(self, z):
        return CertifiedReal(mpfr(z.mid.imag, self.prec), z.rad)

    def c_conj(self, z):
        return CertifiedComplex(
            mpc(z.mid.real, self._n.minus(z.mid.imag), precision=self.prec), z.rad
        )

    def abs_upper(self, z):
        return _RU.add(_RU.abs(z.mid), z.rad)

    def abs_lower(self, z):
        lo = _RD.sub(_RD.abs(z.mid), z.rad)
        return lo if lo > 0 else _R0

    def c_abs(self, z) -> CertifiedReal:
        mid = self._n.abs(z.mid)
        return CertifiedReal(mid, _RU.add(z.rad, self._rnd(mid)))

    def im_sign(self, z) -> int:
        """Certified sign of Im over the disk: +1, -1, or 0 (straddles)."""
        im = mpfr(z.mid.imag, self.prec)
        if self._d.sub(im, z.rad) > 0:
            return 1
        if self._u.add(im, z.rad) < 0:
            return -1
        return 0

    def re_sign(self, z) -> int:
        re = mpfr(z.mid.real, self.prec)
        if self._d.sub(re, z.rad) > 0:
            return 1
        if self._u.add(re, z.rad) < 0:
            return -1
        return 0

    def disk_hits_cut(self, z) -> bool:
        """Conservative test for intersection with the cut (-inf, 0]."""
        return self.im_sign(z) == 0 and self.re_sign(z) <= 0

    # ---------------- complex arithmetic ----------------

    def c_neg(self, z):
        return CertifiedComplex(self._n.minus(z.mid), z.rad)

    def c_add(self, a, b):
        mid = self._n.add(a.mid, b.mid)
        return CertifiedComplex(mid, _RU.add(_RU.add(a.rad, b.rad), self._rnd(mid)))

    def c_sub(self, a, b):
        mid = self._n.sub(a.mid, b.mid)
        return CertifiedComplex(mid, _RU.add(_RU.add(a.rad, b.rad), self._rnd(mid)))

    def c_mul(self, a, b):
        mid = self._n.mul(a.mid, b.mid)
        r = _RU.add(
            _RU.add(_RU.mul(_RU.abs(a.mid), b.rad), _RU.mul(_RU.abs(b.mid), a.rad)),
            _RU.add(_RU.mul(a.rad, b.rad), self._rnd(mid)),
        )
        return CertifiedComplex(mid, r)

    c_mul_real = c_mul  # same bound; gmpy2 mixes mpfr/mpc operands natively

    def c_mul_int(self, a, k: int):
        mid = self._n.mul(a.mid, k)
        return CertifiedComplex(mid, _RU.add(_RU.mul(a.rad, abs(k)), self._rnd(mid)))

    def c_div(self, a, b):
        bmd = _RD.abs(b.mid)
        blo = _RD.sub(bmd, b.rad)
        if not blo > 0:
            raise ZeroDivisionError("ball denominator contains zero")
        mid = self._n.div(a.mid, b.mid)
        num = _RU.add(_RU.mul(a.rad, _RU.abs(b.mid)), _RU.mul(_RU.abs(a.mid), b.rad))
        r = _RU.add(_RU.div(num, _RD.mul(bmd, blo)), self._rnd(mid))
        return CertifiedComplex(mid, r)

    def c_scale2(self, a, e: int):
        # multiplication by 2^e is exact at unchanged precision
        if e >= 0:
            return CertifiedComplex(self._n.mul_2exp(a.mid, e), _RU.mul_2exp(a.rad, e))
        return CertifiedComplex(self._n.div_2exp(a.mid, -e), _RU.div_2exp(a.rad, -e))

    def c_div_int(self, a, k: int):
        mid = self._n.div(a.mid, k)
        return CertifiedComplex(mid, _RU.add(_RU.div(a.rad, abs(k)), self._rnd(mid)))

    def c_inv(self, z):
        one = CertifiedComplex(mpc(1, precision=self.prec), _R0)
        return self.c_div(one, z)

    def c_pow_int(self, z, k: int):
        if k < 0:
            return self.c_inv(self.c_pow_int(z, -k))
        out = CertifiedComplex(mpc(1, precision=self.prec), _R0)
        base = z
        while k:
            if k & 1:
                out = self.c_mul(out, base)
            k >>= 1
            if k:
                base = self.c_mul(base, base)
        return out

    # ---------------- complex functions ----------------

    def c_exp(self, z):
        mid = self._n.exp(z.mid)
        mu = _RU.abs(mid)
        r = _RU.add(
            _RU.mul(mu, self._expm1_rad_factor(z.rad)),
            _RU.mul(_TWO, _RU.mul(self.eps, mu)),
        )
        return CertifiedComplex(mid, r)

    def c_log(self, z):
        if self.disk_hits_cut(z):
            raise IndeterminateBranch("indeterminate branch: log disk meets the cut")
        blo = self.abs_lower(z)
        if not blo > 0:
            raise IndeterminateBranch("indeterminate branch: log disk contains zero")
        mid = self._n.log(z.mid)
        r = _RU.add(_RU.div(z.rad, blo), self._rnd(mid))
        return CertifiedComplex(mid, r)

    def c_sqrt(self, z):
        if self.disk_hits_cut(z):
            raise IndeterminateBranch("indeterminate branch: sqrt disk meets the cut")
        blo = self.abs_lower(z)
        if not blo > 0:
            raise IndeterminateBranch("indeterminate branch: sqrt disk contains zero")
        mid = self._n.sqrt(z.mid)
        # sup of |d sqrt| over the disk is 1/(2 sqrt(min |z|))
        r = _RU.add(_RU.div(z.rad, _RD.mul(_TWO, _RD.sqrt(blo))), self._rnd(mid))
        return CertifiedComplex(mid, r)

    def c_root_m(self, z, m: int):
        """Principal m-th root, branch cut on (-inf, 0], arg in (-pi/m, pi/m]."""
        if m == 1:
            return z
        if m == 2:
            return self.c_sqrt(z)
        return self.c_exp(self.c_div_int(self.c_log(z), m))

    def c_arg(self, z) -> CertifiedReal:
        """Principal argument; requires the disk to stay off the cut."""
        if self.disk_hits_cut(z):
            raise IndeterminateBranch("indeterminate branch: arg disk meets the cut")
        blo = self.abs_lower(z)
        if not blo > 0:
            raise IndeterminateBranch("indeterminate branch: arg disk contains zero")
        mid = self._n.atan2(
            mpfr(z.mid.imag, self.prec), mpfr(z.mid.real, self.prec)
        )
        s = _RU.div(z.rad, blo)
        if s < 0.8:
            hw = _RU.asin(s)
        else:
            hw = _RU.const_pi()  # disk nearly engulfs the origin; widest case
        return CertifiedReal(mid, _RU.add(hw, self._rnd(mid)))

    def c_cis(self, theta: CertifiedReal) -> CertifiedComplex:
        """e^(i theta) for a real angle ball; |d/dtheta| = 1."""
        c = self._n.cos(theta.mid)
        s = self._n.sin(theta.mid)
        mid = mpc(c, s, precision=self.prec)
        r = _RU.add(theta.rad, _RU.mul(_TWO, self.eps))
        return CertifiedComplex(mid, r)

    def c_pow_frac(self, z, p: int, q: int):
        """Principal z^(p/q) = exp((p/q) log z), cut values via the half-shift.

        A disk certified to straddle only the negative real axis is rewritten
        as e^(i pi p/q) * (-z)^(p/q), matching the convention arg(z) = +pi on
        the cut.
        """
        if self.disk_hits_cut(z):
            if self.re_sign(z) < 0:
                rot = self.c_cis(
                    self.r_div_int(self.r_mul_int(self.pi, p), q)
                )
                base = self.c_exp(
                    self.c_div_int(self.c_mul_int(self.c_log(self.c_neg(z)), p), q)
                )
                return self.c_mul(rot, base)
            raise IndeterminateBranch(
                "indeterminate branch: fractional power disk contains zero"
            )
        return self.c_exp(self.c_div_int(self.c_mul_int(self.c_log(z), p), q))

    # ---------------- mixed helpers ----------------

    def c_from_parts(self, re: CertifiedReal, im: CertifiedReal):
        return CertifiedComplex(
            mpc(re.mid, im.mid, precision=self.prec), _RU.hypot(re.rad, im.rad)
        )

    def enclose_c(self, a, b) -> CertifiedComplex:
        """Smallest reported disk containing both input disks."""
        mid = self._n.div(self._n.add(a.mid, b.mid), 2)
        d = _RU.abs(self._u.sub(a.mid, b.mid))
        r = _RU.add(_RU.add(_RU.div_2exp(d, 1), _RU.maxnum(a.rad, b.rad)),
                    self._rnd(mid))
        return CertifiedComplex(mid, r)

    def overlap_c(self, a, b) -> bool:
        """Do two complex balls intersect (certified decision not required)."""
        d = _RD.abs(self._d.sub(a.mid, b.mid))
        return not d > _RU.add(a.rad, b.rad)


def rad_sum(*rads):
    out = _R0
    for r in rads:
        out = _RU.add(out, r)
    return out


def rad_max(*rads):
    out = _R0
    for r in rads:
        out = _RU.maxnum(out, r)
    return out


def fractional_parts(ctx: BallContext, v, target_bits: int):
    """Componentwise x - floor(x) into [0, 1), with ambiguity flags.

    An entry whose interval contains an integer straddles the wrap-around of
    the circle, so its representative in [0, 1) is flagged as ambiguous. If
    the radius also exceeds 2^(-target_bits) the entry is replaced by the
    midpoint of the two candidate representatives (0 and 1) with a radius
    wide enough to cover both; below that threshold both representatives
    name the same torus point to within the target accuracy, and the entry
    collapses to 0 with the mod-1 distance folded into the radius.
    """
    thresh = _RU.div_2exp(_R1, target_bits)
    out, flags = [], []
    for x in v:
        k = gmpy2.rint(x.mid)  # nearest integer, exact
        near = ctx._u.abs(ctx._u.sub(x.mid, k)) <= x.rad
        if near and x.rad > thresh:
            out.append(CertifiedReal(mpfr("0.5", ctx.prec), _RU.add(mpfr("0.5"), x.rad)))
            flags.append(True)
            continue
        if near:
            r = _RU.add(ctx._u.abs(ctx._u.sub(x.mid, k)), x.rad)
            out.append(CertifiedReal(mpfr(0, ctx.prec), r))
            flags.append(True)
            continue
        mid = ctx._n.sub(x.mid, ctx._n.floor(x.mid))
        if mid >= 1:  # rounding right at the boundary
            mid = ctx._n.sub(mid, 1)
        if mid < 0:
            mid = mpfr(0, ctx.prec)
        r = _RU.add(x.rad, _RU.mul(ctx.eps, _RU.abs(mid)))
        out.append(CertifiedReal(mid, r))
        flags.append(False)
    return out, flags
