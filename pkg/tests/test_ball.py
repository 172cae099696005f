"""Ball arithmetic: enclosures really enclose, exact inputs stay exact."""

import math
import random
from fractions import Fraction

import gmpy2
import mpmath as mp
import pytest

from seperiods.numerics.ball import BallContext, fractional_parts
from tests.conftest import ball_to_mpc, ball_to_mpf


def mk(bits=128):
    return BallContext(bits)


def test_exact_integer_and_fraction_inputs():
    ctx = mk()
    a = ctx.real(7)
    assert a.rad == 0 and a.mid == 7
    b = ctx.real(Fraction(1, 3))
    # 1/3 is not dyadic: the ball must still contain it
    mp.mp.prec = 200
    third = mp.mpf(1) / 3
    assert abs(ball_to_mpf(b) - third) <= mp.mpf(str(b.rad))
    c = ctx.real("0.1")
    assert abs(ball_to_mpf(c) - mp.mpf(1) / 10) <= mp.mpf(str(c.rad))


def test_complex_two_argument_constructor():
    ctx = mk()
    z = ctx.complex(Fraction(1, 2), Fraction(-3, 4))
    assert z.mid.real == 0.5 and z.mid.imag == -0.75 and z.rad == 0


def test_arithmetic_contains_true_value():
    ctx = mk(96)
    mp.mp.prec = 300
    rng = random.Random(42)
    for _ in range(50):
        xr, xi = rng.uniform(-3, 3), rng.uniform(-3, 3)
        yr, yi = rng.uniform(-3, 3), rng.uniform(-3, 3)
        x = ctx.complex(xr, xi)
        y = ctx.complex(yr, yi)
        X, Y = mp.mpc(xr, xi), mp.mpc(yr, yi)
        for op, ref in [
            (ctx.c_add(x, y), X + Y),
            (ctx.c_sub(x, y), X - Y),
            (ctx.c_mul(x, y), X * Y),
            (ctx.c_div(x, y), X / Y),
        ]:
            assert abs(ball_to_mpc(op) - ref) <= mp.mpf(str(op.rad)) + mp.mpf(2) ** -280


def test_transcendental_containment():
    ctx = mk(128)
    mp.mp.prec = 320
    rng = random.Random(3)
    for _ in range(20):
        zr, zi = rng.uniform(-2, 2), rng.uniform(-2, 2)
        z = ctx.complex(zr, zi)
        Z = mp.mpc(zr, zi)
        e = ctx.c_exp(z)
        assert abs(ball_to_mpc(e) - mp.exp(Z)) <= mp.mpf(str(e.rad))
        if abs(Z) > 0.1:
            lg = ctx.c_log(z)
            assert abs(ball_to_mpc(lg) - mp.log(Z)) <= mp.mpf(str(lg.rad))
            s = ctx.c_sqrt(z)
            assert abs(ball_to_mpc(s) - mp.sqrt(Z)) <= mp.mpf(str(s.rad))


def test_fractional_power_principal_branch():
    ctx = mk(128)
    mp.mp.prec = 320
    rng = random.Random(9)
    for _ in range(30):
        zr, zi = rng.uniform(-2, 2), rng.uniform(-2, 2)
        if abs(zr) + abs(zi) < 0.2:
            continue
        p, q = rng.randint(1, 4), rng.randint(2, 5)
        z = ctx.complex(zr, zi)
        w = ctx.c_pow_frac(z, p, q)
        ref = mp.power(mp.mpc(zr, zi), mp.mpf(p) / q)
        assert abs(ball_to_mpc(w) - ref) <= mp.mpf(str(w.rad))


def test_radius_grows_with_uncertain_input():
    ctx = mk(128)
    x = ctx.real(1, rad=gmpy2.mpfr("1e-10"))
    y = ctx.r_mul(x, x)
    assert y.rad >= gmpy2.mpfr("1e-10")


def test_sign_predicates():
    ctx = mk()
    assert ctx.is_positive(ctx.real(Fraction(1, 7)))
    assert ctx.is_negative(ctx.real(-3))
    wide = ctx.real(0, rad=gmpy2.mpfr("0.5"))
    assert ctx.contains_zero(wide)
    assert not ctx.is_positive(wide) and not ctx.is_negative(wide)


def test_fractional_parts_plain_value():
    ctx = mk(128)
    vals, flags = fractional_parts(ctx, [ctx.real(Fraction(9, 4))], 128)
    assert not flags[0]
    assert abs(vals[0].mid - gmpy2.mpfr("0.25")) < 1e-30


def test_fractional_parts_negative_value():
    ctx = mk(128)
    vals, flags = fractional_parts(ctx, [ctx.real(Fraction(-1, 4))], 128)
    assert not flags[0]
    assert abs(vals[0].mid - gmpy2.mpfr("0.75")) < 1e-30


def test_fractional_parts_integer_with_tiny_radius_flags():
    ctx = mk(128)
    x = ctx.real(3, rad=gmpy2.mpfr(2) ** -200)
    vals, flags = fractional_parts(ctx, [x], 128)
    assert flags[0]
    # folds to 0 with a radius that still covers the straddle
    assert vals[0].mid == 0
    assert vals[0].rad >= gmpy2.mpfr(2) ** -200


def test_fractional_parts_wide_straddle_becomes_half_interval():
    ctx = mk(128)
    x = ctx.real(2, rad=gmpy2.mpfr(2) ** -10)  # way above 2^-128
    vals, flags = fractional_parts(ctx, [x], 128)
    assert flags[0]
    assert vals[0].mid == gmpy2.mpfr("0.5")
    assert vals[0].rad >= gmpy2.mpfr("0.5")


def test_fractional_parts_clear_value_never_flagged():
    ctx = mk(128)
    x = ctx.real(Fraction(1, 2), rad=gmpy2.mpfr(2) ** -100)
    vals, flags = fractional_parts(ctx, [x], 128)
    assert not flags[0]
    assert abs(vals[0].mid - gmpy2.mpfr("0.5")) < 1e-20


def test_pi_constant_enclosure():
    ctx = mk(256)
    mp.mp.prec = 300
    assert abs(ball_to_mpf(ctx.pi) - mp.pi) <= mp.mpf(str(ctx.pi.rad))
