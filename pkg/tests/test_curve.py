"""Curve model: normalization, genus, differentials, edge frames."""

import math
from fractions import Fraction

import gmpy2
import mpmath as mp
import pytest

from seperiods.curve import (
    branch_eval_u,
    curve_new,
    differential_basis,
    edge_frame,
    f_eval,
    frame_u,
    ytab_eval,
)
from seperiods.errors import InvalidInput, NotSeparable
from seperiods.precision import Precision
from tests.conftest import ball_to_mpc


def mk(m, coeffs, bits=128):
    return curve_new(m, coeffs, Precision(bits, bits + 70))


def test_genus_formula_grid():
    for m in range(2, 7):
        for n in range(3, 9):
            coeffs = [1] + [0] * (n - 1) + [-1, 0]
            coeffs = coeffs[: n + 1]
            # x^n - x is separable for every n >= 2 and coprime-ish patterns;
            # fall back to x^n - 2 if it is not
            try:
                c = mk(m, [1] + [0] * (n - 1) + [-2])
            except NotSeparable:
                continue
            d = math.gcd(m, n)
            assert c.genus == ((m - 1) * (n - 1) - d + 1) // 2
            assert c.delta == d


def test_monic_normalization_keeps_curve():
    c = mk(3, [5, 0, 0, -5])  # 5(x^3 - 1)
    ctx = c.ctx
    # cf_root^m recovers the leading coefficient
    v = ctx.c_pow_int(c.cf_root, 3)
    assert abs(complex(v.mid) - 5) < 1e-30
    # monic model has the same roots
    reals = [round(complex(r.mid).real, 6) for r in c.X.roots if abs(complex(r.mid).imag) < 0.5]
    assert sorted(reals)[-1] == 1.0


def test_tuple_and_fraction_coefficients():
    c = mk(2, [Fraction(1), (Fraction(0), Fraction(1)), Fraction(-1, 2), 3])
    assert c.n == 3
    # f(0) = 3 in the original model: monic f(0) * lc = 3
    ctx = c.ctx
    f0 = f_eval(c, ctx.complex(0))
    lc = ctx.c_pow_int(c.cf_root, 2)
    v = ctx.c_mul(f0, lc)
    assert abs(complex(v.mid) - 3) < 1e-25


def test_half_power_table():
    c = mk(5, [1, 0, 0, -1, 1])
    ctx = c.ctx
    mp.mp.prec = 200
    for j in range(10):
        w = c.halfpow[j]
        ref = mp.exp(mp.mpc(0, mp.pi * j / 5))
        assert abs(ball_to_mpc(w) - ref) <= mp.mpf(str(w.rad)) + mp.mpf(2) ** -120


def test_degree_too_small_rejected():
    with pytest.raises(InvalidInput):
        mk(2, [1, 0, -1])  # degree 2


def test_m_too_small_rejected():
    with pytest.raises(InvalidInput):
        mk(1, [1, 0, 0, -1])


def test_zero_leading_coefficients_stripped():
    c = mk(2, [0, 0, 1, 0, -1, 0])
    assert c.n == 3


def test_branch_values_satisfy_curve_equation():
    c = mk(3, [1, 0, 0, -1, 1])
    ctx = c.ctx
    fr = edge_frame(c, 0, 1)
    for uu in (-0.5, 0.1, 0.7):
        u = ctx.complex(uu)
        y = branch_eval_u(fr, u)
        # y^m must enclose f(x) on the monic model
        xball = ctx.c_add(ctx.c_mul(fr.t, u), fr.center)
        lhs = ctx.c_pow_int(y, 3)
        rhs = f_eval(c, xball)
        assert ctx.abs_lower(ctx.c_sub(lhs, rhs)) <= 0


def test_ytab_is_free_part_only():
    # with just the two endpoints, the free product is empty: ytab == 1
    c = mk(2, [1, 0, -1, 0])
    ctx = c.ctx
    fr = edge_frame(c, 0, 1)
    # pick the frame over a pair with a third root elsewhere: ytab != 1 there
    val = ytab_eval(fr, ctx.complex(Fraction(1, 4)))
    assert val is not None


def test_differential_basis_size_is_genus():
    for m, coeffs in [(2, [1, 0, -1, 0]), (3, [1, 0, 0, -1, 1]), (4, [1, 2, 0, 0, 0, 1, 3])]:
        c = mk(m, coeffs)
        basis = differential_basis(c)
        assert len(basis.entries) == c.genus
