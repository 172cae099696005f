"""Certified root isolation against independent high-precision roots."""

import random

import gmpy2
import mpmath as mp

from seperiods.errors import NotSeparable
from seperiods.numerics.ball import BallContext
from seperiods.numerics.roots import poly_roots

import pytest


def test_integer_roots_recovered_exactly():
    # (x-1)(x+2)(x-3)(x+4) = x^4 + 2x^3 - 13x^2 - 14x + 24
    roots = poly_roots([1, 2, -13, -14, 24], 128)
    mids = sorted(complex(r.mid).real for r in roots.roots)
    for got, want in zip(mids, [-4, -2, 1, 3]):
        assert abs(got - want) < 1e-30
    for r in roots.roots:
        assert float(r.rad) < 1e-30


def test_conjugate_pairs_and_containment():
    rng = random.Random(77)
    mp.mp.dps = 60
    for _ in range(10):
        deg = rng.randint(3, 9)
        coeffs = [rng.randint(-9, 9) for _ in range(deg + 1)]
        coeffs[0] = rng.randint(1, 9)
        try:
            roots = poly_roots(coeffs, 128)
        except NotSeparable:
            continue  # a random repeated root, astronomically unlikely
        ref = mp.polyroots([mp.mpf(c) for c in coeffs], maxsteps=200, extraprec=120)
        assert len(roots.roots) == deg
        # every reference root lies in exactly one ball
        for rr in ref:
            hits = 0
            for b in roots.roots:
                d = abs(mp.mpc(str(b.mid.real), str(b.mid.imag)) - rr)
                if d <= mp.mpf(str(b.rad)) * 1.001 + mp.mpf(2) ** -120:
                    hits += 1
            assert hits == 1


def test_root_balls_pairwise_disjoint():
    roots = poly_roots([1, 0, 0, 0, 0, 0, -1], 128)  # sixth roots of unity
    rs = roots.roots
    ctx = BallContext(192)
    for i in range(len(rs)):
        for j in range(i + 1, len(rs)):
            d = abs(rs[i].mid - rs[j].mid) - rs[i].rad - rs[j].rad
            assert d > 0


def test_repeated_root_raises():
    with pytest.raises(NotSeparable):
        poly_roots([1, -2, 1], 128)  # (x-1)^2


def test_huge_coefficient_spread():
    # coefficients spanning many orders of magnitude still certify
    coeffs = [1, 0, -10**12, 0, 10**20, -3]
    roots = poly_roots(coeffs, 192)
    assert len(roots.roots) == 5
    mp.mp.dps = 80
    ref = mp.polyroots([mp.mpf(c) for c in coeffs], maxsteps=300, extraprec=200)
    for rr in ref:
        assert any(
            abs(mp.mpc(str(b.mid.real), str(b.mid.imag)) - rr) <= mp.mpf(str(b.rad)) + mp.mpf(2) ** -150
            for b in roots.roots
        )
