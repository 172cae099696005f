"""End-to-end orchestration with automatic precision retries.

A single attempt runs curve -> homology -> schemes -> integrals -> period
matrices at a fixed working precision. If a retryable precision error is
raised anywhere, or a published radius comes out above 2^(-target_bits),
the attempt is discarded and rebuilt with a doubled guard. Hard errors
(inconsistent pipeline, invalid input) propagate immediately.
"""

import math
import os
from dataclasses import dataclass

from .abeljacobi import AJData
from .curve import Curve, curve_new
from .errors import PrecisionExhausted, RetryablePrecisionError
from .homology import HomologyData, homology_data
from .numerics.ball import _RU
from .periods import PeriodData, elementary_integrals, period_data, tree_schemes
from .precision import Precision, guard_bits
from .quadrature import LAMBDA_DEFAULT

from gmpy2 import mpfr

MAX_RETRIES = 3


def genus_of(m: int, n: int) -> int:
    d = math.gcd(m, n)
    return ((m - 1) * (n - 1) - d + 1) // 2


@dataclass
class Pipeline:
    curve: Curve
    hom: HomologyData
    schemes: list
    elem: object
    pd: PeriodData
    aj: AJData
    prec: Precision
    attempts: int = 1


def build(m: int, coeffs, target_bits: int, lam: float = LAMBDA_DEFAULT,
          tree: str = "capacity", scheme=None, threads: int = 1,
          extra_guard: int = 0) -> Pipeline:
    """One pipeline attempt at a fixed precision; no retry logic."""
    if lam is None:
        lam = LAMBDA_DEFAULT
    n = len(coeffs) - 1
    prec = Precision.for_genus(target_bits, genus_of(m, n), extra_guard)
    curve = curve_new(m, coeffs, prec)
    hom = homology_data(curve, lam, tree)
    schemes = tree_schemes(curve, hom, lam, prec, force=scheme)
    elem = elementary_integrals(curve, hom, schemes, threads=threads)
    pd = period_data(curve, hom, elem, target_bits)
    aj = AJData(hom=hom, elem=elem, pd=pd, prec=prec, lam=lam)
    return Pipeline(curve=curve, hom=hom, schemes=schemes, elem=elem,
                    pd=pd, aj=aj, prec=prec)


def _radii_ok(pipe: Pipeline, extra_values) -> bool:
    thresh = _RU.div_2exp(mpfr(1), pipe.prec.target_bits)
    for mat in (pipe.pd.OA, pipe.pd.OB, pipe.pd.tau):
        for row in mat:
            for z in row:
                if z.rad > thresh:
                    return False
    for v in extra_values:
        if v.rad > thresh:
            return False
    return True


def run(m: int, coeffs, target_bits: int, *, lam: float = LAMBDA_DEFAULT,
        tree: str = "capacity", scheme=None, threads: int = 0, post=None):
    """Pipeline with retries. Returns (Pipeline, post result).

    post, if given, is called with the fresh Pipeline and must return
    (result, ball_values); the retry loop covers retryable errors raised
    inside it and checks the returned ball radii against the target, so
    divisor evaluations are re-run at a higher precision along with the
    period data they depend on.
    """
    if threads == 0:
        threads = os.cpu_count() or 1
    n = len(coeffs) - 1
    base = guard_bits(genus_of(m, n))
    extra = 0
    last = None
    attempts = 0
    for _ in range(MAX_RETRIES + 1):
        attempts += 1
        try:
            pipe = build(m, coeffs, target_bits, lam=lam, tree=tree,
                         scheme=scheme, threads=threads, extra_guard=extra)
            result, values = post(pipe) if post else (None, [])
            if _radii_ok(pipe, values):
                pipe.attempts = attempts
                return pipe, result
            last = None
        except RetryablePrecisionError as e:
            last = e
        # guard doubles: base, 2*base, 4*base ... on top of the default
        extra = base if extra == 0 else 2 * extra + base
    detail = f": {last}" if last is not None else ""
    raise PrecisionExhausted("precision retry exhausted" + detail)
