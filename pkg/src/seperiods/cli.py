"""Command line interface.

Commands: periods, tau, homology, abel-jacobi, integration-report. The
polynomial may be given as an expression in x, a coefficient list, or a root
list; every scalar is parsed exactly (integers, p/q rationals, decimals,
"(re,im)" complex literals) so no accuracy is lost before the working
precision is even chosen. Exit codes: 0 success, 2 precision retry
exhausted, 3 invalid input, 1 any other hard failure.
"""

import argparse
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import pipeline, serialize
from .abeljacobi import Divisor, abel_jacobi
from .curve import f_eval, finite_point, infinite_point, ramification_point
from .errors import InvalidInput, PrecisionExhausted, SeperiodsError
from .precision import bits_from_digits, digits_from_bits
from .quadrature import LAMBDA_DEFAULT

DEFAULT_DIGITS = 38


# ------------------------------------------------------------ scalar parsing


def _split_top(s: str, sep: str):
    """Split on sep at paren depth 0."""
    parts, depth, cur = [], 0, []
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise InvalidInput("unbalanced parentheses in %r" % s)
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise InvalidInput("unbalanced parentheses in %r" % s)
    parts.append("".join(cur))
    return parts


def parse_rational(s: str) -> Fraction:
    s = s.strip()
    if not s:
        raise InvalidInput("empty number")
    try:
        return Fraction(s)  # handles integers, p/q, and decimal strings
    except (ValueError, ZeroDivisionError) as e:
        raise InvalidInput("cannot parse number %r: %s" % (s, e))


def parse_scalar(s: str):
    """One coefficient: rational/decimal, or complex '(re,im)'.

    Returns Fraction or (Fraction, Fraction)."""
    s = s.strip()
    if s.startswith("(") and s.endswith(")"):
        inner = _split_top(s[1:-1], ",")
        if len(inner) != 2:
            raise InvalidInput("complex literal must be (re,im): %r" % s)
        return (parse_rational(inner[0]), parse_rational(inner[1]))
    return parse_rational(s)


# ----------------------------------------------------------- gaussian helpers


def _as_pair(v):
    return v if isinstance(v, tuple) else (v, Fraction(0))


def _gadd(a, b):
    a, b = _as_pair(a), _as_pair(b)
    return (a[0] + b[0], a[1] + b[1])


def _gmul(a, b):
    a, b = _as_pair(a), _as_pair(b)
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _gneg(a):
    a = _as_pair(a)
    return (-a[0], -a[1])


def _simplify(v):
    """Collapse (x, 0) back to the real Fraction."""
    if isinstance(v, tuple) and v[1] == 0:
        return v[0]
    return v


# --------------------------------------------------------- polynomial parsing


def _parse_term(term: str):
    """One monomial 'coef*x^k' (both parts optional). Returns (value, k)."""
    t = term.strip()
    if not t:
        raise InvalidInput("empty term in polynomial")
    # locate the variable at depth 0 (an 'x' inside a complex literal is not one)
    depth, xpos = 0, -1
    for i, ch in enumerate(t):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "x" and depth == 0:
            xpos = i
            break
    if xpos < 0:
        return parse_scalar(t), 0
    head, tail = t[:xpos].strip(), t[xpos + 1:].strip()
    if head.endswith("*"):
        head = head[:-1].strip()
    if head in ("", "+"):
        coef = Fraction(1)
    elif head == "-":
        coef = Fraction(-1)
    else:
        coef = parse_scalar(head)
    if tail == "":
        k = 1
    elif tail.startswith("^"):
        try:
            k = int(tail[1:])
        except ValueError:
            raise InvalidInput("bad exponent in term %r" % term)
        if k < 0:
            raise InvalidInput("negative exponent in term %r" % term)
    else:
        raise InvalidInput("cannot parse term %r" % term)
    return coef, k


def parse_poly(text: str):
    """Expression in x -> descending coefficient list (exact scalars)."""
    s = text.replace(" ", "")
    if not s:
        raise InvalidInput("empty polynomial")
    # split into signed terms at depth 0
    terms, depth, cur = [], 0, []
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch in "+-" and depth == 0 and i > 0 and s[i - 1] not in "+-*/^(,":
            terms.append("".join(cur))
            cur = [ch]
        else:
            cur.append(ch)
    terms.append("".join(cur))
    powers = {}
    for term in terms:
        v, k = _parse_term(term)
        powers[k] = _gadd(powers.get(k, Fraction(0)), v)
    deg = max(powers)
    out = []
    for k in range(deg, -1, -1):
        out.append(_simplify(powers.get(k, Fraction(0))))
    return out


def parse_coeff_list(text: str):
    vals = [parse_scalar(p) for p in _split_top(text.strip(), ",")]
    if len(vals) < 2:
        raise InvalidInput("coefficient list needs at least two entries")
    return vals


def parse_root_list(text: str):
    roots = [parse_scalar(p) for p in _split_top(text.strip(), ",")]
    # expand prod (x - r_k) over gaussian rationals
    coeffs = [Fraction(1)]
    for r in roots:
        nr = _gneg(r)
        nxt = [Fraction(0)] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i] = _gadd(nxt[i], c)
            nxt[i + 1] = _gadd(nxt[i + 1], _gmul(c, nr))
        coeffs = nxt
    return [_simplify(c) for c in coeffs]


# ------------------------------------------------------------ divisor parsing


def parse_divisor_text(text: str):
    """'1*P2 -1*(0,1) 2*inf1' -> list of (kind, payload, coeff) triples."""
    toks = text.split()
    if not toks:
        raise InvalidInput("empty divisor")
    terms = []
    for tok in toks:
        body = tok
        coeff = 1
        star = -1
        depth = 0
        for i, ch in enumerate(tok):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "*" and depth == 0:
                star = i
                break
        if star >= 0:
            try:
                coeff = int(tok[:star])
            except ValueError:
                raise InvalidInput("divisor coefficient must be an integer: %r" % tok)
            body = tok[star + 1:]
        if body.startswith("P"):
            try:
                terms.append(("ram", int(body[1:]), coeff))
            except ValueError:
                raise InvalidInput("bad ramification point %r" % tok)
        elif body.startswith("inf"):
            try:
                terms.append(("inf", int(body[3:] or "1"), coeff))
            except ValueError:
                raise InvalidInput("bad infinite point %r" % tok)
        elif body.startswith("("):
            inner = _split_top(body[1:-1] if body.endswith(")") else "", ",")
            if len(inner) != 2:
                raise InvalidInput("finite point must be (x,y): %r" % tok)
            terms.append(("fin", (parse_scalar(inner[0]), parse_scalar(inner[1])), coeff))
        else:
            raise InvalidInput("cannot parse divisor term %r" % tok)
    return terms


def _scalar_to_ball(ctx, v):
    if isinstance(v, tuple):
        return ctx.complex(v[0], v[1])
    return ctx.complex(v)


def resolve_divisor(pipe, terms) -> Divisor:
    """Turn parsed triples into curve points; finite y snaps to the nearest
    branch of the fiber so decimal inputs select a sheet rather than having
    to hit the curve exactly."""
    curve = pipe.curve
    ctx = curve.ctx
    out = []
    for kind, payload, coeff in terms:
        if kind == "ram":
            k = payload
            if not 0 <= k < curve.n:
                raise InvalidInput("ramification index %d out of range" % k)
            out.append((ramification_point(k), coeff))
        elif kind == "inf":
            s = payload
            if not 1 <= s <= curve.delta:
                raise InvalidInput("infinite sheet %d out of range (delta = %d)" % (s, curve.delta))
            out.append((infinite_point(s), coeff))
        else:
            xv, yv = payload
            x = _scalar_to_ball(ctx, xv)
            y_in = ctx.complex(yv[0], yv[1]) if isinstance(yv, tuple) else ctx.complex(yv)
            fx = f_eval(curve, x)
            if ctx.abs_lower(fx) <= 0:
                # x sits on (or within the ball of) a branch point
                k = min(range(curve.n),
                        key=lambda i: ctx.abs_upper(ctx.c_sub(x, curve.X.roots[i])))
                if ctx.abs_lower(ctx.c_sub(x, curve.X.roots[k])) > 0:
                    raise InvalidInput("f(x) vanishes numerically but x matches no branch point")
                if ctx.abs_upper(y_in) > 0.1:
                    raise InvalidInput("y must be 0 at a branch point")
                out.append((ramification_point(k), coeff))
                continue
            base = ctx.c_pow_frac(fx, 1, curve.m)
            if not curve.lc_is_one:
                base = ctx.c_mul(curve.cf_root, base)
            best, bestd, second = None, None, None
            for l in range(curve.m):
                yl = ctx.c_mul(curve.halfpow[(2 * l) % (2 * curve.m)], base)
                d = ctx.abs_upper(ctx.c_sub(yl, y_in))
                if bestd is None or d < bestd:
                    best, bestd, second = yl, d, bestd
                elif second is None or d < second:
                    second = d
            scale = ctx.abs_upper(best) + 1
            if bestd > 0.1 * scale:
                raise InvalidInput("y is not near any branch of the fiber over x")
            if second is not None and not second > bestd:
                raise InvalidInput("sheet selection ambiguous for finite point")
            out.append((finite_point(x, best), coeff))
    return Divisor(terms=out)


# ---------------------------------------------------------------- job config


@dataclass
class JobConfig:
    command: str
    m: int
    coeffs: list
    digits: int
    bits: int
    lam: float = LAMBDA_DEFAULT
    tree: str = "capacity"
    scheme: str = "auto"
    threads: int = 0
    divisor: str = ""
    output: str = ""
    poly_text: str = ""


def config_from_args(args) -> JobConfig:
    given = [v is not None for v in (args.poly, args.coeffs, args.roots)]
    if sum(given) != 1:
        raise InvalidInput("give exactly one of --poly, --coeffs, --roots")
    if args.poly is not None:
        coeffs = parse_poly(args.poly)
        poly_text = args.poly
    elif args.coeffs is not None:
        coeffs = parse_coeff_list(args.coeffs)
        poly_text = args.coeffs
    else:
        coeffs = parse_root_list(args.roots)
        poly_text = args.roots
    if args.digits is not None and args.bits is not None:
        raise InvalidInput("give at most one of --digits, --bits")
    if args.bits is not None:
        if args.bits < 8:
            raise InvalidInput("bits must be >= 8")
        bits, digits = args.bits, digits_from_bits(args.bits)
    else:
        digits = args.digits if args.digits is not None else DEFAULT_DIGITS
        if digits < 1:
            raise InvalidInput("digits must be >= 1")
        bits = bits_from_digits(digits)
    if not 1.0 <= args.lam <= 1.5707963267948966:
        raise InvalidInput("lambda must lie in [1, pi/2]")
    return JobConfig(
        command=args.command,
        m=args.m,
        coeffs=coeffs,
        digits=digits,
        bits=bits,
        lam=args.lam,
        tree=args.tree,
        scheme=args.scheme,
        threads=args.threads,
        divisor=getattr(args, "divisor", "") or "",
        output=args.output or "",
        poly_text=poly_text,
    )


# ------------------------------------------------------------------- running


def run(cfg: JobConfig):
    """Execute one command. Returns (exit_code, output_text)."""
    try:
        scheme = None if cfg.scheme == "auto" else cfg.scheme
        if cfg.command == "abel-jacobi":
            if not cfg.divisor:
                raise InvalidInput("abel-jacobi needs --divisor")
            terms = parse_divisor_text(cfg.divisor)

            def post(pipe):
                div = resolve_divisor(pipe, terms)
                res = abel_jacobi(pipe.curve, pipe.aj, div)
                return res, list(res.vector)

            pipe, res = pipeline.run(cfg.m, cfg.coeffs, cfg.bits, lam=cfg.lam,
                                     tree=cfg.tree, scheme=scheme,
                                     threads=cfg.threads, post=post)
            payload = serialize.abel_jacobi_payload(pipe, cfg.divisor, res, cfg.digits)
        else:
            pipe, _ = pipeline.run(cfg.m, cfg.coeffs, cfg.bits, lam=cfg.lam,
                                   tree=cfg.tree, scheme=scheme,
                                   threads=cfg.threads)
            if cfg.command == "periods":
                payload = serialize.periods_payload(pipe, cfg.digits)
            elif cfg.command == "tau":
                payload = serialize.tau_payload(pipe, cfg.digits)
            elif cfg.command == "homology":
                payload = serialize.homology_payload(pipe)
            elif cfg.command == "integration-report":
                payload = serialize.integration_report_payload(pipe)
            else:
                raise InvalidInput("unknown command %r" % cfg.command)
    except PrecisionExhausted as e:
        return 2, "%s\n" % e
    except InvalidInput as e:
        return 3, "%s\n" % e
    except SeperiodsError as e:
        return 1, "%s: %s\n" % (type(e).__name__, e)
    return 0, serialize.dump(payload)


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m", type=int, required=True, help="exponent m of y^m = f(x)")
    common.add_argument("--poly", help="f(x) as an expression, e.g. 'x^3-x'")
    common.add_argument("--coeffs", help="descending coefficients, e.g. '1,0,-1,0'")
    common.add_argument("--roots", help="roots of f, leading coefficient 1")
    common.add_argument("--digits", type=int, default=None, help="decimal digits (default %d)" % DEFAULT_DIGITS)
    common.add_argument("--bits", type=int, default=None, help="binary precision instead of digits")
    common.add_argument("--lambda", dest="lam", type=float, default=LAMBDA_DEFAULT,
                        help="double-exponential strip parameter in [1, pi/2]")
    common.add_argument("--tree", choices=("capacity", "euclidean"), default="capacity")
    common.add_argument("--scheme", choices=("auto", "de", "gc"), default="auto")
    common.add_argument("--threads", type=int, default=0, help="0 = one per cpu")
    common.add_argument("-o", "--output", default=None, help="write JSON here instead of stdout")

    p = argparse.ArgumentParser(prog="seperiods",
                                description="certified period matrices and Abel-Jacobi maps of superelliptic curves")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("periods", parents=[common], help="big period matrices")
    sub.add_parser("tau", parents=[common], help="small period matrix")
    sub.add_parser("homology", parents=[common], help="spanning tree, cycles, intersection data")
    aj = sub.add_parser("abel-jacobi", parents=[common], help="Abel-Jacobi image of a divisor")
    aj.add_argument("--divisor", required=True,
                    help="e.g. '1*P2 -1*P0', '1*(0,1) -1*P0', '2*inf1 -2*P0'")
    sub.add_parser("integration-report", parents=[common], help="per-edge quadrature diagnostics")
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
    except InvalidInput as e:
        print(e, file=sys.stderr)
        return 3
    code, text = run(cfg)
    if code != 0:
        sys.stderr.write(text)
        return code
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
