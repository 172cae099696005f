"""Deterministic JSON payloads for the command line interface.

Midpoints are rendered as decimal scientific strings at the requested digit
count, radii with 3 significant digits, and all orderings are fixed, so an
identical job configuration produces byte-identical output.
"""

import json

import gmpy2

from .quadrature import DEScheme


def sci_str(x, sig: int) -> str:
    """Scientific decimal rendering of an mpfr with `sig` significant digits."""
    x = gmpy2.mpfr(x)
    if gmpy2.is_zero(x):
        return "0"
    ds, exp, _ = x.digits(10, sig)
    sign = ""
    if ds.startswith("-"):
        sign, ds = "-", ds[1:]
    ds = ds.ljust(sig, "0")
    body = ds[0] + ("." + ds[1:] if len(ds) > 1 else "")
    return f"{sign}{body}e{exp - 1:+03d}"


def complex_ball(z, digits: int) -> dict:
    return {
        "re": sci_str(z.mid.real, digits),
        "im": sci_str(z.mid.imag, digits),
        "rad": sci_str(z.rad, 3),
    }


def real_ball(v, digits: int) -> dict:
    return {"value": sci_str(v.mid, digits), "rad": sci_str(v.rad, 3)}


def complex_matrix(mat, digits: int):
    return [[complex_ball(z, digits) for z in row] for row in mat]


def curve_block(pipe) -> dict:
    return {
        "m": pipe.curve.m,
        "n": pipe.curve.n,
        "delta": pipe.curve.delta,
        "genus": pipe.curve.genus,
        "attempts": pipe.attempts,
    }


def periods_payload(pipe, digits: int) -> dict:
    return {
        "command": "periods",
        "curve": curve_block(pipe),
        "digits": digits,
        "omega_a": complex_matrix(pipe.pd.OA, digits),
        "omega_b": complex_matrix(pipe.pd.OB, digits),
    }


def tau_payload(pipe, digits: int) -> dict:
    ctx = pipe.curve.ctx
    g = pipe.pd.genus
    defect = gmpy2.mpfr(0)
    for r in range(g):
        for c in range(r + 1, g):
            d = ctx.abs_upper(ctx.c_sub(pipe.pd.tau[r][c], pipe.pd.tau[c][r]))
            if d > defect:
                defect = d
    return {
        "command": "tau",
        "curve": curve_block(pipe),
        "digits": digits,
        "tau": complex_matrix(pipe.pd.tau, digits),
        "symmetry_defect_bound": sci_str(defect, 3),
        "im_tau_positive_definite": True,  # certified during construction
    }


def homology_payload(pipe) -> dict:
    hom = pipe.hom
    return {
        "command": "homology",
        "curve": curve_block(pipe),
        "tree": {
            "root": hom.tree.root,
            "edges": [[a, b] for a, b in hom.tree.edges],
            "capacities": [f"{c:.6g}" for c in hom.tree.capacities],
        },
        "cycles": [[e, l] for e, l in hom.cycles],
        "intersection_matrix": [list(row) for row in hom.K],
        "symplectic_transform": [list(row) for row in hom.S],
    }


def abel_jacobi_payload(pipe, divisor_text: str, result, digits: int) -> dict:
    return {
        "command": "abel-jacobi",
        "curve": curve_block(pipe),
        "digits": digits,
        "divisor": divisor_text,
        "vector": [real_ball(v, digits) for v in result.vector],
        "ambiguous": list(result.flags),
    }


def integration_report_payload(pipe) -> dict:
    edges = []
    for (a, b), sch in zip(pipe.hom.tree.edges, pipe.schemes):
        if isinstance(sch, DEScheme):
            entry = {
                "edge": [a, b],
                "engine": "de",
                "nodes": sch.Npts,
                "r": f"{sch.r:.6g}",
                "step": sci_str(sch.h, 6),
                "tail_bound": sci_str(sch.err, 3),
            }
        else:
            entry = {
                "edge": [a, b],
                "engine": "gc",
                "nodes": sch.Npts,
                "r": f"{sch.r:.6g}",
                "tail_bound": sci_str(sch.err, 3),
            }
        edges.append(entry)
    return {
        "command": "integration-report",
        "curve": curve_block(pipe),
        "edges": edges,
    }


def dump(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"
