"""Spanning tree, generating cycles, intersection numbers, symplectic basis.

Cycles are indexed by (tree edge e, shift l) with l in 0..m-2; the cycle is
the lift of the segment walked forward on sheet l and back on sheet l+1.
Intersection numbers come from a five-case table driven by a certified
integer shift s_x at the shared branch point, so the whole matrix is exact.
"""

import cmath
import math
from dataclasses import dataclass

import gmpy2

from .curve import Curve, EdgeFrame, edge_frame, ytab_eval
from .errors import (
    DegenerateConfiguration,
    IntersectionInconsistency,
    NonPrincipalPolarization,
    PrecisionLoss,
)
from .numerics.ball import _RU

_A60 = gmpy2.context(precision=60)


@dataclass
class SpanningTree:
    root: int
    edges: list  # (parent_idx, child_idx), BFS order away from the root
    capacities: list  # float r_e per edge, same order


@dataclass
class HomologyData:
    tree: SpanningTree
    frames: list  # EdgeFrame per tree edge
    cycles: list  # (edge_index, shift) in row order of K
    K: list  # integer intersection matrix
    S: list  # unimodular change to a symplectic basis
    g: int
    delta: int


def edge_capacity(curve: Curve, a: int, b: int, lam: float) -> float:
    """Quality measure of the edge (a, b) for quadrature; 0 means unusable."""
    m = curve.m
    xs = [complex(r.mid) for r in curve.X.roots]
    pa, pb = xs[a], xs[b]
    best = math.inf
    for k, c in enumerate(xs):
        if k in (a, b):
            continue
        if m == 2:
            rho = (abs(c - pa) + abs(c - pb)) / abs(pb - pa)
            if rho <= 1 + 1e-12:
                return 0.0
            cap = rho
        else:
            u = (2 * c - pa - pb) / (pb - pa)
            if abs(u.imag) < 1e-15 and abs(u.real) <= 1 + 1e-12:
                return 0.0
            cap = abs(cmath.asinh(cmath.atanh(u) / lam).imag)
            if cap <= 0:
                return 0.0
        best = min(best, cap)
    return best if best < math.inf else math.inf


class _UnionFind:
    def __init__(self, n):
        self.p = list(range(n))

    def find(self, x):
        while self.p[x] != x:
            self.p[x] = self.p[self.p[x]]
            x = self.p[x]
        return x

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        self.p[ry] = rx
        return True


def spanning_tree(curve: Curve, lam: float, strategy: str = "capacity") -> SpanningTree:
    n = curve.n
    xs = [complex(r.mid) for r in curve.X.roots]
    cands = []
    for i in range(n):
        for j in range(i + 1, n):
            cap = edge_capacity(curve, i, j, lam)
            if cap <= 0:
                continue
            if strategy == "euclidean":
                key = (abs(xs[j] - xs[i]), i, j)
            else:
                key = (-cap, i, j)
            cands.append((key, i, j, cap))
    cands.sort(key=lambda t: t[0])

    uf = _UnionFind(n)
    chosen = {}
    first = None
    for _, i, j, cap in cands:
        if uf.union(i, j):
            chosen[(i, j)] = cap
            if first is None:
                first = (i, j)
            if len(chosen) == n - 1:
                break
    if len(chosen) != n - 1:
        raise DegenerateConfiguration(
            "degenerate configuration: no usable spanning tree"
        )

    root = min(first)
    adj = {i: [] for i in range(n)}
    for (i, j), cap in chosen.items():
        adj[i].append((j, cap))
        adj[j].append((i, cap))
    for i in adj:
        adj[i].sort()

    edges, caps = [], []
    seen = {root}
    queue = [root]
    while queue:
        v = queue.pop(0)
        for w, cap in adj[v]:
            if w in seen:
                continue
            seen.add(w)
            edges.append((v, w))
            caps.append(cap)
            queue.append(w)
    return SpanningTree(root=root, edges=edges, capacities=caps)


def _arg_loose(ctx, z):
    """Double arg of the ball midpoint plus certified half-width.

    Unlike a principal-branch enclosure this is only meaningful modulo 2*pi,
    which is all the intersection shifts need."""
    lo = ctx.abs_lower(z)
    if not lo > 0:
        raise PrecisionLoss("argument ball contains zero")
    s = float(_RU.div(z.rad, lo))
    if s > 0.1:
        raise PrecisionLoss("argument ball too wide")
    arg = float(_A60.atan2(z.mid.imag, z.mid.real))
    return arg, 1.02 * s + 1e-15


def _shift_and_rho(curve: Curve, frameAB: EdgeFrame, frameCD: EdgeFrame, case: str):
    """(s_x, rho) at the shared point; rho and s_x come from the same branch
    of arg so the case (iii)/(iv) split stays consistent when the edges are
    nearly collinear."""
    ctx = curve.ctx
    m = curve.m
    if case == "b=c":
        uA, uC, add_pi = 1, -1, True
    elif case == "a=c":
        uA, uC, add_pi = -1, -1, False
    else:
        raise ValueError("case must be 'b=c' or 'a=c'")

    yA = ctx.c_mul(frameAB.Cab, ytab_eval(frameAB, ctx.complex(uA)))
    yC = ctx.c_mul(frameCD.Cab, ytab_eval(frameCD, ctx.complex(uC)))
    ratio = ctx.c_div(yC, yA)
    dir_ratio = ctx.c_div(
        ctx.c_sub(frameAB.b, frameAB.a), ctx.c_sub(frameCD.b, frameCD.a)
    )

    rho, hw1 = _arg_loose(ctx, dir_ratio)
    if add_pi:
        rho += math.pi
    th, hw2 = _arg_loose(ctx, ratio)
    val = (rho + m * th) / (2 * math.pi)
    width = (hw1 + m * hw2) / (2 * math.pi)
    if width > 1e-7:
        raise PrecisionLoss("intersection shift not resolved at this precision")
    s = round(val)
    if abs(val - s) > 1e-6:
        raise IntersectionInconsistency(
            "intersection inconsistency: shift %.3e not near an integer" % val
        )
    return s, rho


def intersection_shift(curve: Curve, frameAB: EdgeFrame, frameCD: EdgeFrame, case: str) -> int:
    """The integer shift s_x at the shared branch point x."""
    return _shift_and_rho(curve, frameAB, frameCD, case)[0]


def _case_block(m, s_plus, s_minus, K, rows, cols):
    for k in range(m - 1):
        for l in range(m - 1):
            d = (l - k) % m
            v = 0
            if d == s_plus % m:
                v = 1
            elif d == s_minus % m:
                v = -1
            K[rows + k][cols + l] = v
            K[cols + l][rows + k] = -v


def intersection_matrix(curve: Curve, tree: SpanningTree, frames=None):
    """K over the cycle basis (edge, shift), plus the frames used."""
    m = curve.m
    ne = len(tree.edges)
    if frames is None:
        frames = [edge_frame(curve, a, b) for a, b in tree.edges]
    N = ne * (m - 1)
    K = [[0] * N for _ in range(N)]

    for e in range(ne):
        # case (i): one edge, shifted companion cycles
        _case_block(m, 1, -1, K, e * (m - 1), e * (m - 1))

    for e in range(ne):
        for f in range(e + 1, ne):
            (a, b), (c, d) = tree.edges[e], tree.edges[f]
            re, rf = e * (m - 1), f * (m - 1)
            if b == c:
                s, _ = _shift_and_rho(curve, frames[e], frames[f], "b=c")
                _case_block(m, -s, 1 - s, K, re, rf)
            elif d == a:
                # same pattern with the edge roles exchanged
                s, _ = _shift_and_rho(curve, frames[f], frames[e], "b=c")
                _case_block(m, -s, 1 - s, K, rf, re)
            elif a == c:
                s, rho = _shift_and_rho(curve, frames[e], frames[f], "a=c")
                if abs(rho) < 1e-9:
                    raise IntersectionInconsistency(
                        "intersection inconsistency: sibling edges are parallel"
                    )
                if rho > 0:
                    _case_block(m, 1 - s, -s, K, re, rf)
                else:
                    _case_block(m, -s, -1 - s, K, re, rf)
            elif b == d:
                raise IntersectionInconsistency(
                    "intersection inconsistency: tree edges share a child"
                )
    return K, frames


def symplectic_reduce(K):
    """Unimodular S with S^T K S = [[0,I,0],[-I,0,0],[0,0,0]] exactly."""
    N = len(K)
    M = [row[:] for row in K]
    S = [[1 if i == j else 0 for j in range(N)] for i in range(N)]

    def colop(k, j, c):
        # congruence: col_k += c*col_j, row_k += c*row_j; S follows columns
        for r in range(N):
            M[r][k] += c * M[r][j]
        for col in range(N):
            M[k][col] += c * M[j][col]
        for r in range(N):
            S[r][k] += c * S[r][j]

    active = set(range(N))
    pairs = []
    while True:
        best = None
        for i in active:
            row = M[i]
            for j in active:
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, i, j = best
        clean = True
        for k in list(active):
            if k in (i, j):
                continue
            if M[i][k]:
                colop(k, j, -(M[i][k] // M[i][j]))
                if M[i][k]:
                    clean = False
            if M[j][k]:
                colop(k, i, -(M[j][k] // M[j][i]))
                if M[j][k]:
                    clean = False
        if not clean:
            continue  # the minimal |entry| strictly decreased; reselect
        p = M[i][j]
        if abs(p) != 1:
            raise NonPrincipalPolarization(
                "non-principal polarization: elementary divisor %d" % abs(p)
            )
        pairs.append((i, j) if p == 1 else (j, i))
        active.discard(i)
        active.discard(j)

    order = [i for i, _ in pairs] + [j for _, j in pairs] + sorted(active)
    Sp = [[S[r][c] for c in order] for r in range(N)]

    g = len(pairs)
    KS = [[sum(K[r][t] * Sp[t][c] for t in range(N)) for c in range(N)] for r in range(N)]
    for r in range(N):
        for c in range(N):
            acc = sum(Sp[t][r] * KS[t][c] for t in range(N))
            expect = 0
            if r < g and c == g + r:
                expect = 1
            elif g <= r < 2 * g and c == r - g:
                expect = -1
            if acc != expect:
                raise NonPrincipalPolarization(
                    "non-principal polarization: reduction failed verification"
                )
    return Sp, g


def homology_data(curve: Curve, lam: float, strategy: str = "capacity") -> HomologyData:
    tree = spanning_tree(curve, lam, strategy)
    K, frames = intersection_matrix(curve, tree)
    S, g = symplectic_reduce(K)
    if g != curve.genus:
        raise IntersectionInconsistency(
            "intersection inconsistency: symplectic rank %d, genus %d"
            % (g, curve.genus)
        )
    if len(K) - 2 * g != curve.delta - 1:
        raise IntersectionInconsistency(
            "intersection inconsistency: zero block size %d, delta %d"
            % (len(K) - 2 * g, curve.delta)
        )
    cycles = [(e, l) for e in range(len(tree.edges)) for l in range(curve.m - 1)]
    return HomologyData(
        tree=tree,
        frames=frames,
        cycles=cycles,
        K=K,
        S=S,
        g=g,
        delta=curve.delta,
    )
