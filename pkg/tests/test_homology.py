"""Spanning tree, intersection pairing, symplectic reduction."""

import random

import pytest

from seperiods.curve import curve_new
from seperiods.errors import NonPrincipalPolarization
from seperiods.homology import (
    edge_capacity,
    homology_data,
    spanning_tree,
    symplectic_reduce,
)
from seperiods.precision import Precision
from tests.conftest import int_det, random_curve, random_unimodular

LAM = 1.5707963267948966


def mk(m, coeffs, bits=128):
    return curve_new(m, coeffs, Precision(bits, bits + 70))


def _is_tree(n, edges):
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    seen = set()
    for a, b in edges:
        seen.add(a)
        seen.add(b)
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[ra] = rb
    return len(edges) == n - 1 and seen.issubset(range(n))


@pytest.mark.parametrize("strategy", ["capacity", "euclidean"])
def test_spanning_tree_is_spanning(strategy):
    rng = random.Random(4)
    for _ in range(6):
        m, coeffs = random_curve(rng, mmax=4, nmax=7)
        try:
            c = mk(m, coeffs)
        except Exception:
            continue
        tree = spanning_tree(c, LAM, strategy)
        assert _is_tree(c.n, tree.edges)


def test_capacity_positive_on_tree_edges():
    c = mk(3, [1, 2, 0, 0, 0, 1, 5])
    tree = spanning_tree(c, LAM, "capacity")
    for (a, b), cap in zip(tree.edges, tree.capacities):
        assert cap > 0
        assert cap == pytest.approx(edge_capacity(c, a, b, LAM))


def test_cycle_count_matches_rank():
    c = mk(3, [1, 0, 0, -1, 1])
    hom = homology_data(c, LAM)
    assert len(hom.cycles) == (c.n - 1) * (c.m - 1)
    assert len(hom.K) == len(hom.cycles)


def test_intersection_matrix_skew():
    rng = random.Random(12)
    for _ in range(4):
        m, coeffs = random_curve(rng, mmax=4, nmax=6)
        try:
            c = mk(m, coeffs)
        except Exception:
            continue
        hom = homology_data(c, LAM)
        K = hom.K
        for i in range(len(K)):
            assert K[i][i] == 0
            for j in range(len(K)):
                assert K[i][j] == -K[j][i]


def test_symplectic_transform_is_unimodular_and_reduces():
    rng = random.Random(31)
    for _ in range(4):
        m, coeffs = random_curve(rng, mmax=4, nmax=6)
        try:
            c = mk(m, coeffs)
        except Exception:
            continue
        hom = homology_data(c, LAM)
        N, g, S, K = len(hom.K), hom.g, hom.S, hom.K
        assert g == c.genus
        assert abs(int_det(S)) == 1
        KS = [[sum(K[r][t] * S[t][j] for t in range(N)) for j in range(N)] for r in range(N)]
        StKS = [[sum(S[t][i] * KS[t][j] for t in range(N)) for j in range(N)] for i in range(N)]
        for i in range(N):
            for j in range(N):
                want = 0
                if i < g and j == g + i:
                    want = 1
                elif g <= i < 2 * g and j == i - g:
                    want = -1
                assert StKS[i][j] == want


def test_reducer_on_conjugated_standard_form():
    rng = random.Random(8)
    for _ in range(20):
        g = rng.randint(1, 5)
        z = rng.choice([0, 1])
        N = 2 * g + z
        J = [[0] * N for _ in range(N)]
        for i in range(g):
            J[i][g + i] = 1
            J[g + i][i] = -1
        S0 = random_unimodular(N, rng)
        K = [
            [sum(S0[t][r] * sum(J[t][u] * S0[u][c] for u in range(N)) for t in range(N)) for c in range(N)]
            for r in range(N)
        ]
        S, gout = symplectic_reduce(K)
        assert gout == g


def test_reducer_rejects_odd_pairing():
    # skew form with elementary divisor 2 is not principally polarized
    K = [[0, 2], [-2, 0]]
    with pytest.raises(NonPrincipalPolarization):
        symplectic_reduce(K)
