import itertools
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from glim.cutnorm import (cut_norm, cut_norm_exact, cut_norm_heuristic,
                          graph_cut_distance_same_order, rectangle_sum)
from glim.errors import CapExceededError
from glim.graphs import Graph, complete_graph, empty_graph, erdos_renyi
from glim.stepgraphon import StepKernel, constant, embed_graph

from conftest import brute_cut_norm


def _as_kernel(w):
    return StepKernel(w.weights, w.values, exact=w.exact)


def random_kernel(rng, k, exact=False, nonneg=False):
    if exact:
        raw = rng.integers(1, 6, size=k)
        weights = [F(int(x), int(raw.sum())) for x in raw]
        lo = 0 if nonneg else -4
        v = rng.integers(lo, 5, size=(k, k))
        v = np.triu(v) + np.triu(v, 1).T
        return StepKernel(weights, [[F(int(x), 4) for x in row] for row in v])
    weights = rng.dirichlet(np.ones(k))
    v = rng.random((k, k)) if nonneg else rng.normal(size=(k, k))
    return StepKernel(weights, (v + v.T) / 2)


def test_examples():
    res = cut_norm_exact(_as_kernel(constant(F(1, 3))))
    assert res.value == F(1, 3) and res.S == (0,) and res.T == (0,)
    assert cut_norm_exact(_as_kernel(embed_graph(complete_graph(2)))).value == F(1, 2)
    d = StepKernel([F(1, 2), F(1, 2)], [[F(-1, 2), F(1, 2)], [F(1, 2), F(-1, 2)]])
    res = cut_norm_exact(d)
    assert res.value == F(1, 8) == brute_cut_norm(list(d.weights), d.values.tolist())
    assert (res.S, res.T) == ((0,), (1,))


def test_heuristic_examples():
    assert cut_norm_heuristic(StepKernel([F(1, 2)] * 2, [[0, 0], [0, 0]])).value == 0
    assert cut_norm_heuristic(_as_kernel(constant(F(2, 7)))).value == F(2, 7)


def test_cap():
    d = StepKernel([F(1, 17)] * 17, [[0] * 17 for _ in range(17)])
    with pytest.raises(CapExceededError, match="heuristic"):
        cut_norm_exact(d)
    assert cut_norm(d).value == 0  # auto falls back to the heuristic


def test_exact_matches_oracle():
    rng = np.random.default_rng(1)
    for _ in range(40):
        k = int(rng.integers(1, 6))
        d = random_kernel(rng, k, exact=True)
        res = cut_norm_exact(d)
        assert res.value == brute_cut_norm(list(d.weights), d.values.tolist())
        assert abs(rectangle_sum(d, res.S, res.T)) == res.value


def test_heuristic_never_exceeds_exact():
    rng = np.random.default_rng(2)
    for _ in range(50):
        d = random_kernel(rng, int(rng.integers(1, 11)))
        assert cut_norm_heuristic(d, restarts=8, seed=3).value <= cut_norm_exact(d).value + 1e-15


def test_nonnegative_is_total_mass():
    rng = np.random.default_rng(3)
    for _ in range(20):
        d = random_kernel(rng, int(rng.integers(1, 9)), exact=True, nonneg=True)
        assert cut_norm_exact(d).value == d.integral()


def test_norm_bounded_by_l1_and_symmetric():
    rng = np.random.default_rng(4)
    for _ in range(30):
        d = random_kernel(rng, int(rng.integers(1, 9)), exact=True)
        v = cut_norm_exact(d).value
        assert v <= (d.mass_matrix() * abs(d.values)).sum()
        assert cut_norm_exact(-d).value == v


def test_certificate_spot_check():
    rng = np.random.default_rng(5)
    d = random_kernel(rng, 9)
    best = cut_norm_exact(d).value
    for _ in range(1000):
        S = np.flatnonzero(rng.random(9) < 0.5)
        T = np.flatnonzero(rng.random(9) < 0.5)
        assert abs(rectangle_sum(d, S, T)) <= best + 1e-15


def test_graph_distance_examples():
    g = erdos_renyi(6, 0.5, 2)
    assert graph_cut_distance_same_order(g, g) == 0
    a = Graph(3, [(0, 1)])
    assert graph_cut_distance_same_order(a, a.relabel([2, 0, 1])) == 0
    # W_{K3} - 0 is nonnegative with mass 6/9
    val = graph_cut_distance_same_order(complete_graph(3), empty_graph(3))
    assert val == F(2, 3)
    assert val == brute_cut_norm([F(1, 3)] * 3, complete_graph(3).adjacency.astype(int).tolist())
    with pytest.raises(ValueError):
        graph_cut_distance_same_order(complete_graph(3), complete_graph(4))
    with pytest.raises(CapExceededError):
        graph_cut_distance_same_order(complete_graph(9), complete_graph(9))


def _brute_graph_cut(g, h):
    n = g.n
    a = g.adjacency.astype(int)
    b = h.adjacency.astype(int)
    best = None
    for p in itertools.permutations(range(n)):
        d = (a - b[np.ix_(p, p)]).tolist()
        v = brute_cut_norm([F(1, n)] * n, d)
        best = v if best is None else min(best, v)
    return best


def test_graph_distance_matches_oracle():
    for seed in range(6):
        g = erdos_renyi(4, 0.5, seed)
        h = erdos_renyi(4, 0.5, seed + 100)
        exact = graph_cut_distance_same_order(g, h)
        assert exact == _brute_graph_cut(g, h)
        heur = graph_cut_distance_same_order(g, h, mode="heuristic", restarts=16)
        assert heur >= float(exact) - 1e-15


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_heuristic_deterministic(seed):
    d = random_kernel(np.random.default_rng(seed), 6)
    assert cut_norm_heuristic(d, seed=seed) == cut_norm_heuristic(d, seed=seed)
