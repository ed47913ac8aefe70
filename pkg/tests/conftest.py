"""Independent brute-force oracles shared by the test modules.

Nothing here calls into the code under test beyond the ``Graph`` type.
"""
from __future__ import annotations

import functools
import itertools
from fractions import Fraction

import numpy as np
import pytest

from glim.graphs import Graph


@functools.lru_cache(maxsize=None)
def nonisomorphic_graphs(n: int) -> tuple[Graph, ...]:
    """All graphs on ``n`` vertices up to isomorphism (canonical = least relabeled edge list)."""
    pairs = list(itertools.combinations(range(n), 2))
    perms = list(itertools.permutations(range(n)))
    seen, out = set(), []
    for mask in range(1 << len(pairs)):
        es = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
        canon = min(
            tuple(sorted(tuple(sorted((p[u], p[v]))) for u, v in es)) for p in perms
        )
        if canon not in seen:
            seen.add(canon)
            out.append(Graph(n, canon))
    return tuple(out)


def brute_mismatches(g: Graph, h: Graph) -> int:
    best = None
    for perm in itertools.permutations(range(g.n)):
        cnt = sum(
            1
            for u, v in itertools.combinations(range(g.n), 2)
            if g.has_edge(u, v) != h.has_edge(perm[u], perm[v])
        )
        best = cnt if best is None else min(best, cnt)
    return best


def brute_hom_density(f: Graph, g: Graph) -> Fraction:
    good = 0
    for phi in itertools.product(range(g.n), repeat=f.n):
        if all(g.has_edge(phi[u], phi[v]) for u, v in f.edges):
            good += 1
    return Fraction(good, g.n ** f.n)


def brute_delta1_objective(g: Graph, h: Graph, alpha) -> object:
    """Explicit sum over quadruples (i, j, g', h') with exactly one relation an edge."""
    a = np.asarray(alpha, dtype=object)
    total = 0
    for i, j in itertools.product(range(g.n), repeat=2):
        for p, q in itertools.product(range(h.n), repeat=2):
            if g.has_edge(i, j) != h.has_edge(p, q):
                total += a[i, p] * a[j, q]
    return total


def brute_cut_norm(weights, values) -> object:
    k = len(weights)
    best = 0
    for smask in range(1 << k):
        for tmask in range(1 << k):
            s = sum(
                weights[i] * weights[j] * values[i][j]
                for i in range(k)
                if smask >> i & 1
                for j in range(k)
                if tmask >> j & 1
            )
            best = max(best, abs(s))
    return best


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
