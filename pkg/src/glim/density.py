"""Homomorphism densities ``t(F, G)``, ``t(F, W)`` and edge density.

Two independent evaluation routes are provided:

* ``"enumerate"``: walk every map ``V(F) -> parts`` (vertices of ``G`` or
  parts of ``W``), pruning partial maps that already have weight zero.
  This is the reference route.
* ``"contract"``: a tensor contraction (``numpy.einsum``) over one
  adjacency/value operand per edge of ``F`` and one weight vector per
  vertex.  Exact integer or ``Fraction`` arithmetic is kept.

``"auto"`` enumerates when the map space has at most ``ENUM_LIMIT``
elements and contracts otherwise.  Isolated vertices of ``F`` contribute
a factor of one (their part weights sum to one).
"""
from __future__ import annotations

import string
from fractions import Fraction

import numpy as np

from .errors import CapExceededError
from .graphs import Graph
from .stepgraphon import StepKernel, embed_graph

DEFAULT_CAP = 5
ENUM_LIMIT = 2_000_000


def _check_cap(f: Graph, cap: int | None) -> None:
    if f.n < 1:
        raise ValueError("motif must have at least one vertex")
    if cap is not None and f.n > cap:
        raise CapExceededError(
            f"instance too large: motif has {f.n} vertices, cap is {cap} "
            "(pass cap=None to override)"
        )


def _vertex_order(f: Graph) -> list[int]:
    # place each next vertex so it has as many already-placed neighbours as possible
    order: list[int] = []
    rest = set(range(f.n))
    adj = f.adjacency
    while rest:
        best = max(rest, key=lambda v: (sum(adj[v, u] for u in order), f.degrees[v], -v))
        order.append(best)
        rest.remove(best)
    return order


def _enumerate(f: Graph, weights, matrix, one):
    """Sum over maps ``c`` of ``prod_v weights[c(v)] * prod_{uv in E(F)} matrix[c(u), c(v)]``."""
    order = _vertex_order(f)
    back = [[order.index(u) for u in range(f.n) if f.adjacency[v, u] and order.index(u) < d]
            for d, v in enumerate(order)]
    k = len(weights)
    rows = [list(r) for r in matrix]
    wts = list(weights)
    chosen = [0] * f.n

    def rec(depth: int, acc):
        if depth == f.n:
            return acc
        total = 0 * one
        earlier = back[depth]
        for c in range(k):
            val = acc * wts[c]
            for d in earlier:
                x = rows[chosen[d]][c]
                if not x:
                    val = 0
                    break
                val = val * x
            if not val:
                continue
            chosen[depth] = c
            total = total + rec(depth + 1, val)
        return total

    return rec(0, one)


def _contract(f: Graph, weights: np.ndarray, matrix: np.ndarray):
    letters = string.ascii_letters
    if f.n > len(letters):
        raise CapExceededError("motif too large for contraction")
    terms, ops = [], []
    for v in range(f.n):
        terms.append(letters[v])
        ops.append(weights)
    for u, v in f.sorted_edges():
        terms.append(letters[u] + letters[v])
        ops.append(matrix)
    expr = ",".join(terms) + "->"
    return np.einsum(expr, *ops, optimize="greedy" if matrix.dtype != object else False)


def hom_count(f: Graph, g: Graph, method: str = "auto") -> int:
    """Number of homomorphisms ``F -> G``."""
    if method == "auto":
        method = "enumerate" if g.n ** f.n <= ENUM_LIMIT else "contract"
    if method == "enumerate":
        # integer weights of one make this a plain count
        return int(_enumerate(f, [1] * g.n, g.adjacency.astype(int).tolist(), 1))
    if method == "contract":
        dtype = np.int64 if g.n ** f.n < 2**62 else object
        ones = np.ones(g.n, dtype=dtype)
        return int(_contract(f, ones, g.adjacency.astype(dtype)))
    raise ValueError(f"unknown method {method!r}")


def density_graph(f: Graph, g: Graph, cap: int | None = DEFAULT_CAP,
                  method: str = "auto") -> Fraction:
    """``t(F, G)``: probability that a uniform random map ``V(F) -> V(G)`` is a homomorphism."""
    _check_cap(f, cap)
    if g.n < 1:
        raise ValueError("host graph must have at least one vertex")
    return Fraction(hom_count(f, g, method), g.n ** f.n)


def density_graphon(f: Graph, w: StepKernel, cap: int | None = DEFAULT_CAP,
                    method: str = "auto"):
    """``t(F, W)`` for a step graphon (or kernel): exact in exact mode."""
    _check_cap(f, cap)
    if method == "auto":
        method = "enumerate" if w.k ** f.n <= ENUM_LIMIT else "contract"
    if method == "enumerate":
        one = Fraction(1) if w.exact else 1.0
        res = _enumerate(f, w.weights.tolist(), w.values.tolist(), one)
    elif method == "contract":
        res = _contract(f, w.weights, w.values)
    else:
        raise ValueError(f"unknown method {method!r}")
    return Fraction(res) if w.exact else float(res)


def density(f: Graph, x, cap: int | None = DEFAULT_CAP, method: str = "auto"):
    if isinstance(x, Graph):
        return density_graph(f, x, cap=cap, method=method)
    return density_graphon(f, x, cap=cap, method=method)


def edge_density(x):
    """``ρ``: ``2e/n^2`` for graphs, ``sum λ_i λ_j W_ij`` for step graphons."""
    if isinstance(x, Graph):
        if x.n == 0:
            raise ValueError("edge density of the empty vertex set is undefined")
        return Fraction(2 * x.num_edges, x.n**2)
    res = x.integral()
    return Fraction(res) if x.exact else float(res)


def graphon_of(x) -> StepKernel:
    return embed_graph(x) if isinstance(x, Graph) else x
