"""Edge-density maximization over ``K_{r+1}``-free step graphons.

A step graphon with 0/1 values whose support pattern is a graph ``F`` is
the same thing as ``F`` with vertex weights; it is ``K_{r+1}``-free iff
``F`` is.  Its edge density is the Motzkin–Straus form ``w^T A_F w``, so
the extremal question on this search space is a standard quadratic
program over the simplex.  For ``F = K_r`` the optimum is ``(r-1)/r`` at
the uniform weights.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CapExceededError, InvariantError
from .graphs import Graph
from .stepgraphon import StepGraphon, StepKernel, degree_function

MULTIPARTITE_CAP = 12
_MONOTONE_SLACK = 1e-14


@dataclass
class ExtremalResult:
    weights: np.ndarray
    value: float
    start: int
    iterations: int

    def graphon(self, template: Graph) -> StepGraphon:
        return weighted_template_graphon(template, self.weights)

    def to_dict(self, template: Graph) -> dict:
        return {"value": self.value, "weights": self.weights.tolist(),
                "regularity_gap": float(degree_regularity_gap(self.graphon(template)))}


def weighted_template_graphon(template: Graph, weights) -> StepGraphon:
    w = np.asarray(weights, dtype=float)
    w = w / w.sum()
    return StepGraphon(w, template.adjacency.astype(float), exact=False)


def _replicator(M: np.ndarray, w: np.ndarray, tol: float, max_iter: int) -> tuple[np.ndarray, float, int]:
    value = float(w @ M @ w)
    it = 0
    for it in range(1, max_iter + 1):
        mw = M @ w
        w_new = w * mw / value
        w_new /= w_new.sum()
        new_value = float(w_new @ M @ w_new)
        if new_value < value - _MONOTONE_SLACK:
            raise InvariantError(f"replicator step decreased the objective: {value} -> {new_value}")
        w, gain = w_new, new_value - value
        value = max(value, new_value)
        if gain <= tol:
            break
    return w, value, it


def clique_density_optimize(template: Graph, tol: float = 1e-9, seed: int = 0,
                            restarts: int = 8, max_iter: int = 100_000) -> ExtremalResult:
    """Maximize ``2 * sum_{ij in E(template)} w_i w_j`` over the probability simplex.

    Replicator updates ``w_i <- w_i (M w)_i / (w^T M w)`` from the uniform
    point and ``restarts`` random interior points; each run stops once a
    step gains at most ``tol``.  Ties keep the earliest start.
    """
    if template.n == 0 or template.num_edges == 0:
        raise ValueError("template must have at least one edge")
    M = template.adjacency.astype(float)
    k = template.n
    starts = [np.full(k, 1.0 / k)]
    for child in np.random.SeedSequence(seed).spawn(restarts):
        starts.append(np.random.default_rng(child).dirichlet(np.ones(k)))
    best = None
    for idx, w0 in enumerate(starts):
        w, value, it = _replicator(M, w0, tol, max_iter)
        if best is None or value > best.value:
            best = ExtremalResult(w, value, idx, it)
    return best


def degree_regularity_gap(w: StepKernel):
    """``max_i |W_*(part i) - ρ(W)|``; zero for degree-regular graphons."""
    deg = degree_function(w)
    rho = (w.weights * deg).sum()
    gap = max(abs(d - rho) for d in deg)
    return Fraction(gap) if w.exact else float(gap)


def nearest_multipartite(w: StepKernel, r: int, cap: int = MULTIPARTITE_CAP):
    """Closest complete ``r``-partite graphon in ``ℓ₁`` among part-to-class assignments.

    Returns ``(distance, classes)`` where ``classes[i]`` is the class of
    part ``i``.  Part 0 is pinned to class 0 since classes are unlabeled.
    Classes may be empty (measure zero).
    """
    k = w.k
    if r < 1:
        raise ValueError("r must be >= 1")
    if k > cap:
        raise CapExceededError(f"{k} parts exceeds the exhaustive cap {cap}")
    mass = w.mass_matrix()
    vals = w.values
    cost_cross = mass * abs(vals - 1)  # parts in different classes: target value 1
    cost_same = mass * abs(vals)  # same class: target value 0
    fc = np.asarray(cost_cross, dtype=float)
    diff = np.asarray(cost_same, dtype=float) - fc
    base = fc.sum()

    def assignments():
        for rest in itertools.product(range(r), repeat=k - 1):
            yield (0,) + rest

    best_val, candidates = np.inf, []
    chunk = []

    def flush():
        nonlocal best_val, candidates
        a = np.array(chunk)
        same = a[:, :, None] == a[:, None, :]
        vals_f = base + (same * diff).sum(axis=(1, 2))
        lo = vals_f.min()
        if lo < best_val - 1e-9:
            best_val, candidates = lo, []
        near = np.flatnonzero(vals_f <= best_val + 1e-9)
        candidates.extend(tuple(a[i]) for i in near)
        chunk.clear()

    for c in assignments():
        chunk.append(c)
        if len(chunk) == 1 << 15:
            flush()
    if chunk:
        flush()

    def exact_value(classes):
        same = np.equal.outer(classes, classes)
        return np.where(same, cost_same, cost_cross).sum()

    scored = [(exact_value(np.array(c)), c) for c in candidates]
    value, classes = min(scored, key=lambda item: item[0])
    return (Fraction(value) if w.exact else float(value)), tuple(int(x) for x in classes)


def l1_to_multipartite(w: StepKernel, r: int, cap: int = MULTIPARTITE_CAP):
    """``ℓ₁`` distance from ``w`` to the nearest induced complete ``r``-partite graphon."""
    return nearest_multipartite(w, r, cap)[0]
