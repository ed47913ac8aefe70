"""Edit distance between graphs of the same order.

``δ̂₁(G, H) = (2 / n^2) * min_σ |E(G) △ σ(E(H))|`` over vertex bijections.

Bijections are stored as sequences ``b`` with ``b[u]`` the vertex of
``H`` matched to vertex ``u`` of ``G``.  The number of mismatches of
``b`` is the number of pairs ``{u, w}`` with ``G_uw != H_{b[u] b[w]}``.

Normalization is ``2/n^2`` throughout.  Counts stated relative to
``C(n, 2)`` convert by the factor ``n / (n - 1)``.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import CapExceededError
from .graphs import Graph

EXACT_CAP = 12


@dataclass(frozen=True)
class EditResult:
    value: Fraction
    bijection: tuple[int, ...]
    mismatches: int
    exact: bool

    def to_dict(self) -> dict:
        return {
            "value": float(self.value),
            "value_exact": str(self.value),
            "mismatches": self.mismatches,
            "exact": self.exact,
            "bijection": list(self.bijection),
        }


def _check_orders(g: Graph, h: Graph) -> int:
    if g.n != h.n:
        raise ValueError(f"graphs must have the same order, got {g.n} and {h.n}")
    return g.n


def _result(n: int, mismatches: int, bij, exact: bool) -> EditResult:
    value = Fraction(2 * mismatches, n * n) if n else Fraction(0)
    return EditResult(value, tuple(int(x) for x in bij), int(mismatches), exact)


def count_mismatches(g: Graph, h: Graph, bijection: Sequence[int]) -> int:
    """``|E(G) △ σ(E(H))|`` for ``σ`` given as ``bijection[u] in V(H)``."""
    n = _check_orders(g, h)
    b = np.asarray(bijection, dtype=np.int64)
    if sorted(b.tolist()) != list(range(n)):
        raise ValueError("bijection must be a permutation of the vertex set")
    permuted = h.adjacency[np.ix_(b, b)]
    return int(np.count_nonzero(g.adjacency != permuted)) // 2


def edit_distance_of(g: Graph, h: Graph, bijection: Sequence[int]) -> EditResult:
    """Score one given bijection (an upper bound on ``δ̂₁``)."""
    return _result(g.n, count_mismatches(g, h, bijection), bijection, exact=False)


def edge_count_bound(g: Graph, h: Graph) -> int:
    """Every bijection mismatches at least ``|e(G) - e(H)|`` pairs."""
    return abs(g.num_edges - h.num_edges)


# --- exact branch and bound ------------------------------------------------


def _residual_bound(cross: np.ndarray, du: np.ndarray, dv: np.ndarray) -> tuple[float, np.ndarray]:
    """Admissible bound on the mismatches still to come.

    For unassigned ``u`` matched to ``v``: ``cross[u, v]`` mismatches
    against the already-assigned vertices are certain, and inside the
    unassigned part every edge change moves two residual degrees by one,
    so at least ``|du - dv| / 2`` more per vertex.  The cheapest
    assignment of this combined cost is a valid bound.
    """
    cost = cross + np.abs(du[:, None] - dv[None, :]) / 2.0
    r, c = linear_sum_assignment(cost)
    return float(cost[r, c].sum()), cost


def partial_assignment_bound(g: Graph, h: Graph, pairs: Iterable[tuple[int, int]]) -> float:
    """Lower bound on the mismatches of every completion of ``pairs``.

    This is the quantity the exact search prunes with: cost of the
    decided pairs plus :func:`_residual_bound` of the rest.
    """
    n = _check_orders(g, h)
    pairs = list(pairs)
    A = g.adjacency.astype(np.int64)
    B = h.adjacency.astype(np.int64)
    gs = [u for u, _ in pairs]
    hs = [v for _, v in pairs]
    decided = int(np.count_nonzero(A[np.ix_(gs, gs)] != B[np.ix_(hs, hs)])) // 2
    U = [u for u in range(n) if u not in set(gs)]
    V = [v for v in range(n) if v not in set(hs)]
    if not U:
        return float(decided)
    cross = (A[np.ix_(U, gs)][:, None, :] != B[np.ix_(V, hs)][None, :, :]).sum(axis=2)
    du = A[np.ix_(U, U)].sum(axis=1)
    dv = B[np.ix_(V, V)].sum(axis=1)
    lb, _ = _residual_bound(cross.astype(float), du, dv)
    return decided + lb


def edit_distance_exact(g: Graph, h: Graph, cap: int = EXACT_CAP) -> EditResult:
    """Optimal bijection by branch and bound.

    Vertices of ``G`` are assigned in order of decreasing degree (ties by
    index); candidates in ``H`` are tried cheapest-first.  The incumbent
    is seeded with a short heuristic run.
    """
    n = _check_orders(g, h)
    if n > cap:
        raise CapExceededError(f"exact edit distance needs n <= {cap}, got n={n}")
    if n == 0:
        return _result(0, 0, (), exact=True)
    A = g.adjacency.astype(np.int64)
    B = h.adjacency.astype(np.int64)
    floor = edge_count_bound(g, h)
    seed_res = edit_distance_heuristic(g, h, restarts=4, seed=0)
    best_cost = seed_res.mismatches
    best_bij = list(seed_res.bijection)
    if best_cost == floor:
        return _result(n, best_cost, best_bij, exact=True)

    order = sorted(range(n), key=lambda u: (-int(A[u].sum()), u))
    cross = np.zeros((n, n), dtype=np.int64)
    du = A.sum(axis=1).astype(float)
    dv = B.sum(axis=1).astype(float)
    h_free = np.ones(n, dtype=bool)
    assign = [-1] * n
    state = {"cost": best_cost, "bij": best_bij}

    def rec(depth: int, cost: int) -> bool:
        # returns True once the edge-count floor is reached (nothing can beat it)
        if depth == n:
            if cost < state["cost"]:
                state["cost"] = cost
                state["bij"] = assign.copy()
            return state["cost"] == floor
        U = order[depth:]
        V = np.flatnonzero(h_free)
        lb, cost_mat = _residual_bound(cross[np.ix_(U, V)].astype(float), du[U], dv[V])
        if cost + np.ceil(lb - 1e-9) >= state["cost"]:
            return False
        u = U[0]
        row = cost_mat[0]
        for idx in np.argsort(row, kind="stable"):
            v = int(V[idx])
            add = int(cross[u, v])
            if cost + add >= state["cost"]:
                continue
            assign[u] = v
            h_free[v] = False
            du[:] -= A[u]
            dv[:] -= B[v]
            delta = (A[:, u][:, None] != B[:, v][None, :]).astype(np.int64)
            cross[:] += delta
            done = rec(depth + 1, cost + add)
            cross[:] -= delta
            du[:] += A[u]
            dv[:] += B[v]
            h_free[v] = True
            assign[u] = -1
            if done:
                return True
        return False

    rec(0, 0)
    return _result(n, state["cost"], state["bij"], exact=True)


# --- heuristic search ------------------------------------------------------


def _hill_climb(A: np.ndarray, B: np.ndarray, bij: np.ndarray, floor: int) -> tuple[int, np.ndarray]:
    """Best-improvement 2-swap descent.

    With ``P = B[b][:, b]`` and ``C = A P``, swapping the images of ``a``
    and ``c`` changes the mismatch count by
    ``-2 (C_ac + C_ca - C_aa - C_cc + 2 A_ac P_ac)``, so one matrix
    product prices the whole neighbourhood.
    """
    bij = bij.copy()
    P = B[np.ix_(bij, bij)]
    cost = int(np.count_nonzero(A != P)) // 2
    while cost > floor:
        C = A @ P
        diag = np.diagonal(C)
        delta = -2.0 * (C + C.T - diag[:, None] - diag[None, :] + 2.0 * A * P)
        np.fill_diagonal(delta, 0.0)
        flat = int(np.argmin(delta))
        a, c = divmod(flat, A.shape[0])
        gain = delta[a, c]
        if gain >= -0.5:
            break
        bij[a], bij[c] = bij[c], bij[a]
        P[[a, c], :] = P[[c, a], :]
        P[:, [a, c]] = P[:, [c, a]]
        cost += int(round(gain))
    return cost, bij


def _degree_sorted_start(g_deg: np.ndarray, h_deg: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    n = g_deg.size
    g_order = np.lexsort((rng.random(n), -g_deg))
    h_order = np.lexsort((rng.random(n), -h_deg))
    bij = np.empty(n, dtype=np.int64)
    bij[g_order] = h_order
    return bij


def _starts(g: Graph, h: Graph, restarts: int, seed: int, starts) -> list:
    n = g.n
    out = [np.arange(n, dtype=np.int64)]
    for s in starts or ():
        s = np.asarray(s, dtype=np.int64)
        if sorted(s.tolist()) != list(range(n)):
            raise ValueError("start bijection must be a permutation")
        out.append(s)
    g_deg, h_deg = g.degrees, h.degrees
    for i, child in enumerate(np.random.SeedSequence(seed).spawn(max(0, restarts))):
        rng = np.random.default_rng(child)
        # alternate structured (degree-sorted) and fully random starts
        if i % 2 == 0:
            out.append(_degree_sorted_start(g_deg, h_deg, rng))
        else:
            out.append(rng.permutation(n).astype(np.int64))
    return out


def heuristic_pool(g: Graph, h: Graph, restarts: int = 32, seed: int = 0,
                   starts: Iterable[Sequence[int]] | None = None,
                   threads: int = 1, stop_at_floor: bool = False) -> list[tuple[int, tuple[int, ...]]]:
    """Local optima ``(mismatches, bijection)`` from every start, in start order.

    Start 0 is the identity, then any caller-supplied ``starts``, then
    ``restarts`` seeded starts.  With ``stop_at_floor`` the run ends at
    the first start that reaches ``|e(G) - e(H)|``.
    """
    n = _check_orders(g, h)
    if n == 0:
        return [(0, ())]
    A = g.adjacency.astype(float)
    B = h.adjacency.astype(float)
    floor = edge_count_bound(g, h)
    init = _starts(g, h, restarts, seed, starts)

    def run(b):
        cost, bij = _hill_climb(A, B, b, floor)
        return cost, tuple(bij.tolist())

    pool = []
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            for res in ex.map(run, init):
                pool.append(res)
    else:
        for b in init:
            pool.append(run(b))
            if stop_at_floor and pool[-1][0] == floor:
                break
    if stop_at_floor:
        # the same prefix is kept regardless of thread count
        for i, (cost, _) in enumerate(pool):
            if cost == floor:
                return pool[: i + 1]
    return pool


def edit_distance_heuristic(g: Graph, h: Graph, restarts: int = 32, seed: int = 0,
                            starts: Iterable[Sequence[int]] | None = None,
                            threads: int = 1) -> EditResult:
    """Best 2-swap local optimum over identity, given and seeded starts (upper bound)."""
    n = _check_orders(g, h)
    pool = heuristic_pool(g, h, restarts, seed, starts, threads, stop_at_floor=True)
    cost, bij = min(pool, key=lambda item: item[0])
    return _result(n, cost, bij, exact=False)


def edit_distance(g: Graph, h: Graph, exact: bool | None = None, restarts: int = 32,
                  seed: int = 0, cap: int = EXACT_CAP) -> EditResult:
    if exact is None:
        exact = g.n <= cap
    if exact:
        return edit_distance_exact(g, h, cap=cap)
    return edit_distance_heuristic(g, h, restarts=restarts, seed=seed)
