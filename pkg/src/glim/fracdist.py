"""Fractional overlay distance ``δ₁`` between graphs of possibly different orders.

For graphs ``G`` (order ``m``) and ``H`` (order ``n``) an *overlay* is a
non-negative ``m x n`` matrix ``A`` with row sums ``1/m`` and column
sums ``1/n``.  Its cost is

    δ₁(G, H, A) = sum over (i, j, g, h) with G_ij XOR H_gh of A_ig A_jh,

with the diagonal quadruples (``i == j`` or ``g == h``) included.  Since
``G_ij XOR H_gh = G_ij + H_gh - 2 G_ij H_gh`` the cost is ``<A, Q(A)>``
for the symmetric linear map

    Q(X) = (G X 1) 1^T + 1 (1^T X H) - 2 G X H,

which is what every routine here evaluates (``O(m^2 n + m n^2)``).
Minimizing over overlays is a non-convex quadratic program; only upper
bounds are certified.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment, linprog

from . import editdist
from .errors import InvariantError
from .graphs import Graph, blow_up, example_4_1_blowup_bijection, lcm

OVERLAY_TOL = 1e-12


class OverlayMatrix:
    """Non-negative ``m x n`` matrix with row sums ``1/m`` and column sums ``1/n``."""

    __slots__ = ("alpha", "m", "n", "exact")

    def __init__(self, alpha, exact: bool | None = None):
        a = np.array(alpha, dtype=object)
        if exact is None:
            exact = all(isinstance(x, (int, Fraction)) and not isinstance(x, bool)
                        for x in a.reshape(-1))
        if exact:
            a = np.vectorize(Fraction, otypes=[object])(a) if a.size else a
        else:
            a = np.array(alpha, dtype=float)
        if a.ndim != 2 or 0 in a.shape:
            raise ValueError("overlay must be a non-empty 2-d matrix")
        m, n = a.shape
        rows, cols = a.sum(axis=1), a.sum(axis=0)
        if exact:
            ok_rows = all(r == Fraction(1, m) for r in rows)
            ok_cols = all(c == Fraction(1, n) for c in cols)
            ok_sign = all(x >= 0 for x in a.reshape(-1))
        else:
            ok_rows = np.all(np.abs(rows - 1.0 / m) <= OVERLAY_TOL)
            ok_cols = np.all(np.abs(cols - 1.0 / n) <= OVERLAY_TOL)
            ok_sign = bool(np.all(a >= 0))
        if not ok_sign:
            raise ValueError("overlay entries must be non-negative")
        if not ok_rows:
            raise ValueError(f"overlay rows must sum to 1/{m}")
        if not ok_cols:
            raise ValueError(f"overlay columns must sum to 1/{n}")
        a.setflags(write=False)
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "exact", bool(exact))

    def __setattr__(self, name, value):
        raise AttributeError("OverlayMatrix is immutable")

    @classmethod
    def uniform(cls, m: int, n: int, exact: bool = False) -> OverlayMatrix:
        if exact:
            return cls([[Fraction(1, m * n)] * n for _ in range(m)], exact=True)
        return cls(np.full((m, n), 1.0 / (m * n)), exact=False)

    @classmethod
    def from_bijection(cls, bijection: Sequence[int], exact: bool = False) -> OverlayMatrix:
        """``α[u, b[u]] = 1/n``."""
        n = len(bijection)
        if exact:
            a = np.full((n, n), Fraction(0), dtype=object)
            for u, v in enumerate(bijection):
                a[u, v] = Fraction(1, n)
            return cls(a, exact=True)
        a = np.zeros((n, n))
        a[np.arange(n), np.asarray(bijection)] = 1.0 / n
        return cls(a, exact=False)

    @classmethod
    def from_blowup_bijection(cls, m: int, n: int, bijection: Sequence[int],
                              exact: bool = True) -> OverlayMatrix:
        """Collapse a bijection between blow-ups of common order ``N``.

        Copy ``c`` of vertex ``x`` of the first graph is ``x*(N/m) + c``
        (likewise for the second); ``α[x, y]`` is the number of copies of
        ``x`` sent to copies of ``y``, divided by ``N``.
        """
        N = len(bijection)
        if N % m or N % n:
            raise ValueError("blow-up order must be a multiple of both orders")
        kg, kh = N // m, N // n
        counts = np.zeros((m, n), dtype=np.int64)
        for u, v in enumerate(bijection):
            counts[u // kg, v // kh] += 1
        if exact:
            return cls([[Fraction(int(c), N) for c in row] for row in counts], exact=True)
        return cls(counts / N, exact=False)

    def transpose(self) -> OverlayMatrix:
        return OverlayMatrix(self.alpha.T, exact=self.exact)

    def block_expand(self, k: int) -> OverlayMatrix:
        """Overlay between ``k``-fold blow-ups: each entry becomes a ``k x k`` block of ``α/k²``."""
        return OverlayMatrix(np.kron(self.alpha, np.full((k, k), Fraction(1, k * k) if self.exact
                                                         else 1.0 / (k * k), dtype=object if self.exact else float)),
                             exact=self.exact)

    def to_float(self) -> np.ndarray:
        return self.alpha.astype(float)

    def to_dict(self) -> dict:
        enc = (lambda x: str(x)) if self.exact else float
        return {"m": self.m, "n": self.n, "alpha": [[enc(x) for x in row] for row in self.alpha]}


# --- objective ---------------------------------------------------------------


def _q_map(Ga: np.ndarray, Ha: np.ndarray, X: np.ndarray) -> np.ndarray:
    row = Ga.dot(X.sum(axis=1))
    col = X.sum(axis=0).dot(Ha)
    return row[:, None] + col[None, :] - 2 * Ga.dot(X).dot(Ha)


def _adjacency(g: Graph, exact: bool) -> np.ndarray:
    return g.adjacency.astype(int).astype(object) if exact else g.adjacency.astype(float)


def delta1_objective(g: Graph, h: Graph, a: OverlayMatrix):
    """``δ₁(G, H, A)``; a ``Fraction`` when ``a`` is exact."""
    if (a.m, a.n) != (g.n, h.n):
        raise ValueError(f"overlay is {a.m}x{a.n} but graphs have orders {g.n} and {h.n}")
    if not a.exact:
        Ga, Ha = _adjacency(g, False), _adjacency(h, False)
        return float((a.alpha * _q_map(Ga, Ha, a.alpha)).sum())
    # clear denominators and work over the integers
    den = 1
    for x in a.alpha.reshape(-1):
        den = den * x.denominator // math.gcd(den, x.denominator)
    X = np.array([[int(x * den) for x in row] for row in a.alpha], dtype=object)
    small = den**2 * (a.m * a.n) ** 2 < 2**62
    dtype = np.int64 if small else object
    X = X.astype(dtype)
    Ga = g.adjacency.astype(dtype)
    Ha = h.adjacency.astype(dtype)
    return Fraction(int((X * _q_map(Ga, Ha, X)).sum()), den * den)


def delta1_gradient(g: Graph, h: Graph, alpha: np.ndarray) -> np.ndarray:
    """Gradient of the cost at ``alpha``: ``2 Q(alpha)``."""
    return 2.0 * _q_map(g.adjacency.astype(float), h.adjacency.astype(float), np.asarray(alpha, float))


def delta1_lower(g: Graph, h: Graph) -> Fraction:
    """``|ρ(G) - ρ(H)|``, a lower bound on ``δ₁(G, H, A)`` for every overlay.

    The cost is ``sum A_ig A_jh |G_ij - H_gh|``, which dominates
    ``|sum A_ig A_jh (G_ij - H_gh)|``; the marginals turn the latter into
    the density gap.
    """
    return abs(Fraction(2 * g.num_edges, g.n**2) - Fraction(2 * h.num_edges, h.n**2))


# --- conditional gradient --------------------------------------------------------


def transport_vertex(cost: np.ndarray) -> np.ndarray:
    """Minimizer of ``<cost, X>`` over overlays, at a vertex of the polytope."""
    m, n = cost.shape
    if m == n:
        r, c = linear_sum_assignment(cost)
        x = np.zeros((m, n))
        x[r, c] = 1.0 / n
        return x
    # rows carry n units, columns m units: integral data keeps the simplex exact
    a_eq = np.zeros((m + n, m * n))
    for i in range(m):
        a_eq[i, i * n:(i + 1) * n] = 1.0
    for j in range(n):
        a_eq[m + j, j::n] = 1.0
    b_eq = np.concatenate([np.full(m, float(n)), np.full(n, float(m))])
    res = linprog(cost.reshape(-1), A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs-ds")
    if res.status != 0:
        raise RuntimeError(f"transportation LP failed: {res.message}")
    x = np.clip(res.x.reshape(m, n), 0.0, None) / (m * n)
    return _project_marginals(x)


def _project_marginals(x: np.ndarray) -> np.ndarray:
    # clean solver round-off so the overlay invariants hold to 1e-12
    m, n = x.shape
    for _ in range(5):
        x = x * ((1.0 / m) / np.where(x.sum(axis=1) > 0, x.sum(axis=1), 1.0))[:, None]
        x = x * ((1.0 / n) / np.where(x.sum(axis=0) > 0, x.sum(axis=0), 1.0))[None, :]
    return x


@dataclass
class FWRun:
    label: str
    start_value: float
    value: float
    alpha: np.ndarray
    iterations: int
    history: list[float] = field(default_factory=list)


def frank_wolfe(g: Graph, h: Graph, start: np.ndarray, label: str = "",
                start_value: float | None = None, max_iter: int = 500,
                rel_tol: float = 1e-9) -> FWRun:
    """Conditional gradient with exact line search from one start.

    Along ``A + t D`` the cost is ``f + 2t <D, Q(A)> + t² <D, Q(D)>``;
    the step minimizes this on ``[0, 1]``.  A step is only taken if the
    recomputed cost does not increase, so the history is monotone.
    """
    Ga, Ha = g.adjacency.astype(float), h.adjacency.astype(float)
    A = np.array(start, dtype=float)
    QA = _q_map(Ga, Ha, A)
    f = float((A * QA).sum())
    if start_value is not None:
        f = min(f, float(start_value))
    best_alpha, best_f = A.copy(), f
    history = [f]
    it = 0
    for it in range(1, max_iter + 1):
        S = transport_vertex(2.0 * QA)
        D = S - A
        slope = 2.0 * float((D * QA).sum())
        if slope >= 0.0:
            break
        QD = _q_map(Ga, Ha, D)
        curv = float((D * QD).sum())
        t = 1.0 if curv <= 0.0 else min(1.0, -slope / (2.0 * curv))
        A_new = A + t * D
        QA_new = _q_map(Ga, Ha, A_new)
        f_new = float((A_new * QA_new).sum())
        if f_new > f:
            break
        improvement = f - f_new
        A, QA, f = A_new, QA_new, f_new
        history.append(f)
        if f < best_f:
            best_alpha, best_f = A.copy(), f
        if f <= 0.0 or improvement <= rel_tol * max(f, 1e-300):
            break
    for prev, cur in zip(history, history[1:]):
        if cur > prev:
            raise InvariantError("conditional-gradient cost increased")
    return FWRun(label, history[0], best_f, _project_marginals(best_alpha), it, history)


@dataclass
class Delta1Result:
    value: float
    overlay: OverlayMatrix
    start: str
    runs: list[FWRun]

    def to_dict(self) -> dict:
        return {"upper": self.value, "start": self.start,
                "starts": {r.label: {"start_value": r.start_value, "value": r.value,
                                     "iterations": r.iterations} for r in self.runs}}


def delta1_upper(g: Graph, h: Graph, starts: int = 8, seed: int = 0, max_iter: int = 500,
                 rel_tol: float = 1e-9, edit_bijection: Sequence[int] | None = None,
                 extra_starts: Mapping[str, OverlayMatrix] | None = None,
                 threads: int = 1) -> Delta1Result:
    """Best overlay found by conditional gradient from several starts.

    Starts: the uniform overlay; when ``m == n`` the best edit-distance
    bijection (``edit_bijection`` if given, else exact search for
    ``n <= 12`` and the heuristic beyond); any ``extra_starts``; then
    random vertices of the polytope up to ``starts`` in total.  Bijection
    starts are scored by their exact mismatch count, so the result never
    exceeds the edit distance of the seeding bijection.
    """
    m, n = g.n, h.n
    rng_seq = np.random.SeedSequence(seed)
    jobs: list[tuple[str, np.ndarray, float | None]] = [
        ("uniform", np.full((m, n), 1.0 / (m * n)), None)
    ]
    if m == n:
        if edit_bijection is None:
            edit_bijection = editdist.edit_distance(g, h, seed=seed).bijection
        mis = editdist.count_mismatches(g, h, edit_bijection)
        jobs.append(("edit", OverlayMatrix.from_bijection(edit_bijection).to_float(),
                     float(Fraction(2 * mis, n * n))))
    for name, ov in (extra_starts or {}).items():
        if (ov.m, ov.n) != (m, n):
            raise ValueError(f"start {name!r} has the wrong shape")
        exact_val = delta1_objective(g, h, ov) if ov.exact else None
        jobs.append((name, ov.to_float(), None if exact_val is None else float(exact_val)))
    n_random = max(0, starts - len(jobs))
    for i, child in enumerate(rng_seq.spawn(n_random)):
        rng = np.random.default_rng(child)
        jobs.append((f"random{i}", transport_vertex(rng.standard_normal((m, n))), None))

    def run(job):
        label, alpha, val = job
        return frank_wolfe(g, h, alpha, label=label, start_value=val,
                           max_iter=max_iter, rel_tol=rel_tol)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            runs = list(ex.map(run, jobs))
    else:
        runs = [run(j) for j in jobs]
    best = min(runs, key=lambda r: r.value)
    return Delta1Result(best.value, OverlayMatrix(best.alpha, exact=False), best.label, runs)


def delta1_blowup_upper(g: Graph, h: Graph, k: int = 1, exact: bool | None = None,
                        bijection: Sequence[int] | None = None, restarts: int = 32,
                        seed: int = 0, cap: int = editdist.EXACT_CAP) -> editdist.EditResult:
    """Edit distance between blow-ups of ``g`` and ``h`` to the common order ``k * lcm``.

    Any bijection between the blow-ups collapses to an overlay of the
    same cost, so the value bounds ``δ₁(g, h)`` from above.  With
    ``bijection`` given, just that bijection is scored.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    order = k * lcm(g.n, h.n)
    gb = blow_up(g, order // g.n)
    hb = blow_up(h, order // h.n)
    if bijection is not None:
        return editdist.edit_distance_of(gb, hb, bijection)
    if exact is None:
        exact = order <= cap
    if exact:
        return editdist.edit_distance_exact(gb, hb, cap=cap)
    return editdist.edit_distance_heuristic(gb, hb, restarts=restarts, seed=seed)


def example_4_1_starts(n: int) -> dict[str, OverlayMatrix]:
    """Named exact starts for the two-graph construction of order ``5n + 20``."""
    order = 5 * n + 20
    return {
        "identity": OverlayMatrix.from_bijection(list(range(order)), exact=True),
        "blowup_shift": OverlayMatrix.from_blowup_bijection(
            order, order, example_4_1_blowup_bijection(n), exact=True),
    }


# --- equal-coefficient permutation approximation ------------------------------


@dataclass
class PermutationDecomposition:
    m: int
    perms: list[tuple[int, ...]]
    residual_inf_norm: float
    extracted: int

    @property
    def bound(self) -> float:
        n = len(self.perms[0]) if self.perms else 0
        return (n + 1) ** 2 / (2 * self.m * n)

    def average(self) -> np.ndarray:
        n = len(self.perms[0])
        P = np.zeros((n, n))
        for p in self.perms:
            P[np.arange(n), p] += 1.0
        return P / (self.m * n)

    def to_dict(self) -> dict:
        return {"residual": self.residual_inf_norm, "bound": self.bound,
                "extracted": self.extracted, "perms": [list(p) for p in self.perms]}


def birkhoff_approximate(a: OverlayMatrix, m_count: int, tol: float = 1e-9) -> PermutationDecomposition:
    """Approximate ``A`` by an average of ``m_count`` permutation overlays.

    Permutations ``P_1, P_2, ...`` are peeled off while ``P_1 + ... +
    P_i <= m n A`` still admits one more: a perfect matching inside the
    entries of ``B = m n A - sum P`` that are at least one.  Each step
    takes the heaviest such matching; when none exists (Hall's condition
    fails) the remaining slots are filled with heaviest matchings of
    ``B`` without the support restriction.  The entrywise error is at
    most ``(n+1)^2 / (2 m n)``; this is checked before returning.
    """
    if a.m != a.n:
        raise ValueError("Birkhoff approximation needs a square overlay")
    if m_count < 1:
        raise ValueError("m_count must be >= 1")
    n = a.n
    A = a.to_float()
    B = m_count * n * A
    perms: list[tuple[int, ...]] = []
    extracted = 0
    rows = np.arange(n)
    while len(perms) < m_count:
        cost = np.where(B >= 1.0 - tol, -B, np.inf)
        try:
            _, cols = linear_sum_assignment(cost)
        except ValueError:
            break
        B[rows, cols] -= 1.0
        perms.append(tuple(cols.tolist()))
        extracted += 1
    while len(perms) < m_count:
        _, cols = linear_sum_assignment(-B)
        B[rows, cols] -= 1.0
        perms.append(tuple(cols.tolist()))
    dec = PermutationDecomposition(m_count, perms, 0.0, extracted)
    dec.residual_inf_norm = float(np.abs(A - dec.average()).max())
    if dec.residual_inf_norm > dec.bound + 1e-12:
        raise InvariantError(
            f"residual {dec.residual_inf_norm} exceeds (n+1)^2/(2mn) = {dec.bound}")
    return dec


def sinkhorn_scale(matrix: np.ndarray, tol: float = 1e-15, max_iter: int = 10_000) -> np.ndarray:
    """Alternately normalize rows and columns of a positive matrix to sum 1."""
    x = np.array(matrix, dtype=float)
    if np.any(x <= 0):
        raise ValueError("Sinkhorn scaling needs a strictly positive matrix")
    for _ in range(max_iter):
        x /= x.sum(axis=1, keepdims=True)
        x /= x.sum(axis=0, keepdims=True)
        if np.abs(x.sum(axis=1) - 1.0).max() < tol:
            break
    return x


# --- the factor-3 relation ---------------------------------------------------------


@dataclass
class Factor3Report:
    edit: editdist.EditResult
    upper: float
    lower: Fraction
    certified: bool
    passed: bool
    ratio: float | None
    note: str

    def to_dict(self) -> dict:
        return {"edit_value": float(self.edit.value), "edit_mismatches": self.edit.mismatches,
                "upper": self.upper, "lower": float(self.lower), "certified": self.certified,
                "passed": self.passed, "ratio": self.ratio, "note": self.note}


def factor3_check(g: Graph, h: Graph, exact: bool = True, starts: int = 8, seed: int = 0,
                  restarts: int = 32, extra_starts: Mapping[str, OverlayMatrix] | None = None,
                  edit_starts: Sequence[Sequence[int]] | None = None) -> Factor3Report:
    """Compare the edit distance with three times the ``δ₁`` upper bound.

    In exact mode the edit distance is optimal and ``δ̂₁ <= 3 δ₁ <= 3 upper``
    must hold; a violation raises :class:`InvariantError`.  In heuristic
    mode the edit value is itself only an upper bound, so the report is
    not a certificate either way.
    """
    if g.n != h.n:
        raise ValueError("factor-3 check needs graphs of the same order")
    if exact:
        ed = editdist.edit_distance_exact(g, h)
    else:
        ed = editdist.edit_distance_heuristic(g, h, restarts=restarts, seed=seed, starts=edit_starts)
    up = delta1_upper(g, h, starts=starts, seed=seed, edit_bijection=ed.bijection,
                      extra_starts=extra_starts)
    lower = delta1_lower(g, h)
    passed = float(ed.value) <= 3.0 * up.value + 1e-9
    if ed.mismatches == 0 and up.value <= 0.0:
        ratio, note = None, "both zero"
    elif up.value <= 0.0:
        ratio, note = math.inf, "upper bound is zero"
    else:
        ratio, note = float(ed.value) / up.value, "ok"
    if exact and not passed:
        raise InvariantError(f"edit distance {ed.value} exceeds 3 * {up.value}")
    return Factor3Report(ed, up.value, lower, exact, passed, ratio, note)
