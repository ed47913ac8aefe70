"""Acceptance criteria AC1-AC10.

Each criterion returns ``(ok, detail)``; the wrapper times it, prints one
PASS/FAIL line and asserts both the outcome and the runtime limit.  Run
directly with ``python3 tests/test_acceptance.py`` for the summary only.
"""
from __future__ import annotations

import itertools
import sys
import time
from fractions import Fraction as F
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import nonisomorphic_graphs  # noqa: E402
from glim.cutnorm import cut_norm_exact, cut_norm_heuristic  # noqa: E402
from glim.density import density_graph, density_graphon  # noqa: E402
from glim.editdist import edit_distance_exact  # noqa: E402
from glim.extremal import clique_density_optimize  # noqa: E402
from glim.fracdist import (OverlayMatrix, birkhoff_approximate,  # noqa: E402
                           delta1_upper, factor3_check, sinkhorn_scale)
from glim.graphs import (blow_up, complete_graph, cycle_graph, erdos_renyi,  # noqa: E402
                         path_graph, turan_graph)
from glim.harness import stability_sweep, verify_example_4_1  # noqa: E402
from glim.sampler import convergence_gap, sample_w_random  # noqa: E402
from glim.stepgraphon import StepKernel, complete_multipartite, constant, embed_graph  # noqa: E402

FLOAT_SLACK = 1e-12  # float upper bound compared with an exact rational value


def ac1():
    rep = verify_example_4_1(24)
    ok = (rep["identity_mismatches"] == 22 and rep["blowup_mismatches"] == 80
          and F(rep["ratio"]) == F(11, 10))
    return ok, f"identity={rep['identity_mismatches']} blowup={rep['blowup_mismatches']} ratio={rep['ratio']}"


def ac2():
    up = delta1_upper(turan_graph(2, 4), turan_graph(2, 6)).value
    return up <= 1e-6, f"upper={up:.3e}"


def ac3():
    worst_val = worst_w = 0.0
    for r in range(2, 7):
        res = clique_density_optimize(complete_graph(r), tol=1e-9)
        worst_val = max(worst_val, abs(res.value - (r - 1) / r))
        worst_w = max(worst_w, float(np.abs(res.weights - 1 / r).max()))
    return worst_val <= 1e-7 and worst_w <= 1e-5, f"max|value-(r-1)/r|={worst_val:.2e} max|w-1/r|={worst_w:.2e}"


def ac4():
    rng = np.random.default_rng(2024)
    fails, worst = [], 0.0
    for i in range(200):
        n = int(rng.integers(2, 8))
        g = erdos_renyi(n, float(rng.random()), int(rng.integers(1 << 31)))
        h = erdos_renyi(n, float(rng.random()), int(rng.integers(1 << 31)))
        rep = factor3_check(g, h, exact=True, seed=i)
        ed = float(rep.edit.value)
        sandwich = float(rep.lower) <= rep.upper + FLOAT_SLACK and rep.upper <= ed + FLOAT_SLACK
        factor = ed <= 3 * rep.upper + 1e-9
        if not (sandwich and factor):
            fails.append(i)
        if rep.ratio is not None:
            worst = max(worst, rep.ratio)
    return not fails, f"pairs=200 failures={fails[:5]} max_ratio={worst:.4f}"


def ac5():
    rng = np.random.default_rng(5)
    worst, fails = 0.0, 0
    for _ in range(50):
        n = int(rng.integers(2, 16))
        A = sinkhorn_scale(rng.random((n, n)) + 1e-3) / n
        dec = birkhoff_approximate(OverlayMatrix(A), 500)
        bound = (n + 1) ** 2 / (2 * 500 * n)
        worst = max(worst, dec.residual_inf_norm / bound)
        fails += dec.residual_inf_norm > bound
    return fails == 0, f"matrices=50 worst residual/bound={worst:.3f}"


def _random_exact_kernel(rng, k, nonneg=False):
    raw = rng.integers(1, 8, size=k)
    weights = [F(int(x), int(raw.sum())) for x in raw]
    v = rng.integers(0 if nonneg else -6, 7, size=(k, k))
    v = np.triu(v) + np.triu(v, 1).T
    return StepKernel(weights, [[F(int(x), 6) for x in row] for row in v])


def ac6():
    rng = np.random.default_rng(6)
    mismatch = 0
    for i in range(100):
        d = _random_exact_kernel(rng, int(rng.integers(1, 11)))
        mismatch += cut_norm_heuristic(d, restarts=64, seed=i).value != cut_norm_exact(d).value
    mass_bad = 0
    for _ in range(50):
        d = _random_exact_kernel(rng, int(rng.integers(1, 11)), nonneg=True)
        mass_bad += cut_norm_exact(d).value != d.integral()
    return mismatch == 0 and mass_bad == 0, f"heuristic!=exact: {mismatch}/100, mass mismatches: {mass_bad}/50"


def ac7():
    motifs = [f for n in range(1, 5) for f in nonisomorphic_graphs(n)]
    hosts = [g for n in range(1, 6) for g in nonisomorphic_graphs(n)]
    bad = 0
    for g in hosts:
        w = embed_graph(g)
        for f in motifs:
            bad += density_graph(f, g) != density_graphon(f, w)
    return bad == 0, f"motifs={len(motifs)} hosts={len(hosts)} disagreements={bad}"


def ac8():
    motifs = [complete_graph(2), path_graph(3), complete_graph(3), cycle_graph(4)]
    half = constant(F(1, 2))
    gaps = [convergence_gap([sample_w_random(half, 400, s)], half, motifs)[0] for s in range(20)]
    good = sum(float(g) <= 0.02 for g in gaps)
    bip = complete_multipartite([F(1, 2), F(1, 2)])
    tri = [density_graph(complete_graph(3), sample_w_random(bip, 400, s)) for s in range(20)]
    ok = good >= 19 and all(t == 0 for t in tri)
    return ok, f"gap<=0.02 on {good}/20 seeds (max {max(map(float, gaps)):.4f}); K2-samples triangle-free {sum(t == 0 for t in tri)}/20"


def ac9():
    rng = np.random.default_rng(9)
    pool = [erdos_renyi(6, float(rng.uniform(0.2, 0.8)), int(rng.integers(1 << 31))) for _ in range(30)]
    d = [[None] * 30 for _ in range(30)]
    asym = 0
    for i, j in itertools.combinations_with_replacement(range(30), 2):
        a = edit_distance_exact(pool[i], pool[j]).value
        b = edit_distance_exact(pool[j], pool[i]).value
        asym += a != b
        d[i][j] = d[j][i] = a
    tri = sum(d[i][k] > d[i][j] + d[j][k] for i in range(30) for j in range(30) for k in range(30))
    diag = sum(d[i][i] != 0 for i in range(30))
    blow_bad = checked = 0
    for n in range(1, 5):
        graphs = nonisomorphic_graphs(n)
        for g, h in itertools.combinations_with_replacement(graphs, 2):
            base = edit_distance_exact(g, h).value
            for k in (2, 3):
                checked += 1
                blow_bad += edit_distance_exact(blow_up(g, k), blow_up(h, k)).value > base
    ok = asym == 0 and tri == 0 and diag == 0 and blow_bad == 0
    return ok, f"asymmetric={asym} triangle violations={tri}/27000 blow-up violations={blow_bad}/{checked}"


def ac10():
    ks = [0, 15, 30, 60]
    rows, summary = stability_sweep(2, 60, ks, trials=20, seed=0)
    within = all(r["measured_distance[2/n^2]"] <= 2 * r["deleted_edges"] / 3600 + FLOAT_SLACK for r in rows)
    means = ", ".join(f"{m:.5f}" for m in summary["means"])
    return within and summary["non_decreasing"], f"all trials within 2k/n^2: {within}; means=[{means}]"


CRITERIA = [
    ("AC1", "two-graph separation pair: counts 22/80, ratio 11/10", ac1, 5),
    ("AC2", "delta1(K22, K33) upper <= 1e-6", ac2, 10),
    ("AC3", "Motzkin-Straus values for K_r, r=2..6", ac3, 5),
    ("AC4", "factor-3 and sandwich on 200 pairs", ac4, 120),
    ("AC5", "Birkhoff residual bound, 50 matrices", ac5, 60),
    ("AC6", "cut norm heuristic = exact; mass of nonnegative kernels", ac6, 60),
    ("AC7", "t(F,G) = t(F,W_G) exhaustively", ac7, 300),
    ("AC8", "sampling convergence from Const(1/2); W_K2 triangle-free", ac8, 120),
    ("AC9", "metric properties and blow-up monotonicity", ac9, 120),
    ("AC10", "stability harness r=2, n=60", ac10, 120),
]


def run_criterion(tag, title, func, limit, emit=print):
    start = time.perf_counter()
    ok, detail = func()
    elapsed = time.perf_counter() - start
    status = "PASS" if ok and elapsed < limit else "FAIL"
    emit(f"{tag} {status} [{elapsed:.2f}s / limit {limit}s] {title}: {detail}")
    return ok, elapsed


@pytest.mark.parametrize("tag,title,func,limit", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_acceptance(tag, title, func, limit, capsys):
    with capsys.disabled():
        print()
        ok, elapsed = run_criterion(tag, title, func, limit)
    assert ok, f"{tag} failed"
    assert elapsed < limit, f"{tag} took {elapsed:.1f}s (limit {limit}s)"


if __name__ == "__main__":
    results = [run_criterion(*c) for c in CRITERIA]
    sys.exit(0 if all(ok and t < c[3] for (ok, t), c in zip(results, CRITERIA)) else 1)
