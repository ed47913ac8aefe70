"""W-random graphs from step graphons and density-based convergence gaps."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from .density import density_graph, density_graphon
from .graphs import Graph
from .stepgraphon import StepKernel


def sample_w_random(w: StepKernel, n: int, seed: int) -> Graph:
    """Sample ``G(n, W)``.

    Each of the ``n`` points is reduced straight to its part (drawn with
    probabilities ``λ``); the position inside a part never matters for a
    step function.  Pairs ``{i, j}``, ``i < j``, are then visited
    row-major and joined with probability ``W(part_i, part_j)``.  Both
    stages draw from one ``numpy`` generator seeded with ``seed``.
    """
    if n < 1:
        raise ValueError("sample size must be >= 1")
    rng = np.random.default_rng(seed)
    p = np.asarray(w.weights, dtype=float)
    parts = rng.choice(w.k, size=n, p=p / p.sum())
    vals = np.asarray(w.values, dtype=float)
    iu, ju = np.triu_indices(n, 1)
    probs = vals[parts[iu], parts[ju]]
    keep = rng.random(iu.size) < probs
    return Graph(n, zip(iu[keep].tolist(), ju[keep].tolist()))


def _gap(a, b):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return abs(a - b)
    return abs(float(a) - float(b))


def convergence_table(gs: Sequence[Graph], w: StepKernel, motifs: Sequence[Graph],
                      cap: int | None = 5) -> list[tuple[int, int, object]]:
    """Rows ``(graph index, motif index, |t(F, G) - t(F, W)|)``."""
    targets = [density_graphon(f, w, cap=cap) for f in motifs]
    rows = []
    for gi, g in enumerate(gs):
        for fi, f in enumerate(motifs):
            rows.append((gi, fi, _gap(density_graph(f, g, cap=cap), targets[fi])))
    return rows


def convergence_gap(gs: Sequence[Graph], w: StepKernel, motifs: Sequence[Graph],
                    cap: int | None = 5) -> list:
    """For each graph, ``max_F |t(F, G) - t(F, W)|`` over the motifs."""
    if not motifs:
        raise ValueError("need at least one motif")
    best: dict[int, object] = {}
    for gi, _, gap in convergence_table(gs, w, motifs, cap):
        if gi not in best or gap > best[gi]:
            best[gi] = gap
    return [best[i] for i in range(len(gs))]
