"""Step graphons and step kernels on weighted parts of ``[0, 1]``.

A step function is stored as ``k`` part measures ``λ_1..λ_k`` (summing
to one) and a symmetric ``k x k`` value matrix.  Parts are indexed, not
positioned: where interval positions matter (common refinement) the
parts are laid out as consecutive intervals in index order.

Arithmetic runs in one of two modes.  If every input is an ``int``,
``Fraction`` or numeric string the object is *exact* and holds
``Fraction`` entries in ``dtype=object`` arrays; otherwise everything is
``float64``.  Operations combining an exact and a float object fall back
to float.
"""
from __future__ import annotations

import json
from fractions import Fraction
from numbers import Rational
from os import PathLike
from typing import Sequence

import numpy as np

from .graphs import Graph

FLOAT_TOL = 1e-12


def _is_exact_scalar(x) -> bool:
    return isinstance(x, (Rational, str)) and not isinstance(x, bool)


def _to_fraction(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def _as_array(data, exact: bool) -> np.ndarray:
    if exact:
        a = np.array(data, dtype=object)
        flat = a.reshape(-1)
        for idx in range(flat.size):
            flat[idx] = _to_fraction(flat[idx])
        return a
    return np.array(
        np.vectorize(lambda v: float(Fraction(v)) if isinstance(v, str) else float(v),
                     otypes=[float])(np.array(data, dtype=object)),
        dtype=float,
    )


def _all_exact(*arrays) -> bool:
    for a in arrays:
        for v in np.asarray(a, dtype=object).reshape(-1):
            if not _is_exact_scalar(v):
                return False
    return True


class StepKernel:
    """Symmetric real-valued step function on weighted parts."""

    __slots__ = ("weights", "values", "exact")

    def __init__(self, weights, values, exact: bool | None = None):
        if exact is None:
            exact = _all_exact(weights, values)
        w = _as_array(weights, exact)
        v = _as_array(values, exact)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("weights must be a non-empty vector")
        k = w.size
        if v.shape != (k, k):
            raise ValueError(f"values must be {k}x{k}, got shape {v.shape}")
        if any(x < 0 for x in w):
            raise ValueError("part weights must be non-negative")
        total = w.sum()
        if exact:
            if total != 1:
                raise ValueError(f"part weights sum to {total}, not 1")
            if not (v == v.T).all():
                raise ValueError("value matrix must be symmetric")
        else:
            if abs(total - 1.0) > FLOAT_TOL:
                raise ValueError(f"part weights sum to {total!r}, not 1")
            if not np.allclose(v, v.T, rtol=0.0, atol=FLOAT_TOL):
                raise ValueError("value matrix must be symmetric")
            v = (v + v.T) / 2
        # zero-measure parts carry no information; drop them
        keep = np.array([x != 0 for x in w], dtype=bool)
        if not keep.all():
            w = w[keep]
            v = v[np.ix_(keep, keep)]
        w.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "exact", bool(exact))

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @property
    def k(self) -> int:
        return self.weights.size

    def to_float(self):
        if not self.exact:
            return self
        return type(self)(self.weights.astype(float), self.values.astype(float), exact=False)

    def mass_matrix(self) -> np.ndarray:
        """``λ_i λ_j`` for every pair of parts."""
        return np.outer(self.weights, self.weights)

    def integral(self):
        return (self.mass_matrix() * self.values).sum()

    def __neg__(self) -> StepKernel:
        return StepKernel(self.weights, -self.values, exact=self.exact)

    def __sub__(self, other: StepKernel) -> StepKernel:
        a, b = common_refinement(self, other)
        return StepKernel(a.weights, a.values - b.values, exact=a.exact)

    def __eq__(self, other) -> bool:
        if not isinstance(other, StepKernel):
            return NotImplemented
        return (
            self.k == other.k
            and bool((self.weights == other.weights).all())
            and bool((self.values == other.values).all())
        )

    __hash__ = None

    def __repr__(self) -> str:
        mode = "exact" if self.exact else "float"
        return f"{type(self).__name__}(k={self.k}, {mode})"


class StepGraphon(StepKernel):
    """Step kernel with values in ``[0, 1]``."""

    __slots__ = ()

    def __init__(self, weights, values, exact: bool | None = None):
        super().__init__(weights, values, exact)
        if any(x < 0 or x > 1 for x in self.values.reshape(-1)):
            raise ValueError("graphon values must lie in [0, 1]")


def _same_class(template: StepKernel, weights, values, exact):
    cls = StepGraphon if isinstance(template, StepGraphon) else StepKernel
    return cls(weights, values, exact=exact)


# --- constructors ---------------------------------------------------------


def embed_graph(g: Graph) -> StepGraphon:
    """Graphon of ``g``: ``n`` parts of measure ``1/n``, adjacency as values."""
    if g.n == 0:
        raise ValueError("cannot embed the graph with no vertices")
    w = [Fraction(1, g.n)] * g.n
    return StepGraphon(w, g.adjacency.astype(int).tolist(), exact=True)


def constant(alpha) -> StepGraphon:
    if not 0 <= alpha <= 1:
        raise ValueError("constant graphon needs 0 <= alpha <= 1")
    return StepGraphon([1], [[alpha]])


def complete_multipartite(weights: Sequence) -> StepGraphon:
    """Value 1 between distinct parts, 0 inside each part."""
    if len(weights) == 0 or any(x <= 0 for x in weights):
        raise ValueError("complete multipartite graphon needs positive part weights")
    r = len(weights)
    vals = [[0 if i == j else 1 for j in range(r)] for i in range(r)]
    return StepGraphon(list(weights), vals)


# --- part-level rearrangement ---------------------------------------------


def permute_parts(w: StepKernel, sigma: Sequence[int]) -> StepKernel:
    """New part ``i`` is old part ``sigma[i]``."""
    sigma = [int(s) for s in sigma]
    if sorted(sigma) != list(range(w.k)):
        raise ValueError("sigma must be a permutation of the parts")
    return _same_class(w, w.weights[sigma], w.values[np.ix_(sigma, sigma)], w.exact)


def split_part(w: StepKernel, i: int, fractions: Sequence) -> StepKernel:
    """Replace part ``i`` by sub-parts of the given measures (in place, in order).

    ``fractions`` are absolute measures and must sum to ``λ_i``.
    """
    if not 0 <= i < w.k:
        raise ValueError(f"part index {i} out of range")
    if len(fractions) == 0 or any(f <= 0 for f in fractions):
        raise ValueError("split fractions must be positive")
    exact = w.exact and _all_exact(fractions)
    fr = _as_array(list(fractions), exact)
    total = fr.sum()
    if exact:
        if total != w.weights[i]:
            raise ValueError("split fractions must sum to the part weight")
    elif abs(float(total) - float(w.weights[i])) > FLOAT_TOL:
        raise ValueError("split fractions must sum to the part weight")
    idx = list(range(i)) + [i] * len(fr) + list(range(i + 1, w.k))
    base = w if exact else w.to_float()
    weights = np.concatenate([base.weights[:i], fr, base.weights[i + 1:]])
    return _same_class(w, weights, base.values[np.ix_(idx, idx)], exact)


def common_refinement(u: StepKernel, w: StepKernel) -> tuple[StepKernel, StepKernel]:
    """Express ``u`` and ``w`` on one partition by overlaying their intervals."""
    exact = u.exact and w.exact
    if not exact:
        u, w = u.to_float(), w.to_float()
    lengths: list = []
    iu: list[int] = []
    iw: list[int] = []
    a = b = 0
    end_a, end_b = u.weights[0], w.weights[0]
    pos = 0 if exact else 0.0
    while a < u.k and b < w.k:
        nxt = min(end_a, end_b)
        if exact or nxt - pos > FLOAT_TOL:
            lengths.append(nxt - pos)
            iu.append(a)
            iw.append(b)
        pos = nxt
        adv_a = end_a <= nxt if exact else end_a - nxt <= FLOAT_TOL
        adv_b = end_b <= nxt if exact else end_b - nxt <= FLOAT_TOL
        if adv_a:
            a += 1
            if a < u.k:
                end_a = end_a + u.weights[a]
        if adv_b:
            b += 1
            if b < w.k:
                end_b = end_b + w.weights[b]
    lengths_arr = np.array(lengths, dtype=object if exact else float)
    if not exact:
        lengths_arr = lengths_arr / lengths_arr.sum()
    return (
        _same_class(u, lengths_arr, u.values[np.ix_(iu, iu)], exact),
        _same_class(w, lengths_arr, w.values[np.ix_(iw, iw)], exact),
    )


# --- functionals ----------------------------------------------------------


def l1_distance_aligned(u: StepKernel, w: StepKernel):
    """``||u - w||_1`` with parts overlaid in index order (identity rearrangement)."""
    a, b = common_refinement(u, w)
    return (a.mass_matrix() * abs(a.values - b.values)).sum()


def degree_function(w: StepKernel) -> np.ndarray:
    """``W_*`` on each part: ``sum_j λ_j W_ij``."""
    return w.values.dot(w.weights)


# --- JSON -----------------------------------------------------------------


def _encode(x, exact: bool):
    if exact:
        f = Fraction(x)
        return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
    return float(x)


def graphon_to_dict(w: StepKernel) -> dict:
    """Exact objects serialize as ``"p/q"`` strings, float objects as numbers."""
    return {
        "weights": [_encode(x, w.exact) for x in w.weights],
        "values": [[_encode(x, w.exact) for x in row] for row in w.values],
    }


def graphon_from_dict(data: dict, kernel: bool = False) -> StepKernel:
    if not isinstance(data, dict) or set(data) != {"weights", "values"}:
        raise ValueError("graphon JSON must have exactly the keys 'weights' and 'values'")
    cls = StepKernel if kernel else StepGraphon
    for entry in [*data["weights"], *(x for row in data["values"] for x in row)]:
        if isinstance(entry, bool) or not isinstance(entry, (int, float, str)):
            raise ValueError(f"unsupported graphon entry {entry!r}")
    return cls(data["weights"], data["values"])


def read_graphon(path: str | PathLike, kernel: bool = False) -> StepKernel:
    with open(path, encoding="utf-8") as fh:
        return graphon_from_dict(json.load(fh), kernel=kernel)


def write_graphon(w: StepKernel, path: str | PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(graphon_to_dict(w), fh)
        fh.write("\n")
