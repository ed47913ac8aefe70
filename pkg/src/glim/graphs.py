"""Simple undirected graphs on the vertex set ``{0, ..., n-1}``.

Graphs are immutable.  Besides the edge set each graph carries a
read-only 0/1 adjacency matrix (the numerical routines work on it) and
per-vertex neighbourhood bitmasks stored as Python ints (used by the
combinatorial searches).

Comparisons between graphs are always *labeled*: ``g == h`` means equal
edge sets on the same vertex indices.  Nothing in this module tests
isomorphism implicitly.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from os import PathLike
from typing import Iterable, Sequence

import numpy as np

from .errors import GraphFormatError


class Graph:
    """Simple loopless undirected graph with vertices ``0..n-1``."""

    __slots__ = ("_n", "_edges", "_adj", "_masks")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        n = int(n)
        if n < 0:
            raise ValueError(f"vertex count must be non-negative, got {n}")
        adj = np.zeros((n, n), dtype=np.uint8)
        norm = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) has an endpoint outside [0, {n})")
            e = (u, v) if u < v else (v, u)
            norm.add(e)
            adj[u, v] = adj[v, u] = 1
        adj.setflags(write=False)
        self._n = n
        self._edges = frozenset(norm)
        self._adj = adj
        self._masks = None

    @classmethod
    def from_adjacency(cls, matrix) -> Graph:
        a = np.asarray(matrix)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("adjacency matrix must be square")
        if not np.array_equal(a, a.T):
            raise ValueError("adjacency matrix must be symmetric")
        if np.any(np.diagonal(a)):
            raise ValueError("adjacency matrix has loops")
        iu, ju = np.nonzero(np.triu(a, 1))
        return cls(a.shape[0], zip(iu.tolist(), ju.tolist()))

    @property
    def n(self) -> int:
        return self._n

    @property
    def edges(self) -> frozenset[tuple[int, int]]:
        """Edges as ``(u, v)`` pairs with ``u < v``."""
        return self._edges

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    @property
    def adjacency(self) -> np.ndarray:
        return self._adj

    @property
    def degrees(self) -> np.ndarray:
        return self._adj.sum(axis=1, dtype=np.int64)

    @property
    def masks(self) -> tuple[int, ...]:
        """Neighbourhood of each vertex as a bitmask."""
        if self._masks is None:
            masks = [0] * self._n
            for u, v in self._edges:
                masks[u] |= 1 << v
                masks[v] |= 1 << u
            self._masks = tuple(masks)
        return self._masks

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self._adj[u, v])

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self._edges)

    def relabel(self, perm: Sequence[int]) -> Graph:
        """Return the graph in which vertex ``u`` is renamed ``perm[u]``."""
        perm = list(perm)
        if sorted(perm) != list(range(self._n)):
            raise ValueError("relabeling must be a permutation of the vertex set")
        return Graph(self._n, ((perm[u], perm[v]) for u, v in self._edges))

    def induced(self, vertices: Sequence[int]) -> Graph:
        idx = {v: i for i, v in enumerate(vertices)}
        return Graph(
            len(idx),
            ((idx[u], idx[v]) for u, v in self._edges if u in idx and v in idx),
        )

    def disjoint_union(self, other: Graph) -> Graph:
        k = self._n
        return Graph(
            k + other.n,
            itertools.chain(self._edges, ((u + k, v + k) for u, v in other.edges)),
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._n, self._edges))

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, e={len(self._edges)})"


def edge_density(g: Graph) -> float:
    """``2 e(G) / v(G)^2`` as a float (see :mod:`glim.density` for exact)."""
    return 2 * g.num_edges / g.n**2


# --- small named graphs -------------------------------------------------


def empty_graph(n: int) -> Graph:
    return Graph(n)


def complete_graph(n: int) -> Graph:
    return Graph(n, itertools.combinations(range(n), 2))


def path_graph(n: int) -> Graph:
    return Graph(n, ((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph(n, ((i, (i + 1) % n) for i in range(n)))


# --- generators ---------------------------------------------------------


def turan_parts(r: int, n: int) -> list[list[int]]:
    """Consecutive parts of ``T_r(n)``; the first ``n mod r`` get the extra vertex."""
    if r < 1:
        raise ValueError("Turan graph needs r >= 1")
    if n < 0:
        raise ValueError("vertex count must be non-negative")
    q, rem = divmod(n, r)
    parts, start = [], 0
    for i in range(r):
        size = q + (1 if i < rem else 0)
        parts.append(list(range(start, start + size)))
        start += size
    return parts


def turan_graph(r: int, n: int) -> Graph:
    """Complete ``r``-partite graph on ``n`` vertices with near-equal parts."""
    parts = turan_parts(r, n)
    return Graph(
        n,
        (
            (u, v)
            for a, b in itertools.combinations(parts, 2)
            for u in a
            for v in b
        ),
    )


def blow_up(g: Graph, k: int) -> Graph:
    """``k``-fold blow-up; copy ``c`` of vertex ``x`` is vertex ``x*k + c``.

    Copies of the same vertex are never adjacent, copies of adjacent
    vertices always are.
    """
    if k < 1:
        raise ValueError("blow-up factor must be >= 1")
    return Graph(
        g.n * k,
        (
            (x * k + c, y * k + d)
            for x, y in g.edges
            for c in range(k)
            for d in range(k)
        ),
    )


def erdos_renyi(n: int, p: float, seed: int) -> Graph:
    """``G(n, p)``; the upper triangle is drawn row-major from one generator."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability must lie in [0, 1], got {p}")
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(iu.size) < p
    return Graph(n, zip(iu[keep].tolist(), ju[keep].tolist()))


# --- the two-graph construction with distinct discrete / fractional distance


@dataclass(frozen=True)
class PairLayout:
    """Vertex numbering of the pair built by :func:`example_4_1_pair`.

    Blocks are laid out as ``N_1..N_5`` (``n`` vertices each), then
    ``M_1..M_4`` (4 each), then ``x_1..x_4``.  All block indices are
    1-based to match the usual write-up of the construction.

    The second partition ``L_1..L_4`` of ``M`` is fixed as follows: the
    first two vertices of ``M_i`` go to ``L_i`` and the last two to
    ``L_{i+1}`` (with ``L_5 = L_1``), so ``|L_i & M_i| = |L_{i+1} & M_i| = 2``.
    """

    n: int

    @property
    def order(self) -> int:
        return 5 * self.n + 20

    def N(self, j: int) -> list[int]:
        return list(range((j - 1) * self.n, j * self.n))

    def M(self, i: int) -> list[int]:
        base = 5 * self.n + 4 * (i - 1)
        return list(range(base, base + 4))

    def L(self, i: int) -> list[int]:
        prev = (i - 2) % 4 + 1
        return self.M(i)[:2] + self.M(prev)[2:]

    def x(self, i: int) -> int:
        return 5 * self.n + 16 + (i - 1)

    @property
    def all_N(self) -> list[int]:
        return list(range(5 * self.n))

    @property
    def all_M(self) -> list[int]:
        return list(range(5 * self.n, 5 * self.n + 16))

    @property
    def all_X(self) -> list[int]:
        return [self.x(i) for i in range(1, 5)]


def example_4_1_pair(n: int) -> tuple[Graph, Graph]:
    """Two graphs of order ``5n + 20`` whose edit distance beats ``δ₁`` by 11/10.

    Both graphs agree on ``N ∪ M``: ``N`` is a clique and ``M_i`` is
    completely joined to ``N_1 ∪ ... ∪ N_i``.  In ``G``, ``x_i x_j`` is an
    edge when ``j - i`` is even and ``x_i`` is joined to ``M_i``; in ``H``,
    ``x_i x_j`` is an edge when ``j - i`` is odd and ``x_i`` is joined to
    ``L_i``.  See :class:`PairLayout` for the vertex numbering; under it
    the identity map is an optimal bijection (22 mismatches).
    """
    if n < 24:
        raise ValueError("the construction needs n >= 24")
    lay = PairLayout(n)
    common = list(itertools.combinations(lay.all_N, 2))
    for i in range(1, 5):
        for j in range(1, i + 1):
            common.extend((u, v) for u in lay.N(j) for v in lay.M(i))
    g_edges = list(common)
    h_edges = list(common)
    for i, j in itertools.combinations(range(1, 5), 2):
        if (j - i) % 2 == 0:
            g_edges.append((lay.x(i), lay.x(j)))
        else:
            h_edges.append((lay.x(i), lay.x(j)))
    for i in range(1, 5):
        g_edges.extend((lay.x(i), y) for y in lay.M(i))
        h_edges.extend((lay.x(i), y) for y in lay.L(i))
    return Graph(lay.order, g_edges), Graph(lay.order, h_edges)


def example_4_1_blowup_bijection(n: int) -> list[int]:
    """Bijection ``V(G[2]) -> V(H[2])`` shifting the second copies of ``X``.

    Identity on ``(M ∪ N)[2]``; ``x_i' -> x_i'`` and ``x_i'' -> x_{i+1}''``
    (indices mod 4).  Uses the blow-up numbering of :func:`blow_up`
    (copy ``c`` of ``x`` is ``2x + c``; ``'`` is copy 0, ``''`` copy 1).
    """
    lay = PairLayout(n)
    sigma = list(range(2 * lay.order))
    for i in range(1, 5):
        nxt = i % 4 + 1
        sigma[2 * lay.x(i) + 1] = 2 * lay.x(nxt) + 1
    return sigma


# --- edge-list I/O ------------------------------------------------------


def parse_graph(text: str) -> Graph:
    """Parse the ``n <N>`` / ``u v`` edge-list format."""
    n = None
    edges: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "n":
                raise GraphFormatError("expected header 'n <N>'", lineno)
            try:
                n = int(parts[1])
            except ValueError:
                raise GraphFormatError(f"bad vertex count {parts[1]!r}", lineno) from None
            if n < 0:
                raise GraphFormatError("vertex count must be non-negative", lineno)
            continue
        if len(parts) != 2:
            raise GraphFormatError(f"expected 'u v', got {line!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"non-integer vertex in {line!r}", lineno) from None
        if u == v:
            raise GraphFormatError(f"loop at vertex {u}", lineno)
        if u < 0 or v < 0 or u >= n or v >= n:
            raise GraphFormatError(f"vertex index out of range [0, {n})", lineno)
        if u > v:
            raise GraphFormatError(f"edge must be written with u < v, got {u} {v}", lineno)
        if (u, v) in edges:
            raise GraphFormatError(f"duplicate edge {u} {v}", lineno)
        edges.add((u, v))
    if n is None:
        raise GraphFormatError("missing header 'n <N>'")
    return Graph(n, edges)


def format_graph(g: Graph) -> str:
    lines = [f"n {g.n}"]
    lines.extend(f"{u} {v}" for u, v in g.sorted_edges())
    return "\n".join(lines) + "\n"


def read_graph(path: str | PathLike) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def write_graph(g: Graph, path: str | PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_graph(g))


# --- brute-force helpers -------------------------------------------------


def has_clique(g: Graph, size: int) -> bool:
    """Exhaustive clique search using the neighbourhood bitmasks."""
    if size <= 1:
        return g.n >= size
    masks = g.masks

    def extend(cand: int, need: int) -> bool:
        if need == 0:
            return True
        while cand:
            if bin(cand).count("1") < need:
                return False
            v = cand.bit_length() - 1
            cand &= ~(1 << v)
            if extend(cand & masks[v], need - 1):
                return True
        return False

    return extend((1 << g.n) - 1, size)


def chromatic_number(g: Graph, cap: int = 10) -> int:
    """Smallest ``k`` admitting a proper ``k``-colouring (exhaustive, ``v(g) <= cap``)."""
    from .errors import CapExceededError

    if g.n > cap:
        raise CapExceededError(f"chromatic number is exhaustive; v(F)={g.n} exceeds cap {cap}")
    if g.n == 0:
        return 0
    masks = g.masks
    for k in range(1, g.n + 1):
        colour = [-1] * g.n

        def place(v: int, used: int) -> bool:
            if v == g.n:
                return True
            # symmetry breaking: a new colour is only ever the next unused one
            for c in range(min(used + 1, k)):
                if all(colour[w] != c for w in range(v) if masks[v] >> w & 1):
                    colour[v] = c
                    if place(v + 1, max(used, c + 1)):
                        return True
            colour[v] = -1
            return False

        if place(0, 0):
            return k
    return g.n


def forbidden_family_r(family: Iterable[Graph]) -> int:
    """``min chi(F) - 1`` over a family of non-empty graphs."""
    chis = [chromatic_number(f) for f in family]
    if not chis:
        raise ValueError("family must be non-empty")
    r = min(chis) - 1
    if r < 1:
        raise ValueError("every graph in the family must have at least one edge")
    return r


def lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)
