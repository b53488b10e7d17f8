"""View-ready structures derived from a distance matrix.

Three derivations feed the interactive views: frequency histograms
(global and per-row), a thresholded similarity graph with redundant
edges marked for elision, and an agglomerative dendrogram.  All of
them are pure functions of an immutable matrix, so they can be built
lazily and concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .metrics import DistanceMatrix

__all__ = [
    "Histogram",
    "GraphEdge",
    "ThresholdGraph",
    "Dendrogram",
    "global_histogram",
    "row_histogram",
    "threshold_graph",
    "dendrogram",
    "histogram_to_obj",
    "graph_to_obj",
    "dendrogram_to_obj",
]

DEFAULT_BINS = 64

LINKAGES = ("single", "average", "complete")


@dataclass(frozen=True)
class Histogram:
    """Uniform partition of [0, 1] into `bins` half-open bins.

    Bin b covers [b/bins, (b+1)/bins); the last bin is closed so 1.0
    is counted rather than dropped.
    """

    bins: int
    counts: tuple[int, ...]
    total: int

    def __post_init__(self) -> None:
        if self.bins < 2:
            raise ValueError("bins must be >= 2")
        if len(self.counts) != self.bins:
            raise ValueError("counts length must equal bins")
        if sum(self.counts) != self.total:
            raise ValueError("counts must sum to total")


@dataclass(frozen=True)
class GraphEdge:
    a: str
    b: str
    distance: float
    elided: bool


@dataclass(frozen=True)
class ThresholdGraph:
    threshold: float
    vertices: tuple[str, ...]
    edges: tuple[GraphEdge, ...]


@dataclass(frozen=True)
class Dendrogram:
    """Agglomerative merge history.

    Cluster indices below n refer to m.ids in matrix order; merge k
    creates cluster n + k.  `leaf_order` is the id permutation read
    off the merge tree left-to-right.
    """

    linkage: str
    merges: tuple[tuple[int, int, float], ...]
    leaf_order: tuple[str, ...]


def _bin_counts(values: np.ndarray, bins: int) -> tuple[int, ...]:
    idx = np.minimum((values * bins).astype(np.int64), bins - 1)
    return tuple(int(c) for c in np.bincount(idx, minlength=bins))


def global_histogram(m: DistanceMatrix, bins: int = DEFAULT_BINS) -> Histogram:
    """Histogram of the n(n-1)/2 upper-triangle distances."""
    if bins < 2:
        raise ValueError("bins must be >= 2")
    values = m.triu_values()
    return Histogram(bins, _bin_counts(values, bins), len(values))


def row_histogram(m: DistanceMatrix, sub_id: str, bins: int = DEFAULT_BINS) -> Histogram:
    """Histogram of one submission's n-1 distances to everyone else."""
    if bins < 2:
        raise ValueError("bins must be >= 2")
    i = m.index(sub_id)
    values = np.delete(m.values[i], i)
    return Histogram(bins, _bin_counts(values, bins), len(values))


class _UnionFind:
    def __init__(self, n: int) -> None:
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


def threshold_graph(m: DistanceMatrix, t: float) -> ThresholdGraph:
    """All pairs with distance <= t; edges outside a minimum spanning
    forest of that subgraph are kept but flagged elided.

    Kruskal order is ascending distance with ties broken by the id
    pair, so the retained forest is deterministic.  Vertices with no
    edge under the threshold are omitted entirely.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError("threshold must lie in [0, 1]")
    n = m.n
    candidates = [
        (float(m.values[i, j]), m.ids[i], m.ids[j], i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if m.values[i, j] <= t
    ]
    candidates.sort(key=lambda e: (e[0], e[1], e[2]))
    uf = _UnionFind(n)
    edges = tuple(
        GraphEdge(a, b, d, elided=not uf.union(i, j)) for d, a, b, i, j in candidates
    )
    vertices = tuple(sorted({v for e in edges for v in (e.a, e.b)}))
    return ThresholdGraph(float(t), vertices, edges)


def _combined(link: str, d_ka: float, d_kb: float, size_a: int, size_b: int) -> float:
    if link == "single":
        return min(d_ka, d_kb)
    if link == "complete":
        return max(d_ka, d_kb)
    return (size_a * d_ka + size_b * d_kb) / (size_a + size_b)


def dendrogram(m: DistanceMatrix, linkage: str = "average") -> Dendrogram:
    """Classic agglomerative clustering over the whole matrix.

    At each step the closest active pair merges; equal distances are
    resolved toward the smallest cluster index pair.
    """
    if linkage not in LINKAGES:
        raise ValueError(f"unknown linkage {linkage!r}")
    n = m.n
    if n < 2:
        raise ValueError("dendrogram needs at least 2 submissions")

    dist: dict[tuple[int, int], float] = {
        (i, j): float(m.values[i, j]) for i in range(n) for j in range(i + 1, n)
    }
    sizes = {i: 1 for i in range(n)}
    active = set(range(n))
    children: dict[int, tuple[int, int]] = {}
    merges: list[tuple[int, int, float]] = []
    next_idx = n

    def key(a: int, b: int) -> tuple[int, int]:
        return (a, b) if a < b else (b, a)

    for _ in range(n - 1):
        a, b = min(dist, key=lambda p: (dist[p], p))
        height = dist[(a, b)]
        merges.append((a, b, height))
        children[next_idx] = (a, b)
        rest = active - {a, b}
        for k in rest:
            dk = _combined(linkage, dist.pop(key(k, a)), dist.pop(key(k, b)), sizes[a], sizes[b])
            dist[key(k, next_idx)] = dk
        del dist[(a, b)]
        active = rest | {next_idx}
        sizes[next_idx] = sizes[a] + sizes[b]
        next_idx += 1

    order: list[str] = []
    stack = [next_idx - 1]
    while stack:
        node = stack.pop()
        if node < n:
            order.append(m.ids[node])
        else:
            left, right = children[node]
            stack.append(right)
            stack.append(left)
    return Dendrogram(linkage, tuple(merges), tuple(order))


def histogram_to_obj(h: Histogram) -> dict:
    return {"bins": h.bins, "counts": list(h.counts), "total": h.total}


def graph_to_obj(g: ThresholdGraph) -> dict:
    return {
        "threshold": g.threshold,
        "vertices": list(g.vertices),
        "edges": [
            {"a": e.a, "b": e.b, "distance": e.distance, "elided": e.elided}
            for e in g.edges
        ],
    }


def dendrogram_to_obj(d: Dendrogram) -> dict:
    return {
        "linkage": d.linkage,
        "merges": [[a, b, h] for a, b, h in d.merges],
        "leaf_order": list(d.leaf_order),
    }
