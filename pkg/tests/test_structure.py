import random

import numpy as np
import pytest

from simdetect.metrics import DistanceMatrix, MetricError
from simdetect.structure import (
    Dendrogram,
    Histogram,
    dendrogram,
    dendrogram_to_obj,
    global_histogram,
    graph_to_obj,
    histogram_to_obj,
    row_histogram,
    threshold_graph,
)


def matrix_from_triu(triu: list[float], test_name: str = "token_count") -> DistanceMatrix:
    k = len(triu)
    n = int((1 + (1 + 8 * k) ** 0.5) / 2)
    values = np.zeros((n, n))
    it = iter(triu)
    for i in range(n):
        for j in range(i + 1, n):
            values[i, j] = values[j, i] = next(it)
    ids = tuple(f"s{i:02d}" for i in range(n))
    return DistanceMatrix(test_name, ids, values)


def random_matrix(rng: random.Random, n: int) -> DistanceMatrix:
    return matrix_from_triu([rng.uniform(0.01, 0.99) for _ in range(n * (n - 1) // 2)])


def test_half_open_bin_rule():
    m = matrix_from_triu([0.5])
    h = global_histogram(m, bins=2)
    assert h.counts == (0, 1)
    assert h.total == 1


def test_last_bin_closed():
    m = matrix_from_triu([1.0, 1.0, 1.0])
    h = global_histogram(m, bins=64)
    assert h.counts[-1] == 3
    assert sum(h.counts) == 3


def test_global_total_is_pair_count():
    rng = random.Random(0)
    m = random_matrix(rng, 20)
    h = global_histogram(m)
    assert h.bins == 64
    assert h.total == 190
    assert sum(h.counts) == 190


def test_row_histogram_n2():
    m = matrix_from_triu([0.25])
    h = row_histogram(m, "s00", bins=4)
    assert h.counts == (0, 1, 0, 0)
    assert h.total == 1


def test_row_histograms_double_count_pairs():
    rng = random.Random(1)
    m = random_matrix(rng, 9)
    assert sum(row_histogram(m, i).total for i in m.ids) == 9 * 8


def test_planted_pair_shows_isolated_spike():
    rng = random.Random(2)
    n = 12
    triu = [min(0.85, max(0.35, rng.gauss(0.6, 0.05))) for _ in range(n * (n - 1) // 2)]
    m_vals = matrix_from_triu(triu).values.copy()
    m_vals[0, 1] = m_vals[1, 0] = 0.05
    m = DistanceMatrix("token_count", tuple(f"s{i:02d}" for i in range(n)), m_vals)
    h = row_histogram(m, "s00", bins=64)
    nonzero = [b for b, c in enumerate(h.counts) if c]
    assert nonzero[0] == int(0.05 * 64)
    assert h.counts[nonzero[0]] == 1
    assert nonzero[1] - nonzero[0] > 2  # empty gap separates the spike from the bulk


def test_histogram_validation():
    m = matrix_from_triu([0.5])
    with pytest.raises(ValueError):
        global_histogram(m, bins=1)
    with pytest.raises(MetricError):
        row_histogram(m, "nope")
    with pytest.raises(ValueError):
        Histogram(4, (1, 0, 0, 0), 2)
    with pytest.raises(ValueError):
        Histogram(4, (1, 0, 0), 1)


def test_threshold_zero_empty_graph():
    m = matrix_from_triu([0.1, 0.2, 0.3])
    g = threshold_graph(m, 0.0)
    assert g.vertices == ()
    assert g.edges == ()


def test_triangle_msf_elides_heaviest():
    m = matrix_from_triu([0.1, 0.2, 0.3])  # (0,1)=0.1 (0,2)=0.2 (1,2)=0.3
    g = threshold_graph(m, 0.5)
    by_pair = {(e.a, e.b): e.elided for e in g.edges}
    assert by_pair == {("s00", "s01"): False, ("s00", "s02"): False, ("s01", "s02"): True}
    assert g.vertices == ("s00", "s01", "s02")


def test_full_threshold_spanning_tree():
    rng = random.Random(3)
    m = random_matrix(rng, 10)
    g = threshold_graph(m, 1.0)
    assert len(g.vertices) == 10
    assert sum(1 for e in g.edges if not e.elided) == 9
    assert len(g.edges) == 45


def test_edge_at_exact_threshold_included():
    m = matrix_from_triu([0.5])
    g = threshold_graph(m, 0.5)
    assert len(g.edges) == 1


def test_equal_weight_ties_resolved_lexicographically():
    m = matrix_from_triu([0.2, 0.2, 0.2])
    g = threshold_graph(m, 0.5)
    elided = [(e.a, e.b) for e in g.edges if e.elided]
    assert elided == [("s01", "s02")]


def test_slider_monotone_and_connectivity_preserved():
    rng = random.Random(4)
    for _ in range(5):
        m = random_matrix(rng, 9)
        prev: set[tuple[str, str]] = set()
        for t in (0.2, 0.4, 0.6, 0.8, 1.0):
            g = threshold_graph(m, t)
            pairs = {(e.a, e.b) for e in g.edges}
            assert prev <= pairs
            prev = pairs
            comp_all = _components(g.vertices, [(e.a, e.b) for e in g.edges])
            comp_msf = _components(
                g.vertices, [(e.a, e.b) for e in g.edges if not e.elided]
            )
            assert comp_all == comp_msf


def _components(vertices, edges) -> set[frozenset]:
    parent = {v: v for v in vertices}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for a, b in edges:
        parent[find(a)] = find(b)
    groups: dict[str, set] = {}
    for v in vertices:
        groups.setdefault(find(v), set()).add(v)
    return {frozenset(g) for g in groups.values()}


def test_threshold_validation():
    m = matrix_from_triu([0.5])
    with pytest.raises(ValueError):
        threshold_graph(m, 1.5)
    with pytest.raises(ValueError):
        threshold_graph(m, -0.1)


def test_dendrogram_two_leaves():
    m = matrix_from_triu([0.42])
    d = dendrogram(m)
    assert d.merges == ((0, 1, 0.42),)
    assert sorted(d.leaf_order) == ["s00", "s01"]


def test_single_linkage_hand_example():
    m = matrix_from_triu([0.1, 0.9, 0.9])  # AB=0.1 AC=0.9 BC=0.9
    d = dendrogram(m, "single")
    assert d.merges == ((0, 1, 0.1), (2, 3, 0.9))
    assert d.leaf_order in (("s00", "s01", "s02"), ("s02", "s00", "s01"))


def test_single_linkage_heights_equal_msf_weights():
    rng = random.Random(5)
    for _ in range(5):
        m = random_matrix(rng, 11)
        d = dendrogram(m, "single")
        g = threshold_graph(m, 1.0)
        msf = sorted(e.distance for e in g.edges if not e.elided)
        assert [h for _, _, h in d.merges] == msf


def _leaves(merges, n: int, idx: int) -> set[int]:
    if idx < n:
        return {idx}
    a, b, _ = merges[idx - n]
    return _leaves(merges, n, a) | _leaves(merges, n, b)


def test_heights_nondecreasing_all_linkages():
    rng = random.Random(6)
    for link in ("single", "average", "complete"):
        m = random_matrix(rng, 10)
        d = dendrogram(m, link)
        heights = [h for _, _, h in d.merges]
        assert heights == sorted(heights)
        assert len(d.merges) == 9
        assert sorted(d.leaf_order) == sorted(m.ids)


def test_average_heights_are_cross_cluster_means():
    rng = random.Random(7)
    m = random_matrix(rng, 9)
    d = dendrogram(m, "average")
    for k, (a, b, h) in enumerate(d.merges):
        la = sorted(_leaves(d.merges, 9, a))
        lb = sorted(_leaves(d.merges, 9, b))
        cross = [m.values[i, j] for i in la for j in lb]
        assert abs(h - np.mean(cross)) < 1e-9
        assert min(cross) - 1e-12 <= h <= max(cross) + 1e-12


def test_complete_heights_are_cross_cluster_maxima():
    rng = random.Random(8)
    m = random_matrix(rng, 8)
    d = dendrogram(m, "complete")
    for a, b, h in d.merges:
        la = _leaves(d.merges, 8, a)
        lb = _leaves(d.merges, 8, b)
        assert h == max(m.values[i, j] for i in la for j in lb)


def test_leaf_order_keeps_clusters_contiguous():
    rng = random.Random(9)
    m = random_matrix(rng, 12)
    d = dendrogram(m)
    pos = {s: i for i, s in enumerate(d.leaf_order)}
    for idx in range(12, 12 + len(d.merges)):
        leaves = {pos[m.ids[i]] for i in _leaves(d.merges, 12, idx)}
        assert leaves == set(range(min(leaves), max(leaves) + 1))


def test_dendrogram_validation():
    m = matrix_from_triu([0.5])
    with pytest.raises(ValueError):
        dendrogram(m, "ward")
    one = DistanceMatrix("token_count", ("s00",), np.zeros((1, 1)))
    with pytest.raises(ValueError):
        dendrogram(one)


def test_serializers():
    m = matrix_from_triu([0.1, 0.2, 0.3])
    h = histogram_to_obj(global_histogram(m, bins=4))
    assert h == {"bins": 4, "counts": [2, 1, 0, 0], "total": 3}
    g = graph_to_obj(threshold_graph(m, 0.25))
    assert g["vertices"] == ["s00", "s01", "s02"]
    assert g["edges"][0] == {"a": "s00", "b": "s01", "distance": 0.1, "elided": False}
    d = dendrogram_to_obj(dendrogram(m, "single"))
    assert d["linkage"] == "single"
    assert d["merges"][0] == [0, 1, 0.1]
    assert set(d["leaf_order"]) == {"s00", "s01", "s02"}
