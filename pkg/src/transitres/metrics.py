"""Node- and network-level structural metrics.

Hop counts drive efficiency, path statistics and betweenness; the geospatial
efficiency (detour index) is the only meter-weighted metric. The Gini
coefficient condenses a node-metric vector into an inequality score used as
the preparedness indicator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, NumericalError
from .geo import haversine_matrix
from .model import EdgeKind, MultilayerGraph
from .paths import hop_distance_matrix, largest_wcc_fraction, weighted_distance_matrix


@dataclass
class NodeMetricVector:
    metric_name: str
    values: dict[str, float]

    def aligned(self, ids: list[str]) -> np.ndarray:
        return np.array([self.values[i] for i in ids], dtype=float)


@dataclass
class NetworkSummary:
    n_nodes: int
    n_edges: int
    n_imt_edges: int
    avg_out_degree: float
    s0: float
    diameter_l_max: int
    avg_path_len: float
    efficiency_e: float
    efficiency_geo: float
    avg_edge_len_m: float
    std_edge_len_m: float
    gini_nd: float
    gini_bc: float


def gini(values) -> float:
    """Inequality of a non-negative metric vector, in [0, 1 - 1/N].

    Values are sorted internally, so callers pass raw vectors in any order.
    """
    v = np.asarray(list(values), dtype=float)
    if v.size == 0:
        raise InputError("gini of an empty vector")
    if np.any(v < 0):
        raise InputError("gini requires non-negative values")
    mean = v.mean()
    if mean == 0:
        raise NumericalError("gini undefined: metric vector has zero mean")
    v = np.sort(v)
    n = v.size
    i = np.arange(1, n + 1)
    return float(np.sum((2 * i - n - 1) * v) / (n * n * mean))


def _gini_or_zero(values) -> float:
    """Summary helper: an all-zero vector counts as perfectly equal."""
    try:
        return gini(values)
    except NumericalError:
        return 0.0


def degree_vector(g: MultilayerGraph) -> NodeMetricVector:
    """Total degree (in + out) per station."""
    idx = g.index
    deg = idx.total_degree()
    return NodeMetricVector("degree", {idx.ids[i]: float(deg[i]) for i in range(idx.n)})


def out_degree_vector(g: MultilayerGraph) -> NodeMetricVector:
    idx = g.index
    deg = idx.out_degree()
    return NodeMetricVector("out_degree", {idx.ids[i]: float(deg[i]) for i in range(idx.n)})


def betweenness(g: MultilayerGraph) -> NodeMetricVector:
    """Shortest-path betweenness on the directed graph, hop-count paths.

    Normalized by (N-1)(N-2), the number of ordered source/target pairs a
    node can sit between.
    """
    idx = g.index
    n = idx.n
    if n == 0:
        raise InputError("betweenness of an empty graph")
    score = [0.0] * n
    succ = idx.succ
    for s in range(n):
        # Brandes: single-source shortest paths plus dependency accumulation
        dist = [-1] * n
        sigma = [0] * n
        preds: list[list[int]] = [[] for _ in range(n)]
        dist[s] = 0
        sigma[s] = 1
        order: list[int] = []
        queue = [s]
        head = 0
        while head < len(queue):
            u = queue[head]
            head += 1
            order.append(u)
            du = dist[u]
            su = sigma[u]
            for v in succ[u]:
                if dist[v] < 0:
                    dist[v] = du + 1
                    queue.append(v)
                if dist[v] == du + 1:
                    sigma[v] += su
                    preds[v].append(u)
        delta = [0.0] * n
        for w in reversed(order):
            coeff = (1.0 + delta[w]) / sigma[w]
            for u in preds[w]:
                delta[u] += sigma[u] * coeff
            if w != s:
                score[w] += delta[w]
    norm = (n - 1) * (n - 2)
    if norm > 0:
        score = [x / norm for x in score]
    return NodeMetricVector("betweenness", {idx.ids[i]: score[i] for i in range(n)})


def global_efficiency(g: MultilayerGraph) -> float:
    """Mean inverse hop distance over ordered node pairs; 0 for unreachable."""
    idx = g.index
    n = idx.n
    if n < 2:
        return 0.0
    dist = hop_distance_matrix(idx)
    with np.errstate(divide="ignore"):
        inv = 1.0 / dist
    inv[~np.isfinite(inv)] = 0.0
    np.fill_diagonal(inv, 0.0)
    return float(inv.sum() / (n * (n - 1)))


def geospatial_efficiency(g: MultilayerGraph) -> float:
    """Detour index: mean crow-flight / network distance over connected pairs.

    Network distances use edge lengths in meters; pairs with zero crow-flight
    separation or no connecting path are excluded. Never exceeds 1 because
    edge lengths are great-circle distances themselves.
    """
    idx = g.index
    if idx.n < 2:
        return 0.0
    net = weighted_distance_matrix(idx)
    crow = haversine_matrix(idx.lats, idx.lons)
    mask = np.isfinite(net) & (crow > 0.0)
    np.fill_diagonal(mask, False)
    if not mask.any():
        return 0.0
    return float((crow[mask] / net[mask]).mean())


def path_stats(g: MultilayerGraph) -> tuple[int, float]:
    """(diameter, average path length) in hops.

    The diameter is the longest finite shortest path; disconnected pairs
    enter the average at that diameter value.
    """
    idx = g.index
    n = idx.n
    if n < 2:
        raise NumericalError("path statistics need at least two nodes")
    dist = hop_distance_matrix(idx)
    np.fill_diagonal(dist, np.inf)
    finite = dist[np.isfinite(dist)]
    if finite.size == 0:
        raise NumericalError("path statistics undefined: no connected node pairs")
    l_max = int(finite.max())
    total = float(finite.sum()) + l_max * (n * (n - 1) - finite.size)
    return l_max, total / (n * (n - 1))


def network_summary(g: MultilayerGraph) -> NetworkSummary:
    """Assemble the full structural observable set for one graph."""
    if g.n_nodes == 0:
        raise InputError("summary of an empty graph")
    idx = g.index
    lengths = idx.edge_len
    l_max, avg_l = path_stats(g)
    deg = idx.total_degree()
    bc = betweenness(g)
    return NetworkSummary(
        n_nodes=g.n_nodes,
        n_edges=g.n_edges,
        n_imt_edges=g.n_edges_of_kind(EdgeKind.INTER_MODAL),
        avg_out_degree=g.n_edges / g.n_nodes,
        s0=largest_wcc_fraction(g),
        diameter_l_max=l_max,
        avg_path_len=avg_l,
        efficiency_e=global_efficiency(g),
        efficiency_geo=geospatial_efficiency(g),
        avg_edge_len_m=float(lengths.mean()) if lengths.size else 0.0,
        std_edge_len_m=float(lengths.std()) if lengths.size else 0.0,
        gini_nd=_gini_or_zero(deg),
        gini_bc=_gini_or_zero(list(bc.values.values())),
    )
