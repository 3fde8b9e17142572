"""Shortest-path kernels shared by the metric and simulation modules."""

from __future__ import annotations

from collections import deque

import numpy as np
from scipy.sparse.csgraph import shortest_path

from .model import GraphIndex, MultilayerGraph


def bfs_dist(adj: list[list[int]], source: int, blocked: int = -1) -> list[int]:
    """Hop distances from source over an adjacency list; -1 if unreachable.

    blocked marks one node as removed (useful for failure what-ifs).
    """
    n = len(adj)
    dist = [-1] * n
    if source == blocked:
        return dist
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u]
        for v in adj[u]:
            if dist[v] < 0 and v != blocked:
                dist[v] = du + 1
                queue.append(v)
    return dist


def hop_distance_matrix(idx: GraphIndex, sources: np.ndarray | None = None) -> np.ndarray:
    """Directed hop-count distances (float matrix, inf when unreachable)."""
    if idx.n == 0:
        return np.zeros((0, 0))
    if idx.m == 0:
        n_src = idx.n if sources is None else len(sources)
        out = np.full((n_src, idx.n), np.inf)
        rows = np.arange(idx.n) if sources is None else np.asarray(sources)
        out[np.arange(n_src), rows] = 0.0
        return out
    return shortest_path(idx.csr(), method="D", unweighted=True, indices=sources)


def weighted_distance_matrix(idx: GraphIndex) -> np.ndarray:
    """Directed shortest-path distances using edge lengths in meters."""
    if idx.n == 0:
        return np.zeros((0, 0))
    if idx.m == 0:
        out = np.full((idx.n, idx.n), np.inf)
        np.fill_diagonal(out, 0.0)
        return out
    return shortest_path(idx.csr(weights=idx.edge_len), method="D", directed=True)


def weak_components(g: MultilayerGraph) -> list[set[str]]:
    """Weakly connected components as sets of station ids."""
    idx = g.index
    seen = [False] * idx.n
    comps: list[set[str]] = []
    for start in range(idx.n):
        if seen[start]:
            continue
        seen[start] = True
        comp = [start]
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in idx.und[u]:
                if not seen[v]:
                    seen[v] = True
                    comp.append(v)
                    queue.append(v)
        comps.append({idx.ids[i] for i in comp})
    return comps


def largest_wcc_fraction(g: MultilayerGraph) -> float:
    """Relative size of the largest weakly connected component."""
    if g.n_nodes == 0:
        return 0.0
    return max(len(c) for c in weak_components(g)) / g.n_nodes
