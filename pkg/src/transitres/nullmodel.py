"""Randomized benchmarking and correlation statistics.

A null-model replica keeps the station set (positions, modes) and the edge
count of a graph but rewires the edges uniformly at random, so a metric's
Z-score measures how far the real network sits from random expectation.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InputError, NumericalError
from .geo import haversine
from .model import Edge, EdgeKind, MultilayerGraph


@dataclass
class NullModelEnsemble:
    metric_name: str
    mu_rand: float
    sigma_rand: float
    replicas: int
    seed: int


def random_replica(g: MultilayerGraph, seed: int) -> MultilayerGraph:
    """Same stations, same edge count, uniformly random directed wiring.

    Edge lengths are recomputed from endpoint coordinates and edge kinds from
    endpoint modes. Pure uniform sampling: single-direction transfer edges
    are possible here, unlike in built graphs.
    """
    ids = sorted(g.stations)
    n = len(ids)
    m = g.n_edges
    if m > n * (n - 1):
        raise InputError("edge count exceeds simple-digraph capacity")
    rng = random.Random(seed)
    chosen = rng.sample(range(n * (n - 1)), m)
    edges: dict[tuple[str, str], Edge] = {}
    for code in chosen:
        i, r = divmod(code, n - 1)
        j = r if r < i else r + 1
        a, b = g.stations[ids[i]], g.stations[ids[j]]
        kind = EdgeKind.INTRA_MODAL if a.mode is b.mode else EdgeKind.INTER_MODAL
        edges[(a.id, b.id)] = Edge(
            a.id, b.id, kind, haversine(a.lat, a.lon, b.lat, b.lon)
        )
    return MultilayerGraph(stations=dict(g.stations), edges=edges, d_imt=0.0)


def build_ensemble(
    g: MultilayerGraph,
    metric: Callable[[MultilayerGraph], float],
    metric_name: str,
    replicas: int = 50,
    seed: int = 0,
    threads: int = 1,
) -> NullModelEnsemble:
    """Metric mean and sample standard deviation over seeded replicas."""
    if replicas < 2:
        raise InputError("ensemble needs at least 2 replicas")

    def work(i: int) -> float:
        return metric(random_replica(g, seed + i))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = list(pool.map(work, range(replicas)))
    else:
        values = [work(i) for i in range(replicas)]
    mu = sum(values) / replicas
    var = sum((v - mu) ** 2 for v in values) / (replicas - 1)
    return NullModelEnsemble(
        metric_name=metric_name,
        mu_rand=mu,
        sigma_rand=math.sqrt(var),
        replicas=replicas,
        seed=seed,
    )


def z_score(x_real: float, ensemble: NullModelEnsemble) -> float:
    """Standardized deviation of the observed value from the ensemble.

    A zero-spread ensemble still yields Z = 0 when the observation equals
    the ensemble mean (no deviation at any scale); any other zero-spread
    case is degenerate.
    """
    if ensemble.sigma_rand == 0:
        if x_real == ensemble.mu_rand:
            return 0.0
        raise NumericalError("degenerate ensemble: zero standard deviation")
    return (x_real - ensemble.mu_rand) / ensemble.sigma_rand


def pearson(xs, ys) -> float:
    """Product-moment correlation of two equal-length sequences."""
    x = np.asarray(list(xs), dtype=float)
    y = np.asarray(list(ys), dtype=float)
    if x.size != y.size:
        raise InputError("correlation needs equal-length vectors")
    if x.size < 3:
        raise InputError("correlation needs at least 3 observations")
    dx = x - x.mean()
    dy = y - y.mean()
    sx = float(np.sqrt(np.sum(dx * dx)))
    sy = float(np.sqrt(np.sum(dy * dy)))
    if sx == 0 or sy == 0:
        raise NumericalError("correlation undefined for a constant vector")
    r = float(np.sum(dx * dy) / (sx * sy))
    return max(-1.0, min(1.0, r))


def correlation_matrix(
    columns: list[tuple[str, dict[str, float]]]
) -> tuple[list[str], np.ndarray]:
    """Pairwise Pearson matrix of named node-keyed vectors.

    All vectors must cover the same node set; rows align on sorted node id.
    """
    if len(columns) < 2:
        raise InputError("correlation matrix needs at least 2 vectors")
    names = [name for name, _ in columns]
    keys = sorted(columns[0][1])
    for name, vec in columns:
        if sorted(vec) != keys:
            raise InputError(f"vector {name!r} covers a different node set")
    data = [np.array([vec[k] for k in keys], dtype=float) for _, vec in columns]
    k = len(columns)
    out = np.eye(k)
    for i in range(k):
        for j in range(i + 1, k):
            out[i, j] = out[j, i] = pearson(data[i], data[j])
    return names, out


def static_vs_dynamic_report(
    g: MultilayerGraph,
    recoverability: dict[str, float],
    metrics: list,
) -> tuple[list[str], np.ndarray]:
    """Correlate static node metrics against functional recoverability.

    metrics are NodeMetricVector-like objects (metric_name, values); the
    recoverability column is appended last.
    """
    missing = [sid for sid in g.stations if sid not in recoverability]
    if missing:
        raise InputError(f"recoverability does not cover stations: {missing[:5]}")
    columns = [(m.metric_name, m.values) for m in metrics]
    columns.append(("recoverability", {sid: recoverability[sid] for sid in g.stations}))
    return correlation_matrix(columns)
