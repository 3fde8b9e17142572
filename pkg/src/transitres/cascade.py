"""Load-capacity cascading-failure engine.

Edge loads come from unit flows of origin-destination pairs routed along one
deterministic shortest path each (fewest hops, then lexicographically
smallest id sequence). Capacities are frozen once from the intact loads,
C = (1 + beta) * L. After an initial node failure, loads are recomputed
globally on the surviving graph every round and any edge pushed above its
frozen capacity fails, until a round fails nothing.

The per-round recomputation exploits that deterministic tie-breaking makes
all chosen paths toward one destination form a tree: each node has a unique
"next hop" toward t, so per-destination loads are a subtree-count
accumulation instead of per-pair path walks.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .errors import InputError, NumericalError
from .model import GraphIndex, MultilayerGraph


@dataclass
class LoadModel:
    """Edge loads plus the OD sample they came from (cascades reuse it)."""

    edge_load: dict[tuple[str, str], float]
    od_samples: int
    seed: int
    exhaustive: bool
    od_pairs: tuple[tuple[str, str], ...] = field(repr=False, default=())


@dataclass
class CascadeState:
    beta: float
    capacities: dict[tuple[str, str], float]
    rounds: list[set[tuple[str, str]]]
    failed_nodes: set[str]
    r_recover: float
    first_wave_fraction: float
    total_damage: int

    @property
    def failed_edges(self) -> set[tuple[str, str]]:
        out: set[tuple[str, str]] = set(self._incident_failed)
        for r in self.rounds:
            out |= r
        return out

    _incident_failed: set[tuple[str, str]] = field(default_factory=set, repr=False)


def _pair_groups(idx: GraphIndex, pairs: tuple[tuple[str, str], ...]):
    """Group OD pairs by destination index -> (source indices, multiplicities)."""
    counter: dict[tuple[int, int], int] = {}
    for s, t in pairs:
        key = (idx.pos[s], idx.pos[t])
        counter[key] = counter.get(key, 0) + 1
    by_dest: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    tmp: dict[int, list[tuple[int, int]]] = {}
    for (s, t), mult in counter.items():
        tmp.setdefault(t, []).append((s, mult))
    for t, rows in tmp.items():
        rows.sort()
        by_dest[t] = (
            np.array([r[0] for r in rows], dtype=np.int64),
            np.array([r[1] for r in rows], dtype=np.int64),
        )
    return by_dest


def _edge_loads(
    n: int,
    edge_src: np.ndarray,
    edge_dst: np.ndarray,
    by_dest: dict[int, tuple[np.ndarray, np.ndarray]],
    node_alive: np.ndarray,
) -> np.ndarray:
    """Unit-flow loads per edge (aligned with the given edge arrays).

    Edge arrays must be sorted by (src, dst). Pairs whose endpoints are dead
    or disconnected contribute nothing.
    """
    m = len(edge_src)
    loads = np.zeros(m, dtype=np.int64)
    if m == 0 or not by_dest:
        return loads

    dests = sorted(t for t in by_dest if node_alive[t])
    if not dests:
        return loads
    rev = csr_matrix(
        (np.ones(m), (edge_dst, edge_src)), shape=(n, n)
    )
    dist_to = shortest_path(rev, method="D", unweighted=True, indices=dests)

    indptr = np.searchsorted(edge_src, np.arange(n + 1))
    sentinel = np.int64((n + 1)) * np.int64(m + 1)
    base_code = edge_dst * np.int64(m + 1) + np.arange(m, dtype=np.int64)
    starts = indptr[:-1]
    empty_group = indptr[:-1] == indptr[1:]

    for row, t in enumerate(dests):
        dist = dist_to[row]
        ds = dist[edge_src]
        dd = dist[edge_dst]
        cand = np.isfinite(ds) & (dd == ds - 1.0)
        if not cand.any():
            continue
        code = np.where(cand, base_code, sentinel)
        code_padded = np.append(code, sentinel)
        best = np.minimum.reduceat(code_padded, np.minimum(starts, m))
        best[empty_group] = sentinel
        has_next = best < sentinel
        next_edge = (best % (m + 1)).astype(np.int64)
        next_node = (best // (m + 1)).astype(np.int64)

        sources, mult = by_dest[t]
        ok = node_alive[sources] & np.isfinite(dist[sources])
        if not ok.any():
            continue
        flow = np.zeros(n, dtype=np.int64)
        np.add.at(flow, sources[ok], mult[ok])

        finite = np.isfinite(dist)
        max_level = int(dist[finite].max())
        levels = np.where(finite, dist, -1.0).astype(np.int64)
        for d in range(max_level, 0, -1):
            sel = np.flatnonzero((levels == d) & (flow > 0) & has_next)
            if sel.size == 0:
                continue
            f = flow[sel]
            loads[next_edge[sel]] += f
            np.add.at(flow, next_node[sel], f)
    return loads


def shortest_path_lex(g: MultilayerGraph, src: str, dst: str) -> list[str] | None:
    """Reference routing: fewest hops, lexicographically smallest id sequence.

    Used by tests as an independent check of the vectorized load kernel.
    """
    idx = g.index
    s, t = idx.pos[src], idx.pos[dst]
    from .paths import bfs_dist

    dist_to_t = bfs_dist(idx.pred, t)
    if dist_to_t[s] < 0:
        return None
    path = [s]
    u = s
    while u != t:
        step = [v for v in idx.succ[u] if dist_to_t[v] == dist_to_t[u] - 1]
        u = min(step, key=lambda v: idx.ids[v])
        path.append(u)
    return [idx.ids[i] for i in path]


def estimate_loads(
    g: MultilayerGraph,
    od_samples: int = 10_000,
    seed: int = 42,
    exhaustive: bool = False,
) -> LoadModel:
    """Accumulate unit OD flows into per-edge loads.

    Exhaustive mode routes every connected ordered pair once; otherwise
    od_samples pairs are drawn uniformly (with replacement) from the
    connected ordered pairs using the given seed.
    """
    if not exhaustive and od_samples < 1:
        raise InputError("od_samples must be >= 1")
    idx = g.index
    if idx.n < 2:
        raise NumericalError("load estimation needs at least two nodes")

    if idx.m == 0:
        raise NumericalError("load estimation undefined: graph has no connected pairs")
    fwd = csr_matrix(
        (np.ones(idx.m), (idx.edge_src, idx.edge_dst)), shape=(idx.n, idx.n)
    )
    dist = shortest_path(fwd, method="D", unweighted=True)
    np.fill_diagonal(dist, np.inf)
    reach_src, reach_dst = np.nonzero(np.isfinite(dist))
    if reach_src.size == 0:
        raise NumericalError("load estimation undefined: graph has no connected pairs")

    if exhaustive:
        pairs = tuple(
            (idx.ids[int(s)], idx.ids[int(t)]) for s, t in zip(reach_src, reach_dst)
        )
    else:
        rng = random.Random(seed)
        total = reach_src.size
        draws = [rng.randrange(total) for _ in range(od_samples)]
        pairs = tuple(
            (idx.ids[int(reach_src[k])], idx.ids[int(reach_dst[k])]) for k in draws
        )

    by_dest = _pair_groups(idx, pairs)
    loads = _edge_loads(
        idx.n, idx.edge_src, idx.edge_dst, by_dest, np.ones(idx.n, dtype=bool)
    )
    edge_load = {
        (idx.ids[int(idx.edge_src[k])], idx.ids[int(idx.edge_dst[k])]): float(loads[k])
        for k in range(idx.m)
    }
    return LoadModel(
        edge_load=edge_load,
        od_samples=len(pairs) if exhaustive else od_samples,
        seed=seed,
        exhaustive=exhaustive,
        od_pairs=pairs,
    )


def run_cascade(
    g: MultilayerGraph,
    loads: LoadModel,
    beta: float,
    initial_failures: set[str],
) -> CascadeState:
    """Fail the given nodes, then iterate overload rounds to a fixed point.

    Capacities are (1 + beta) times the intact loads and never change.
    Failed-edge accounting includes the edges removed with the initial nodes;
    the first-wave fraction is round-1 overload failures over all failed
    edges.
    """
    if beta < 0:
        raise InputError(f"beta must be >= 0, got {beta}")
    unknown = [s for s in initial_failures if s not in g.stations]
    if unknown:
        raise InputError(f"unknown stations in initial failures: {sorted(unknown)}")
    idx = g.index
    m = idx.m
    key_of = [
        (idx.ids[int(idx.edge_src[k])], idx.ids[int(idx.edge_dst[k])]) for k in range(m)
    ]
    try:
        load0 = np.array([loads.edge_load[key] for key in key_of], dtype=float)
    except KeyError as exc:
        raise InputError(f"load model does not cover edge {exc}") from None
    caps = (1.0 + beta) * load0

    node_alive = np.ones(idx.n, dtype=bool)
    for sid in initial_failures:
        node_alive[idx.pos[sid]] = False
    edge_alive = node_alive[idx.edge_src] & node_alive[idx.edge_dst]
    incident = {key_of[k] for k in np.flatnonzero(~edge_alive)}

    by_dest = _pair_groups(idx, loads.od_pairs)
    rounds: list[set[tuple[str, str]]] = []
    while True:
        alive_idx = np.flatnonzero(edge_alive)
        new_loads = _edge_loads(
            idx.n,
            idx.edge_src[alive_idx],
            idx.edge_dst[alive_idx],
            by_dest,
            node_alive,
        )
        over = alive_idx[new_loads > caps[alive_idx]]
        if over.size == 0:
            break
        rounds.append({key_of[int(k)] for k in over})
        edge_alive[over] = False

    failed_edges = len(incident) + sum(len(r) for r in rounds)
    r_recover = 1.0 - failed_edges / m if m else 1.0
    first_wave = len(rounds[0]) / failed_edges if rounds else 0.0
    return CascadeState(
        beta=beta,
        capacities={key_of[k]: float(caps[k]) for k in range(m)},
        rounds=rounds,
        failed_nodes=set(initial_failures),
        r_recover=r_recover,
        first_wave_fraction=first_wave,
        total_damage=len(initial_failures) + failed_edges,
        _incident_failed=incident,
    )


def recoverability_profile(
    g: MultilayerGraph, loads: LoadModel, beta: float, threads: int = 1
) -> dict[str, float]:
    """Surviving-edge fraction of a cascade seeded at each single node."""
    ids = sorted(g.stations)

    def work(sid: str) -> float:
        return run_cascade(g, loads, beta, {sid}).r_recover

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = list(pool.map(work, ids))
    else:
        values = [work(sid) for sid in ids]
    return dict(zip(ids, values))


def node_throughput(g: MultilayerGraph, loads: LoadModel) -> dict[str, float]:
    """Sum of intact loads over a node's incident edges."""
    out = {sid: 0.0 for sid in g.stations}
    for (src, dst), load in loads.edge_load.items():
        out[src] += load
        out[dst] += load
    return out


def beta_sweep(
    g: MultilayerGraph,
    loads: LoadModel,
    betas: list[float],
    target: str,
) -> list[tuple[float, int]]:
    """Total cascade damage for each tolerance value (ascending betas)."""
    if not betas:
        raise InputError("betas must be non-empty")
    if sorted(betas) != list(betas):
        raise InputError("betas must be ascending")
    return [(b, run_cascade(g, loads, b, {target}).total_damage) for b in betas]


def shock_sweep(
    g: MultilayerGraph,
    loads: LoadModel,
    beta: float,
    ks: list[int],
) -> list[tuple[int, int]]:
    """Total damage when the top-k throughput nodes fail simultaneously."""
    if sorted(ks) != list(ks):
        raise InputError("ks must be ascending")
    if ks and ks[-1] > g.n_nodes:
        raise InputError("k exceeds node count")
    ranking = sorted(
        node_throughput(g, loads).items(), key=lambda kv: (-kv[1], kv[0])
    )
    out = []
    for k in ks:
        seeds = {sid for sid, _ in ranking[:k]}
        if not seeds:
            out.append((k, 0))
            continue
        out.append((k, run_cascade(g, loads, beta, seeds).total_damage))
    return out
