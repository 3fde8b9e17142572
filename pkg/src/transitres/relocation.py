"""Post-disruption relocation capacity (interoperability indicator).

When a station v fails, passengers bound for each destination that v could
originally reach may walk to a nearby neighbor of v and continue from there.
Every recovered destination contributes 1 - walk/d_max using the closest
neighbor that still reaches it; destinations nobody can recover contribute 0.
A station's score is the mean over its original descendants and the network
score is the mean over all stations that had descendants at all.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

from .errors import InputError, NumericalError
from .geo import haversine
from .model import MultilayerGraph
from .paths import bfs_dist


class RelocationModel(Enum):
    SYMMETRIC = "symmetric"
    ASYMMETRIC = "asymmetric"


@dataclass
class RelocationResult:
    per_node: dict[str, float]
    network_rl: float
    d_max: float
    model: RelocationModel


def _node_relocation(g: MultilayerGraph, v: int, d_max: float, model: RelocationModel):
    """Relocation score of one station index, or None if it has no descendants."""
    idx = g.index
    dist_from_v = bfs_dist(idx.succ, v)
    descendants = [n for n in range(idx.n) if n != v and dist_from_v[n] >= 0]
    if not descendants:
        return None

    candidates: list[tuple[float, int]] = []
    for u in idx.und[v]:
        if model is RelocationModel.ASYMMETRIC and idx.modes[u] is idx.modes[v]:
            continue
        walk = haversine(idx.lats[v], idx.lons[v], idx.lats[u], idx.lons[u])
        if walk <= d_max:
            candidates.append((walk, u))
    candidates.sort()

    # closest neighbor first: the first candidate reaching a destination
    # gives it the largest possible 1 - walk/d_max credit
    credit = {n: 0.0 for n in descendants}
    unresolved = set(descendants)
    for walk, u in candidates:
        if not unresolved:
            break
        dist_from_u = bfs_dist(idx.succ, u, blocked=v)
        reached = [n for n in unresolved if dist_from_u[n] >= 0]
        for n in reached:
            credit[n] = 1.0 - walk / d_max
        unresolved.difference_update(reached)
    return sum(credit.values()) / len(descendants)


def relocation_rate(
    g: MultilayerGraph,
    d_max: float,
    model: RelocationModel = RelocationModel.SYMMETRIC,
    sample: list[str] | None = None,
    threads: int = 1,
) -> RelocationResult:
    """Per-node and network relocation rates at walking limit d_max meters.

    The asymmetric variant only lets passengers relocate through neighbors
    of a different transport mode, so it is undefined on single-mode graphs.
    Nodes without descendants are excluded from the evaluated set.
    """
    if d_max <= 0:
        raise InputError(f"d_max must be > 0, got {d_max}")
    if model is RelocationModel.ASYMMETRIC and len(g.modes_present()) < 2:
        raise InputError("asymmetric relocation is not applicable to single-mode graphs")
    idx = g.index
    if sample is None:
        targets = list(idx.ids)
    else:
        unknown = [s for s in sample if s not in g.stations]
        if unknown:
            raise InputError(f"unknown stations in sample: {unknown}")
        targets = sorted(set(sample))

    def work(sid: str):
        return _node_relocation(g, idx.pos[sid], d_max, model)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            scores = list(pool.map(work, targets))
    else:
        scores = [work(sid) for sid in targets]

    per_node = {sid: sc for sid, sc in zip(targets, scores) if sc is not None}
    if not per_node:
        raise NumericalError("relocation undefined: no evaluated node has descendants")
    network = sum(per_node.values()) / len(per_node)
    return RelocationResult(per_node=per_node, network_rl=network, d_max=d_max, model=model)
