"""Node-removal attack campaigns and degradation robustness.

The robustness scalar is the Riemann-sum area under the curve of relative
largest-component size S(q) while a fraction q of nodes is removed one at a
time. Orders come from random shuffles or targeted rankings (degree,
betweenness, motif participation), optionally recomputed adaptively.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum

from .errors import InputError
from .metrics import betweenness, degree_vector
from .model import MultilayerGraph
from .motifs import enumerate_ffl


class AttackKind(Enum):
    RANDOM = "random"
    DEGREE = "degree"
    BETWEENNESS = "betweenness"
    MOTIF = "motif"


@dataclass(frozen=True)
class AttackStrategy:
    kind: AttackKind
    seed: int = 0
    adaptive: bool = False

    def __post_init__(self) -> None:
        if self.kind is AttackKind.RANDOM and self.adaptive:
            raise InputError("adaptive ordering applies to targeted attacks only")

    @classmethod
    def random(cls, seed: int) -> "AttackStrategy":
        return cls(AttackKind.RANDOM, seed=seed)

    @classmethod
    def degree(cls, adaptive: bool = False) -> "AttackStrategy":
        return cls(AttackKind.DEGREE, adaptive=adaptive)

    @classmethod
    def by_betweenness(cls, adaptive: bool = False) -> "AttackStrategy":
        return cls(AttackKind.BETWEENNESS, adaptive=adaptive)

    @classmethod
    def motif(cls, adaptive: bool = False) -> "AttackStrategy":
        return cls(AttackKind.MOTIF, adaptive=adaptive)


@dataclass
class DegradationCurve:
    """(removed fraction, relative LCC size) samples plus the area r_b."""

    points: list[tuple[float, float]]
    r_b: float


def _metric_values(g: MultilayerGraph, kind: AttackKind) -> dict[str, float]:
    if kind is AttackKind.DEGREE:
        return degree_vector(g).values
    if kind is AttackKind.BETWEENNESS:
        return betweenness(g).values
    if kind is AttackKind.MOTIF:
        census = enumerate_ffl(g)
        return {sid: float(census.per_node_score.get(sid, 0)) for sid in g.stations}
    raise InputError(f"no target metric for {kind}")


def attack_order(g: MultilayerGraph, strategy: AttackStrategy) -> list[str]:
    """Full removal permutation of the graph's stations.

    Targeted kinds rank by metric descending with ascending-id tie-break;
    adaptive reranks on the shrinking graph after every removal.
    """
    if g.n_nodes == 0:
        raise InputError("attack order of an empty graph")
    ids = sorted(g.stations)
    if strategy.kind is AttackKind.RANDOM:
        rng = random.Random(strategy.seed)
        rng.shuffle(ids)
        return ids
    if not strategy.adaptive:
        metric = _metric_values(g, strategy.kind)
        return sorted(ids, key=lambda i: (-metric[i], i))
    order: list[str] = []
    remaining = g
    while remaining.n_nodes > 0:
        metric = _metric_values(remaining, strategy.kind)
        victim = min(remaining.stations, key=lambda i: (-metric[i], i))
        order.append(victim)
        remaining = remaining.subgraph(set(remaining.stations) - {victim})
    return order


def _lcc_sizes_along(g: MultilayerGraph, order: list[str]) -> list[int]:
    """Largest weak-component size after each removal prefix (len n+1).

    Entry i is the LCC size once the first i nodes of the order are gone;
    entry 0 is the intact graph. Computed backwards with union-find, adding
    nodes in reverse removal order.
    """
    idx = g.index
    n = idx.n
    order_idx = [idx.pos[s] for s in order]
    parent = list(range(n))
    compsize = [1] * n
    active = [False] * n

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    sizes = [0] * (n + 1)
    best = 0
    for i in range(n - 1, -1, -1):
        u = order_idx[i]
        active[u] = True
        best = max(best, 1)
        for v in idx.und[u]:
            if not active[v]:
                continue
            ru, rv = find(u), find(v)
            if ru != rv:
                if compsize[ru] < compsize[rv]:
                    ru, rv = rv, ru
                parent[rv] = ru
                compsize[ru] += compsize[rv]
                best = max(best, compsize[ru])
        sizes[i] = best
    return sizes


def degradation_curve(
    g: MultilayerGraph, strategy: AttackStrategy, repeats: int = 1
) -> DegradationCurve:
    """Remove all nodes in attack order, tracking S(q) = LCC size / N.

    Random failure averages the curve pointwise over `repeats` runs seeded
    seed, seed+1, ...; targeted attacks are deterministic and run once.
    The area r_b is the mean of S over the N removal steps.
    """
    if repeats < 1:
        raise InputError("repeats must be >= 1")
    n = g.n_nodes
    if n == 0:
        raise InputError("degradation of an empty graph")

    if strategy.kind is AttackKind.RANDOM and repeats > 1:
        runs = [
            _lcc_sizes_along(g, attack_order(g, AttackStrategy.random(strategy.seed + r)))
            for r in range(repeats)
        ]
        sizes = [sum(run[i] for run in runs) / repeats for i in range(n + 1)]
    else:
        sizes = list(map(float, _lcc_sizes_along(g, attack_order(g, strategy))))

    s_values = [x / n for x in sizes]
    points = [(i / n, s_values[i]) for i in range(n + 1)]
    r_b = sum(s_values[1:]) / n
    return DegradationCurve(points=points, r_b=r_b)
