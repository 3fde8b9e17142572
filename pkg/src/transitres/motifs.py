"""Feed-forward-loop census and motif-based node importance.

A feed-forward loop is an ordered node triple (a, b, c) carrying the edges
a->b, b->c and a->c. Each triple is found exactly once through its shortcut
edge a->c, by intersecting the out-neighborhood of a with the in-neighborhood
of c.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InputError
from .model import MultilayerGraph


@dataclass
class MotifCensus:
    ffl_count: int = 0
    per_node_score: dict[str, int] = field(default_factory=dict)
    per_edge_score: dict[tuple[str, str], int] = field(default_factory=dict)


def enumerate_ffl(g: MultilayerGraph) -> MotifCensus:
    """Count every feed-forward loop and tally node/edge participation."""
    idx = g.index
    succ_sets = [set(s) for s in idx.succ]
    pred_sets = [set(p) for p in idx.pred]

    node_score = [0] * idx.n
    edge_score: dict[tuple[int, int], int] = {}
    total = 0
    for k in range(idx.m):
        a = int(idx.edge_src[k])
        c = int(idx.edge_dst[k])
        mids = succ_sets[a] & pred_sets[c]
        mids.discard(a)
        mids.discard(c)
        if not mids:
            continue
        total += len(mids)
        node_score[a] += len(mids)
        node_score[c] += len(mids)
        edge_score[(a, c)] = edge_score.get((a, c), 0) + len(mids)
        for b in mids:
            node_score[b] += 1
            edge_score[(a, b)] = edge_score.get((a, b), 0) + 1
            edge_score[(b, c)] = edge_score.get((b, c), 0) + 1

    ids = idx.ids
    return MotifCensus(
        ffl_count=total,
        per_node_score={ids[i]: node_score[i] for i in range(idx.n)},
        per_edge_score={(ids[a], ids[c]): s for (a, c), s in edge_score.items()},
    )


def motif_attack_order(g: MultilayerGraph) -> list[str]:
    """Stations sorted by descending motif participation, ids break ties."""
    if g.n_nodes == 0:
        raise InputError("motif ordering of an empty graph")
    census = enumerate_ffl(g)
    return sorted(g.stations, key=lambda i: (-census.per_node_score[i], i))


def structural_hierarchy(
    g: MultilayerGraph, top_k: int
) -> list[tuple[tuple[str, str], int]]:
    """Top-k edges by motif participation (edges in no loop are omitted)."""
    if top_k < 1:
        raise InputError("top_k must be >= 1")
    census = enumerate_ffl(g)
    ranked = sorted(census.per_edge_score.items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked[:top_k]
