"""Graph construction: route aggregation and walking-transfer integration."""

from __future__ import annotations

from .errors import InputError
from .geo import haversine, pairs_within
from .model import Edge, EdgeKind, MultilayerGraph, Route, Station


def core_segments(route: Route, stations: dict[str, Station]) -> list[list[str]]:
    """Maximal contiguous runs of in-core stations along a route.

    A run of length 1 still contributes its station to the graph, it just
    emits no edges.
    """
    runs: list[list[str]] = []
    current: list[str] = []
    for sid in route.stations:
        if stations[sid].in_core:
            current.append(sid)
        elif current:
            runs.append(current)
            current = []
    if current:
        runs.append(current)
    return runs


def build_graph(
    routes: list[Route],
    stations: list[Station],
    core_only: bool = True,
) -> MultilayerGraph:
    """Aggregate route sequences into a directed intra-modal graph.

    With core_only, each route is first cut into its in-core segments and
    only those contribute. Consecutive stops become directed edges weighted
    by great-circle distance; parallel edges from overlapping routes collapse
    to one. Consecutive duplicate stops are skipped (no self-loops).
    """
    catalog = {s.id: s for s in stations}
    if len(catalog) != len(stations):
        dupes = sorted({s.id for s in stations if sum(t.id == s.id for t in stations) > 1})
        raise InputError(f"duplicate station ids in catalog: {dupes}")

    for route in routes:
        for sid in route.stations:
            if sid not in catalog:
                raise InputError(
                    f"route {route.route_id!r} references unknown station {sid!r}"
                )
            if catalog[sid].mode is not route.mode:
                raise InputError(
                    f"route {route.route_id!r} ({route.mode.value}) includes "
                    f"station {sid!r} of mode {catalog[sid].mode.value}"
                )

    used: dict[str, Station] = {}
    edges: dict[tuple[str, str], Edge] = {}
    for route in sorted(routes, key=lambda r: r.route_id):
        if core_only:
            segments = core_segments(route, catalog)
        else:
            segments = [list(route.stations)]
        for seg in segments:
            for sid in seg:
                used[sid] = catalog[sid]
            for a, b in zip(seg, seg[1:]):
                if a == b:
                    continue
                if (a, b) in edges:
                    continue
                sa, sb = catalog[a], catalog[b]
                edges[(a, b)] = Edge(
                    a, b, EdgeKind.INTRA_MODAL, haversine(sa.lat, sa.lon, sb.lat, sb.lon)
                )
    return MultilayerGraph(stations=dict(sorted(used.items())), edges=edges, d_imt=0.0)


def add_transfer_edges(g: MultilayerGraph, d_imt: float) -> tuple[MultilayerGraph, int]:
    """Attach bidirectional inter-modal transfer edges within d_imt meters.

    Any previously attached transfer edges are rebuilt from scratch, so the
    call is idempotent and suitable for threshold sweeps. Returns the new
    graph and the number of undirected transfer pairs it contains. d_imt of
    0 means no integration at all.
    """
    if d_imt < 0:
        raise InputError(f"d_imt must be >= 0, got {d_imt}")
    base_edges = {k: e for k, e in g.edges.items() if e.kind is EdgeKind.INTRA_MODAL}
    out = MultilayerGraph(stations=dict(g.stations), edges=base_edges, d_imt=float(d_imt))
    if d_imt == 0 or len(g.stations) < 2:
        return out, 0

    idx = sorted(g.stations)
    lats = [g.stations[i].lat for i in idx]
    lons = [g.stations[i].lon for i in idx]
    pairs = 0
    for i, j in pairs_within(lats, lons, d_imt):
        a, b = g.stations[idx[i]], g.stations[idx[j]]
        if a.mode is b.mode:
            continue
        dist = haversine(a.lat, a.lon, b.lat, b.lon)
        out.edges[(a.id, b.id)] = Edge(a.id, b.id, EdgeKind.INTER_MODAL, dist)
        out.edges[(b.id, a.id)] = Edge(b.id, a.id, EdgeKind.INTER_MODAL, dist)
        pairs += 1
    return out, pairs
