"""Multilayer station-graph data model.

A MultilayerGraph is a simple directed graph over stations of four transport
modes. Intra-modal edges connect consecutive stops of a route; inter-modal
edges are walking transfers between nearby stations of different modes.
Graphs are treated as immutable once built; all analysis functions take a
graph and return new data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

import numpy as np

from .errors import InputError
from .geo import haversine


class Mode(str, Enum):
    METRO = "metro"
    BUS = "bus"
    FERRY = "ferry"
    RAILWAY = "railway"

    @classmethod
    def parse(cls, text: str) -> "Mode":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise InputError(f"unknown transport mode {text!r}") from None


class EdgeKind(str, Enum):
    INTRA_MODAL = "intra_modal"
    INTER_MODAL = "inter_modal"


@dataclass(frozen=True)
class Station:
    id: str
    mode: Mode
    lat: float
    lon: float
    in_core: bool = True

    def __post_init__(self) -> None:
        if not self.id:
            raise InputError("station id must be non-empty")
        if not -90.0 <= self.lat <= 90.0:
            raise InputError(f"station {self.id}: latitude {self.lat} out of range")
        if not -180.0 <= self.lon <= 180.0:
            raise InputError(f"station {self.id}: longitude {self.lon} out of range")


@dataclass(frozen=True)
class Edge:
    src: str
    dst: str
    kind: EdgeKind
    length_m: float

    def __post_init__(self) -> None:
        if self.src == self.dst:
            raise InputError(f"self-loop edge at {self.src!r}")
        if self.length_m < 0:
            raise InputError(f"edge {self.src}->{self.dst}: negative length")


@dataclass(frozen=True)
class Route:
    route_id: str
    mode: Mode
    stations: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.stations) < 2:
            raise InputError(f"route {self.route_id!r} needs at least 2 stations")


@dataclass
class MultilayerGraph:
    """Directed multilayer station graph.

    stations are keyed by id; edges by (src, dst). A given ordered pair can
    carry at most one edge (intra- and inter-modal are mutually exclusive
    because they require equal / different endpoint modes).
    """

    stations: dict[str, Station] = field(default_factory=dict)
    edges: dict[tuple[str, str], Edge] = field(default_factory=dict)
    d_imt: float = 0.0

    @property
    def n_nodes(self) -> int:
        return len(self.stations)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def n_edges_of_kind(self, kind: EdgeKind) -> int:
        return sum(1 for e in self.edges.values() if e.kind is kind)

    def modes_present(self) -> set[Mode]:
        return {s.mode for s in self.stations.values()}

    def validate(self) -> None:
        """Check structural invariants; raises InputError on violation."""
        for (src, dst), e in self.edges.items():
            if (src, dst) != (e.src, e.dst):
                raise InputError(f"edge key {(src, dst)} does not match edge {e}")
            if src not in self.stations or dst not in self.stations:
                raise InputError(f"edge {src}->{dst} references unknown station")
            same_mode = self.stations[src].mode is self.stations[dst].mode
            if e.kind is EdgeKind.INTRA_MODAL and not same_mode:
                raise InputError(f"intra-modal edge {src}->{dst} joins different modes")
            if e.kind is EdgeKind.INTER_MODAL:
                if same_mode:
                    raise InputError(f"inter-modal edge {src}->{dst} joins equal modes")
                if (dst, src) not in self.edges:
                    raise InputError(f"inter-modal edge {src}->{dst} has no reverse twin")

    def subgraph(self, keep_ids: set[str]) -> "MultilayerGraph":
        """Induced subgraph on the given station ids."""
        stations = {i: s for i, s in self.stations.items() if i in keep_ids}
        edges = {
            k: e for k, e in self.edges.items() if k[0] in keep_ids and k[1] in keep_ids
        }
        return MultilayerGraph(stations=stations, edges=edges, d_imt=self.d_imt)

    @cached_property
    def index(self) -> "GraphIndex":
        return GraphIndex(self)


class GraphIndex:
    """Dense integer view of a graph for algorithm kernels.

    Node order is sorted station id; edge arrays are sorted by (src, dst)
    index so every derived computation is deterministic.
    """

    def __init__(self, g: MultilayerGraph):
        self.ids: list[str] = sorted(g.stations)
        self.pos: dict[str, int] = {sid: i for i, sid in enumerate(self.ids)}
        n = len(self.ids)
        self.n = n
        self.lats = np.array([g.stations[i].lat for i in self.ids], dtype=float)
        self.lons = np.array([g.stations[i].lon for i in self.ids], dtype=float)
        self.modes = [g.stations[i].mode for i in self.ids]

        edge_rows = sorted(
            (self.pos[e.src], self.pos[e.dst], e.length_m) for e in g.edges.values()
        )
        m = len(edge_rows)
        self.m = m
        self.edge_src = np.fromiter((r[0] for r in edge_rows), dtype=np.int64, count=m)
        self.edge_dst = np.fromiter((r[1] for r in edge_rows), dtype=np.int64, count=m)
        self.edge_len = np.fromiter((r[2] for r in edge_rows), dtype=float, count=m)

        self.succ: list[list[int]] = [[] for _ in range(n)]
        self.pred: list[list[int]] = [[] for _ in range(n)]
        for u, v, _ in edge_rows:
            self.succ[u].append(v)
            self.pred[v].append(u)
        # undirected neighborhood, deduplicated, used for weak connectivity
        self.und: list[list[int]] = [
            sorted(set(self.succ[u]) | set(self.pred[u])) for u in range(n)
        ]
        # CSR offsets into the sorted edge arrays, grouped by source
        self.out_indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(self.out_indptr, self.edge_src + 1, 1)
        np.cumsum(self.out_indptr, out=self.out_indptr)

    def csr(self, weights: np.ndarray | None = None):
        """scipy CSR adjacency; unweighted (all ones) unless weights given."""
        from scipy.sparse import csr_matrix

        data = np.ones(self.m) if weights is None else np.asarray(weights, dtype=float)
        return csr_matrix((data, (self.edge_src, self.edge_dst)), shape=(self.n, self.n))

    def out_degree(self) -> np.ndarray:
        return np.diff(self.out_indptr)

    def total_degree(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        np.add.at(deg, self.edge_src, 1)
        np.add.at(deg, self.edge_dst, 1)
        return deg


def graph_from_edges(
    stations: list[Station],
    directed_edges: list[tuple[str, str]],
    d_imt: float = 0.0,
) -> MultilayerGraph:
    """Assemble a graph from explicit directed (src, dst) pairs.

    Edge kinds and lengths are derived from the endpoint stations. Mostly a
    convenience for tests and randomized replicas.
    """
    smap = {s.id: s for s in stations}
    if len(smap) != len(stations):
        raise InputError("duplicate station ids")
    edges: dict[tuple[str, str], Edge] = {}
    for src, dst in directed_edges:
        if src not in smap or dst not in smap:
            raise InputError(f"edge {src}->{dst} references unknown station")
        if src == dst:
            continue
        a, b = smap[src], smap[dst]
        kind = EdgeKind.INTRA_MODAL if a.mode is b.mode else EdgeKind.INTER_MODAL
        edges[(src, dst)] = Edge(src, dst, kind, haversine(a.lat, a.lon, b.lat, b.lon))
    return MultilayerGraph(stations=smap, edges=edges, d_imt=d_imt)
