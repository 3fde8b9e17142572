"""File formats: station/route CSV ingest and GraphML graph caching.

stations.csv columns: id,mode,lat,lon,in_core (modes case-insensitive).
routes.csv columns: route_id,mode,seq,station_id — one row per stop with seq
strictly ascending within a route.

GraphML carries node attributes (mode, lat, lon, in_core), edge attributes
(kind, length_m) and the graph-level transfer threshold, and round-trips a
graph field-for-field.
"""

from __future__ import annotations

import csv
import io
import xml.etree.ElementTree as ET
from collections import defaultdict
from pathlib import Path

from .errors import InputError
from .model import Edge, EdgeKind, Mode, MultilayerGraph, Route, Station

_GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"

_TRUE = {"true", "1", "yes", "t"}
_FALSE = {"false", "0", "no", "f"}


def _parse_bool(text: str, where: str) -> bool:
    low = text.strip().lower()
    if low in _TRUE:
        return True
    if low in _FALSE:
        return False
    raise InputError(f"{where}: cannot parse boolean {text!r}")


def _parse_float(text: str, where: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise InputError(f"{where}: cannot parse number {text!r}") from None


def read_stations_csv(path: str | Path) -> list[Station]:
    path = Path(path)
    if not path.exists():
        raise InputError(f"stations file not found: {path}")
    stations: list[Station] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        required = {"id", "mode", "lat", "lon", "in_core"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise InputError(f"{path}: expected header with columns {sorted(required)}")
        for ln, row in enumerate(reader, start=2):
            where = f"{path}:{ln}"
            stations.append(
                Station(
                    id=row["id"].strip(),
                    mode=Mode.parse(row["mode"]),
                    lat=_parse_float(row["lat"], where),
                    lon=_parse_float(row["lon"], where),
                    in_core=_parse_bool(row["in_core"], where),
                )
            )
    return stations


def read_routes_csv(path: str | Path) -> list[Route]:
    path = Path(path)
    if not path.exists():
        raise InputError(f"routes file not found: {path}")
    rows: dict[str, list[tuple[int, str]]] = defaultdict(list)
    modes: dict[str, Mode] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        required = {"route_id", "mode", "seq", "station_id"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise InputError(f"{path}: expected header with columns {sorted(required)}")
        for ln, row in enumerate(reader, start=2):
            rid = row["route_id"].strip()
            mode = Mode.parse(row["mode"])
            if rid in modes and modes[rid] is not mode:
                raise InputError(f"{path}:{ln}: route {rid!r} changes mode mid-file")
            modes[rid] = mode
            try:
                seq = int(row["seq"])
            except ValueError:
                raise InputError(f"{path}:{ln}: bad seq {row['seq']!r}") from None
            rows[rid].append((seq, row["station_id"].strip()))
    routes = []
    for rid in sorted(rows):
        stops = rows[rid]
        seqs = [s for s, _ in stops]
        if sorted(seqs) != seqs or len(set(seqs)) != len(seqs):
            raise InputError(f"route {rid!r}: seq values must be strictly ascending")
        routes.append(Route(rid, modes[rid], tuple(sid for _, sid in stops)))
    return routes


def write_stations_csv(stations: list[Station], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", "mode", "lat", "lon", "in_core"])
        for s in stations:
            w.writerow([s.id, s.mode.value, f"{s.lat:.7f}", f"{s.lon:.7f}", str(s.in_core).lower()])


def write_routes_csv(routes: list[Route], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["route_id", "mode", "seq", "station_id"])
        for r in routes:
            for seq, sid in enumerate(r.stations):
                w.writerow([r.route_id, r.mode.value, seq, sid])


# GraphML attribute keys, fixed ids so output is stable
_NODE_KEYS = [
    ("mode", "string"),
    ("lat", "double"),
    ("lon", "double"),
    ("in_core", "boolean"),
]
_EDGE_KEYS = [("kind", "string"), ("length_m", "double")]
_GRAPH_KEYS = [("d_imt", "double")]


def serialize(g: MultilayerGraph) -> bytes:
    """Serialize a graph to GraphML bytes (deterministic element order)."""
    root = ET.Element("graphml", xmlns=_GRAPHML_NS)
    key_ids: dict[tuple[str, str], str] = {}
    counter = 0
    for domain, keys in (("graph", _GRAPH_KEYS), ("node", _NODE_KEYS), ("edge", _EDGE_KEYS)):
        for name, typ in keys:
            kid = f"d{counter}"
            counter += 1
            ET.SubElement(
                root,
                "key",
                id=kid,
                attrib={"for": domain, "attr.name": name, "attr.type": typ},
            )
            key_ids[(domain, name)] = kid

    graph = ET.SubElement(root, "graph", id="G", edgedefault="directed")

    def put(parent: ET.Element, domain: str, name: str, value: str) -> None:
        el = ET.SubElement(parent, "data", key=key_ids[(domain, name)])
        el.text = value

    put(graph, "graph", "d_imt", repr(float(g.d_imt)))
    for sid in sorted(g.stations):
        s = g.stations[sid]
        node = ET.SubElement(graph, "node", id=sid)
        put(node, "node", "mode", s.mode.value)
        put(node, "node", "lat", repr(float(s.lat)))
        put(node, "node", "lon", repr(float(s.lon)))
        put(node, "node", "in_core", "true" if s.in_core else "false")
    for src, dst in sorted(g.edges):
        e = g.edges[(src, dst)]
        edge = ET.SubElement(graph, "edge", source=src, target=dst)
        put(edge, "edge", "kind", e.kind.value)
        put(edge, "edge", "length_m", repr(float(e.length_m)))

    ET.indent(root)
    buf = io.BytesIO()
    ET.ElementTree(root).write(buf, encoding="utf-8", xml_declaration=True)
    return buf.getvalue()


def deserialize(data: bytes) -> MultilayerGraph:
    """Parse GraphML bytes back into a MultilayerGraph."""
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        line, col = exc.position
        raise InputError(f"malformed GraphML at line {line}, column {col}: {exc}") from None

    ns = {"g": _GRAPHML_NS}
    key_names: dict[str, str] = {}
    for key in root.findall("g:key", ns):
        key_names[key.get("id", "")] = key.get("attr.name", "")
    graph = root.find("g:graph", ns)
    if graph is None:
        raise InputError("GraphML document has no <graph> element")

    def data_of(el: ET.Element) -> dict[str, str]:
        out = {}
        for d in el.findall("g:data", ns):
            out[key_names.get(d.get("key", ""), "")] = d.text or ""
        return out

    gdata = data_of(graph)
    d_imt = _parse_float(gdata["d_imt"], "graph d_imt") if "d_imt" in gdata else 0.0

    stations: dict[str, Station] = {}
    for node in graph.findall("g:node", ns):
        sid = node.get("id")
        if sid is None:
            raise InputError("GraphML node without id")
        attrs = data_of(node)
        try:
            stations[sid] = Station(
                id=sid,
                mode=Mode.parse(attrs["mode"]),
                lat=_parse_float(attrs["lat"], f"node {sid} lat"),
                lon=_parse_float(attrs["lon"], f"node {sid} lon"),
                in_core=_parse_bool(attrs["in_core"], f"node {sid} in_core"),
            )
        except KeyError as exc:
            raise InputError(f"node {sid}: missing attribute {exc}") from None

    edges: dict[tuple[str, str], Edge] = {}
    for el in graph.findall("g:edge", ns):
        src, dst = el.get("source"), el.get("target")
        if src is None or dst is None:
            raise InputError("GraphML edge without source/target")
        attrs = data_of(el)
        try:
            kind = EdgeKind(attrs["kind"])
        except (KeyError, ValueError):
            raise InputError(f"edge {src}->{dst}: bad or missing kind") from None
        if "length_m" not in attrs:
            raise InputError(f"edge {src}->{dst}: missing length_m")
        edges[(src, dst)] = Edge(
            src, dst, kind, _parse_float(attrs["length_m"], f"edge {src}->{dst}")
        )

    for src, dst in edges:
        if src not in stations or dst not in stations:
            raise InputError(f"edge {src}->{dst} references unknown station")
    return MultilayerGraph(stations=stations, edges=edges, d_imt=d_imt)


def save_graph(g: MultilayerGraph, path: str | Path) -> None:
    Path(path).write_bytes(serialize(g))


def load_graph(path: str | Path) -> MultilayerGraph:
    path = Path(path)
    if not path.exists():
        raise InputError(f"graph file not found: {path}")
    return deserialize(path.read_bytes())
