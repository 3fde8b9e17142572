import pytest

from transitres import (
    InputError,
    Mode,
    MultilayerGraph,
    add_transfer_edges,
    build_graph,
    deserialize,
    graph_from_edges,
    load_graph,
    read_routes_csv,
    read_stations_csv,
    save_graph,
    serialize,
    write_routes_csv,
    write_stations_csv,
)
from transitres.model import Station


def test_stations_csv_roundtrip(tmp_path):
    stations = [
        Station("a", Mode.METRO, 40.0, -75.0, True),
        Station("b", Mode.BUS, 40.001, -75.002, False),
    ]
    path = tmp_path / "stations.csv"
    write_stations_csv(stations, path)
    back = read_stations_csv(path)
    assert [s.id for s in back] == ["a", "b"]
    assert back[0].mode is Mode.METRO
    assert back[1].in_core is False
    assert back[0].lat == pytest.approx(40.0, abs=1e-7)


def test_stations_csv_modes_case_insensitive(tmp_path):
    path = tmp_path / "stations.csv"
    path.write_text("id,mode,lat,lon,in_core\nx,Metro,1.0,2.0,TRUE\n")
    (s,) = read_stations_csv(path)
    assert s.mode is Mode.METRO and s.in_core


def test_stations_csv_bad_header(tmp_path):
    path = tmp_path / "stations.csv"
    path.write_text("id,lat,lon\nx,1,2\n")
    with pytest.raises(InputError):
        read_stations_csv(path)


def test_routes_csv_roundtrip(tmp_path):
    from transitres import Route

    routes = [Route("r1", Mode.BUS, ("a", "b", "c")), Route("r2", Mode.METRO, ("x", "y"))]
    path = tmp_path / "routes.csv"
    write_routes_csv(routes, path)
    back = read_routes_csv(path)
    assert back == sorted(routes, key=lambda r: r.route_id)


def test_routes_csv_seq_must_ascend(tmp_path):
    path = tmp_path / "routes.csv"
    path.write_text("route_id,mode,seq,station_id\nr,bus,1,a\nr,bus,0,b\n")
    with pytest.raises(InputError):
        read_routes_csv(path)


def test_routes_csv_mode_switch_rejected(tmp_path):
    path = tmp_path / "routes.csv"
    path.write_text("route_id,mode,seq,station_id\nr,bus,0,a\nr,metro,1,b\n")
    with pytest.raises(InputError):
        read_routes_csv(path)


def test_missing_files_raise_input_error(tmp_path):
    with pytest.raises(InputError):
        read_stations_csv(tmp_path / "nope.csv")
    with pytest.raises(InputError):
        read_routes_csv(tmp_path / "nope.csv")
    with pytest.raises(InputError):
        load_graph(tmp_path / "nope.graphml")


def test_graphml_empty_graph_roundtrip():
    g = MultilayerGraph()
    assert deserialize(serialize(g)) == g


def test_graphml_small_roundtrip():
    stations = [
        Station("a", Mode.METRO, 0.0, 0.0, True),
        Station("b", Mode.METRO, 0.01, 0.0, False),
        Station("c", Mode.METRO, 0.02, 0.0, True),
    ]
    g = graph_from_edges(stations, [("a", "b"), ("b", "c")])
    assert deserialize(serialize(g)) == g


def test_graphml_preserves_transfer_attributes(small_city):
    stations, routes = small_city
    g, _ = add_transfer_edges(build_graph(routes, stations), 100.0)
    g2 = deserialize(serialize(g))
    assert g2 == g
    assert g2.d_imt == 100.0
    # field-for-field comparison, including float lengths and kinds
    for key, edge in g.edges.items():
        other = g2.edges[key]
        assert other.kind is edge.kind
        assert other.length_m == edge.length_m


def test_graphml_deterministic_bytes(small_city):
    stations, routes = small_city
    g, _ = add_transfer_edges(build_graph(routes, stations), 100.0)
    assert serialize(g) == serialize(deserialize(serialize(g)))


def test_graphml_parse_error_has_line_context():
    with pytest.raises(InputError) as err:
        deserialize(b"<graphml><graph><node id='x'></graph>")
    assert "line" in str(err.value)


def test_graphml_unknown_edge_station():
    doc = b"""<?xml version='1.0' encoding='utf-8'?>
<graphml xmlns="http://graphml.graphdrawing.org/xmlns">
  <key for="graph" attr.name="d_imt" attr.type="double" id="d0" />
  <key for="node" attr.name="mode" attr.type="string" id="d1" />
  <key for="node" attr.name="lat" attr.type="double" id="d2" />
  <key for="node" attr.name="lon" attr.type="double" id="d3" />
  <key for="node" attr.name="in_core" attr.type="boolean" id="d4" />
  <key for="edge" attr.name="kind" attr.type="string" id="d5" />
  <key for="edge" attr.name="length_m" attr.type="double" id="d6" />
  <graph id="G" edgedefault="directed">
    <node id="a"><data key="d1">metro</data><data key="d2">0.0</data><data key="d3">0.0</data><data key="d4">true</data></node>
    <edge source="a" target="ghost"><data key="d5">intra_modal</data><data key="d6">1.0</data></edge>
  </graph>
</graphml>
"""
    with pytest.raises(InputError):
        deserialize(doc)


def test_save_and_load(tmp_path, small_city):
    stations, routes = small_city
    g, _ = add_transfer_edges(build_graph(routes, stations), 100.0)
    path = tmp_path / "g.graphml"
    save_graph(g, path)
    assert load_graph(path) == g
