import itertools
import random

import pytest

from transitres import (
    InputError,
    Mode,
    NumericalError,
    betweenness,
    geospatial_efficiency,
    gini,
    global_efficiency,
    graph_from_edges,
    haversine,
    network_summary,
    path_stats,
)
from transitres.paths import bfs_dist
from conftest import flat_station, line_graph, random_digraph, star_graph


# ------------------------------------------------------------------- gini

def test_gini_equal_values_zero():
    assert gini([5, 5, 5, 5]) == 0.0


def test_gini_two_point():
    assert gini([0, 1]) == pytest.approx(0.5, abs=1e-12)


def test_gini_hand_value():
    assert gini([1, 2, 3]) == pytest.approx(2 / 9, abs=1e-9)


def test_gini_errors():
    with pytest.raises(InputError):
        gini([])
    with pytest.raises(InputError):
        gini([1.0, -0.5])
    with pytest.raises(NumericalError):
        gini([0.0, 0.0])


def test_gini_scale_and_permutation_invariance():
    rng = random.Random(99)
    for _ in range(1000):
        n = rng.randint(2, 30)
        v = [rng.uniform(0, 10) for _ in range(n)]
        if sum(v) == 0:
            continue
        base = gini(v)
        assert 0.0 <= base <= 1.0 - 1.0 / n + 1e-12
        scale = rng.uniform(0.1, 50.0)
        assert gini([scale * x for x in v]) == pytest.approx(base, abs=1e-9)
        shuffled = v[:]
        rng.shuffle(shuffled)
        assert gini(shuffled) == pytest.approx(base, abs=1e-12)


# ------------------------------------------------------------- betweenness

def _betweenness_by_enumeration(g):
    """All shortest paths via predecessor DAG expansion; fractional counting."""
    idx = g.index
    n = idx.n
    raw = [0.0] * n
    for s in range(n):
        dist = bfs_dist(idx.succ, s)
        for t in range(n):
            if t == s or dist[t] < 0:
                continue
            stack = [[t]]
            paths = []
            while stack:
                partial = stack.pop()
                head = partial[-1]
                if head == s:
                    paths.append(partial)
                    continue
                for p in idx.pred[head]:
                    if dist[p] == dist[head] - 1:
                        stack.append(partial + [p])
            for path in paths:
                for mid in path[1:-1]:
                    raw[mid] += 1.0 / len(paths)
    norm = (n - 1) * (n - 2)
    return {idx.ids[i]: raw[i] / norm if norm else 0.0 for i in range(n)}


def test_betweenness_path_midpoint():
    g = line_graph(["a", "b", "c"])
    bc = betweenness(g).values
    assert bc["b"] == pytest.approx(1.0 / 2.0)  # one of two ordered pairs
    assert bc["a"] == 0.0 and bc["c"] == 0.0


def test_betweenness_complete_k3_zero():
    stations = [flat_station(s, lat=0.01 * i) for i, s in enumerate("abc")]
    edges = [(a, b) for a in "abc" for b in "abc" if a != b]
    g = graph_from_edges(stations, edges)
    assert all(v == 0.0 for v in betweenness(g).values.values())


def test_betweenness_star_hub_is_one():
    g = star_graph(4)
    bc = betweenness(g).values
    assert bc["hub"] == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("seed", range(6))
def test_betweenness_matches_enumeration(seed):
    g = random_digraph(n=random.Random(seed).randint(8, 30), p=0.15, seed=seed)
    fast = betweenness(g).values
    slow = _betweenness_by_enumeration(g)
    for sid in fast:
        assert fast[sid] == pytest.approx(slow[sid], abs=1e-9)


# -------------------------------------------------------------- efficiency

def test_efficiency_complete_k3():
    stations = [flat_station(s, lat=0.01 * i) for i, s in enumerate("abc")]
    edges = [(a, b) for a in "abc" for b in "abc" if a != b]
    assert global_efficiency(graph_from_edges(stations, edges)) == pytest.approx(1.0)


def test_efficiency_directed_path():
    g = line_graph(["a", "b", "c"])
    assert global_efficiency(g) == pytest.approx(2.5 / 6.0, abs=1e-9)


def test_efficiency_edgeless_zero():
    g = graph_from_edges([flat_station("a"), flat_station("b", lat=0.01)], [])
    assert global_efficiency(g) == 0.0


def test_efficiency_monotone_under_edge_addition():
    rng = random.Random(5)
    g = random_digraph(12, 0.12, seed=42)
    idx_ids = sorted(g.stations)
    base = global_efficiency(g)
    absent = [
        (a, b)
        for a in idx_ids
        for b in idx_ids
        if a != b and (a, b) not in g.edges
    ]
    extra = rng.sample(absent, 5)
    g2 = graph_from_edges(list(g.stations.values()), list(g.edges) + extra)
    assert global_efficiency(g2) >= base - 1e-12


# ---------------------------------------------------- geospatial efficiency

def test_geospatial_straight_edge_is_one():
    stations = [flat_station("a"), flat_station("b", lat=0.02)]
    g = graph_from_edges(stations, [("a", "b")])
    assert geospatial_efficiency(g) == pytest.approx(1.0, abs=1e-12)


def test_geospatial_right_angle_detour():
    # legs of ~3 km and ~4 km meeting at a right angle near the equator
    lat_b = 0.0269797  # ~3 km of latitude
    a = flat_station("a", 0.0, 0.0)
    b = flat_station("b", lat_b, 0.0)
    c = flat_station("c", lat_b, lat_b * 4.0 / 3.0)
    g = graph_from_edges([a, b, c], [("a", "b"), ("b", "c")])
    leg_ab = g.edges[("a", "b")].length_m
    leg_bc = g.edges[("b", "c")].length_m
    crow_ac = haversine(a.lat, a.lon, c.lat, c.lon)
    expected_pair = crow_ac / (leg_ab + leg_bc)
    assert expected_pair == pytest.approx(5.0 / 7.0, abs=1e-3)
    expected_mean = (1.0 + 1.0 + expected_pair) / 3.0
    assert geospatial_efficiency(g) == pytest.approx(expected_mean, abs=1e-3)


def test_geospatial_disconnected_pair_excluded():
    stations = [flat_station("a"), flat_station("b", lat=0.02)]
    g = graph_from_edges(stations, [("a", "b")])
    # b cannot reach a; only the connected ordered pair enters the mean
    assert geospatial_efficiency(g) == pytest.approx(1.0, abs=1e-12)


# -------------------------------------------------------------- path stats

def test_path_stats_directed_path():
    g = line_graph(["a", "b", "c"])
    l_max, avg = path_stats(g)
    assert l_max == 2
    assert avg == pytest.approx(10.0 / 6.0, abs=1e-12)


def test_path_stats_complete_k3():
    stations = [flat_station(s, lat=0.01 * i) for i, s in enumerate("abc")]
    edges = [(a, b) for a in "abc" for b in "abc" if a != b]
    assert path_stats(graph_from_edges(stations, edges)) == (1, 1.0)


def test_path_stats_single_edge_substitution():
    g = line_graph(["a", "b"])
    l_max, avg = path_stats(g)
    assert l_max == 1
    assert avg == pytest.approx(1.0)


def test_path_stats_no_connected_pairs():
    g = graph_from_edges([flat_station("a"), flat_station("b", lat=0.01)], [])
    with pytest.raises(NumericalError):
        path_stats(g)


# ----------------------------------------------------------------- summary

def test_network_summary_consistency(small_city):
    from transitres import add_transfer_edges, build_graph

    stations, routes = small_city
    g, _ = add_transfer_edges(build_graph(routes, stations), 100.0)
    s = network_summary(g)
    assert s.n_nodes == g.n_nodes and s.n_edges == g.n_edges
    assert 0.0 < s.s0 <= 1.0
    assert 0.0 <= s.gini_nd < 1.0 and 0.0 <= s.gini_bc < 1.0
    assert s.avg_out_degree == pytest.approx(g.n_edges / g.n_nodes)
    assert 0.0 <= s.efficiency_e <= 1.0
    assert 0.0 <= s.efficiency_geo <= 1.0
    assert s.n_imt_edges % 2 == 0
