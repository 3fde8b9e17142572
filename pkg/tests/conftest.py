import random

import pytest

from transitres import Mode, Station, graph_from_edges


def flat_station(sid, lat=0.0, lon=0.0, mode=Mode.METRO, in_core=True):
    return Station(sid, mode, lat, lon, in_core)


def line_graph(ids, mode=Mode.METRO, spacing_deg=0.01, both_ways=False):
    """Stations on a meridian with directed consecutive edges."""
    stations = [flat_station(s, lat=i * spacing_deg, mode=mode) for i, s in enumerate(ids)]
    edges = [(a, b) for a, b in zip(ids, ids[1:])]
    if both_ways:
        edges += [(b, a) for a, b in zip(ids, ids[1:])]
    return graph_from_edges(stations, edges)


def star_graph(n_leaves=4, mode=Mode.METRO):
    stations = [flat_station("hub", mode=mode)] + [
        flat_station(f"leaf{i}", lat=0.01 * (i + 1), mode=mode) for i in range(n_leaves)
    ]
    edges = []
    for i in range(n_leaves):
        edges += [("hub", f"leaf{i}"), (f"leaf{i}", "hub")]
    return graph_from_edges(stations, edges)


def random_digraph(n, p, seed, mode=Mode.BUS):
    """G(n, p) directed graph with seeded scatter coordinates."""
    rng = random.Random(seed)
    stations = [
        flat_station(f"v{i:03d}", lat=rng.uniform(-0.2, 0.2), lon=rng.uniform(-0.2, 0.2), mode=mode)
        for i in range(n)
    ]
    edges = [
        (stations[i].id, stations[j].id)
        for i in range(n)
        for j in range(n)
        if i != j and rng.random() < p
    ]
    return graph_from_edges(stations, edges)


@pytest.fixture
def diamond():
    """a->b->d and a->c->d; the classic rerouting-overload shape."""
    stations = [flat_station(s, lat=0.001 * i) for i, s in enumerate("abcd")]
    return graph_from_edges(stations, [("a", "b"), ("b", "d"), ("a", "c"), ("c", "d")])


@pytest.fixture
def small_city():
    from transitres import SyntheticCitySpec, generate_city

    spec = SyntheticCitySpec(n_metro=20, n_bus=64, n_ferry=3, n_rail=3, seed=5, area_km=8.0)
    return generate_city(spec)
