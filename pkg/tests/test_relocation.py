import pytest

from transitres import (
    InputError,
    Mode,
    NumericalError,
    RelocationModel,
    graph_from_edges,
    relocation_rate,
)
from conftest import flat_station, line_graph, random_digraph


def test_colocated_neighbor_gives_one():
    # u sits exactly at v's location and still reaches n after v fails
    v = flat_station("v", 0.0, 0.0)
    u = flat_station("u", 0.0, 0.0, mode=Mode.BUS)
    n = flat_station("n", 0.01, 0.0)
    g = graph_from_edges([v, u, n], [("v", "n"), ("v", "u"), ("u", "v"), ("u", "n")])
    res = relocation_rate(g, 750.0)
    assert res.per_node["v"] == pytest.approx(1.0, abs=1e-12)


def test_neighbor_at_dmax_gives_zero():
    # 0.006747 deg is ~750.3 m; pick the walk to land exactly on d_max
    from transitres import haversine

    d_max = haversine(0, 0, 0.00674, 0)
    v = flat_station("v", 0.0, 0.0)
    u = flat_station("u", 0.00674, 0.0, mode=Mode.BUS)
    n = flat_station("n", 0.05, 0.0)
    g = graph_from_edges([v, u, n], [("v", "n"), ("v", "u"), ("u", "v"), ("u", "n")])
    res = relocation_rate(g, d_max)
    assert res.per_node["v"] == pytest.approx(0.0, abs=1e-12)


def test_unreachable_descendants_score_zero():
    g = line_graph(["a", "b", "c"])  # a->b->c, no alternatives
    res = relocation_rate(g, 750.0)
    # b's failure leaves no neighbor that reaches c (a's only path went via b)
    assert res.per_node["b"] == 0.0


def test_nodes_without_descendants_excluded():
    g = line_graph(["a", "b", "c"])
    res = relocation_rate(g, 750.0)
    assert "c" not in res.per_node  # sink has no descendants
    assert set(res.per_node) == {"a", "b"}
    assert res.network_rl == pytest.approx(
        sum(res.per_node.values()) / len(res.per_node)
    )


def test_edgeless_graph_raises():
    g = graph_from_edges([flat_station("a"), flat_station("b", lat=0.01)], [])
    with pytest.raises(NumericalError):
        relocation_rate(g, 750.0)


def test_asymmetric_single_mode_not_applicable():
    g = line_graph(["a", "b", "c"], both_ways=True)
    with pytest.raises(InputError):
        relocation_rate(g, 750.0, RelocationModel.ASYMMETRIC)


def test_invalid_dmax():
    g = line_graph(["a", "b"], both_ways=True)
    with pytest.raises(InputError):
        relocation_rate(g, 0.0)


def test_scores_in_unit_interval():
    for seed in range(5):
        g = random_digraph(25, 0.12, seed=seed)
        res = relocation_rate(g, 900.0)
        assert all(0.0 <= v <= 1.0 for v in res.per_node.values())
        assert 0.0 <= res.network_rl <= 1.0


@pytest.mark.parametrize("seed", range(5))
def test_monotone_in_dmax(seed):
    g = random_digraph(22, 0.12, seed=seed + 100)
    small = relocation_rate(g, 400.0)
    large = relocation_rate(g, 1200.0)
    for sid, value in small.per_node.items():
        assert large.per_node[sid] >= value - 1e-12


def _two_mode_graph(seed):
    import random as _random

    rng = _random.Random(seed)
    stations = []
    for i in range(20):
        mode = Mode.BUS if i % 2 else Mode.METRO
        stations.append(
            flat_station(
                f"s{i:02d}",
                lat=rng.uniform(-0.01, 0.01),
                lon=rng.uniform(-0.01, 0.01),
                mode=mode,
            )
        )
    ids = [s.id for s in stations]
    edges = []
    for a in ids:
        for b in ids:
            if a != b and rng.random() < 0.12:
                edges.append((a, b))
    return graph_from_edges(stations, edges)


@pytest.mark.parametrize("seed", range(5))
def test_symmetric_dominates_asymmetric(seed):
    g = _two_mode_graph(seed)
    sym = relocation_rate(g, 800.0, RelocationModel.SYMMETRIC)
    asym = relocation_rate(g, 800.0, RelocationModel.ASYMMETRIC)
    for sid in sym.per_node:
        assert sym.per_node[sid] >= asym.per_node[sid] - 1e-12
    assert sym.network_rl >= asym.network_rl - 1e-12


def test_sample_restricts_evaluation():
    g = line_graph(["a", "b", "c", "d"], both_ways=True)
    res = relocation_rate(g, 750.0, sample=["a", "b"])
    assert set(res.per_node) <= {"a", "b"}
    with pytest.raises(InputError):
        relocation_rate(g, 750.0, sample=["nope"])


def test_threads_do_not_change_results(small_city):
    from transitres import add_transfer_edges, build_graph

    stations, routes = small_city
    g, _ = add_transfer_edges(build_graph(routes, stations), 100.0)
    r1 = relocation_rate(g, 750.0, threads=1)
    r4 = relocation_rate(g, 750.0, threads=4)
    assert r1.per_node == r4.per_node
    assert r1.network_rl == r4.network_rl
