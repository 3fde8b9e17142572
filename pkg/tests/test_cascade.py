import pytest

from transitres import (
    InputError,
    MultilayerGraph,
    NumericalError,
    beta_sweep,
    estimate_loads,
    graph_from_edges,
    node_throughput,
    recoverability_profile,
    run_cascade,
    scale_free_graph,
    shock_sweep,
    shortest_path_lex,
)
from conftest import flat_station, line_graph, random_digraph, star_graph


def _loads_by_path_walk(g, pairs):
    """Slow oracle: route every pair with the reference path function."""
    loads = {k: 0.0 for k in g.edges}
    for s, t in pairs:
        path = shortest_path_lex(g, s, t)
        if path is None:
            continue
        for a, b in zip(path, path[1:]):
            loads[(a, b)] += 1.0
    return loads


def _slow_cascade_rounds(g, loads, beta, initial):
    """Slow oracle for the whole overload iteration."""
    caps = {k: (1.0 + beta) * loads.edge_load[k] for k in g.edges}
    dead = set(initial)
    alive = {k for k in g.edges if k[0] not in dead and k[1] not in dead}
    rounds = []
    while True:
        sub = MultilayerGraph(
            stations=dict(g.stations),
            edges={k: g.edges[k] for k in alive},
            d_imt=g.d_imt,
        )
        new_loads = _loads_by_path_walk(sub, loads.od_pairs)
        over = {k for k in alive if new_loads[k] > caps[k]}
        if not over:
            return rounds
        rounds.append(over)
        alive -= over


def test_single_edge_exhaustive():
    g = line_graph(["a", "b"])
    lm = estimate_loads(g, exhaustive=True)
    assert lm.edge_load == {("a", "b"): 1.0}
    assert lm.od_pairs == (("a", "b"),)


def test_path_loads_by_hand():
    g = line_graph(["a", "b", "c"])
    lm = estimate_loads(g, exhaustive=True)
    assert lm.edge_load == {("a", "b"): 2.0, ("b", "c"): 2.0}


def test_lexicographic_tie_break(diamond):
    # two shortest a->d paths; [a, b, d] beats [a, c, d]
    assert shortest_path_lex(diamond, "a", "d") == ["a", "b", "d"]
    lm = estimate_loads(diamond, exhaustive=True)
    assert lm.edge_load[("a", "b")] == 2.0
    assert lm.edge_load[("a", "c")] == 1.0


def test_sampled_loads_deterministic():
    g = random_digraph(20, 0.15, seed=8)
    l1 = estimate_loads(g, od_samples=500, seed=123)
    l2 = estimate_loads(g, od_samples=500, seed=123)
    assert l1.edge_load == l2.edge_load
    assert l1.od_pairs == l2.od_pairs


@pytest.mark.parametrize("seed", range(5))
def test_fast_loads_match_path_walk_oracle(seed):
    g = random_digraph(18, 0.15, seed=seed + 300)
    lm = estimate_loads(g, od_samples=200, seed=seed, exhaustive=(seed % 2 == 0))
    oracle = _loads_by_path_walk(g, lm.od_pairs)
    assert lm.edge_load == oracle


def test_no_connected_pairs_raises():
    g = graph_from_edges([flat_station("a"), flat_station("b", lat=0.01)], [])
    with pytest.raises(NumericalError):
        estimate_loads(g, exhaustive=True)


def test_bad_od_samples():
    g = line_graph(["a", "b"])
    with pytest.raises(InputError):
        estimate_loads(g, od_samples=0)


def test_diamond_cascade_hand_simulation(diamond):
    lm = estimate_loads(diamond, exhaustive=True)
    state = run_cascade(diamond, lm, 0.0, {"b"})
    assert state.rounds == [{("a", "c"), ("c", "d")}]
    assert state.r_recover == 0.0
    assert state.total_damage == 5
    assert state.first_wave_fraction == pytest.approx(0.5)
    assert state.capacities[("a", "b")] == 2.0


def test_huge_beta_equals_plain_deletion():
    for seed in range(5):
        g = random_digraph(20, 0.15, seed=seed + 900)
        lm = estimate_loads(g, exhaustive=True)
        victim = sorted(g.stations)[seed]
        state = run_cascade(g, lm, 1e6, {victim})
        incident = {k for k in g.edges if victim in k}
        assert state.rounds == []
        assert state.failed_edges == incident
        # surviving edge set equals the induced subgraph's edges
        remaining = set(g.edges) - state.failed_edges
        sub = g.subgraph(set(g.stations) - {victim})
        assert remaining == set(sub.edges)
        assert state.r_recover == pytest.approx(1.0 - len(incident) / g.n_edges, abs=1e-15)


def test_empty_initial_failures_is_fixed_point():
    g = line_graph(["a", "b", "c"], both_ways=True)
    lm = estimate_loads(g, exhaustive=True)
    state = run_cascade(g, lm, 0.0, set())
    assert state.r_recover == 1.0
    assert state.rounds == []
    assert state.total_damage == 0
    assert state.first_wave_fraction == 0.0


def test_recover_identity_to_machine_precision():
    for seed in range(5):
        g = random_digraph(22, 0.12, seed=seed + 70)
        lm = estimate_loads(g, od_samples=300, seed=seed)
        victim = sorted(g.stations)[0]
        state = run_cascade(g, lm, 0.05, {victim})
        assert abs(state.r_recover + len(state.failed_edges) / g.n_edges - 1.0) < 1e-12


@pytest.mark.parametrize("seed", range(4))
def test_engine_matches_slow_cascade(seed):
    g = random_digraph(16, 0.18, seed=seed + 40)
    lm = estimate_loads(g, exhaustive=True)
    victim = sorted(g.stations)[seed % g.n_nodes]
    for beta in (0.0, 0.2, 1.0):
        fast = run_cascade(g, lm, beta, {victim})
        slow = _slow_cascade_rounds(g, lm, beta, {victim})
        assert fast.rounds == slow


def test_cascade_determinism():
    g = scale_free_graph(60, 2, seed=5)
    lm = estimate_loads(g, od_samples=800, seed=3)
    a = run_cascade(g, lm, 0.1, {"n0000"})
    b = run_cascade(g, lm, 0.1, {"n0000"})
    assert a.rounds == b.rounds
    assert a.r_recover == b.r_recover
    assert a.total_damage == b.total_damage


def test_beta_sweep_endpoint_ordering():
    # damage can wiggle at intermediate tolerances (early fragmentation can
    # starve a cascade), but the zero-tolerance run always dominates the
    # no-overload limit, where the damage is the trigger's incident edges.
    # exhaustive loads keep every edge's capacity positive
    for seed in range(3):
        g = scale_free_graph(50, 2, seed=seed + 10)
        lm = estimate_loads(g, exhaustive=True)
        target = max(node_throughput(g, lm).items(), key=lambda kv: (kv[1], kv[0]))[0]
        rows = beta_sweep(g, lm, [0.0, 1e6], target)
        assert rows[0][1] >= rows[1][1]
        incident = sum(1 for k in g.edges if target in k)
        assert rows[1][1] == 1 + incident


def test_first_overload_round_shrinks_with_tolerance():
    # round-1 loads are identical across tolerances, so higher capacity can
    # only remove failures from the first wave
    for seed in range(3):
        g = scale_free_graph(50, 2, seed=seed + 20)
        lm = estimate_loads(g, exhaustive=True)
        target = max(node_throughput(g, lm).items(), key=lambda kv: (kv[1], kv[0]))[0]
        waves = []
        for beta in (0.0, 0.2, 0.5, 1.0):
            state = run_cascade(g, lm, beta, {target})
            waves.append(state.rounds[0] if state.rounds else set())
        for tighter, looser in zip(waves, waves[1:]):
            assert looser <= tighter


def test_beta_sweep_validation(diamond):
    lm = estimate_loads(diamond, exhaustive=True)
    with pytest.raises(InputError):
        beta_sweep(diamond, lm, [], "a")
    with pytest.raises(InputError):
        beta_sweep(diamond, lm, [0.5, 0.1], "a")


def test_shock_sweep_endpoints():
    g = line_graph(["a", "b", "c", "d"], both_ways=True)
    lm = estimate_loads(g, exhaustive=True)
    rows = shock_sweep(g, lm, 0.0, [0, 4])
    assert rows[0] == (0, 0)
    assert rows[1] == (4, 4 + g.n_edges)


def test_recoverability_leaf_with_huge_beta():
    g = star_graph(4)
    lm = estimate_loads(g, exhaustive=True)
    profile = recoverability_profile(g, lm, 1e6)
    # leaves have 2 incident directed edges of 8 total
    assert profile["leaf0"] == pytest.approx(1.0 - 2.0 / 8.0)
    assert all(0.0 <= v <= 1.0 for v in profile.values())


def test_hub_least_recoverable_at_zero_beta():
    g = star_graph(4)
    lm = estimate_loads(g, exhaustive=True)
    profile = recoverability_profile(g, lm, 0.0)
    assert profile["hub"] == min(profile.values())


def test_recoverability_threads_identical():
    g = scale_free_graph(40, 2, seed=9)
    lm = estimate_loads(g, od_samples=400, seed=1)
    p1 = recoverability_profile(g, lm, 0.2, threads=1)
    p4 = recoverability_profile(g, lm, 0.2, threads=4)
    assert p1 == p4


def test_load_model_must_cover_graph(diamond):
    lm = estimate_loads(diamond, exhaustive=True)
    bigger = graph_from_edges(
        list(diamond.stations.values()) + [flat_station("e", lat=0.02)],
        list(diamond.edges) + [("d", "e")],
    )
    with pytest.raises(InputError):
        run_cascade(bigger, lm, 0.0, {"a"})
