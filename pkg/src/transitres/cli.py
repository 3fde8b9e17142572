"""Command-line interface.

One binary, one subcommand per analysis; every command honors --seed and
writes machine-readable CSV/JSON (dot decimals, UTF-8, Unix newlines).
Exit codes: 0 success, 2 input error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .attacks import AttackKind, AttackStrategy, degradation_curve
from .build import add_transfer_edges, build_graph
from .cascade import (
    beta_sweep,
    estimate_loads,
    node_throughput,
    recoverability_profile,
    run_cascade,
    shock_sweep,
)
from .config import RunConfig, load_config, parse_grid
from .errors import InputError, NumericalError, TransitResError
from .graphio import (
    load_graph,
    read_routes_csv,
    read_stations_csv,
    save_graph,
    write_routes_csv,
    write_stations_csv,
)
from .metrics import (
    betweenness,
    degree_vector,
    global_efficiency,
    network_summary,
    out_degree_vector,
)
from .model import MultilayerGraph
from .motifs import enumerate_ffl, motif_attack_order
from .nullmodel import build_ensemble, static_vs_dynamic_report, z_score
from .relocation import RelocationModel, relocation_rate
from .sweeps import pareto_sweep, stepwise_integration
from .synth import SyntheticCitySpec, generate_city
from .theory import UtilityParams, fit_utility_params, solve_optimal_d

_STRATEGY_NAMES = ("random", "degree", "betweenness", "motif")


def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, np.integer):
        return str(int(value))
    return str(value)


def write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(x) for x in row])


def _json_default(value):
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.integer):
        return int(value)
    raise TypeError(f"not JSON serializable: {type(value)}")


def write_json(path: Path, payload) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")


def _load_inputs(cfg: RunConfig):
    stations = read_stations_csv(cfg.stations)
    routes = read_routes_csv(cfg.routes)
    return stations, routes


def _obtain_graph(cfg: RunConfig, cache: str | None) -> MultilayerGraph:
    """Build from CSV inputs, or reuse/populate a GraphML cache file."""
    if cache is not None and Path(cache).exists():
        return load_graph(cache)
    stations, routes = _load_inputs(cfg)
    g = build_graph(routes, stations, core_only=cfg.core_only)
    g, _ = add_transfer_edges(g, cfg.d_imt)
    if cache is not None:
        save_graph(g, cache)
    return g


def _strategy(name: str, seed: int, adaptive: bool) -> AttackStrategy:
    kinds = {
        "random": AttackKind.RANDOM,
        "degree": AttackKind.DEGREE,
        "betweenness": AttackKind.BETWEENNESS,
        "motif": AttackKind.MOTIF,
    }
    if name not in kinds:
        raise InputError(f"unknown attack strategy {name!r}")
    if name == "random":
        return AttackStrategy.random(seed)
    return AttackStrategy(kinds[name], adaptive=adaptive)


# ---------------------------------------------------------------- commands


def cmd_generate(args, cfg: RunConfig) -> None:
    spec = SyntheticCitySpec(
        n_metro=args.n_metro,
        n_bus=args.n_bus,
        n_ferry=args.n_ferry,
        n_rail=args.n_rail,
        seed=args.city_seed,
        area_km=args.area_km,
    )
    stations, routes = generate_city(spec)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_stations_csv(stations, out / "stations.csv")
    write_routes_csv(routes, out / "routes.csv")
    print(f"wrote {len(stations)} stations, {len(routes)} routes to {out}")


def cmd_build(args, cfg: RunConfig) -> None:
    stations, routes = _load_inputs(cfg)
    g = build_graph(routes, stations, core_only=cfg.core_only)
    g, pairs = add_transfer_edges(g, cfg.d_imt)
    target = Path(args.save) if args.save else Path(cfg.out_dir) / "graph.graphml"
    target.parent.mkdir(parents=True, exist_ok=True)
    save_graph(g, target)
    print(
        f"built graph: {g.n_nodes} nodes, {g.n_edges} edges "
        f"({pairs} transfer pairs at {cfg.d_imt} m) -> {target}"
    )


def cmd_metrics(args, cfg: RunConfig) -> None:
    g = _obtain_graph(cfg, args.cache)
    out = Path(cfg.out_dir)
    summary = network_summary(g)
    write_json(out / "summary.json", summary.__dict__)
    deg = degree_vector(g).values
    out_deg = out_degree_vector(g).values
    bc = betweenness(g).values
    rows = [[sid, deg[sid], out_deg[sid], bc[sid]] for sid in sorted(g.stations)]
    write_csv(out / "node_metrics.csv", ["id", "degree", "out_degree", "betweenness"], rows)
    print(f"wrote summary.json and node_metrics.csv to {out}")


def cmd_attack(args, cfg: RunConfig) -> None:
    g = _obtain_graph(cfg, args.cache)
    out = Path(cfg.out_dir)
    names = [s.strip() for s in args.strategies.split(",") if s.strip()]
    summary = {}
    for name in names:
        strategy = _strategy(name, cfg.seed, args.adaptive)
        repeats = cfg.repeats if name == "random" else 1
        curve = degradation_curve(g, strategy, repeats=repeats)
        write_csv(out / f"attack_{name}.csv", ["q", "s"], [[q, s] for q, s in curve.points])
        summary[name] = curve.r_b
    write_json(out / "attack_summary.json", {"r_b": summary, "seed": cfg.seed})
    print(f"attack curves for {names} -> {out}")


def cmd_relocate(args, cfg: RunConfig) -> None:
    g = _obtain_graph(cfg, args.cache)
    out = Path(cfg.out_dir)
    model = RelocationModel(args.model)
    result = relocation_rate(g, args.dmax, model, threads=cfg.threads)
    rows = [[sid, rl] for sid, rl in sorted(result.per_node.items())]
    name = f"relocate_{model.value}_{int(args.dmax)}"
    write_csv(out / f"{name}.csv", ["id", "rl"], rows)
    write_json(
        out / f"{name}.json",
        {
            "network_rl": result.network_rl,
            "d_max": result.d_max,
            "model": model.value,
            "evaluated_nodes": len(result.per_node),
        },
    )
    print(f"relocation ({model.value}, d_max={args.dmax}) -> {out / name}.csv")


def cmd_motifs(args, cfg: RunConfig) -> None:
    g = _obtain_graph(cfg, args.cache)
    out = Path(cfg.out_dir)
    census = enumerate_ffl(g)
    write_csv(
        out / "motif_node_scores.csv",
        ["id", "score"],
        [[sid, census.per_node_score[sid]] for sid in sorted(census.per_node_score)],
    )
    write_csv(
        out / "motif_edge_scores.csv",
        ["src", "dst", "score"],
        [[s, d, v] for (s, d), v in sorted(census.per_edge_score.items())],
    )
    order = motif_attack_order(g)
    path = out / "motif_attack_order.txt"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(order) + "\n", encoding="utf-8")
    print(f"{census.ffl_count} feed-forward loops -> {out}")


def cmd_cascade(args, cfg: RunConfig) -> None:
    g = _obtain_graph(cfg, args.cache)
    out = Path(cfg.out_dir)
    loads = estimate_loads(g, cfg.od_samples, cfg.seed, cfg.exhaustive)

    if args.all_nodes:
        profile = recoverability_profile(g, loads, cfg.beta, threads=cfg.threads)
        write_csv(
            out / "recoverability.csv",
            ["id", "r_recover"],
            [[sid, profile[sid]] for sid in sorted(profile)],
        )
        print(f"recoverability profile over {len(profile)} nodes -> {out}")
        return

    if args.target is not None:
        target = args.target
    else:
        ranking = sorted(node_throughput(g, loads).items(), key=lambda kv: (-kv[1], kv[0]))
        target = ranking[0][0]

    if args.beta_sweep:
        grid = parse_grid(args.beta_sweep)
        rows = beta_sweep(g, loads, grid, target)
        write_csv(out / "cascade_beta_sweep.csv", ["beta", "total_damage"], rows)
    if args.shock_sweep:
        ks = [int(x) for x in args.shock_sweep.split(",")]
        rows = shock_sweep(g, loads, cfg.beta, ks)
        write_csv(out / "cascade_shock_sweep.csv", ["k", "total_damage"], rows)

    state = run_cascade(g, loads, cfg.beta, {target})
    write_csv(
        out / "cascade_rounds.csv",
        ["round", "edges_failed"],
        [[i + 1, len(r)] for i, r in enumerate(state.rounds)],
    )
    write_json(
        out / "cascade_summary.json",
        {
            "target": target,
            "beta": cfg.beta,
            "r_recover": state.r_recover,
            "total_damage": state.total_damage,
            "first_wave_fraction": state.first_wave_fraction,
            "rounds": len(state.rounds),
            "od_samples": loads.od_samples,
            "exhaustive": loads.exhaustive,
            "seed": cfg.seed,
        },
    )
    print(f"cascade at beta={cfg.beta} target={target} -> {out}")


def _nullmodel_metric(name: str, cfg: RunConfig):
    if name == "efficiency":
        return global_efficiency, "efficiency"
    if name == "rb-random":
        return (
            lambda g: degradation_curve(g, AttackStrategy.random(cfg.seed), cfg.repeats).r_b,
            "rb_random",
        )
    if name == "rb-degree":
        return lambda g: degradation_curve(g, AttackStrategy.degree()).r_b, "rb_degree"
    raise InputError(f"unknown null-model metric {name!r}")


def cmd_nullmodel(args, cfg: RunConfig) -> None:
    g = _obtain_graph(cfg, args.cache)
    metric_fn, metric_name = _nullmodel_metric(args.metric, cfg)
    x_real = metric_fn(g)
    ensemble = build_ensemble(
        g, metric_fn, metric_name, replicas=cfg.replicas, seed=cfg.seed, threads=cfg.threads
    )
    payload = {
        "metric": metric_name,
        "x_real": x_real,
        "mu": ensemble.mu_rand,
        "sigma": ensemble.sigma_rand,
        "z": z_score(x_real, ensemble),
        "replicas": ensemble.replicas,
        "seed": cfg.seed,
    }
    write_json(Path(cfg.out_dir) / f"nullmodel_{metric_name}.json", payload)
    print(json.dumps(payload, sort_keys=True))


def cmd_correlate(args, cfg: RunConfig) -> None:
    g = _obtain_graph(cfg, args.cache)
    out = Path(cfg.out_dir)
    loads = estimate_loads(g, cfg.od_samples, cfg.seed, cfg.exhaustive)
    recover = recoverability_profile(g, loads, cfg.beta, threads=cfg.threads)
    census = enumerate_ffl(g)
    motif_vec = type(degree_vector(g))(
        "motif_score", {sid: float(v) for sid, v in census.per_node_score.items()}
    )
    names, matrix = static_vs_dynamic_report(
        g, recover, [degree_vector(g), betweenness(g), motif_vec]
    )
    rows = [[names[i]] + list(matrix[i]) for i in range(len(names))]
    write_csv(out / "correlation_matrix.csv", ["metric"] + names, rows)
    print(f"correlation matrix over {names} -> {out}")


def cmd_optimize(args, cfg: RunConfig) -> None:
    params = UtilityParams(
        b_max=args.bmax, alpha=args.alpha, beta_risk=args.beta_risk, k=args.k
    )
    sol = solve_optimal_d(params)
    payload = {
        "d_star": sol.d_star,
        "residual": sol.residual,
        "concave": sol.concave,
        "boundary": sol.boundary,
        "second_derivative": sol.second_derivative,
    }
    write_json(Path(cfg.out_dir) / "optimal_integration.json", payload)
    print(json.dumps(payload, sort_keys=True))


def cmd_pareto(args, cfg: RunConfig) -> None:
    stations, routes = _load_inputs(cfg)
    sweep = [float(x) for x in args.dimt.split(",")] if args.dimt else cfg.dimt_sweep
    points = pareto_sweep(
        stations,
        routes,
        sweep,
        seed=cfg.seed,
        repeats=cfg.repeats,
        core_only=cfg.core_only,
        threads=cfg.threads,
    )
    rows = [[p.d_imt, p.imt_edges, p.rb_random, p.rb_targeted, p.rl_750] for p in points]
    write_csv(
        Path(cfg.out_dir) / "pareto.csv",
        ["d_imt", "imt_edges", "rb_random", "rb_targeted", "rl_750"],
        rows,
    )
    print(f"pareto sweep over {sweep} -> {cfg.out_dir}/pareto.csv")


def cmd_stepwise(args, cfg: RunConfig) -> None:
    stations, routes = _load_inputs(cfg)
    dimts = tuple(float(x) for x in args.dimt.split(",")) if args.dimt else (0.0, 100.0)
    rows = stepwise_integration(
        stations,
        routes,
        d_imt_values=dimts,
        replicas=cfg.replicas,
        seed=cfg.seed,
        core_only=cfg.core_only,
        d_max_values=tuple(cfg.d_max_values),
        threads=cfg.threads,
    )
    header = [
        "step", "modes", "d_imt", "n_nodes", "n_edges", "n_imt_edges",
        "avg_out_degree", "s0", "diameter_l_max", "avg_path_len",
        "efficiency_e", "z_efficiency", "efficiency_geo", "z_efficiency_geo",
        "avg_edge_len_m", "std_edge_len_m", "gini_nd", "gini_bc",
    ] + [f"rl_{int(d)}" for d in cfg.d_max_values]
    table = [[row[h] for h in header] for row in rows]
    write_csv(Path(cfg.out_dir) / "stepwise.csv", header, table)
    print(f"stepwise integration table ({len(rows)} rows) -> {cfg.out_dir}/stepwise.csv")


def cmd_fit(args, cfg: RunConfig) -> None:
    """Heuristic: fit the utility model to a pareto sweep CSV."""
    path = Path(args.pareto_csv)
    if not path.exists():
        raise InputError(f"pareto CSV not found: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    if len(rows) < 3:
        raise InputError("fit needs a sweep with at least 3 thresholds")
    # d scaled to hundreds of meters; benefit = random-failure robustness
    # gain over no integration; risk = targeted-robustness loss
    d = [float(r["d_imt"]) / 100.0 for r in rows]
    rb0 = float(rows[0]["rb_random"])
    rt0 = float(rows[0]["rb_targeted"])
    benefit = [float(r["rb_random"]) - rb0 for r in rows]
    risk = [max(0.0, rt0 - float(r["rb_targeted"])) for r in rows]
    params = fit_utility_params(d, benefit, risk)
    sol = solve_optimal_d(params)
    payload = {
        "b_max": params.b_max,
        "alpha": params.alpha,
        "beta_risk": params.beta_risk,
        "k": params.k,
        "d_star_hundreds_m": sol.d_star,
        "d_star_m": sol.d_star * 100.0,
        "boundary": sol.boundary,
        "note": "heuristic least-squares fit of the sweep, not a measurement",
    }
    write_json(Path(cfg.out_dir) / "utility_fit.json", payload)
    print(json.dumps(payload, sort_keys=True))


def run_all(cfg: RunConfig) -> dict:
    """Execute every analysis stage; returns the manifest payload."""
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    artifacts: list[Path] = []

    def stage(name: str):
        class _Stage:
            def __enter__(self):
                return None

            def __exit__(self, exc_type, exc, tb):
                if exc is not None:
                    raise TransitResError(f"stage {name!r} failed: {exc}") from exc
                return False

        return _Stage()

    with stage("load-input"):
        stations, routes = _load_inputs(cfg)

    with stage("build"):
        g = build_graph(routes, stations, core_only=cfg.core_only)
        g, _ = add_transfer_edges(g, cfg.d_imt)
        save_graph(g, out / "graph.graphml")
        artifacts.append(out / "graph.graphml")

    with stage("metrics"):
        summary = network_summary(g)
        write_json(out / "summary.json", summary.__dict__)
        deg = degree_vector(g)
        odeg = out_degree_vector(g)
        bc = betweenness(g)
        write_csv(
            out / "node_metrics.csv",
            ["id", "degree", "out_degree", "betweenness"],
            [[sid, deg.values[sid], odeg.values[sid], bc.values[sid]] for sid in sorted(g.stations)],
        )
        artifacts += [out / "summary.json", out / "node_metrics.csv"]

    with stage("attack"):
        rb = {}
        for name in _STRATEGY_NAMES:
            strategy = _strategy(name, cfg.seed, adaptive=False)
            repeats = cfg.repeats if name == "random" else 1
            curve = degradation_curve(g, strategy, repeats=repeats)
            path = out / f"attack_{name}.csv"
            write_csv(path, ["q", "s"], [[q, s] for q, s in curve.points])
            artifacts.append(path)
            rb[name] = curve.r_b
        write_json(out / "attack_summary.json", {"r_b": rb, "seed": cfg.seed})
        artifacts.append(out / "attack_summary.json")

    with stage("relocate"):
        reloc_summary = {}
        models = [RelocationModel.SYMMETRIC]
        if len(g.modes_present()) > 1:
            models.append(RelocationModel.ASYMMETRIC)
        for model in models:
            for d_max in cfg.d_max_values:
                res = relocation_rate(g, d_max, model, threads=cfg.threads)
                name = f"relocate_{model.value}_{int(d_max)}"
                path = out / f"{name}.csv"
                write_csv(
                    path, ["id", "rl"], [[sid, v] for sid, v in sorted(res.per_node.items())]
                )
                artifacts.append(path)
                reloc_summary[name] = res.network_rl
        write_json(out / "relocation_summary.json", reloc_summary)
        artifacts.append(out / "relocation_summary.json")

    with stage("motifs"):
        census = enumerate_ffl(g)
        write_csv(
            out / "motif_node_scores.csv",
            ["id", "score"],
            [[sid, census.per_node_score[sid]] for sid in sorted(census.per_node_score)],
        )
        write_csv(
            out / "motif_edge_scores.csv",
            ["src", "dst", "score"],
            [[s, d, v] for (s, d), v in sorted(census.per_edge_score.items())],
        )
        (out / "motif_attack_order.txt").write_text(
            "\n".join(motif_attack_order(g)) + "\n", encoding="utf-8"
        )
        artifacts += [
            out / "motif_node_scores.csv",
            out / "motif_edge_scores.csv",
            out / "motif_attack_order.txt",
        ]

    with stage("cascade"):
        loads = estimate_loads(g, cfg.od_samples, cfg.seed, cfg.exhaustive)
        ranking = sorted(node_throughput(g, loads).items(), key=lambda kv: (-kv[1], kv[0]))
        target = ranking[0][0]
        rows = beta_sweep(g, loads, cfg.beta_grid, target)
        write_csv(out / "cascade_beta_sweep.csv", ["beta", "total_damage"], rows)
        ks = [k for k in cfg.shock_ks if k <= g.n_nodes]
        write_csv(
            out / "cascade_shock_sweep.csv",
            ["k", "total_damage"],
            shock_sweep(g, loads, cfg.beta, ks),
        )
        state = run_cascade(g, loads, cfg.beta, {target})
        write_csv(
            out / "cascade_rounds.csv",
            ["round", "edges_failed"],
            [[i + 1, len(r)] for i, r in enumerate(state.rounds)],
        )
        write_json(
            out / "cascade_summary.json",
            {
                "target": target,
                "beta": cfg.beta,
                "r_recover": state.r_recover,
                "total_damage": state.total_damage,
                "first_wave_fraction": state.first_wave_fraction,
                "rounds": len(state.rounds),
            },
        )
        profile = recoverability_profile(g, loads, cfg.beta, threads=cfg.threads)
        write_csv(
            out / "recoverability.csv",
            ["id", "r_recover"],
            [[sid, profile[sid]] for sid in sorted(profile)],
        )
        artifacts += [
            out / "cascade_beta_sweep.csv",
            out / "cascade_shock_sweep.csv",
            out / "cascade_rounds.csv",
            out / "cascade_summary.json",
            out / "recoverability.csv",
        ]

    with stage("nullmodel"):
        z_payload = {}
        for metric_key in ("efficiency", "rb-random", "rb-degree"):
            metric_fn, metric_name = _nullmodel_metric(metric_key, cfg)
            x_real = metric_fn(g)
            ens = build_ensemble(
                g, metric_fn, metric_name,
                replicas=cfg.replicas, seed=cfg.seed, threads=cfg.threads,
            )
            z_payload[metric_name] = {
                "x_real": x_real,
                "mu": ens.mu_rand,
                "sigma": ens.sigma_rand,
                "z": z_score(x_real, ens),
            }
        write_json(out / "nullmodel.json", z_payload)
        artifacts.append(out / "nullmodel.json")

    with stage("correlate"):
        census = enumerate_ffl(g)
        from .metrics import NodeMetricVector

        motif_vec = NodeMetricVector(
            "motif_score", {sid: float(v) for sid, v in census.per_node_score.items()}
        )
        names, matrix = static_vs_dynamic_report(
            g, profile, [degree_vector(g), betweenness(g), motif_vec]
        )
        write_csv(
            out / "correlation_matrix.csv",
            ["metric"] + names,
            [[names[i]] + list(matrix[i]) for i in range(len(names))],
        )
        artifacts.append(out / "correlation_matrix.csv")

    with stage("pareto"):
        points = pareto_sweep(
            stations,
            routes,
            cfg.dimt_sweep,
            seed=cfg.seed,
            repeats=cfg.repeats,
            core_only=cfg.core_only,
            threads=cfg.threads,
        )
        write_csv(
            out / "pareto.csv",
            ["d_imt", "imt_edges", "rb_random", "rb_targeted", "rl_750"],
            [[p.d_imt, p.imt_edges, p.rb_random, p.rb_targeted, p.rl_750] for p in points],
        )
        artifacts.append(out / "pareto.csv")

    manifest = {
        "package_version": __version__,
        "config_hash": cfg.config_hash(),
        "seed": cfg.seed,
        "artifacts": [
            {
                "name": p.name,
                "sha256": hashlib.sha256(p.read_bytes()).hexdigest(),
                "bytes": p.stat().st_size,
            }
            for p in sorted(artifacts, key=lambda p: p.name)
        ],
    }
    write_json(out / "manifest.json", manifest)
    return manifest


def cmd_run_all(args, cfg: RunConfig) -> None:
    manifest = run_all(cfg)
    print(
        f"run-all complete: {len(manifest['artifacts'])} artifacts, "
        f"config hash {manifest['config_hash'][:12]} -> {cfg.out_dir}/manifest.json"
    )


# ---------------------------------------------------------------- parser


def _add_graph_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("--stations", help="stations CSV path")
    p.add_argument("--routes", help="routes CSV path")
    p.add_argument("--dimt", dest="d_imt", type=float, help="transfer threshold, meters")
    p.add_argument("--full-routes", action="store_true",
                   help="keep whole routes instead of in-core segments")
    p.add_argument("--cache", help="GraphML cache path (load if present, else build+save)")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="TOML config file")
    p.add_argument("--out", help="output directory")
    p.add_argument("--seed", type=int, help="master random seed")
    p.add_argument("--threads", type=int, help="worker threads for per-node stages")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="transitres",
        description="Multilayer transit network resilience analysis",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a synthetic multilayer city")
    _add_common(p)
    p.add_argument("--n-metro", type=int, default=60)
    p.add_argument("--n-bus", type=int, default=200)
    p.add_argument("--n-ferry", type=int, default=3)
    p.add_argument("--n-rail", type=int, default=3)
    p.add_argument("--city-seed", type=int, default=1)
    p.add_argument("--area-km", type=float, default=12.0)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("build", help="build and cache the multilayer graph")
    _add_common(p)
    _add_graph_source(p)
    p.add_argument("--save", help="output GraphML path (default OUT/graph.graphml)")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("metrics", help="structural summary and node metrics")
    _add_common(p)
    _add_graph_source(p)
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("attack", help="degradation curves under attack strategies")
    _add_common(p)
    _add_graph_source(p)
    p.add_argument("--strategies", default="random,degree,betweenness,motif")
    p.add_argument("--repeats", type=int, help="random-failure repeats")
    p.add_argument("--adaptive", action="store_true", help="rerank targets after each removal")
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("relocate", help="relocation rates after single-node failures")
    _add_common(p)
    _add_graph_source(p)
    p.add_argument("--dmax", type=float, default=750.0)
    p.add_argument("--model", choices=["symmetric", "asymmetric"], default="symmetric")
    p.set_defaults(func=cmd_relocate)

    p = sub.add_parser("motifs", help="feed-forward loop census and rankings")
    _add_common(p)
    _add_graph_source(p)
    p.set_defaults(func=cmd_motifs)

    p = sub.add_parser("cascade", help="load-capacity cascading failures")
    _add_common(p)
    _add_graph_source(p)
    p.add_argument("--beta", type=float, help="capacity tolerance")
    p.add_argument("--target", help="initial failed station id")
    p.add_argument("--all-nodes", action="store_true",
                   help="recoverability profile over every node")
    p.add_argument("--od-samples", type=int, help="sampled OD pairs")
    p.add_argument("--exhaustive", action="store_true", help="route all connected pairs")
    p.add_argument("--latent-demand", action="store_true",
                   help="keep disconnected OD pairs in the sample (no effect on "
                        "outcomes: failures are monotone, so lost pairs never reconnect)")
    p.add_argument("--beta-sweep", help="tolerance grid start:stop:step")
    p.add_argument("--shock-sweep", help="comma-separated k values")
    p.set_defaults(func=cmd_cascade)

    p = sub.add_parser("nullmodel", help="Z-score a metric against random replicas")
    _add_common(p)
    _add_graph_source(p)
    p.add_argument("--metric", choices=["efficiency", "rb-random", "rb-degree"],
                   default="efficiency")
    p.add_argument("--replicas", type=int)
    p.set_defaults(func=cmd_nullmodel)

    p = sub.add_parser("correlate", help="static metrics vs functional recoverability")
    _add_common(p)
    _add_graph_source(p)
    p.add_argument("--beta", type=float)
    p.add_argument("--od-samples", type=int)
    p.add_argument("--exhaustive", action="store_true")
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("optimize", help="solve the optimal integration depth")
    _add_common(p)
    p.add_argument("--bmax", type=float, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", dest="beta_risk", type=float, required=True)
    p.add_argument("--k", type=float, default=1.0)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("pareto", help="cost-benefit sweep over transfer thresholds")
    _add_common(p)
    _add_graph_source(p)
    p.add_argument("--dimt-sweep", dest="dimt", help="comma-separated thresholds")
    p.add_argument("--repeats", type=int)
    p.set_defaults(func=cmd_pareto)

    p = sub.add_parser("stepwise", help="cumulative mode-integration table")
    _add_common(p)
    _add_graph_source(p)
    p.add_argument("--dimt-steps", dest="dimt", help="comma-separated thresholds")
    p.add_argument("--replicas", type=int)
    p.set_defaults(func=cmd_stepwise)

    p = sub.add_parser("fit", help="heuristic utility-model fit of a pareto sweep")
    _add_common(p)
    p.add_argument("--pareto-csv", required=True)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("run-all", help="every analysis stage plus a manifest")
    _add_common(p)
    _add_graph_source(p)
    p.set_defaults(func=cmd_run_all)

    return parser


def _config_from_args(args) -> RunConfig:
    overrides = {
        "stations": getattr(args, "stations", None),
        "routes": getattr(args, "routes", None),
        "d_imt": getattr(args, "d_imt", None),
        "seed": getattr(args, "seed", None),
        "out_dir": getattr(args, "out", None),
        "threads": getattr(args, "threads", None),
        "repeats": getattr(args, "repeats", None),
        "replicas": getattr(args, "replicas", None),
        "od_samples": getattr(args, "od_samples", None),
        "beta": getattr(args, "beta", None),
    }
    if getattr(args, "full_routes", False):
        overrides["core_only"] = False
    if getattr(args, "exhaustive", False):
        overrides["exhaustive"] = True
    return load_config(getattr(args, "config", None), overrides)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from_args(args)
        args.func(args, cfg)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except TransitResError as exc:
        cause = exc.__cause__
        code = 2 if isinstance(cause, InputError) else 3
        print(f"error: {exc}", file=sys.stderr)
        return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
