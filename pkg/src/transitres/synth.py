"""Deterministic synthetic multilayer cities and test graphs.

The generated city follows the archetypes of real multimodal systems: metro
as interconnected radial lines through a shared hub, bus as a perturbed grid
mesh, ferry and railway as short linear arteries. Bus stops are pulled next
to stations of the other modes ("transfer clusters"), so walking-transfer
integration at realistic thresholds has pairs to find.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .errors import InputError
from .geo import haversine
from .model import Mode, MultilayerGraph, Route, Station, graph_from_edges

_CENTER_LAT = 40.0
_CENTER_LON = -75.0
_M_PER_DEG_LAT = math.pi * 6_371_000.0 / 180.0


@dataclass(frozen=True)
class SyntheticCitySpec:
    n_metro: int = 60
    n_bus: int = 200
    n_ferry: int = 3
    n_rail: int = 3
    seed: int = 1
    area_km: float = 12.0

    def __post_init__(self) -> None:
        if min(self.n_metro, self.n_bus, self.n_ferry, self.n_rail) < 0:
            raise InputError("mode node counts must be >= 0")
        if self.area_km <= 0:
            raise InputError("area_km must be > 0")


def _offset(lat: float, lon: float, north_m: float, east_m: float) -> tuple[float, float]:
    dlat = north_m / _M_PER_DEG_LAT
    dlon = east_m / (_M_PER_DEG_LAT * math.cos(math.radians(lat)))
    return lat + dlat, lon + dlon


def _metro(spec: SyntheticCitySpec, rng: random.Random):
    """Radial lines sharing a central hub station."""
    stations: list[Station] = []
    routes: list[Route] = []
    n = spec.n_metro
    if n == 0:
        return stations, routes
    hub = Station("m000", Mode.METRO, _CENTER_LAT, _CENTER_LON, True)
    stations.append(hub)
    if n == 1:
        return stations, routes

    n_lines = max(1, min(6, (n - 1) // 6))
    remaining = n - 1
    per_line = [remaining // n_lines + (1 if i < remaining % n_lines else 0)
                for i in range(n_lines)]
    reach_m = 0.42 * spec.area_km * 1000.0
    counter = 1
    for li, k in enumerate(per_line):
        if k == 0:
            continue
        angle = math.pi * li / n_lines
        side_a = (k + 1) // 2
        side_b = k - side_a
        line: dict[float, Station] = {}
        for side, count in ((1.0, side_a), (-1.0, side_b)):
            for step in range(1, count + 1):
                r = reach_m * step / max(side_a, 1)
                r *= 1.0 + rng.uniform(-0.08, 0.08)
                lat, lon = _offset(
                    _CENTER_LAT,
                    _CENTER_LON,
                    side * r * math.cos(angle),
                    side * r * math.sin(angle),
                )
                s = Station(f"m{counter:03d}", Mode.METRO, lat, lon, True)
                stations.append(s)
                line[side * r] = s
                counter += 1
        ordered = [line[key] for key in sorted(line)]
        mid = sum(1 for key in line if key < 0)
        seq = [s.id for s in ordered[:mid]] + [hub.id] + [s.id for s in ordered[mid:]]
        routes.append(Route(f"metro_{li}_f", Mode.METRO, tuple(seq)))
        routes.append(Route(f"metro_{li}_r", Mode.METRO, tuple(reversed(seq))))
        if len(seq) >= 5:
            express = _skip_stop(seq)
            routes.append(Route(f"metro_{li}_xf", Mode.METRO, express))
            routes.append(Route(f"metro_{li}_xr", Mode.METRO, tuple(reversed(express))))
    return stations, routes


def _skip_stop(seq: list[str]) -> tuple[str, ...]:
    """Limited-stop overlay of a line: every other station plus the terminus."""
    express = list(seq[::2])
    if express[-1] != seq[-1]:
        express.append(seq[-1])
    return tuple(express)


def _bus(spec: SyntheticCitySpec, rng: random.Random):
    """Perturbed grid mesh; every full row and column is a two-way route."""
    stations: list[Station] = []
    routes: list[Route] = []
    n = spec.n_bus
    if n == 0:
        return stations, routes
    cols = max(1, math.isqrt(n - 1) + 1)
    rows = (n + cols - 1) // cols
    span_m = 0.9 * spec.area_km * 1000.0
    pitch = span_m / max(max(cols, rows) - 1, 1)
    grid: dict[tuple[int, int], Station] = {}
    i = 0
    for r in range(rows):
        for c in range(cols):
            if i >= n:
                break
            north = (r - (rows - 1) / 2.0) * pitch + rng.uniform(-0.15, 0.15) * pitch
            east = (c - (cols - 1) / 2.0) * pitch + rng.uniform(-0.15, 0.15) * pitch
            lat, lon = _offset(_CENTER_LAT, _CENTER_LON, north, east)
            s = Station(f"b{i:04d}", Mode.BUS, lat, lon, True)
            grid[(r, c)] = s
            stations.append(s)
            i += 1
    for r in range(rows):
        line = [grid[(r, c)].id for c in range(cols) if (r, c) in grid]
        if len(line) >= 2:
            routes.append(Route(f"bus_r{r}_f", Mode.BUS, tuple(line)))
            routes.append(Route(f"bus_r{r}_r", Mode.BUS, tuple(reversed(line))))
        if r % 3 == 0 and len(line) >= 5:
            express = _skip_stop(line)
            routes.append(Route(f"bus_r{r}_xf", Mode.BUS, express))
            routes.append(Route(f"bus_r{r}_xr", Mode.BUS, tuple(reversed(express))))
    for c in range(cols):
        line = [grid[(r, c)].id for r in range(rows) if (r, c) in grid]
        if len(line) >= 2:
            routes.append(Route(f"bus_c{c}_f", Mode.BUS, tuple(line)))
            routes.append(Route(f"bus_c{c}_r", Mode.BUS, tuple(reversed(line))))
        if c % 3 == 1 and len(line) >= 5:
            express = _skip_stop(line)
            routes.append(Route(f"bus_c{c}_xf", Mode.BUS, express))
            routes.append(Route(f"bus_c{c}_xr", Mode.BUS, tuple(reversed(express))))
    return stations, routes


def _artery(prefix: str, mode: Mode, count: int, bearing_deg: float,
            offset_north_m: float, offset_east_m: float, pitch_m: float,
            rng: random.Random):
    """A short linear line, the brittle-artery archetype."""
    stations: list[Station] = []
    if count == 0:
        return stations, []
    theta = math.radians(bearing_deg)
    for i in range(count):
        along = (i - (count - 1) / 2.0) * pitch_m * (1.0 + rng.uniform(-0.05, 0.05))
        lat, lon = _offset(
            _CENTER_LAT,
            _CENTER_LON,
            offset_north_m + along * math.cos(theta),
            offset_east_m + along * math.sin(theta),
        )
        stations.append(Station(f"{prefix}{i:02d}", mode, lat, lon, True))
    routes = []
    if count >= 2:
        seq = tuple(s.id for s in stations)
        routes.append(Route(f"{prefix}line_f", mode, seq))
        routes.append(Route(f"{prefix}line_r", mode, tuple(reversed(seq))))
    return stations, routes


def _pull_transfer_stops(stations: list[Station], rng: random.Random) -> list[Station]:
    """Relocate the nearest free bus stop to ~30-80 m of each non-bus station."""
    by_id = {s.id: s for s in stations}
    bus_ids = sorted(sid for sid, s in by_id.items() if s.mode is Mode.BUS)
    if not bus_ids:
        return stations
    claimed: set[str] = set()
    anchors = sorted(sid for sid, s in by_id.items() if s.mode is not Mode.BUS)
    for aid in anchors:
        a = by_id[aid]
        free = [b for b in bus_ids if b not in claimed]
        if not free:
            break
        nearest = min(free, key=lambda b: (haversine(a.lat, a.lon, by_id[b].lat, by_id[b].lon), b))
        claimed.add(nearest)
        walk = rng.uniform(30.0, 80.0)
        bearing = rng.uniform(0.0, 2.0 * math.pi)
        lat, lon = _offset(a.lat, a.lon, walk * math.cos(bearing), walk * math.sin(bearing))
        old = by_id[nearest]
        by_id[nearest] = Station(old.id, old.mode, lat, lon, old.in_core)
    return [by_id[s.id] for s in stations]


def generate_city(spec: SyntheticCitySpec) -> tuple[list[Station], list[Route]]:
    """Build the full synthetic city for the given spec, deterministically."""
    rng = random.Random(spec.seed)
    stations: list[Station] = []
    routes: list[Route] = []
    for part_stations, part_routes in (
        _metro(spec, rng),
        _bus(spec, rng),
        _artery("f", Mode.FERRY, spec.n_ferry, 40.0, 500.0, -1200.0, 1800.0, rng),
        _artery("r", Mode.RAILWAY, spec.n_rail, 110.0, -1500.0, 2000.0, 2500.0, rng),
    ):
        stations.extend(part_stations)
        routes.extend(part_routes)
    stations = _pull_transfer_stops(stations, rng)
    return stations, routes


def scale_free_graph(n: int, m: int, seed: int, mode: Mode = Mode.BUS) -> MultilayerGraph:
    """Preferential-attachment graph (each new node brings m links), as a
    bidirectional MultilayerGraph with seeded scatter coordinates."""
    if n < m + 1 or m < 1:
        raise InputError("need n > m >= 1")
    rng = random.Random(seed)
    stations = [
        Station(
            f"n{i:04d}",
            mode,
            _CENTER_LAT + rng.uniform(-0.1, 0.1),
            _CENTER_LON + rng.uniform(-0.1, 0.1),
            True,
        )
        for i in range(n)
    ]
    # endpoint pool repeats nodes once per incident edge: sampling from it is
    # degree-proportional attachment
    pool: list[int] = list(range(m))
    undirected: set[tuple[int, int]] = set()
    for new in range(m, n):
        targets: set[int] = set()
        while len(targets) < min(m, new):
            pick = pool[rng.randrange(len(pool))] if new > m else rng.randrange(new)
            targets.add(pick)
        for t in targets:
            undirected.add((min(new, t), max(new, t)))
            pool.append(new)
            pool.append(t)
    edges: list[tuple[str, str]] = []
    for a, b in sorted(undirected):
        edges.append((stations[a].id, stations[b].id))
        edges.append((stations[b].id, stations[a].id))
    return graph_from_edges(stations, edges)


def er_graph(n: int, n_edges: int, seed: int, mode: Mode = Mode.BUS) -> MultilayerGraph:
    """Uniform random simple digraph with exactly n_edges directed edges."""
    if n_edges > n * (n - 1):
        raise InputError("edge count exceeds simple-digraph capacity")
    rng = random.Random(seed)
    stations = [
        Station(
            f"n{i:04d}",
            mode,
            _CENTER_LAT + rng.uniform(-0.1, 0.1),
            _CENTER_LON + rng.uniform(-0.1, 0.1),
            True,
        )
        for i in range(n)
    ]
    edges = []
    for code in rng.sample(range(n * (n - 1)), n_edges):
        i, r = divmod(code, n - 1)
        j = r if r < i else r + 1
        edges.append((stations[i].id, stations[j].id))
    return graph_from_edges(stations, edges)
