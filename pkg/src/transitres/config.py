"""Run configuration: TOML file plus command-line overrides.

The config hash identifies the analysis inputs and parameters only; runtime
concerns (output directory, thread count) never affect it, so reruns and
different parallelism settings produce identical manifests.
"""

from __future__ import annotations

import hashlib
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .errors import InputError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


@dataclass
class RunConfig:
    stations: str = "stations.csv"
    routes: str = "routes.csv"
    core_only: bool = True
    d_imt: float = 100.0
    seed: int = 42
    repeats: int = 50
    od_samples: int = 10_000
    exhaustive: bool = False
    beta: float = 0.25
    d_max_values: list[float] = field(default_factory=lambda: [750.0, 1600.0])
    replicas: int = 50
    beta_grid: list[float] = field(default_factory=lambda: [round(0.05 * i, 2) for i in range(21)])
    shock_ks: list[int] = field(default_factory=lambda: [1, 2, 5, 10, 20])
    dimt_sweep: list[float] = field(default_factory=lambda: [0.0, 50.0, 100.0, 150.0, 200.0])
    out_dir: str = "out"
    threads: int = 1

    def validate(self) -> None:
        if self.repeats < 1:
            raise InputError("repeats must be >= 1")
        if self.threads < 1:
            raise InputError("threads must be >= 1")
        if self.d_imt < 0:
            raise InputError("d_imt must be >= 0")
        if any(d <= 0 for d in self.d_max_values):
            raise InputError("d_max values must be > 0")

    def config_hash(self) -> str:
        payload = asdict(self)
        payload.pop("out_dir")
        payload.pop("threads")
        canon = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode("utf-8")).hexdigest()


_SECTION_KEYS = {
    "input": {"stations": "stations", "routes": "routes", "core_only": "core_only"},
    "build": {"d_imt": "d_imt"},
    "analysis": {
        "seed": "seed",
        "repeats": "repeats",
        "od_samples": "od_samples",
        "exhaustive": "exhaustive",
        "beta": "beta",
        "d_max": "d_max_values",
        "replicas": "replicas",
        "beta_grid": "beta_grid",
        "shock_ks": "shock_ks",
        "dimt_sweep": "dimt_sweep",
        "threads": "threads",
    },
    "output": {"dir": "out_dir"},
}


def parse_grid(text: str) -> list[float]:
    """Parse 'start:stop:step' into an inclusive ascending grid."""
    try:
        start, stop, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise InputError(f"grid must look like start:stop:step, got {text!r}") from None
    if step <= 0 or stop < start:
        raise InputError(f"bad grid bounds {text!r}")
    out = []
    k = 0
    while True:
        v = start + k * step
        if v > stop + 1e-9:
            break
        out.append(round(v, 10))
        k += 1
    return out


def load_config(path: str | Path | None, overrides: dict | None = None) -> RunConfig:
    """Read TOML config (optional) and apply non-None overrides on top."""
    cfg = RunConfig()
    if path is not None:
        path = Path(path)
        if not path.exists():
            raise InputError(f"config file not found: {path}")
        try:
            raw = tomllib.loads(path.read_text(encoding="utf-8"))
        except tomllib.TOMLDecodeError as exc:
            raise InputError(f"bad config file {path}: {exc}") from None
        for section, keys in _SECTION_KEYS.items():
            body = raw.get(section, {})
            if not isinstance(body, dict):
                raise InputError(f"config section [{section}] must be a table")
            for key, attr in keys.items():
                if key in body:
                    setattr(cfg, attr, body[key])
        known = set(_SECTION_KEYS)
        unknown = set(raw) - known
        if unknown:
            raise InputError(f"unknown config sections: {sorted(unknown)}")
    for attr, value in (overrides or {}).items():
        if value is not None:
            setattr(cfg, attr, value)
    cfg.validate()
    return cfg
