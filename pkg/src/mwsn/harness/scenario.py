"""Scenario configuration: presets, TOML loading and seeded initial deployments."""
from __future__ import annotations

import dataclasses
import re
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Any, Mapping, Optional

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from ..algorithms import EnergyBudget, Problem, StepCap
from ..connectivity import CommGraph
from ..coverage import TargetSet, gaussian_density_from_targets
from ..density import DensityField, benchmark_density, build_grid
from ..errors import ConfigError, ScenarioError
from ..geometry import ConvexPolygon
from .rng import Xoshiro256

SCHEMA_VERSION = "1"
ALGORITHMS = ("ccml", "bccml", "dcml", "lloyd_alpha")
MAX_REJECTIONS = 10**6

BENCHMARK_REGION = (
    (0.0, 0.0),
    (2.125, 0.0),
    (2.9325, 1.5),
    (2.975, 1.6),
    (2.9325, 1.7),
    (2.295, 2.1),
    (0.85, 2.3),
    (0.17, 1.2),
)


@dataclass
class Scenario:
    name: str = "custom"
    region: ConvexPolygon = field(default_factory=lambda: ConvexPolygon(BENCHMARK_REGION))
    n: int = 32
    eta: np.ndarray = None
    xi: np.ndarray = None
    battery: np.ndarray = None
    r_s: np.ndarray = None
    rc: float = 0.4
    density: DensityField = field(default_factory=DensityField.uniform)
    targets: Optional[TargetSet] = None
    power: float = 1.0
    lifetime: float = 1.3
    grid: int = 256
    max_iters: int = 100
    seed: int = 1
    algorithm: str = "ccml"
    lloyd_alpha: float = 0.2
    step_cap: StepCap = field(default_factory=StepCap)
    tol: float = 1e-5
    bccml_rule: str = "largest"
    bccml_eval_iters: int = 10
    exact_sweep: bool = False
    initial_positions: Optional[np.ndarray] = None

    def __post_init__(self):
        defaults = {"eta": 1.0, "xi": 1.0, "battery": 2.0, "r_s": 0.2}
        for key, default in defaults.items():
            value = getattr(self, key)
            setattr(self, key, _vector(default if value is None else value, self.n, key))
        self.validate()

    def validate(self) -> None:
        if self.n < 1:
            raise ConfigError("must be >= 1", "n")
        for key in ("eta", "xi", "r_s"):
            if np.any(getattr(self, key) <= 0):
                raise ConfigError("entries must be > 0", key)
        if np.any(self.battery < 0):
            raise ConfigError("entries must be >= 0", "battery")
        if not self.rc > 0:
            raise ConfigError("must be > 0", "rc")
        if not self.power > 0:
            raise ConfigError("must be > 0", "power")
        if self.lifetime < 0:
            raise ConfigError("must be >= 0", "lifetime")
        if int(self.grid) != self.grid or self.grid < 8:
            raise ConfigError("must be an integer >= 8", "grid")
        if self.max_iters < 0:
            raise ConfigError("must be >= 0", "max_iters")
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"must be one of {', '.join(ALGORITHMS)}", "algorithm")
        if not 0 < self.lloyd_alpha <= 1:
            raise ConfigError("must lie in (0, 1]", "lloyd_alpha")
        if self.bccml_rule not in ("largest", "smallest"):
            raise ConfigError("must be 'largest' or 'smallest'", "bccml_rule")
        if self.targets is not None:
            inside = self.region.contains_many(self.targets.points, 1e-9)
            if not np.all(inside):
                raise ConfigError("all targets must lie inside the region", "targets")
        if self.initial_positions is not None:
            p = np.asarray(self.initial_positions, dtype=float)
            if p.shape != (self.n, 2):
                raise ConfigError(f"expected {self.n} (x, y) pairs", "initial_positions")
            if not np.all(self.region.contains_many(p, 1e-9)):
                raise ConfigError("all positions must lie inside the region", "initial_positions")

    def replace(self, **changes) -> "Scenario":
        return dataclasses.replace(self, **changes)

    @property
    def budget(self) -> EnergyBudget:
        return EnergyBudget.from_battery(self.battery, self.power, self.lifetime)

    def initial_deployment(self) -> np.ndarray:
        if self.initial_positions is not None:
            return np.array(self.initial_positions, dtype=float)
        return generate_initial_deployment(self.region, self.n, self.rc, self.seed)

    def problem(self, p0=None) -> Problem:
        p0 = self.initial_deployment() if p0 is None else p0
        return Problem(
            p0=p0,
            eta=self.eta,
            xi=self.xi,
            battery=self.battery,
            r_s=self.r_s,
            rc=self.rc,
            polygon=self.region,
            grid=_grid(self.region, int(self.grid)),
            density=self.density,
            targets=self.targets,
            power=self.power,
        )


@lru_cache(maxsize=8)
def _grid(region: ConvexPolygon, G: int):
    return build_grid(region, G)


def _vector(value, n: int, key: str) -> np.ndarray:
    """Expand a scalar, a length-n list, or a ``{"a-b": v}`` group table (1-based ids)."""
    if isinstance(value, Mapping):
        out = np.full(n, np.nan)
        for rng, v in value.items():
            m = re.fullmatch(r"\s*(\d+)\s*(?:-\s*(\d+)\s*)?", str(rng))
            if not m:
                raise ConfigError(f"bad id range {rng!r}", f"{key}.{rng}")
            lo = int(m.group(1))
            hi = int(m.group(2) or lo)
            if not 1 <= lo <= hi <= n:
                raise ConfigError(f"id range outside 1..{n}", f"{key}.{rng}")
            out[lo - 1:hi] = _number(v, f"{key}.{rng}")
        if np.any(np.isnan(out)):
            missing = [str(i + 1) for i in np.flatnonzero(np.isnan(out))]
            raise ConfigError(f"no value for sensor ids {', '.join(missing)}", key)
        return out
    try:
        arr = None if isinstance(value, str) else np.asarray(value, dtype=float)
    except (TypeError, ValueError):
        arr = None
    if arr is None or arr.ndim > 1:
        raise ConfigError("expected a number, a list, or an id-range table", key)
    if arr.ndim == 0:
        return np.full(n, float(arr))
    if len(arr) != n:
        raise ConfigError(f"expected {n} entries, got {len(arr)}", key)
    return arr.copy()


def _number(v, key: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"expected a number, got {v!r}", key)
    return float(v)


def generate_initial_deployment(region: ConvexPolygon, n: int, rc: float, seed: int) -> np.ndarray:
    """Connected random deployment.

    Points are drawn uniformly from the region by rejection in its bounding box
    (x first, then y).  The first point is kept; every later one is redrawn until
    it lies within ``rc`` of some kept point.
    """
    if n < 1:
        raise ConfigError("must be >= 1", "n")
    rng = Xoshiro256(seed)
    x0, y0, x1, y1 = region.bbox()
    kept = np.empty((n, 2))
    for i in range(n):
        for attempt in range(MAX_REJECTIONS + 1):
            q = (rng.uniform(x0, x1), rng.uniform(y0, y1))
            if not region.contains(q):
                continue
            if i == 0:
                break
            d = np.hypot(kept[:i, 0] - q[0], kept[:i, 1] - q[1])
            if np.any(d <= rc):
                break
        else:
            raise ScenarioError(f"sensor {i + 1}: no connected placement after {MAX_REJECTIONS} draws")
        kept[i] = q
    return kept


def _preset_base(name: str, eta, xi, r_s, battery, density, lifetime) -> dict[str, Any]:
    return dict(
        name=name,
        n=32,
        eta=eta,
        xi=xi,
        r_s=r_s,
        battery=battery,
        rc=0.4,
        density=density,
        lifetime=lifetime,
        power=1.0,
    )


PRESETS = {
    "mwsn1": lambda: _preset_base("mwsn1", 1.0, 1.0, 0.2, 2.0, DensityField.uniform(1.0), 1.3),
    "mwsn2": lambda: _preset_base(
        "mwsn2", {"1-8": 1.0, "9-32": 4.0}, {"1-8": 2.0, "9-32": 1.0},
        {"1-8": 0.3, "9-32": 0.15}, 2.0, DensityField.uniform(1.0), 1.3,
    ),
    "mwsn3": lambda: _preset_base(
        "mwsn3", {"1-8": 1.0, "9-32": 4.0}, {"1-8": 2.0, "9-32": 1.0},
        {"1-8": 0.3, "9-32": 0.15}, {"1-28": 2.0, "29-32": 0.8}, benchmark_density(), 1.0,
    ),
}


def preset(name: str, **overrides) -> Scenario:
    key = name.lower()
    if key not in PRESETS:
        raise ConfigError(f"unknown preset {name!r} (choose from {', '.join(PRESETS)})", "preset")
    params = PRESETS[key]()
    params.update({k: v for k, v in overrides.items() if v is not None})
    return Scenario(**params)


_SCALAR_KEYS = {
    "name": str, "n": int, "rc": float, "power": float, "lifetime": float, "grid": int,
    "max_iters": int, "seed": int, "algorithm": str, "lloyd_alpha": float, "tol": float,
    "bccml_rule": str, "bccml_eval_iters": int, "exact_sweep": bool,
}
_KNOWN_KEYS = set(_SCALAR_KEYS) | {
    "schema_version", "preset", "region", "eta", "xi", "battery", "r_s", "density",
    "targets", "initial_positions", "step_cap",
}


def _typed(value, typ, key):
    if typ is bool:
        if not isinstance(value, bool):
            raise ConfigError(f"expected true/false, got {value!r}", key)
        return value
    if typ is str:
        if not isinstance(value, str):
            raise ConfigError(f"expected a string, got {value!r}", key)
        return value
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"expected a number, got {value!r}", key)
    if typ is int and int(value) != value:
        raise ConfigError(f"expected an integer, got {value!r}", key)
    return typ(value)


def _points(value, key) -> np.ndarray:
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError):
        raise ConfigError("expected a list of [x, y] pairs", key) from None
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ConfigError("expected a list of [x, y] pairs", key)
    return arr


def _density(table, n_key="density") -> DensityField:
    if isinstance(table, str):
        table = {"kind": table}
    if not isinstance(table, Mapping):
        raise ConfigError("expected a table or a kind name", n_key)
    kind = table.get("kind", "uniform")
    if kind == "uniform":
        return DensityField.uniform(_typed(table.get("value", 1.0), float, f"{n_key}.value"))
    if kind == "benchmark":
        return benchmark_density()
    if kind == "gaussian_mixture":
        centers = _points(table.get("centers"), f"{n_key}.centers")
        amps = table.get("amplitudes", 1.0)
        scales = table.get("length_scales")
        if scales is None:
            raise ConfigError("missing", f"{n_key}.length_scales")
        return DensityField.gaussian_mixture(centers, amps, scales)
    raise ConfigError(f"unknown kind {kind!r}", f"{n_key}.kind")


def scenario_from_dict(doc: Mapping[str, Any]) -> Scenario:
    """Resolve a configuration document (already parsed) into a :class:`Scenario`."""
    unknown = sorted(set(doc) - _KNOWN_KEYS)
    if unknown:
        raise ConfigError("unknown key", unknown[0])
    version = str(doc.get("schema_version", SCHEMA_VERSION))
    if version != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema version {version!r}", "schema_version")
    params: dict[str, Any] = {}
    if "preset" in doc:
        name = _typed(doc["preset"], str, "preset").lower()
        if name not in PRESETS:
            raise ConfigError(f"unknown preset {doc['preset']!r}", "preset")
        params = PRESETS[name]()
    for key, typ in _SCALAR_KEYS.items():
        if key in doc:
            params[key] = _typed(doc[key], typ, key)
    if "region" in doc:
        try:
            params["region"] = ConvexPolygon(_points(doc["region"], "region"))
        except ValueError as exc:
            raise ConfigError(str(exc), "region") from None
    for key in ("eta", "xi", "battery", "r_s"):
        if key in doc:
            params[key] = doc[key]
    n = params.get("n", 32)
    for key in ("eta", "xi", "battery", "r_s"):
        if key in params and not isinstance(params[key], np.ndarray):
            params[key] = _vector(params[key], n, key)
    r_s = params.get("r_s", np.full(n, 0.2))
    if "targets" in doc:
        t = doc["targets"]
        if not isinstance(t, Mapping) or "points" not in t:
            raise ConfigError("expected a table with 'points'", "targets")
        pts = _points(t["points"], "targets.points")
        params["targets"] = TargetSet(pts, t.get("importance", 1.0))
    if "density" in doc:
        d = doc["density"]
        if (d == "targets") or (isinstance(d, Mapping) and d.get("kind") == "targets"):
            if "targets" not in params:
                raise ConfigError("density 'targets' needs a [targets] table", "density")
            scale = d.get("length_scale") if isinstance(d, Mapping) else None
            scale = float(np.min(r_s)) if scale is None else _typed(scale, float, "density.length_scale")
            params["density"] = gaussian_density_from_targets(params["targets"], scale)
        else:
            params["density"] = _density(d)
    if "initial_positions" in doc:
        params["initial_positions"] = _points(doc["initial_positions"], "initial_positions")
    if "step_cap" in doc:
        sc = doc["step_cap"]
        if not isinstance(sc, Mapping):
            raise ConfigError("expected a table", "step_cap")
        try:
            params["step_cap"] = StepCap(
                rule=sc.get("rule", "constant"),
                value=None if "value" not in sc else _typed(sc["value"], float, "step_cap.value"),
                alpha=_typed(sc.get("alpha", 0.5), float, "step_cap.alpha"),
            )
        except ValueError as exc:
            raise ConfigError(str(exc), "step_cap.rule") from None
    return Scenario(**params)


def load_scenario(path) -> Scenario:
    """Load a TOML scenario file (see ``docs/schema.md``)."""
    path = Path(path)
    try:
        with path.open("rb") as fh:
            doc = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"malformed TOML: {exc}", str(path)) from None
    return scenario_from_dict(doc)


def connected_to_ap(positions, rc: float) -> bool:
    return len(CommGraph.build(positions, rc).reachable(0)) == len(positions)
