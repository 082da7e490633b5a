"""File outputs: metrics.csv, trace.json, summary.json and deployment.svg.

JSON floats use Python's shortest round-trip repr, so positions parse back
bit-exactly.  CSV floats use 17 significant digits.
"""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Any, Iterable
from xml.sax.saxutils import escape

import numpy as np

from ..algorithms import IterationRecord, IterationTrace
from .experiment import Summary
from .scenario import SCHEMA_VERSION, Scenario

METRICS_COLUMNS = (
    "iter",
    "distortion",
    "lifetime",
    "area_coverage",
    "target_coverage",
    "backbone_size",
    "max_energy_spent",
)
FORMATS = ("csv", "json", "svg")


def _num(x) -> str:
    return "" if x is None else format(float(x), ".17g")


def metrics_rows(trace: IterationTrace) -> list[list[str]]:
    """One row per iteration ``1..K``; the initial state lives in trace.json."""
    return [
        [
            str(r.k),
            _num(r.distortion),
            _num(r.lifetime),
            _num(r.area_coverage),
            _num(r.target_coverage),
            str(r.backbone_size),
            _num(np.max(r.spent) if len(r.spent) else 0.0),
        ]
        for r in trace.records
    ]


def write_metrics_csv(trace: IterationTrace, path) -> Path:
    path = Path(path)
    with _open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(METRICS_COLUMNS)
        writer.writerows(metrics_rows(trace))
    return path


def scenario_to_dict(sc: Scenario) -> dict[str, Any]:
    """Serialize a scenario in the configuration schema (vectors written out in full)."""
    doc: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "name": sc.name,
        "n": sc.n,
        "region": [list(map(float, v)) for v in sc.region.vertices],
        "eta": sc.eta.tolist(),
        "xi": sc.xi.tolist(),
        "battery": sc.battery.tolist(),
        "r_s": sc.r_s.tolist(),
        "rc": sc.rc,
        "power": sc.power,
        "lifetime": sc.lifetime,
        "grid": int(sc.grid),
        "max_iters": sc.max_iters,
        "seed": sc.seed,
        "algorithm": sc.algorithm,
        "lloyd_alpha": sc.lloyd_alpha,
        "tol": sc.tol,
        "bccml_rule": sc.bccml_rule,
        "bccml_eval_iters": sc.bccml_eval_iters,
        "exact_sweep": sc.exact_sweep,
        "step_cap": {"rule": sc.step_cap.rule, "alpha": sc.step_cap.alpha},
    }
    if sc.step_cap.value is not None:
        doc["step_cap"]["value"] = sc.step_cap.value
    if sc.density.kind == "uniform":
        doc["density"] = {"kind": "uniform", "value": sc.density.value}
    else:
        comps = sc.density.components
        doc["density"] = {
            "kind": "gaussian_mixture",
            "centers": [list(c.center) for c in comps],
            "amplitudes": [c.amplitude for c in comps],
            "length_scales": [c.length_scale for c in comps],
        }
    if sc.targets is not None:
        doc["targets"] = {"points": sc.targets.points.tolist(), "importance": sc.targets.importance.tolist()}
    if sc.initial_positions is not None:
        doc["initial_positions"] = np.asarray(sc.initial_positions, dtype=float).tolist()
    return doc


def record_to_dict(r: IterationRecord) -> dict[str, Any]:
    return {
        "iter": r.k,
        "positions": r.positions.tolist(),
        "active": [bool(a) for a in r.active],
        "distortion": r.distortion,
        "spent": r.spent.tolist(),
        "lifetime": r.lifetime,
        "area_coverage": r.area_coverage,
        "target_coverage": r.target_coverage,
        "best_subgraph_distortion": r.best_subgraph_distortion,
        "backbone_size": r.backbone_size,
    }


def record_from_dict(d: dict[str, Any]) -> IterationRecord:
    return IterationRecord(
        k=int(d["iter"]),
        positions=np.asarray(d["positions"], dtype=float).reshape(-1, 2),
        active=np.asarray(d["active"], dtype=bool),
        distortion=float(d["distortion"]),
        spent=np.asarray(d["spent"], dtype=float),
        lifetime=float(d["lifetime"]),
        area_coverage=float(d["area_coverage"]),
        target_coverage=d.get("target_coverage"),
        best_subgraph_distortion=d.get("best_subgraph_distortion"),
    )


def trace_to_dict(trace: IterationTrace, scenario: Scenario = None) -> dict[str, Any]:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "algorithm": trace.algorithm,
        "converged": trace.converged,
        "events": list(trace.events),
        "initial": record_to_dict(trace.initial),
        "iterations": [record_to_dict(r) for r in trace.records],
    }
    if scenario is not None:
        doc["scenario"] = scenario_to_dict(scenario)
    return doc


def trace_from_dict(doc: dict[str, Any]) -> IterationTrace:
    return IterationTrace(
        algorithm=doc["algorithm"],
        initial=record_from_dict(doc["initial"]),
        records=[record_from_dict(r) for r in doc["iterations"]],
        events=list(doc.get("events", [])),
        converged=bool(doc.get("converged", False)),
    )


def _clean(obj):
    # JSON has no NaN/inf; write them as null
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.generic):
        return _clean(obj.item())
    return obj


def write_json(doc, path) -> Path:
    path = Path(path)
    with _open(path, "w") as fh:
        json.dump(_clean(doc), fh, indent=1, allow_nan=False)
        fh.write("\n")
    return path


def read_json(path) -> dict[str, Any]:
    path = Path(path)
    try:
        with path.open(encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise OSError(f"{path}: {exc.strerror or exc}") from exc


def deployment_svg(trace: IterationTrace, scenario: Scenario, width: int = 640) -> str:
    """Final deployment: region outline, sensing disks, movement paths, sensors
    (active red, inactive black) and the access point ringed."""
    verts = np.asarray(scenario.region.vertices, dtype=float)
    lo, hi = verts.min(axis=0), verts.max(axis=0)
    margin = 0.05 * float(np.max(hi - lo))
    lo, hi = lo - margin, hi + margin
    scale = width / float(hi[0] - lo[0])
    height = int(math.ceil((hi[1] - lo[1]) * scale))

    def xy(p):
        return (p[0] - lo[0]) * scale, (hi[1] - p[1]) * scale

    def pts(seq):
        return " ".join(f"{x:.3f},{y:.3f}" for x, y in map(xy, seq))

    final = trace.final
    recs = [trace.initial] + trace.records
    path = np.stack([r.positions for r in recs], axis=1)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f"<title>{escape(scenario.name)} {escape(trace.algorithm)} seed {scenario.seed}</title>",
        f'<polygon points="{pts(verts)}" fill="none" stroke="#000" stroke-width="1.5"/>',
    ]
    for n in range(scenario.n):
        if final.active[n]:
            x, y = xy(final.positions[n])
            out.append(
                f'<circle cx="{x:.3f}" cy="{y:.3f}" r="{scenario.r_s[n] * scale:.3f}" '
                'fill="#1f77b4" fill-opacity="0.12" stroke="#1f77b4" stroke-width="0.5"/>'
            )
    for n in range(scenario.n):
        out.append(f'<polyline points="{pts(path[n])}" fill="none" stroke="#2ca02c" stroke-width="1"/>')
    for n in range(scenario.n):
        x, y = xy(final.positions[n])
        color = "#d62728" if final.active[n] else "#000"
        out.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="3" fill="{color}"><title>sensor {n + 1}</title></circle>')
    x, y = xy(final.positions[0])
    out.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="6" fill="none" stroke="#000" stroke-width="1.5"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _open(path: Path, mode: str, **kw):
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        return path.open(mode, encoding="utf-8", **kw)
    except OSError as exc:
        raise OSError(f"{path}: {exc.strerror or exc}") from exc


def emit_outputs(
    trace: IterationTrace,
    summary: Summary,
    out_dir,
    scenario: Scenario,
    formats: Iterable[str] = FORMATS,
) -> list[Path]:
    """Write the requested formats into ``out_dir`` and return the paths written."""
    formats = set(formats)
    unknown = formats - set(FORMATS)
    if unknown:
        raise ValueError(f"unknown output formats: {', '.join(sorted(unknown))}")
    out = Path(out_dir)
    written = []
    if "csv" in formats:
        written.append(write_metrics_csv(trace, out / "metrics.csv"))
    if "json" in formats:
        written.append(write_json(trace_to_dict(trace, scenario), out / "trace.json"))
        doc = {"schema_version": SCHEMA_VERSION, "scenario": scenario.name, **summary.to_dict()}
        written.append(write_json(doc, out / "summary.json"))
    if "svg" in formats:
        path = out / "deployment.svg"
        with _open(path, "w") as fh:
            fh.write(deployment_svg(trace, scenario))
        written.append(path)
    return written
