"""Command line: ``mwsn deploy``, ``mwsn sweep`` and ``mwsn check``."""
from __future__ import annotations

import argparse
import os
import re
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from ..algorithms import check_necessary_conditions
from ..errors import ConfigError, MWSNError
from .experiment import run_experiment
from .invariants import check_trace_invariants
from .outputs import emit_outputs, read_json, trace_from_dict, write_json
from .scenario import ALGORITHMS, PRESETS, SCHEMA_VERSION, load_scenario, preset, scenario_from_dict


def _add_scenario_args(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group()
    src.add_argument("--preset", choices=sorted(PRESETS), help="built-in scenario (default mwsn1)")
    src.add_argument("--config", type=Path, help="TOML scenario file")
    p.add_argument("--algo", choices=ALGORITHMS)
    p.add_argument("--lifetime", type=float, help="target network lifetime T")
    p.add_argument("--rc", type=float, help="communication range")
    p.add_argument("--grid", type=int, help="quadrature resolution G")
    p.add_argument("--max-iters", type=int)
    p.add_argument("--lloyd-alpha", type=float)
    p.add_argument("--bccml-rule", choices=("largest", "smallest"))
    p.add_argument("--exact-sweep", action="store_true", default=None,
                   help="re-partition before every single CCML move")
    p.add_argument("--out", type=Path, required=True, help="output directory")


def _scenario(args, seed=None):
    if args.config is not None:
        sc = load_scenario(args.config)
    else:
        sc = preset(args.preset or "mwsn1")
    overrides = {
        "algorithm": args.algo,
        "lifetime": args.lifetime,
        "rc": args.rc,
        "grid": args.grid,
        "max_iters": args.max_iters,
        "lloyd_alpha": args.lloyd_alpha,
        "bccml_rule": args.bccml_rule,
        "exact_sweep": args.exact_sweep,
        "seed": seed if seed is not None else getattr(args, "seed", None),
    }
    overrides = {k: v for k, v in overrides.items() if v is not None}
    sc = sc.replace(**overrides) if overrides else sc
    sc.validate()
    return sc


def _deploy_one(sc, out: Path) -> dict:
    trace, summary = run_experiment(sc)
    emit_outputs(trace, summary, out, sc)
    return summary.to_dict()


def cmd_deploy(args) -> int:
    sc = _scenario(args)
    summary = _deploy_one(sc, args.out)
    print(
        f"{sc.algorithm} seed {sc.seed}: D {summary['initial_distortion']:.6g} -> "
        f"{summary['final_distortion']:.6g} in {summary['iterations']} iterations, "
        f"T {summary['lifetime']:.6g}, backbone {summary['backbone_size']}/{sc.n}"
    )
    print(f"outputs written to {args.out}")
    return 0


def parse_seeds(text: str) -> list[int]:
    """``"1..10"`` or ``"1,4,9"`` (ranges inclusive)."""
    seeds: list[int] = []
    for part in text.split(","):
        part = part.strip()
        m = re.fullmatch(r"(-?\d+)\.\.(-?\d+)", part)
        if m:
            a, b = int(m.group(1)), int(m.group(2))
            if b < a:
                raise ConfigError(f"empty range {part!r}", "--seeds")
            seeds.extend(range(a, b + 1))
        elif re.fullmatch(r"-?\d+", part):
            seeds.append(int(part))
        else:
            raise ConfigError(f"cannot parse {part!r}", "--seeds")
    return seeds


def _threads() -> int:
    raw = os.environ.get("MWSN_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"expected a positive integer, got {raw!r}", "MWSN_THREADS") from None
    if value < 1:
        raise ConfigError(f"expected a positive integer, got {raw!r}", "MWSN_THREADS")
    return value


def _sweep_job(job):
    sc, out = job
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return _deploy_one(sc, out)


def cmd_sweep(args) -> int:
    seeds = parse_seeds(args.seeds)
    jobs = [(_scenario(args, seed), args.out / f"seed_{seed}") for seed in seeds]
    workers = min(_threads(), len(jobs))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            summaries = list(pool.map(_sweep_job, jobs))
    else:
        summaries = [_sweep_job(j) for j in jobs]
    rows = []
    for seed, s in zip(seeds, summaries):
        rows.append({"seed": seed, **{k: s[k] for k in (
            "final_distortion", "best_subgraph_distortion", "lifetime", "area_coverage",
            "target_coverage", "backbone_size", "iterations",
        )}})
        print(f"seed {seed}: D {s['final_distortion']:.6g}, T {s['lifetime']:.6g}, backbone {s['backbone_size']}")
    finals = np.array([s["final_distortion"] for s in summaries])
    doc = {
        "schema_version": SCHEMA_VERSION,
        "algorithm": jobs[0][0].algorithm,
        "seeds": seeds,
        "runs": rows,
        "mean_final_distortion": float(np.mean(finals)),
        "std_final_distortion": float(np.std(finals)),
    }
    write_json(doc, args.out / "sweep.json")
    print(f"mean final distortion {doc['mean_final_distortion']:.6g} over {len(seeds)} seeds")
    return 0


def cmd_check(args) -> int:
    doc = read_json(args.trace)
    if "scenario" not in doc:
        raise ConfigError("trace has no embedded scenario", "scenario")
    sc = scenario_from_dict(doc["scenario"])
    trace = trace_from_dict(doc)
    ok = True
    for res in check_trace_invariants(trace, sc):
        ok &= res.passed
        print(f"{'PASS' if res.passed else 'FAIL'} {res.name}: {res.detail}")
    if trace.algorithm != "lloyd_alpha":
        problem = sc.problem(p0=trace.initial.positions)
        final = trace.final
        checks = check_necessary_conditions(problem, final.positions, final.active, sc.budget, args.tol_geo)
        n_pass = sum(c.passed for c in checks)
        print(f"necessary conditions: {n_pass}/{len(checks)} active sensors pass")
        for c in checks:
            if not c.passed:
                dev = "" if np.isnan(c.deviation) else f", deviation {c.deviation:.4g}"
                print(f"  FAIL sensor {c.sensor_id}: condition ({c.condition}) {c.case}{dev}")
        report = [
            {"sensor": c.sensor_id, "case": c.case, "condition": c.condition, "passed": c.passed,
             "centroid": list(c.centroid), "mandated": None if c.mandated is None else list(c.mandated),
             "deviation": c.deviation}
            for c in checks
        ]
        if args.report:
            write_json({"schema_version": SCHEMA_VERSION, "sensors": report}, args.report)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mwsn", description="Connectivity- and lifetime-constrained sensor deployment.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("deploy", help="run one scenario and write its outputs")
    _add_scenario_args(p)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_deploy)

    p = sub.add_parser("sweep", help="run one scenario over several seeds")
    _add_scenario_args(p)
    p.add_argument("--seeds", default="1..10", help="e.g. 1..10 or 1,3,5")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("check", help="verify invariants and optimality conditions of a recorded trace")
    p.add_argument("--trace", type=Path, required=True)
    p.add_argument("--tol-geo", type=float, default=None, help="default: two grid-cell diagonals")
    p.add_argument("--report", type=Path, help="write the per-sensor report as JSON")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (MWSNError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
