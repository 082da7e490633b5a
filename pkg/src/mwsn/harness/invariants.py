"""Invariant suite run on a recorded trace."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..algorithms import IterationTrace
from ..algorithms.energy import ENERGY_TOL
from .scenario import Scenario

DISTORTION_TOL = 1e-9


@dataclass(frozen=True)
class InvariantResult:
    name: str
    passed: bool
    detail: str


def check_trace_invariants(trace: IterationTrace, scenario: Scenario) -> list[InvariantResult]:
    """Monotone distortion and full backbone (constrained movers), energy and
    lifetime safety (all algorithms except the unconstrained baseline)."""
    results = []
    recs = [trace.initial] + trace.records
    constrained = trace.algorithm in ("ccml", "dcml", "bccml")
    if trace.algorithm in ("ccml", "dcml"):
        d = trace.distortions()
        rises = np.flatnonzero(np.diff(d) > DISTORTION_TOL) + 1
        results.append(InvariantResult(
            "monotone_distortion", len(rises) == 0,
            "ok" if len(rises) == 0 else f"distortion rose at iterations {rises.tolist()}",
        ))
        short = [r.k for r in trace.records if r.backbone_size != scenario.n]
        results.append(InvariantResult(
            "full_backbone", not short,
            "ok" if not short else f"backbone below N at iterations {short}",
        ))
    if constrained:
        gamma = np.maximum(scenario.budget.gamma, 0.0)
        over = [r.k for r in recs if np.any(r.spent > gamma + ENERGY_TOL)]
        results.append(InvariantResult(
            "energy_budget", not over,
            "ok" if not over else f"budget exceeded at iterations {over}",
        ))
        T = trace.final.lifetime
        ok = T >= scenario.lifetime - ENERGY_TOL
        results.append(InvariantResult(
            "lifetime", ok, f"achieved {T:.12g}, target {scenario.lifetime:.12g}",
        ))
    return results
