"""Run one scenario end to end and summarize the outcome."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from ..algorithms import (
    IterationTrace,
    run_bccml,
    run_ccml,
    run_dcml,
    run_lloyd_alpha,
)
from .scenario import Scenario


@dataclass
class Summary:
    algorithm: str
    seed: int
    iterations: int
    converged: bool
    initial_distortion: float
    final_distortion: float
    lifetime: float
    area_coverage: float
    target_coverage: Optional[float]
    backbone_size: int
    active_ids: list[int]
    inactive_ids: list[int]
    energy_spent: list[float]
    energy_budget: list[float]
    best_subgraph_distortion: Optional[float] = None
    infeasible_ids: list[int] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    events: list[str] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return dict(self.__dict__)


def run_algorithm(scenario: Scenario, problem=None) -> IterationTrace:
    problem = problem or scenario.problem()
    budget = scenario.budget
    algo = scenario.algorithm
    if algo == "ccml":
        return run_ccml(problem, budget, scenario.max_iters, scenario.tol, exact_sweep=scenario.exact_sweep)
    if algo == "bccml":
        return run_bccml(
            problem, budget, scenario.max_iters, scenario.tol,
            eval_iters=scenario.bccml_eval_iters, rule=scenario.bccml_rule,
            exact_sweep=scenario.exact_sweep,
        )
    if algo == "dcml":
        return run_dcml(problem, budget, scenario.max_iters, scenario.step_cap, scenario.tol)
    return run_lloyd_alpha(problem, budget, scenario.lloyd_alpha, scenario.max_iters, scenario.tol)


def summarize(scenario: Scenario, trace: IterationTrace, caught: list[str] = ()) -> Summary:
    final = trace.final
    ids = np.arange(1, scenario.n + 1)
    return Summary(
        algorithm=trace.algorithm,
        seed=int(scenario.seed),
        iterations=len(trace),
        converged=bool(trace.converged),
        initial_distortion=trace.initial.distortion,
        final_distortion=final.distortion,
        lifetime=final.lifetime,
        area_coverage=final.area_coverage,
        target_coverage=final.target_coverage,
        backbone_size=final.backbone_size,
        active_ids=[int(i) for i in ids[final.active]],
        inactive_ids=[int(i) for i in ids[~final.active]],
        energy_spent=[float(x) for x in final.spent],
        energy_budget=[float(x) for x in scenario.budget.gamma],
        best_subgraph_distortion=final.best_subgraph_distortion,
        infeasible_ids=[int(i) + 1 for i in scenario.budget.infeasible],
        warnings=list(caught),
        events=list(trace.events),
    )


def run_experiment(scenario: Scenario) -> tuple[IterationTrace, Summary]:
    """Run the scenario's algorithm from its seeded deployment.

    Warnings raised by the optimizer are recorded in the summary and re-emitted.
    """
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        trace = run_algorithm(scenario)
    for w in caught:
        warnings.warn_explicit(w.message, w.category, w.filename, w.lineno)
    return trace, summarize(scenario, trace, [str(w.message) for w in caught])
