"""Distributed constrained-movement Lloyd iteration and the Lloyd-alpha baseline."""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from ..connectivity import CommGraph, euclidean_mst, semi_feasible_region
from ..errors import ScenarioError
from ..geometry import project_to_disk_region
from ..partition import cell_moments
from .ccml import CONVERGENCE_TOL, _require_connected
from .energy import EnergyBudget, EnergyLedger, clamp_to_ball
from .trace import IterationTrace, Problem, make_record


@dataclass(frozen=True)
class StepCap:
    """Per-iteration movement bound ``d^k_n``.

    ``constant``: the fixed ``value`` (defaults to ``R_c / 2``).
    ``lloyd_alpha``: ``alpha * |p_n - c_n|``.
    """

    rule: str = "constant"
    value: float = None
    alpha: float = 0.5

    def __post_init__(self):
        if self.rule not in ("constant", "lloyd_alpha"):
            raise ValueError(f"unknown step-cap rule {self.rule!r}")

    def caps(self, rc: float, positions, centroids) -> np.ndarray:
        if self.rule == "constant":
            value = rc / 2.0 if self.value is None else self.value
            return np.full(len(positions), float(value))
        d = centroids - positions
        return self.alpha * np.hypot(d[:, 0], d[:, 1])


def run_dcml(
    problem: Problem,
    budget: EnergyBudget,
    max_iters: int = 100,
    step_cap: StepCap = StepCap(),
    tol: float = CONVERGENCE_TOL,
) -> IterationTrace:
    """Simultaneous Lloyd steps restricted to semi-feasible regions.

    Every sensor moves toward its centroid within the intersection of the
    midpoint disks of its MST edges and a step disk around its current position;
    energy is charged along the travelled path.
    """
    if np.any(budget.gamma < 0):
        bad = ", ".join(str(i + 1) for i in budget.infeasible)
        raise ScenarioError(f"sensors {bad} cannot reach the target lifetime (negative movement budget)")
    positions = problem.p0.copy()
    _require_connected(problem, positions, range(problem.n))
    active = np.ones(problem.n, dtype=bool)
    ledger = EnergyLedger("path_sum", problem.p0, problem.xi, budget.gamma)
    trace = IterationTrace("dcml", make_record(problem, 0, positions, active, ledger.spent))
    assignment = problem.assign(positions, active)
    for k in range(1, max_iters + 1):
        moments = cell_moments(assignment, problem.grid, problem.fvals, positions)
        mst = euclidean_mst(positions, problem.rc)
        caps = step_cap.caps(problem.rc, positions, moments.centroid)
        residual = ledger.residual
        new = positions.copy()
        for n in range(problem.n):
            region = semi_feasible_region(n, positions, mst, problem.rc, residual[n], caps[n], problem.xi[n])
            proj = project_to_disk_region(moments.centroid[n], region, positions[n], clip=problem.polygon)
            if proj.empty:
                trace.events.append(f"iter {k}: sensor {n + 1} has an empty semi-feasible region; kept in place")
                continue
            new[n] = clamp_to_ball(positions[n], proj.point, max(residual[n], 0.0) / problem.xi[n])
        ledger.record_positions(positions, new)
        step = np.hypot(*(new - positions).T)
        positions = new
        assignment = problem.assign(positions, active)
        trace.records.append(make_record(problem, k, positions, active, ledger.spent, assignment))
        if np.max(step) < tol:
            trace.converged = True
            break
    return trace


def run_lloyd_alpha(
    problem: Problem,
    budget: EnergyBudget,
    alpha: float,
    max_iters: int = 100,
    tol: float = CONVERGENCE_TOL,
) -> IterationTrace:
    """Damped Lloyd: ``p <- p + alpha (c - p)`` over the full weighted Voronoi
    partition, ignoring connectivity.

    Moves are cut short when the path energy would exceed the budget; sensors
    with a negative budget never move and are reported as infeasible.
    Records carry the access-point backbone distortion and the best single
    component's distortion.
    """
    if not 0 <= alpha <= 1:
        raise ValueError("alpha must lie in [0, 1]")
    if len(budget.infeasible):
        ids = ", ".join(str(i + 1) for i in budget.infeasible)
        warnings.warn(f"sensors {ids} cannot reach the target lifetime", RuntimeWarning, stacklevel=2)
    everyone = np.ones(problem.n, dtype=bool)
    positions = problem.p0.copy()
    ledger = EnergyLedger("path_sum", problem.p0, problem.xi, np.maximum(budget.gamma, 0.0))

    def record(k):
        active = np.isin(np.arange(problem.n), CommGraph.build(positions, problem.rc).reachable(0))
        return make_record(problem, k, positions, active, ledger.spent, with_best_subgraph=True)

    trace = IterationTrace("lloyd_alpha", record(0))
    if len(budget.infeasible):
        trace.events.append(
            "infeasible sensors: " + ", ".join(str(i + 1) for i in budget.infeasible)
        )
    for k in range(1, max_iters + 1):
        assignment = problem.assign(positions, everyone)
        c = cell_moments(assignment, problem.grid, problem.fvals, positions).centroid
        target = (1.0 - alpha) * positions + alpha * c
        move = target - positions
        length = np.hypot(move[:, 0], move[:, 1])
        allowed = np.maximum(ledger.residual, 0.0) / problem.xi
        short = length > allowed
        new = target.copy()
        scale = np.where(short, allowed / np.where(length > 0, length, 1.0), 1.0)
        new[short] = positions[short] + move[short] * scale[short, None]
        ledger.record_positions(positions, new)
        step = np.hypot(*(new - positions).T)
        positions = new
        trace.records.append(record(k))
        if np.max(step) < tol:
            trace.converged = True
            break
    return trace
