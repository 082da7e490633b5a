"""Centralized constrained-movement Lloyd iteration and its bottleneck-eliminating wrapper."""
from __future__ import annotations

import logging
import warnings

import numpy as np

from ..connectivity import AP, CommGraph, approx_feasible_region
from ..errors import ScenarioError
from ..geometry import project_to_disk_region
from ..partition import cell_moments
from .energy import EnergyBudget, clamp_to_ball
from .trace import IterationTrace, Problem, make_record

log = logging.getLogger(__name__)

CONVERGENCE_TOL = 1e-5
EVAL_ITERS = 10


def _point_to_point_spent(problem: Problem, positions) -> np.ndarray:
    d = positions - problem.p0
    return problem.xi * np.hypot(d[:, 0], d[:, 1])


def _require_connected(problem: Problem, positions, members) -> None:
    comps = CommGraph.build(positions, problem.rc).components(members)
    if len(comps) != 1 or AP not in comps[0]:
        raise ScenarioError("initial deployment is not connected to the access point")


def _ccml_sweeps(problem, reach, positions, active, max_iters, tol, exact_sweep, k0, events):
    """Run up to ``max_iters`` sweeps on the fixed ``active`` set.

    Returns ``(records, positions, converged)``.
    """
    positions = positions.copy()
    members = [int(i) for i in np.flatnonzero(active)]
    records = []
    converged = False
    assignment = problem.assign(positions, active)
    for k in range(k0 + 1, k0 + max_iters + 1):
        start = positions.copy()
        moments = cell_moments(assignment, problem.grid, problem.fvals, positions)
        for n in members:
            if exact_sweep:
                moments = cell_moments(problem.assign(positions, active), problem.grid, problem.fvals, positions)
            graph = CommGraph.build(positions, problem.rc)
            region = approx_feasible_region(n, positions, problem.rc, problem.p0[n], reach[n], members, graph)
            proj = project_to_disk_region(moments.centroid[n], region, positions[n], clip=problem.polygon)
            if proj.empty:
                events.append(f"iter {k}: sensor {n + 1} has an empty feasible region; kept in place")
                continue
            positions[n] = clamp_to_ball(problem.p0[n], proj.point, reach[n])
        assignment = problem.assign(positions, active)
        records.append(
            make_record(problem, k, positions, active, _point_to_point_spent(problem, positions), assignment)
        )
        step = np.hypot(*(positions - start).T)
        if np.max(step) < tol:
            converged = True
            break
    return records, positions, converged


def run_ccml(
    problem: Problem,
    budget: EnergyBudget,
    max_iters: int = 100,
    tol: float = CONVERGENCE_TOL,
    exact_sweep: bool = False,
) -> IterationTrace:
    """Lloyd iteration where each sensor moves, in index order, to the point of its
    approximate feasible region nearest its cell centroid.

    Cells are refreshed once per sweep unless ``exact_sweep`` re-partitions before
    every single move.  All sensors stay connected to the access point and never
    leave the disk ``B(p0_n, gamma_n / xi_n)``.
    """
    if np.any(budget.gamma < 0):
        bad = ", ".join(str(i + 1) for i in budget.infeasible)
        raise ScenarioError(f"sensors {bad} cannot reach the target lifetime (negative movement budget)")
    active = np.ones(problem.n, dtype=bool)
    positions = problem.p0.copy()
    _require_connected(problem, positions, range(problem.n))
    zero = np.zeros(problem.n)
    trace = IterationTrace("ccml", make_record(problem, 0, positions, active, zero))
    reach = budget.reach(problem.xi)
    records, _, converged = _ccml_sweeps(
        problem, reach, positions, active, max_iters, tol, exact_sweep, 0, trace.events
    )
    trace.records = records
    trace.converged = converged
    return trace


def bottleneck_candidates(problem: Problem, positions, active, budget: EnergyBudget, rel_tol: float = 1e-6) -> list[int]:
    """Sensors that are leaves of the active graph, have spent their whole budget,
    and have a neighbor with budget to spare.  The access point never qualifies.
    """
    positions = np.asarray(positions, dtype=float)
    members = set(int(i) for i in np.flatnonzero(active))
    graph = CommGraph.build(positions, problem.rc)
    spent = _point_to_point_spent(problem, positions)
    gamma = budget.gamma
    slack = spent < gamma - rel_tol * np.abs(gamma)
    out = []
    for n in sorted(members - {AP}):
        rest = members - {n}
        if len(graph.components(rest)) != 1:
            continue
        if spent[n] < gamma[n] - rel_tol * abs(gamma[n]):
            continue
        if any(slack[m] for m in graph.neighbors(n, rest)):
            out.append(n)
    return out


def run_bccml(
    problem: Problem,
    budget: EnergyBudget,
    max_iters: int = 100,
    tol: float = CONVERGENCE_TOL,
    eval_iters: int = EVAL_ITERS,
    rule: str = "largest",
    exact_sweep: bool = False,
) -> IterationTrace:
    """CCML with backward elimination of bottleneck sensors.

    Sensors whose budget is negative are dropped up front (with a warning), along
    with anything they were the only link to.  Then, repeatedly: converge CCML on
    the active set, try removing each bottleneck candidate for ``eval_iters``
    sweeps, and commit the removal with the largest distortion decrease
    (``rule="smallest"`` picks the smallest positive decrease instead).  Removed
    sensors freeze where they are.  ``max_iters`` caps the committed sweeps.
    """
    if rule not in ("largest", "smallest"):
        raise ValueError(f"unknown elimination rule {rule!r}")
    positions = problem.p0.copy()
    _require_connected(problem, positions, range(problem.n))
    events: list[str] = []
    active = budget.gamma >= 0
    if not active[AP]:
        raise ScenarioError("the access point cannot reach the target lifetime")
    if not np.all(active):
        ids = ", ".join(str(i + 1) for i in budget.infeasible)
        msg = f"sensors {ids} cannot reach the target lifetime; excluded from the backbone"
        warnings.warn(msg, RuntimeWarning, stacklevel=2)
        events.append(msg)
        reachable = CommGraph.build(positions, problem.rc).reachable(AP, np.flatnonzero(active))
        cut = sorted(set(np.flatnonzero(active)) - set(reachable))
        if cut:
            events.append("sensors " + ", ".join(str(i + 1) for i in cut) + " lost their link to the access point")
        active = np.isin(np.arange(problem.n), reachable)
    spent0 = np.zeros(problem.n)
    trace = IterationTrace("bccml", make_record(problem, 0, positions, active, spent0), events=events)
    reach = budget.reach(problem.xi)
    remaining = max_iters
    k = 0
    converged = False
    while True:
        recs, positions, converged = _ccml_sweeps(
            problem, reach, positions, active, remaining, tol, exact_sweep, k, events
        )
        trace.records += recs
        k += len(recs)
        remaining -= len(recs)
        if remaining <= 0:
            break
        candidates = bottleneck_candidates(problem, positions, active, budget)
        if not candidates:
            break
        current = problem.distortion(positions, active)
        best = None
        for n in candidates:
            trial = active.copy()
            trial[n] = False
            scratch: list[str] = []
            trial_recs, trial_pos, _ = _ccml_sweeps(
                problem, reach, positions, trial, min(eval_iters, remaining), tol, exact_sweep, k, scratch
            )
            gain = current - (trial_recs[-1].distortion if trial_recs else problem.distortion(positions, trial))
            log.debug("bottleneck candidate %d: distortion decrease %.6g", n + 1, gain)
            if gain <= 0:
                continue
            better = best is None or (gain > best[0] if rule == "largest" else gain < best[0])
            if better:
                best = (gain, n, trial, trial_recs, trial_pos, scratch)
        if best is None:
            break
        gain, n, active, trial_recs, positions, scratch = best
        events.append(f"iter {k}: sensor {n + 1} deactivated (distortion decrease {gain:.6g})")
        events.extend(scratch)
        trace.records += trial_recs
        k += len(trial_recs)
        remaining -= len(trial_recs)
        converged = False
    trace.converged = converged
    return trace
