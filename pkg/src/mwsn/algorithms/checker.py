"""Diagnostic check of the optimality conditions on a final deployment."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..connectivity import CommGraph, external_field_membership, feasible_region
from ..geometry import project_to_disk_region
from ..partition import cell_moments
from .energy import EnergyBudget
from .trace import Problem


@dataclass(frozen=True)
class SensorCheck:
    """Outcome for one active sensor.

    ``case`` is ``"interior"`` (centroid feasible, sensor should sit on it),
    ``"boundary"`` (centroid infeasible, sensor should sit at the nearest
    feasible point) or ``"reactivation"`` (centroid feasible but within reach
    of an inactive sensor, which the optimum rules out).
    """

    sensor_id: int
    case: str
    passed: bool
    centroid: tuple[float, float]
    mandated: Optional[tuple[float, float]]
    deviation: float

    @property
    def condition(self) -> str:
        return "i" if self.case == "reactivation" else "ii"


def check_necessary_conditions(
    problem: Problem,
    positions,
    active,
    budget: EnergyBudget,
    tol_geo: Optional[float] = None,
) -> list[SensorCheck]:
    """Compare each active sensor with the location the optimality conditions mandate.

    Uses the exact feasible region (all members of every component, not just
    neighbors) clipped to the polygon.  ``tol_geo`` defaults to two grid-cell
    diagonals.
    """
    positions = np.asarray(positions, dtype=float)
    active = np.asarray(active, dtype=bool)
    if tol_geo is None:
        tol_geo = 2.0 * problem.grid.cell_diagonal
    members = [int(i) for i in np.flatnonzero(active)]
    graph = CommGraph.build(positions, problem.rc)
    moments = cell_moments(problem.assign(positions, active), problem.grid, problem.fvals, positions)
    reach = budget.reach(problem.xi)
    out = []
    for n in members:
        c = moments.centroid[n]
        ct = (float(c[0]), float(c[1]))
        region = feasible_region(n, positions, members, problem.rc, problem.p0[n], reach[n], graph)
        in_fr = region.contains(c) and problem.polygon.contains(c, 1e-9)
        if in_fr and external_field_membership(c, positions, members, problem.rc):
            out.append(SensorCheck(n + 1, "reactivation", False, ct, None, math.nan))
            continue
        if in_fr:
            mandated = ct
        else:
            mandated = project_to_disk_region(c, region, positions[n], clip=problem.polygon).point
        dev = math.hypot(positions[n, 0] - mandated[0], positions[n, 1] - mandated[1])
        out.append(SensorCheck(n + 1, "interior" if in_fr else "boundary", dev <= tol_geo, ct, mandated, dev))
    return out
