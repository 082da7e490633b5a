"""Problem bundle handed to the optimizers and the per-iteration trace they produce."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from ..connectivity import CommGraph
from ..coverage import TargetSet, area_coverage, target_coverage
from ..density import DensityField, IntegrationGrid
from ..geometry import ConvexPolygon
from ..partition import Assignment, assign_mwvd, sensor_terms
from .energy import achieved_lifetime


@dataclass
class Problem:
    """Everything fixed during one optimizer run."""

    p0: np.ndarray
    eta: np.ndarray
    xi: np.ndarray
    battery: np.ndarray
    r_s: np.ndarray
    rc: float
    polygon: ConvexPolygon
    grid: IntegrationGrid
    density: DensityField
    targets: Optional[TargetSet] = None
    power: float = 1.0

    def __post_init__(self):
        self.p0 = np.array(self.p0, dtype=float).reshape(-1, 2)
        n = len(self.p0)
        for name in ("eta", "xi", "battery", "r_s"):
            arr = np.broadcast_to(np.asarray(getattr(self, name), dtype=float), (n,)).copy()
            setattr(self, name, arr)

    @property
    def n(self) -> int:
        return len(self.p0)

    @cached_property
    def fvals(self) -> np.ndarray:
        return self.density.evaluate(self.grid.centers)

    def assign(self, positions, active) -> Assignment:
        return assign_mwvd(positions, self.eta, active, self.grid)

    def distortion(self, positions, active, assignment: Assignment = None) -> float:
        if assignment is None:
            assignment = self.assign(positions, active)
        return float(np.sum(sensor_terms(positions, self.eta, assignment, self.grid, self.fvals)))


@dataclass
class IterationRecord:
    k: int
    positions: np.ndarray
    active: np.ndarray
    distortion: float
    spent: np.ndarray
    lifetime: float
    area_coverage: float
    target_coverage: Optional[float] = None
    best_subgraph_distortion: Optional[float] = None

    @property
    def backbone_size(self) -> int:
        return int(np.count_nonzero(self.active))


@dataclass
class IterationTrace:
    algorithm: str
    initial: IterationRecord
    records: list[IterationRecord] = field(default_factory=list)
    events: list[str] = field(default_factory=list)
    converged: bool = False

    @property
    def final(self) -> IterationRecord:
        return self.records[-1] if self.records else self.initial

    def __len__(self) -> int:
        return len(self.records)

    def distortions(self, include_initial: bool = True) -> np.ndarray:
        recs = ([self.initial] if include_initial else []) + self.records
        return np.array([r.distortion for r in recs])


def best_subgraph_distortion(problem: Problem, positions) -> float:
    """Smallest distortion any single connected component achieves on its own."""
    graph = CommGraph.build(positions, problem.rc)
    return min(
        problem.distortion(positions, np.isin(np.arange(problem.n), comp))
        for comp in graph.components(range(problem.n))
    )


def make_record(
    problem: Problem,
    k: int,
    positions,
    active,
    spent,
    assignment: Assignment = None,
    with_best_subgraph: bool = False,
) -> IterationRecord:
    positions = np.array(positions, dtype=float)
    active = np.asarray(active, dtype=bool).copy()
    tc = None
    if problem.targets is not None and len(problem.targets):
        tc = target_coverage(positions, problem.r_s, active, problem.targets)
    return IterationRecord(
        k=k,
        positions=positions,
        active=active,
        distortion=problem.distortion(positions, active, assignment),
        spent=np.array(spent, dtype=float),
        lifetime=achieved_lifetime(problem.battery, spent, active, problem.power),
        area_coverage=area_coverage(positions, problem.r_s, active, problem.grid),
        target_coverage=tc,
        best_subgraph_distortion=best_subgraph_distortion(problem, positions) if with_best_subgraph else None,
    )
