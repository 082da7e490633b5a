"""Communication graph, backbone, MST and the connectivity constraint regions.

Two sensors communicate when their distance is at most ``R_c`` (closed disk,
with the package-wide ``MEMBERSHIP_TOL`` slack).  Sensor sets are given as
iterables of 0-based indices; index 0 is the access point.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple, Optional

import numpy as np

from .errors import DisconnectedGraphError
from .geometry import MEMBERSHIP_TOL, Disk, DiskRegion, make_disk

AP = 0


def pairwise_distances(positions) -> np.ndarray:
    p = np.asarray(positions, dtype=float)
    diff = p[:, None, :] - p[None, :, :]
    return np.hypot(diff[..., 0], diff[..., 1])


@dataclass
class CommGraph:
    """Unit-disk communication graph over a position snapshot."""

    adjacency: np.ndarray
    distances: np.ndarray
    rc: float

    @classmethod
    def build(cls, positions, rc: float) -> "CommGraph":
        dist = pairwise_distances(positions)
        adj = dist <= rc + MEMBERSHIP_TOL
        np.fill_diagonal(adj, False)
        return cls(adj, dist, float(rc))

    @property
    def n(self) -> int:
        return len(self.adjacency)

    @cached_property
    def adjacency_lists(self) -> list[list[int]]:
        return [[int(j) for j in np.flatnonzero(row)] for row in self.adjacency]

    def neighbors(self, n: int, members: Optional[Iterable[int]] = None) -> list[int]:
        nbrs = self.adjacency_lists[n]
        if members is not None:
            allowed = set(members)
            nbrs = [m for m in nbrs if m in allowed]
        return list(nbrs)

    def components(self, members: Iterable[int]) -> list[list[int]]:
        """Connected components of the subgraph induced on ``members``.

        Each component is sorted; components are ordered by their smallest member.
        """
        remaining = sorted(set(members))
        allowed = set(remaining)
        seen: set[int] = set()
        comps = []
        for start in remaining:
            if start in seen:
                continue
            comp = [start]
            seen.add(start)
            queue = deque([start])
            while queue:
                u = queue.popleft()
                for v in self.adjacency_lists[u]:
                    if v in allowed and v not in seen:
                        seen.add(v)
                        comp.append(v)
                        queue.append(v)
            comps.append(sorted(comp))
        return comps

    def reachable(self, root: int, members: Optional[Iterable[int]] = None) -> list[int]:
        allowed = set(range(self.n)) if members is None else set(members)
        if root not in allowed:
            return []
        for comp in self.components(allowed):
            if root in comp:
                return comp
        return []


def backbone(positions, rc: float, members: Optional[Iterable[int]] = None) -> list[int]:
    """Sorted indices of the sensors connected to the access point."""
    return CommGraph.build(positions, rc).reachable(AP, members)


def is_fully_connected(positions, rc: float, members: Optional[Iterable[int]] = None) -> bool:
    members = list(range(len(positions))) if members is None else list(members)
    if not members:
        return False
    return len(CommGraph.build(positions, rc).components(members)) == 1


def components_excluding(I: Iterable[int], n: int, positions, rc: float, graph: CommGraph = None) -> list[list[int]]:
    """Components of ``I - {n}``, ordered by smallest member."""
    I = set(I)
    if n not in I:
        raise ValueError(f"sensor {n} is not in the internal set")
    graph = graph or CommGraph.build(positions, rc)
    return graph.components(I - {n})


def _disk_group(positions, idx, radius) -> tuple[Disk, ...]:
    return tuple(make_disk(positions[j], radius) for j in idx)


def desired_region(n: int, positions, I: Iterable[int], rc: float, graph: CommGraph = None) -> DiskRegion:
    """Placements of sensor ``n`` that keep ``I`` connected: one disk union per component."""
    positions = np.asarray(positions, dtype=float)
    comps = components_excluding(I, n, positions, rc, graph)
    return DiskRegion(tuple(_disk_group(positions, c, rc) for c in comps))


def movement_cap(center, budget: float) -> Disk:
    return make_disk(center, max(float(budget), 0.0))


def feasible_region(n: int, positions, I, rc: float, p0, budget: float, graph: CommGraph = None) -> DiskRegion:
    """Desired region intersected with the movement disk ``B(p0_n, budget)``."""
    return desired_region(n, positions, I, rc, graph).with_cap(movement_cap(p0, budget))


def approx_desired_region(n: int, positions, rc: float, I: Optional[Iterable[int]] = None, graph: CommGraph = None) -> DiskRegion:
    """Desired region built only from the one-hop neighbors of ``n`` in each component.

    A component without a neighbor of ``n`` yields an empty group, i.e. an empty region.
    """
    positions = np.asarray(positions, dtype=float)
    I = set(range(len(positions))) if I is None else set(I)
    graph = graph or CommGraph.build(positions, rc)
    nbrs = set(graph.neighbors(n, I))
    comps = graph.components(I - {n})
    return DiskRegion(tuple(_disk_group(positions, [j for j in c if j in nbrs], rc) for c in comps))


def approx_feasible_region(n: int, positions, rc: float, p0, budget: float, I=None, graph: CommGraph = None) -> DiskRegion:
    return approx_desired_region(n, positions, rc, I, graph).with_cap(movement_cap(p0, budget))


def external_field_membership(q, positions, I: Iterable[int], rc: float) -> bool:
    """True iff ``q`` is within ``R_c`` of some sensor outside ``I``."""
    positions = np.asarray(positions, dtype=float)
    I = set(I)
    ext = [j for j in range(len(positions)) if j not in I]
    if not ext:
        return False
    d = np.hypot(positions[ext, 0] - q[0], positions[ext, 1] - q[1])
    return bool(np.any(d <= rc + MEMBERSHIP_TOL))


class MstEdge(NamedTuple):
    i: int
    j: int
    length: float


def euclidean_mst(positions, rc: float, members: Optional[Iterable[int]] = None) -> list[MstEdge]:
    """Kruskal MST of the communication graph; equal lengths break by (min index, max index)."""
    positions = np.asarray(positions, dtype=float)
    members = sorted(range(len(positions)) if members is None else set(members))
    graph = CommGraph.build(positions, rc)
    edges = sorted(
        (float(graph.distances[i, j]), i, j)
        for a, i in enumerate(members)
        for j in members[a + 1:]
        if graph.adjacency[i, j]
    )
    parent = {m: m for m in members}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree = []
    for length, i, j in edges:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
            tree.append(MstEdge(i, j, length))
    if len(tree) != len(members) - 1:
        raise DisconnectedGraphError("communication graph is disconnected; no spanning tree exists")
    return tree


def mst_neighbors(mst: Iterable[MstEdge], n: int) -> list[int]:
    return sorted({e.j if e.i == n else e.i for e in mst if n in (e.i, e.j)})


def semi_desired_region(n: int, positions, mst: Iterable[MstEdge], rc: float) -> DiskRegion:
    """Intersection of the midpoint disks ``B((p_m + p_n)/2, R_c/2)`` over MST neighbors m."""
    positions = np.asarray(positions, dtype=float)
    groups = tuple(
        (make_disk((positions[m] + positions[n]) / 2.0, rc / 2.0),) for m in mst_neighbors(mst, n)
    )
    return DiskRegion(groups)


def semi_feasible_region(n: int, positions, mst, rc: float, residual: float, step_cap: float, xi: float) -> DiskRegion:
    """Semi-desired region capped by a step disk around the *current* position."""
    positions = np.asarray(positions, dtype=float)
    radius = min(max(residual, 0.0) / xi, step_cap)
    return semi_desired_region(n, positions, mst, rc).with_cap(movement_cap(positions[n], radius))
