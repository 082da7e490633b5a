"""Multiplicatively weighted Voronoi assignment, cell moments and distortion.

Sensors are addressed by 0-based index internally; index 0 is the access point
(sensor id 1 in reports).  ``active`` arguments are boolean masks of length N.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .density import DensityField, IntegrationGrid


@dataclass
class Sensor:
    id: int
    p0: tuple[float, float]
    p: tuple[float, float]
    eta: float
    xi: float
    battery: float
    r_s: float

    def __post_init__(self):
        for name in ("eta", "xi", "r_s"):
            if not getattr(self, name) > 0:
                raise ValueError(f"sensor {self.id}: {name} must be > 0")
        if self.battery < 0:
            raise ValueError(f"sensor {self.id}: battery must be >= 0")


@dataclass(frozen=True)
class Assignment:
    """Owner index per grid cell (-1 where no active sensor exists)."""

    owner: np.ndarray
    n_sensors: int

    @property
    def unowned(self) -> bool:
        return bool(np.any(self.owner < 0))


@dataclass(frozen=True)
class CellMoments:
    mass: np.ndarray
    centroid: np.ndarray


DensityLike = Union[DensityField, np.ndarray]


def density_values(grid: IntegrationGrid, f: DensityLike) -> np.ndarray:
    """Density at every grid cell center; arrays pass through unchanged."""
    if isinstance(f, np.ndarray):
        return f
    return f.evaluate(grid.centers)


def _as_mask(active, n: int) -> np.ndarray:
    if active is None:
        return np.ones(n, dtype=bool)
    mask = np.asarray(active)
    if mask.dtype != bool:
        out = np.zeros(n, dtype=bool)
        out[mask.astype(int)] = True
        return out
    return mask


def weighted_sq_dist(positions: np.ndarray, eta: np.ndarray, idx: np.ndarray, grid: IntegrationGrid) -> np.ndarray:
    """``eta_n * |w - p_n|^2`` for every cell (rows) and sensor ``idx`` (columns)."""
    w = grid.centers
    p = positions[idx]
    dx = np.subtract.outer(w[:, 0], p[:, 0])
    dy = np.subtract.outer(w[:, 1], p[:, 1])
    np.multiply(dx, dx, out=dx)
    np.multiply(dy, dy, out=dy)
    np.add(dx, dy, out=dx)
    np.multiply(dx, eta[idx][None, :], out=dx)
    return dx


def assign_mwvd(positions, eta, active, grid: IntegrationGrid) -> Assignment:
    """Each cell goes to the active sensor minimizing ``eta_n |w - p_n|^2``; ties to the lowest index."""
    positions = np.asarray(positions, dtype=float)
    eta = np.asarray(eta, dtype=float)
    n = len(positions)
    idx = np.flatnonzero(_as_mask(active, n))
    if len(idx) == 0:
        return Assignment(np.full(grid.size, -1, dtype=np.intp), n)
    cost = weighted_sq_dist(positions, eta, idx, grid)
    return Assignment(idx[np.argmin(cost, axis=1)], n)


def cell_moments(assignment: Assignment, grid: IntegrationGrid, f: DensityLike, positions) -> CellMoments:
    """Mass and density-weighted centroid of every sensor's cell.

    A sensor without mass (inactive or empty cell) gets its own position as
    centroid so that it has no reason to move.
    """
    positions = np.asarray(positions, dtype=float)
    n = assignment.n_sensors
    owned = assignment.owner >= 0
    owner = assignment.owner[owned]
    fw = density_values(grid, f)[owned] * grid.weight
    pts = grid.centers[owned]
    mass = np.bincount(owner, weights=fw, minlength=n)
    mx = np.bincount(owner, weights=fw * pts[:, 0], minlength=n)
    my = np.bincount(owner, weights=fw * pts[:, 1], minlength=n)
    centroid = positions.copy()
    has = mass > 0
    centroid[has, 0] = mx[has] / mass[has]
    centroid[has, 1] = my[has] / mass[has]
    return CellMoments(mass, centroid)


def sensor_terms(positions, eta, assignment: Assignment, grid: IntegrationGrid, f: DensityLike) -> np.ndarray:
    """Per-sensor distortion ``eta_n * sum |p_n - w|^2 f(w) dA`` over its assigned cells."""
    positions = np.asarray(positions, dtype=float)
    eta = np.asarray(eta, dtype=float)
    owned = assignment.owner >= 0
    owner = assignment.owner[owned]
    pts = grid.centers[owned]
    d = pts - positions[owner]
    vals = eta[owner] * (d[:, 0] ** 2 + d[:, 1] ** 2) * density_values(grid, f)[owned] * grid.weight
    return np.bincount(owner, weights=vals, minlength=assignment.n_sensors)


def distortion(positions, eta, active, grid: IntegrationGrid, f: DensityLike, assignment: Assignment = None) -> float:
    """Discretized sensing distortion of the active sensors.

    The partition is the weighted Voronoi diagram of the active set unless an
    ``assignment`` is supplied (used to evaluate a fixed partition).
    """
    if assignment is None:
        assignment = assign_mwvd(positions, eta, active, grid)
    return float(np.sum(sensor_terms(positions, eta, assignment, grid, f)))
