"""Area and target coverage metrics, plus the target-driven density builder."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .density import DensityField, IntegrationGrid
from .geometry import MEMBERSHIP_TOL


@dataclass(frozen=True)
class TargetSet:
    points: np.ndarray
    importance: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float).reshape(-1, 2)
        imp = np.broadcast_to(np.asarray(self.importance, dtype=float), (len(pts),)).copy()
        if np.any(imp <= 0):
            raise ValueError("target importance must be > 0")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "importance", imp)

    def __len__(self):
        return len(self.points)


def _covered(points, positions, radii, active) -> np.ndarray:
    positions = np.asarray(positions, dtype=float)
    idx = np.flatnonzero(np.asarray(active, dtype=bool))
    if len(idx) == 0:
        return np.zeros(len(points), dtype=bool)
    radii = np.asarray(radii, dtype=float)
    covered = np.zeros(len(points), dtype=bool)
    ys = points[:, 1]
    # grid cells come in y-major order, so each disk touches a contiguous band
    sorted_y = len(ys) > 1 and bool(np.all(ys[1:] >= ys[:-1]))
    for n in idx:
        lo, hi = 0, len(points)
        if sorted_y:
            lo, hi = np.searchsorted(ys, [positions[n, 1] - radii[n] - 1e-9, positions[n, 1] + radii[n] + 1e-9], side="left")
        band = points[lo:hi]
        d = np.hypot(band[:, 0] - positions[n, 0], band[:, 1] - positions[n, 1])
        covered[lo:hi] |= d <= radii[n]
    return covered


def area_coverage(positions, radii, active, grid: IntegrationGrid) -> float:
    """Fraction of the region within sensing range of at least one active sensor."""
    if grid.size == 0:
        return 0.0
    return float(np.count_nonzero(_covered(grid.centers, positions, radii, active)) / grid.size)


def target_coverage(positions, radii, active, targets: TargetSet) -> float:
    """Fraction of targets with ``|t - p_n| <= r_n`` for some active sensor."""
    if len(targets) == 0:
        raise ValueError("target set is empty")
    radii = np.asarray(radii, dtype=float) + MEMBERSHIP_TOL
    return float(np.count_nonzero(_covered(targets.points, positions, radii, active)) / len(targets))


def gaussian_density_from_targets(targets: TargetSet, length_scale: float) -> DensityField:
    if not length_scale > 0:
        raise ValueError("length scale must be > 0")
    return DensityField.gaussian_mixture(targets.points, targets.importance, length_scale)


def targets_from_points(points: Sequence, importance=1.0) -> TargetSet:
    return TargetSet(np.asarray(points, dtype=float), importance)
