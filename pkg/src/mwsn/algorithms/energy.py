"""Movement energy, per-sensor budgets and network lifetime."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

ENERGY_TOL = 1e-9


def movement_energy(xi: float, a, b) -> float:
    """Energy to move in a straight line from ``a`` to ``b`` at cost ``xi`` per unit length."""
    return float(xi) * math.hypot(b[0] - a[0], b[1] - a[1])


def clamp_to_ball(center, point, radius: float) -> tuple[float, float]:
    """``point`` pulled back along the ray from ``center`` onto the closed ball.

    Region membership tests are tolerant, so a projection can land a hair
    outside its movement cap; clamping keeps the energy ledger exact.
    """
    c = np.asarray(center, dtype=float)
    d = np.asarray(point, dtype=float) - c
    length = math.hypot(d[0], d[1])
    radius = max(float(radius), 0.0)
    if length <= radius:
        return float(point[0]), float(point[1])
    for shrink in (1.0, 1.0 - 1e-12):
        q = c + d * (radius / length * shrink)
        if math.hypot(q[0] - c[0], q[1] - c[1]) <= radius:
            return float(q[0]), float(q[1])
    # radius below the float spacing around the center
    return float(c[0]), float(c[1])


@dataclass(frozen=True)
class EnergyBudget:
    """Relocation budgets ``gamma_n = e_n - power * lifetime``."""

    gamma: np.ndarray
    power: float
    lifetime: float

    @classmethod
    def from_battery(cls, battery, power: float, lifetime: float) -> "EnergyBudget":
        if not power > 0:
            raise ValueError("post-relocation power must be > 0")
        if lifetime < 0:
            raise ValueError("target lifetime must be >= 0")
        gamma = np.asarray(battery, dtype=float) - power * lifetime
        return cls(gamma, float(power), float(lifetime))

    def reach(self, xi) -> np.ndarray:
        """Movement radius ``gamma_n / xi_n`` (clamped at zero)."""
        return np.maximum(self.gamma, 0.0) / np.asarray(xi, dtype=float)

    @property
    def infeasible(self) -> np.ndarray:
        """Indices whose battery cannot sustain the lifetime even without moving."""
        return np.flatnonzero(self.gamma < 0)


class EnergyLedger:
    """Energy spent per sensor.

    ``point_to_point`` charges the straight line from the initial position;
    ``path_sum`` charges every step taken.
    """

    def __init__(self, mode: str, p0, xi, gamma):
        if mode not in ("point_to_point", "path_sum"):
            raise ValueError(f"unknown energy mode {mode!r}")
        self.mode = mode
        self.p0 = np.array(p0, dtype=float)
        self.xi = np.asarray(xi, dtype=float)
        self.gamma = np.asarray(gamma, dtype=float)
        self.spent = np.zeros(len(self.p0))

    def record_positions(self, previous, current) -> None:
        current = np.asarray(current, dtype=float)
        if self.mode == "point_to_point":
            d = current - self.p0
        else:
            d = current - np.asarray(previous, dtype=float)
        step = self.xi * np.hypot(d[:, 0], d[:, 1])
        if self.mode == "point_to_point":
            self.spent = step
        else:
            self.spent = self.spent + step

    @property
    def residual(self) -> np.ndarray:
        return self.gamma - self.spent

    def violations(self, members=None) -> np.ndarray:
        idx = np.arange(len(self.spent)) if members is None else np.asarray(list(members), dtype=int)
        bad = self.spent[idx] > np.maximum(self.gamma[idx], 0.0) + ENERGY_TOL
        return idx[bad]


def achieved_lifetime(battery, spent, active, power: float) -> float:
    """``min (e_n - spent_n) / power`` over the active sensors."""
    battery = np.asarray(battery, dtype=float)
    spent = np.asarray(spent, dtype=float)
    mask = np.asarray(active, dtype=bool)
    if not np.any(mask):
        return 0.0
    return float(np.min(battery[mask] - spent[mask]) / power)
