"""Event-density fields and the midpoint quadrature grid over the region."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigError
from .geometry import POLYGON_TOL, ConvexPolygon


@dataclass(frozen=True)
class GaussianComponent:
    center: tuple[float, float]
    amplitude: float
    length_scale: float


@dataclass(frozen=True)
class DensityField:
    """Either a constant density or a sum of isotropic Gaussian bumps.

    A Gaussian component contributes ``A * exp(-|w - t|^2 / l^2)``.  Fields are
    not normalized.
    """

    kind: str = "uniform"
    value: float = 1.0
    components: tuple[GaussianComponent, ...] = ()

    def __post_init__(self):
        if self.kind == "uniform":
            if not self.value > 0:
                raise ConfigError("uniform density must be > 0", "density.value")
        elif self.kind == "gaussian_mixture":
            if not self.components:
                raise ConfigError("mixture needs at least one component", "density.components")
            for i, c in enumerate(self.components):
                if not (c.amplitude > 0 and c.length_scale > 0):
                    raise ConfigError(
                        "amplitude and length_scale must be > 0", f"density.components[{i}]"
                    )
        else:
            raise ConfigError(f"unknown density kind {self.kind!r}", "density.kind")

    @classmethod
    def uniform(cls, value: float = 1.0) -> "DensityField":
        return cls("uniform", float(value))

    @classmethod
    def gaussian_mixture(cls, centers: Sequence, amplitudes, length_scales) -> "DensityField":
        n = len(centers)
        amps = np.broadcast_to(np.asarray(amplitudes, dtype=float), (n,))
        scales = np.broadcast_to(np.asarray(length_scales, dtype=float), (n,))
        comps = tuple(
            GaussianComponent((float(c[0]), float(c[1])), float(a), float(s))
            for c, a, s in zip(centers, amps, scales)
        )
        return cls("gaussian_mixture", components=comps)

    def evaluate(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        if self.kind == "uniform":
            return np.full(len(pts), self.value)
        out = np.zeros(len(pts))
        for c in self.components:
            d2 = (pts[:, 0] - c.center[0]) ** 2 + (pts[:, 1] - c.center[1]) ** 2
            out += c.amplitude * np.exp(-d2 / (c.length_scale * c.length_scale))
        return out


def eval_density(f: DensityField, q) -> float:
    return float(f.evaluate(q)[0])


# Five-bump field used for the heterogeneous benchmark: 5*exp(-6*|w - t|^2).
BENCHMARK_BUMP_CENTERS = ((2.0, 0.25), (1.0, 2.25), (1.9, 1.9), (2.35, 1.25), (0.1, 0.1))


def benchmark_density() -> DensityField:
    return DensityField.gaussian_mixture(BENCHMARK_BUMP_CENTERS, 5.0, 1.0 / math.sqrt(6.0))


@dataclass(frozen=True)
class IntegrationGrid:
    """Cell centers of a G x G subdivision of the polygon's bounding box.

    Only cells whose center lies in the polygon are kept, in row-major order
    (y outer, x inner).  Every cell carries the same weight ``dx * dy``.
    """

    polygon: ConvexPolygon
    resolution: int
    centers: np.ndarray
    weight: float
    dx: float
    dy: float

    @property
    def size(self) -> int:
        return len(self.centers)

    @property
    def weights(self) -> np.ndarray:
        return np.full(self.size, self.weight)

    @property
    def cell_diagonal(self) -> float:
        return math.hypot(self.dx, self.dy)

    def total_weight(self) -> float:
        return self.weight * self.size


def build_grid(poly: ConvexPolygon, G: int, min_resolution: int = 8) -> IntegrationGrid:
    """Midpoint quadrature grid; ``G`` cells per bounding-box axis."""
    if int(G) != G or G < min_resolution or G < 1:
        raise ConfigError(f"grid resolution must be an integer >= {min_resolution}, got {G!r}", "grid")
    G = int(G)
    x0, y0, x1, y1 = poly.bbox()
    dx, dy = (x1 - x0) / G, (y1 - y0) / G
    xs = x0 + (np.arange(G) + 0.5) * dx
    ys = y0 + (np.arange(G) + 0.5) * dy
    X, Y = np.meshgrid(xs, ys)  # rows follow y
    pts = np.column_stack([X.ravel(), Y.ravel()])
    pts = pts[poly.contains_many(pts, POLYGON_TOL)]
    pts.setflags(write=False)
    return IntegrationGrid(poly, G, pts, dx * dy, dx, dy)
