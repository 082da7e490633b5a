"""Exact 2-D primitives: convex polygons, disks, and the disk-region projection kernel.

Points are plain ``(x, y)`` pairs (tuples or length-2 arrays).  Everything here is
pure; the vectorized helpers accept ``(M, 2)`` arrays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

# Tolerance of the half-plane test in ``point_in_polygon``.
POLYGON_TOL = 1e-12
# Tolerance of every disk / polygon membership test used by constraint regions.
MEMBERSHIP_TOL = 1e-9
TANGENCY_TOL = 1e-9
COINCIDENT_TOL = 1e-12


def as_point(q) -> np.ndarray:
    p = np.asarray(q, dtype=float).reshape(2)
    if not np.all(np.isfinite(p)):
        raise ValueError(f"non-finite point {q!r}")
    return p


@dataclass(frozen=True)
class ConvexPolygon:
    """Convex polygon with counter-clockwise vertices."""

    vertices: np.ndarray
    _normals: np.ndarray = field(init=False, repr=False, compare=False)
    _offsets: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or len(v) < 3:
            raise ValueError("a polygon needs at least 3 (x, y) vertices")
        if not np.all(np.isfinite(v)):
            raise ValueError("polygon vertices must be finite")
        e = np.roll(v, -1, axis=0) - v
        nxt = np.roll(e, -1, axis=0)
        cross = e[:, 0] * nxt[:, 1] - e[:, 1] * nxt[:, 0]
        if np.any(cross <= 1e-12):
            raise ValueError("polygon vertices must be counter-clockwise and strictly convex")
        lengths = np.hypot(e[:, 0], e[:, 1])
        # inward unit normals: left of each CCW edge
        normals = np.column_stack([-e[:, 1], e[:, 0]]) / lengths[:, None]
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "_normals", normals)
        object.__setattr__(self, "_offsets", np.einsum("ij,ij->i", normals, v))

    def __hash__(self):
        return hash(self.vertices.tobytes())

    def __eq__(self, other):
        return isinstance(other, ConvexPolygon) and np.array_equal(self.vertices, other.vertices)

    @property
    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        """Start and end points of every edge, each ``(M, 2)``."""
        return self.vertices, np.roll(self.vertices, -1, axis=0)

    def signed_distances(self, points) -> np.ndarray:
        """Distance of each point inside each edge's supporting line, ``(P, M)``."""
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        return pts @ self._normals.T - self._offsets

    def contains_many(self, points, tol: float = POLYGON_TOL) -> np.ndarray:
        return np.all(self.signed_distances(points) >= -tol, axis=1)

    def contains(self, q, tol: float = POLYGON_TOL) -> bool:
        return bool(self.contains_many(as_point(q), tol)[0])

    def area(self) -> float:
        x, y = self.vertices[:, 0], self.vertices[:, 1]
        return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))

    def bbox(self) -> tuple[float, float, float, float]:
        lo = self.vertices.min(axis=0)
        hi = self.vertices.max(axis=0)
        return float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1])


def point_in_polygon(q, poly: ConvexPolygon, tol: float = POLYGON_TOL) -> bool:
    """True iff ``q`` is inside ``poly`` or on its boundary."""
    return poly.contains(q, tol)


class Disk(NamedTuple):
    """Closed disk ``B(center, radius)``."""

    center: tuple[float, float]
    radius: float

    def contains(self, q, tol: float = MEMBERSHIP_TOL) -> bool:
        return math.hypot(q[0] - self.center[0], q[1] - self.center[1]) <= self.radius + tol


def make_disk(center, radius: float) -> Disk:
    if radius < 0:
        raise ValueError("disk radius must be >= 0")
    c = as_point(center)
    return Disk((float(c[0]), float(c[1])), float(radius))


@dataclass(frozen=True)
class DiskRegion:
    """Intersection of disk unions, optionally intersected with a cap disk.

    A point belongs to the region when, for every group, it lies in at least one
    disk of the group, and it lies in ``cap`` (if any).  No groups and no cap
    means the whole plane.  A group with no disks makes the region empty.
    """

    groups: tuple[tuple[Disk, ...], ...] = ()
    cap: Optional[Disk] = None

    def __post_init__(self):
        object.__setattr__(self, "groups", tuple(tuple(g) for g in self.groups))

    def with_cap(self, cap: Optional[Disk]) -> "DiskRegion":
        return DiskRegion(self.groups, cap)

    @property
    def has_empty_group(self) -> bool:
        return any(len(g) == 0 for g in self.groups)

    def all_disks(self) -> list[Disk]:
        disks = [d for g in self.groups for d in g]
        if self.cap is not None:
            disks.append(self.cap)
        return disks

    def contains_many(self, points, tol: float = MEMBERSHIP_TOL) -> np.ndarray:
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        inside = np.ones(len(pts), dtype=bool)
        for group in self.groups:
            in_group = np.zeros(len(pts), dtype=bool)
            for d in group:
                in_group |= _in_disk(pts, d, tol)
            inside &= in_group
        if self.cap is not None:
            inside &= _in_disk(pts, self.cap, tol)
        return inside

    def contains(self, q, tol: float = MEMBERSHIP_TOL) -> bool:
        return bool(self.contains_many(as_point(q), tol)[0])


def _in_disk(pts: np.ndarray, d: Disk, tol: float) -> np.ndarray:
    return np.hypot(pts[:, 0] - d.center[0], pts[:, 1] - d.center[1]) <= d.radius + tol


def disks_coincide(a: Disk, b: Disk) -> bool:
    return (
        math.hypot(a.center[0] - b.center[0], a.center[1] - b.center[1]) <= COINCIDENT_TOL
        and abs(a.radius - b.radius) <= COINCIDENT_TOL
    )


def circle_circle_intersections(a: Disk, b: Disk) -> list[tuple[float, float]]:
    """Intersection points of the boundary circles of ``a`` and ``b``.

    Returns 0, 1 (tangency) or 2 points.  Coincident circles give no points;
    use :func:`disks_coincide` to tell that case apart from disjoint circles.
    """
    centers = np.array([a.center, b.center], dtype=float)
    radii = np.array([a.radius, b.radius], dtype=float)
    pts, _ = _pairwise_intersections(centers, radii, np.array([0]), np.array([1]))
    return [(float(x), float(y)) for x, y in pts]


def nearest_point_on_circle(d: Disk, q) -> tuple[float, float]:
    """Closest point to ``q`` on the boundary circle of ``d``.

    When ``q`` sits on the center every boundary point is equally near; the
    point in the +x direction is returned.
    """
    q = as_point(q)
    dx, dy = q[0] - d.center[0], q[1] - d.center[1]
    dist = math.hypot(dx, dy)
    if dist <= COINCIDENT_TOL:
        return (d.center[0] + d.radius, d.center[1])
    return (d.center[0] + d.radius * dx / dist, d.center[1] + d.radius * dy / dist)


def _radial_projections(centers, radii, q):
    diff = q[None, :] - centers
    dist = np.hypot(diff[:, 0], diff[:, 1])
    out = np.empty_like(centers)
    tie = dist <= COINCIDENT_TOL
    safe = np.where(tie, 1.0, dist)
    out[:] = centers + radii[:, None] * diff / safe[:, None]
    out[tie] = centers[tie] + np.column_stack([radii[tie], np.zeros(tie.sum())])
    return out


def _pairwise_intersections(centers, radii, ii, jj):
    """Circle intersection points for index pairs ``(ii[k], jj[k])``.

    Returns ``(points, coincident_mask)``.
    """
    ci, cj = centers[ii], centers[jj]
    ri, rj = radii[ii], radii[jj]
    delta = cj - ci
    d = np.hypot(delta[:, 0], delta[:, 1])
    coincident = (d <= COINCIDENT_TOL) & (np.abs(ri - rj) <= COINCIDENT_TOL)
    ok = (
        (d > COINCIDENT_TOL)
        & (d <= ri + rj + TANGENCY_TOL)
        & (d >= np.abs(ri - rj) - TANGENCY_TOL)
    )
    if not np.any(ok):
        return np.empty((0, 2)), coincident
    ci, ri, rj, delta, d = ci[ok], ri[ok], rj[ok], delta[ok], d[ok]
    u = delta / d[:, None]
    a = (ri * ri - rj * rj + d * d) / (2.0 * d)
    h2 = ri * ri - a * a
    tangent = (np.abs(d - (ri + rj)) <= TANGENCY_TOL) | (np.abs(d - np.abs(ri - rj)) <= TANGENCY_TOL)
    h = np.where(tangent | (h2 < 0), 0.0, np.sqrt(np.maximum(h2, 0.0)))
    base = ci + a[:, None] * u
    perp = np.column_stack([-u[:, 1], u[:, 0]])
    first = base + h[:, None] * perp
    second = base - h[:, None] * perp
    pts = np.concatenate([first, second[h > 0]])
    return pts, coincident


def _segment_feet(starts, ends, q):
    e = ends - starts
    t = np.einsum("ij,ij->i", q[None, :] - starts, e) / np.einsum("ij,ij->i", e, e)
    t = np.clip(t, 0.0, 1.0)
    return starts + t[:, None] * e


def _circle_segment_intersections(centers, radii, starts, ends):
    if len(centers) == 0:
        return np.empty((0, 2))
    # broadcast circles (C) x segments (S)
    a = starts[None, :, :]
    e = (ends - starts)[None, :, :]
    f = a - centers[:, None, :]
    A = np.sum(e * e, axis=2)
    B = 2.0 * np.sum(f * e, axis=2)
    C = np.sum(f * f, axis=2) - radii[:, None] ** 2
    disc = B * B - 4 * A * C
    out = []
    valid = disc >= 0
    root = np.sqrt(np.where(valid, disc, 0.0))
    for sign in (-1.0, 1.0):
        t = (-B + sign * root) / (2 * A)
        keep = valid & (t >= -1e-12) & (t <= 1 + 1e-12)
        pts = a + np.clip(t, 0.0, 1.0)[:, :, None] * e
        out.append(pts[keep])
    return np.concatenate(out)


class Projection(NamedTuple):
    point: tuple[float, float]
    empty: bool


def project_to_disk_region(
    target,
    region: DiskRegion,
    fallback,
    clip: Optional[ConvexPolygon] = None,
    tol: float = MEMBERSHIP_TOL,
) -> Projection:
    """Nearest point to ``target`` in ``region`` (optionally intersected with ``clip``).

    The minimizer of the distance over a closed region bounded by circular arcs and
    straight edges is either the target itself, a perpendicular foot on one
    boundary curve, or a vertex where two boundary curves meet.  All such points
    are generated, filtered by membership, and the nearest survivor wins (ties:
    smaller x, then smaller y).  ``fallback`` (normally the current position) is
    always a candidate so the result is never farther than it.  If nothing passes
    the filter the fallback is returned with ``empty=True``.
    """
    t = as_point(target)
    fb = as_point(fallback)
    disks = region.all_disks()
    cands = [t[None, :], fb[None, :]]
    if disks:
        centers = np.array([d.center for d in disks], dtype=float)
        radii = np.array([d.radius for d in disks], dtype=float)
        cands.append(_radial_projections(centers, radii, t))
        if len(disks) > 1:
            ii, jj = np.triu_indices(len(disks), k=1)
            pts, _ = _pairwise_intersections(centers, radii, ii, jj)
            cands.append(pts)
    if clip is not None:
        starts, ends = clip.edges
        cands.append(clip.vertices)
        cands.append(_segment_feet(starts, ends, t))
        if disks:
            cands.append(_circle_segment_intersections(centers, radii, starts, ends))
    cand = np.concatenate(cands)
    ok = region.contains_many(cand, tol)
    if clip is not None:
        ok &= clip.contains_many(cand, tol)
    cand = cand[ok]
    if len(cand) == 0:
        return Projection((float(fb[0]), float(fb[1])), True)
    dist = np.hypot(cand[:, 0] - t[0], cand[:, 1] - t[1])
    best = np.lexsort((cand[:, 1], cand[:, 0], dist))[0]
    return Projection((float(cand[best, 0]), float(cand[best, 1])), False)

