import numpy as np
import pytest

from mwsn.density import build_grid
from mwsn.geometry import ConvexPolygon

UNIT_SQUARE = ConvexPolygon([(0, 0), (1, 0), (1, 1), (0, 1)])


@pytest.fixture
def unit_square():
    return UNIT_SQUARE


@pytest.fixture(scope="session")
def square_grid_256():
    return build_grid(UNIT_SQUARE, 256)


def _box(disks):
    c = np.array([d.center for d in disks], dtype=float)
    r = np.array([d.radius for d in disks], dtype=float)[:, None]
    return np.min(c - r, axis=0), np.max(c + r, axis=0)


def brute_force_nearest(region, target, step=1e-3, clip=None):
    """Nearest lattice point of ``region`` to ``target``, by exhaustive search.

    The lattice covers the intersection of the groups' bounding boxes and is
    scanned in row chunks so fine steps stay within memory.
    """
    boxes = [_box(g) for g in region.groups]
    if region.cap is not None:
        boxes.append(_box([region.cap]))
    lo = np.max([b[0] for b in boxes], axis=0)
    hi = np.min([b[1] for b in boxes], axis=0)
    if np.any(lo > hi):
        return None
    xs = np.arange(lo[0], hi[0] + step, step)
    ys = np.arange(lo[1], hi[1] + step, step)
    best, best_d = None, np.inf
    rows = max(1, 2_000_000 // len(xs))
    for s in range(0, len(ys), rows):
        X, Y = np.meshgrid(xs, ys[s:s + rows])
        pts = np.column_stack([X.ravel(), Y.ravel()])
        ok = region.contains_many(pts, 0.0)
        if clip is not None:
            ok &= clip.contains_many(pts, 0.0)
        pts = pts[ok]
        if len(pts) == 0:
            continue
        d = np.hypot(pts[:, 0] - target[0], pts[:, 1] - target[1])
        i = np.argmin(d)
        if d[i] < best_d:
            best, best_d = pts[i], d[i]
    if best is None:
        return None
    return best, best_d


_CRITERIA: list[str] = []


def record_criterion(line: str) -> None:
    _CRITERIA.append(line)


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_CRITERIA, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
