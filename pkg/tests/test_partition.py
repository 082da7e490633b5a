import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mwsn.density import DensityField, build_grid
from mwsn.geometry import ConvexPolygon
from mwsn.partition import Sensor, assign_mwvd, cell_moments, distortion, sensor_terms

UNIFORM = DensityField.uniform(1.0)


def _grid_from_points(points):
    # a synthetic grid over arbitrary points with unit weight
    from mwsn.density import IntegrationGrid

    pts = np.asarray(points, dtype=float)
    poly = ConvexPolygon([(-10, -10), (10, -10), (10, 10), (-10, 10)])
    return IntegrationGrid(poly, 1, pts, 1.0, 1.0, 1.0)


def test_plain_voronoi_owner():
    g = _grid_from_points([(0.25, 0), (0.75, 0), (0.5, 0)])
    a = assign_mwvd([(0, 0), (1, 0)], [1, 1], None, g)
    assert a.owner.tolist() == [0, 1, 0]  # the equidistant cell goes to the lower id


def test_weighted_bisector_at_two_thirds():
    g = _grid_from_points([(0.6, 0), (0.7, 0)])
    a = assign_mwvd([(0, 0), (1, 0)], [1, 4], None, g)
    assert a.owner.tolist() == [0, 1]


def test_inactive_sensors_own_nothing():
    g = _grid_from_points([(0.1, 0), (0.9, 0)])
    a = assign_mwvd([(0, 0), (1, 0)], [1, 1], np.array([True, False]), g)
    assert a.owner.tolist() == [0, 0]
    none = assign_mwvd([(0, 0), (1, 0)], [1, 1], np.array([False, False]), g)
    assert none.unowned and np.all(none.owner == -1)
    assert distortion([(0, 0), (1, 0)], [1, 1], np.array([False, False]), g, UNIFORM) == 0.0


def test_moments_single_sensor(unit_square):
    g = build_grid(unit_square, 2, min_resolution=1)
    a = assign_mwvd([(0.1, 0.1)], [1], None, g)
    m = cell_moments(a, g, UNIFORM, [(0.1, 0.1)])
    assert m.mass[0] == pytest.approx(1.0)
    assert m.centroid[0] == pytest.approx((0.5, 0.5))


def test_x_linear_centroid(unit_square):
    # centroid of f(x, y) = x on the unit square is (2/3, 1/2)
    errs = []
    for G in (16, 64, 256):
        g = build_grid(unit_square, G)
        f = g.centers[:, 0].copy()
        a = assign_mwvd([(0.5, 0.5)], [1], None, g)
        c = cell_moments(a, g, f, [(0.5, 0.5)]).centroid[0]
        errs.append(abs(c[0] - 2 / 3))
        assert c[1] == pytest.approx(0.5)
    assert errs[-1] < 1e-4
    assert errs[0] > errs[-1]


def test_empty_cell_centroid_is_position():
    g = _grid_from_points([(0.0, 0.0)])
    pos = [(0, 0), (5, 5)]
    m = cell_moments(assign_mwvd(pos, [1, 1], None, g), g, UNIFORM, pos)
    assert m.mass[1] == 0
    assert m.centroid[1].tolist() == [5, 5]


def test_single_sensor_distortion(square_grid_256):
    d = distortion([(0.5, 0.5)], [1], None, square_grid_256, UNIFORM)
    assert abs(d - 1 / 6) <= 2 / 256


def test_distortion_linear_in_eta(square_grid_256):
    d1 = distortion([(0.3, 0.4)], [1], None, square_grid_256, UNIFORM)
    d2 = distortion([(0.3, 0.4)], [2], None, square_grid_256, UNIFORM)
    assert d2 == 2 * d1


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(st.floats(0, 1), st.floats(0, 1)), min_size=2, max_size=6), st.integers(0, 2**31))
def test_parallel_axis_identity(points, seed):
    g = build_grid(ConvexPolygon([(0, 0), (1, 0), (1, 1), (0, 1)]), 32)
    pos = np.array(points)
    eta = np.random.default_rng(seed).uniform(0.5, 4, len(pos))
    a = assign_mwvd(pos, eta, None, g)
    m = cell_moments(a, g, UNIFORM, pos)
    at_p = sensor_terms(pos, eta, a, g, UNIFORM)
    at_c = sensor_terms(m.centroid, eta, a, g, UNIFORM)
    gap = eta * m.mass * np.sum((pos - m.centroid) ** 2, axis=1)
    np.testing.assert_allclose(at_p - at_c, gap, atol=1e-9)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(st.floats(0, 1), st.floats(0, 1)), min_size=2, max_size=6))
def test_equal_weights_is_plain_voronoi(points):
    g = build_grid(ConvexPolygon([(0, 0), (1, 0), (1, 1), (0, 1)]), 64)
    pos = np.array(points)
    a = assign_mwvd(pos, np.full(len(pos), 2.5), None, g)
    d = np.linalg.norm(g.centers[:, None, :] - pos[None, :, :], axis=2)
    mine = d[np.arange(g.size), a.owner]
    assert np.all(mine <= d.min(axis=1) * (1 + 1e-12) + 1e-15)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(st.floats(0, 1), st.floats(0, 1)), min_size=2, max_size=6), st.integers(0, 2**31))
def test_reassignment_never_increases_distortion(points, seed):
    g = build_grid(ConvexPolygon([(0, 0), (1, 0), (1, 1), (0, 1)]), 32)
    pos = np.array(points)
    eta = np.random.default_rng(seed).uniform(0.5, 4, len(pos))
    old = assign_mwvd(pos, eta, None, g)
    moved = pos + np.random.default_rng(seed + 1).normal(0, 0.1, pos.shape)
    fixed = distortion(moved, eta, None, g, UNIFORM, assignment=old)
    fresh = distortion(moved, eta, None, g, UNIFORM)
    assert fresh <= fixed + 1e-12


def test_sensor_validation():
    Sensor(1, (0, 0), (0, 0), 1, 1, 2, 0.2)
    with pytest.raises(ValueError):
        Sensor(2, (0, 0), (0, 0), 0, 1, 2, 0.2)
    with pytest.raises(ValueError):
        Sensor(3, (0, 0), (0, 0), 1, 1, -1, 0.2)
