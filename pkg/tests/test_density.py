import math

import numpy as np
import pytest

from mwsn.density import DensityField, benchmark_density, build_grid, eval_density
from mwsn.errors import ConfigError
from mwsn.geometry import ConvexPolygon
from mwsn.harness.scenario import BENCHMARK_REGION


def test_uniform():
    f = DensityField.uniform(1.0)
    assert eval_density(f, (0.3, 9.0)) == 1.0


def test_benchmark_bump_peak():
    f = DensityField.gaussian_mixture([(2, 0.25)], 5.0, 1 / math.sqrt(6))
    assert eval_density(f, (2, 0.25)) == pytest.approx(5.0)
    # matches 5 exp(-6 |w - t|^2)
    assert eval_density(f, (2.1, 0.35)) == pytest.approx(5 * math.exp(-6 * 0.02))


def test_unit_displacement():
    f = DensityField.gaussian_mixture([(0, 0)], 1.0, 1.0)
    assert eval_density(f, (1, 0)) == pytest.approx(math.exp(-1))


def test_benchmark_field_is_a_sum_of_five_bumps():
    f = benchmark_density()
    assert len(f.components) == 5
    q = np.array([1.3, 0.7])
    expected = sum(5 * math.exp(-6 * ((q[0] - x) ** 2 + (q[1] - y) ** 2))
                   for x, y in [(2, 0.25), (1, 2.25), (1.9, 1.9), (2.35, 1.25), (0.1, 0.1)])
    assert eval_density(f, q) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("kwargs", [dict(value=0.0), dict(value=-1.0)])
def test_uniform_rejects_nonpositive(kwargs):
    with pytest.raises(ConfigError):
        DensityField.uniform(**kwargs)


def test_mixture_rejects_bad_components():
    with pytest.raises(ConfigError):
        DensityField.gaussian_mixture([(0, 0)], 0.0, 1.0)
    with pytest.raises(ConfigError):
        DensityField.gaussian_mixture([(0, 0)], 1.0, -1.0)


def test_grid_unit_square_g2(unit_square):
    g = build_grid(unit_square, 2, min_resolution=1)
    assert g.centers.tolist() == [[0.25, 0.25], [0.75, 0.25], [0.25, 0.75], [0.75, 0.75]]
    assert g.weight == 0.25


def test_grid_unit_square_g1(unit_square):
    g = build_grid(unit_square, 1, min_resolution=1)
    assert g.centers.tolist() == [[0.5, 0.5]]
    assert g.weight == 1.0


def test_grid_triangle():
    tri = ConvexPolygon([(0, 0), (1, 0), (0, 1)])
    g = build_grid(tri, 2, min_resolution=1)
    # (0.75, 0.75) is outside the hypotenuse x + y <= 1
    assert g.centers.tolist() == [[0.25, 0.25], [0.75, 0.25], [0.25, 0.75]]
    assert abs(g.total_weight() - 0.5) <= 0.5
    g = build_grid(tri, 256)
    assert abs(g.total_weight() - 0.5) <= 2 / 256


def test_grid_resolution_floor(unit_square):
    with pytest.raises(ConfigError):
        build_grid(unit_square, 4)
    with pytest.raises(ConfigError):
        build_grid(unit_square, 8.5)


def test_benchmark_region_area():
    poly = ConvexPolygon(BENCHMARK_REGION)
    g = build_grid(poly, 256)
    assert abs(g.total_weight() - poly.area()) / poly.area() <= 0.02
    assert np.all(poly.contains_many(g.centers))
    assert g.size <= 256 * 256


def test_grid_is_row_major():
    poly = ConvexPolygon(BENCHMARK_REGION)
    g = build_grid(poly, 32)
    order = np.lexsort((g.centers[:, 0], g.centers[:, 1]))
    assert np.array_equal(order, np.arange(g.size))
