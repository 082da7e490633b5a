import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mwsn.connectivity import (
    CommGraph,
    approx_desired_region,
    approx_feasible_region,
    backbone,
    components_excluding,
    desired_region,
    euclidean_mst,
    external_field_membership,
    feasible_region,
    is_fully_connected,
    mst_neighbors,
    semi_desired_region,
    semi_feasible_region,
)
from mwsn.errors import DisconnectedGraphError
from mwsn.geometry import project_to_disk_region


def ring12():
    """Sensor 1 (index 0) joins two arms: 2..7 on one side, 12..8 on the other.

    Sensor 1's neighbors are 2, 3 and 12.
    """
    arm = [(0.6, 0.3), (0.6, -0.3), (1.4, 0.0), (2.2, 0.0), (3.0, 0.0), (3.8, 0.0)]
    other = [(-0.8 * (5 - k), 0.0) for k in range(5)]  # ids 8..12, 12 at (-0.8, 0)
    p = [(0.0, 0.0)] + arm + other
    return np.array(p)


def test_ring_components():
    pos = ring12()
    g = CommGraph.build(pos, 1.0)
    assert [m + 1 for m in g.neighbors(0)] == [2, 3, 12]
    comps = components_excluding(range(12), 0, pos, 1.0)
    assert [[m + 1 for m in c] for c in comps] == [[2, 3, 4, 5, 6, 7], [8, 9, 10, 11, 12]]
    adr = approx_desired_region(0, pos, 1.0)
    assert [len(gr) for gr in adr.groups] == [2, 1]
    assert sorted(d.center for d in adr.groups[0]) == sorted([tuple(pos[1]), tuple(pos[2])])


def test_backbone_closed_chain():
    rc = 0.4
    pos = np.array([(k * rc, 0.0) for k in range(5)])
    assert backbone(pos, rc) == [0, 1, 2, 3, 4]
    pos[3:, 0] += 1e-6
    assert backbone(pos, rc) == [0, 1, 2]
    assert backbone(np.array([(0.3, 0.3)]), rc) == [0]


def test_components_small_cases():
    line = np.array([(0, 0), (1, 0), (2, 0)], dtype=float)
    assert components_excluding([0, 1, 2], 1, line, 1.0) == [[0], [2]]
    tri = np.array([(0, 0), (0.5, 0), (0.25, 0.4)])
    assert components_excluding([0, 1, 2], 2, tri, 1.0) == [[0, 1]]
    assert components_excluding([0], 0, tri, 1.0) == []
    with pytest.raises(ValueError):
        components_excluding([0, 1], 2, tri, 1.0)


def test_desired_region_tangency_point():
    pos = np.array([(1.0, 0.5), (0.0, 0.0), (2.0, 0.0)])
    dr = desired_region(0, pos, [0, 1, 2], 1.0)
    assert dr.contains((1, 0))
    assert not dr.contains((1, 0.01))
    assert project_to_disk_region((1, 3), dr, (1, 0)).point == pytest.approx((1, 0))


def test_desired_region_empty_when_components_far_apart():
    pos = np.array([(1.5, 0.0), (0.0, 0.0), (3.0, 0.0)])
    dr = desired_region(0, pos, [0, 1, 2], 1.0)
    proj = project_to_disk_region((1.5, 0), dr, (1.5, 0))
    assert proj.empty


def test_desired_region_whole_plane_for_lone_sensor():
    assert desired_region(0, np.array([(0.0, 0.0)]), [0], 1.0).contains((50, 50))


def test_feasible_region_budget_edges():
    pos = np.array([(0.0, 0.0), (0.9, 0.0)])
    zero = feasible_region(0, pos, [0, 1], 1.0, pos[0], 0.0)
    assert zero.contains(pos[0]) and not zero.contains((0.01, 0))
    far = np.array([(0.0, 0.0), (0.9, 0.0)])
    p0 = (-5.0, 0.0)  # initial position outside the DR
    assert not feasible_region(0, far, [0, 1], 1.0, p0, 0.0).contains(p0)
    huge = feasible_region(0, pos, [0, 1], 1.0, pos[0], 1e6)
    dr = desired_region(0, pos, [0, 1], 1.0)
    pts = np.random.default_rng(0).uniform(-2, 3, (500, 2))
    assert np.array_equal(huge.contains_many(pts), dr.contains_many(pts))


def test_adr_component_without_neighbor_is_empty():
    # sensor 0 has no neighbor in its own component (pathological snapshot)
    pos = np.array([(0.0, 0.0), (0.5, 0.0), (3.0, 0.0), (3.5, 0.0)])
    adr = approx_desired_region(0, pos, 1.0, [0, 1, 2, 3])
    assert adr.has_empty_group
    assert project_to_disk_region((0, 0), adr, (0, 0)).empty


def test_external_field():
    pos = np.array([(0.0, 0.0), (5.0, 0.0)])
    assert not external_field_membership((0, 0), pos, [0, 1], 1.0)
    assert external_field_membership((6.0, 0), pos, [0], 1.0)
    assert not external_field_membership((6.0 + 1e-6, 0), pos, [0], 1.0)


class TestMst:
    def test_chain(self):
        pos = np.array([(0, 0), (0.5, 0), (1.0, 0)])
        mst = euclidean_mst(pos, 1.0)
        assert [(e.i, e.j) for e in mst] == [(0, 1), (1, 2)]
        assert sum(e.length for e in mst) == pytest.approx(1.0)

    def test_equilateral_tie(self):
        pos = np.array([(0, 0), (1, 0), (0.5, math.sqrt(3) / 2)])
        pos[2] = pos[1] + (pos[2] - pos[1])  # lengths agree to rounding
        mst = euclidean_mst(pos, 1.0 + 1e-9)
        assert {(e.i, e.j) for e in mst} in ({(0, 1), (0, 2)}, {(0, 1), (1, 2)}, {(0, 2), (1, 2)})
        exact = np.array([(0, 0), (1, 0), (0, 1), (1, 1)], dtype=float)
        mst = euclidean_mst(exact, 1.0)
        # four unit sides tie; the lexicographic rule takes (0,1), (0,2), (1,3)
        assert [(e.i, e.j) for e in mst] == [(0, 1), (0, 2), (1, 3)]

    def test_square_without_diagonals(self):
        pos = np.array([(0, 0), (0.8, 0), (0.8, 0.8), (0, 0.8)])
        mst = euclidean_mst(pos, 1.0)
        assert len(mst) == 3
        assert all(e.length == pytest.approx(0.8) for e in mst)

    def test_disconnected(self):
        with pytest.raises(DisconnectedGraphError):
            euclidean_mst(np.array([(0, 0), (5, 0)]), 1.0)

    def test_brute_force_total_length(self):
        # compare with exhaustive enumeration over edge subsets
        from itertools import combinations

        rng = np.random.default_rng(3)
        for _ in range(10):
            pos = rng.uniform(0, 1.5, (5, 2))
            if not is_fully_connected(pos, 1.0):
                continue
            g = CommGraph.build(pos, 1.0)
            edges = [(i, j) for i in range(5) for j in range(i + 1, 5) if g.adjacency[i, j]]
            best = math.inf
            for sub in combinations(edges, 4):
                if is_fully_connected(pos, 1e9) and len(_tree_components(sub, 5)) == 1:
                    best = min(best, sum(g.distances[i, j] for i, j in sub))
            total = sum(e.length for e in euclidean_mst(pos, 1.0))
            assert total == pytest.approx(best)


def _tree_components(edges, n):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for i, j in edges:
        parent[find(i)] = find(j)
    return {find(x) for x in range(n)}


class TestSemiDesired:
    def test_single_neighbor_at_range(self):
        pos = np.array([(0.0, 0.0), (1.0, 0.0)])
        sdr = semi_desired_region(0, pos, euclidean_mst(pos, 1.0), 1.0)
        (d,), = sdr.groups
        assert d.center == pytest.approx((0.5, 0)) and d.radius == 0.5
        assert sdr.contains(pos[0])

    def test_coincident_neighbor(self):
        pos = np.array([(0.2, 0.2), (0.2, 0.2)])
        sdr = semi_desired_region(0, pos, euclidean_mst(pos, 1.0), 1.0)
        (d,), = sdr.groups
        assert d.center == pytest.approx((0.2, 0.2)) and d.radius == 0.5

    def test_two_opposite_neighbors_pin(self):
        pos = np.array([(0.0, 0.0), (-1.0, 0.0), (1.0, 0.0)])
        mst = euclidean_mst(pos, 1.0)
        assert mst_neighbors(mst, 0) == [1, 2]
        sdr = semi_desired_region(0, pos, mst, 1.0)
        assert sdr.contains((0, 0))
        assert not sdr.contains((0, 0.01))
        assert project_to_disk_region((0, 3), sdr, (0, 0)).point == pytest.approx((0, 0))

    def test_semi_feasible_cap(self):
        pos = np.array([(0.0, 0.0), (0.5, 0.0)])
        mst = euclidean_mst(pos, 1.0)
        frozen = semi_feasible_region(0, pos, mst, 1.0, residual=0.0, step_cap=1.0, xi=1.0)
        assert project_to_disk_region((-3, 0), frozen, pos[0]).point == (0.0, 0.0)
        small = semi_feasible_region(0, pos, mst, 1.0, residual=10.0, step_cap=0.05, xi=2.0)
        q = project_to_disk_region((-3, 0), small, pos[0]).point
        assert math.dist(q, pos[0]) == pytest.approx(0.05)
        budget = semi_feasible_region(0, pos, mst, 1.0, residual=0.02, step_cap=1.0, xi=2.0)
        q = project_to_disk_region((-3, 0), budget, pos[0]).point
        assert math.dist(q, pos[0]) == pytest.approx(0.01)


def _connected_deployment(rng, n, rc, box):
    pts = [rng.uniform(0, box, 2)]
    while len(pts) < n:
        q = rng.uniform(0, box, 2)
        if min(math.dist(q, p) for p in pts) <= rc:
            pts.append(q)
    return np.array(pts)


def _dr_by_definition(q, n, pos, I, rc):
    """Placing n at q keeps I connected (breadth-first search on the moved graph)."""
    moved = pos.copy()
    moved[n] = q
    return is_fully_connected(moved, rc, I) if len(I) > 1 else True


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_region_nesting_and_definition(seed):
    rng = np.random.default_rng(seed)
    rc = 1.0
    pos = _connected_deployment(rng, 8, rc, 2.5)
    mst = euclidean_mst(pos, rc)
    everyone = list(range(len(pos)))
    samples = rng.uniform(-0.5, 3.0, (60, 2))
    for n in range(len(pos)):
        sdr = semi_desired_region(n, pos, mst, rc)
        adr = approx_desired_region(n, pos, rc, everyone)
        dr = desired_region(n, pos, everyone, rc)
        near = pos[n] + rng.uniform(-0.5, 0.5, (20, 2))
        for q in np.vstack([samples, near]):
            in_s, in_a, in_d = sdr.contains(q), adr.contains(q), dr.contains(q)
            assert (not in_s) or in_a
            assert (not in_a) or in_d
            assert in_d == _dr_by_definition(q, n, pos, everyone, rc + 1e-9)


def test_approx_feasible_region_is_capped():
    pos = np.array([(0.0, 0.0), (0.5, 0.0)])
    afr = approx_feasible_region(0, pos, 1.0, pos[0], 0.1)
    assert afr.cap.radius == 0.1
    assert not afr.contains((0.2, 0))
