import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import circle_one_center_brute, grid_one_center_radius
from scl.sphere_geom import (Sample, SpherePoint, antipode, circle_one_center, density_radius,
                             fibonacci_array, geodesic_distance, grid_resolution, parse_sample_csv,
                             read_sample_csv, sample_evenly_spaced_circle, sample_fibonacci_s2,
                             sample_uniform, spherical_one_center, write_sample_csv)

coord = st.floats(-1, 1, allow_nan=False)
vec3 = st.tuples(coord, coord, coord).filter(lambda v: sum(c * c for c in v) > 1e-3)
point3 = vec3.map(SpherePoint)
angle = st.floats(0, 2 * math.pi, exclude_max=True, allow_nan=False)

e1, e2 = SpherePoint((1, 0, 0)), SpherePoint((0, 1, 0))


def test_point_is_normalized():
    p = SpherePoint((3.0, 4.0))
    assert abs(np.linalg.norm(p.vec) - 1) < 1e-12
    assert p.dim == 1


@pytest.mark.parametrize("bad", [(1.0,), (0.0, 0.0), (float("nan"), 1.0)])
def test_point_rejects_degenerate(bad):
    with pytest.raises(ValueError):
        SpherePoint(bad)


def test_distance_examples():
    assert geodesic_distance(e1, e1) == 0
    assert geodesic_distance(e1, antipode(e1)) == pytest.approx(math.pi)
    assert geodesic_distance(e1, e2) == pytest.approx(math.pi / 2)


def test_distance_dimension_mismatch():
    with pytest.raises(ValueError):
        geodesic_distance(e1, SpherePoint((1, 0)))


def test_antipode_is_involution():
    x = SpherePoint((0.3, -0.2, 0.9))
    assert antipode(antipode(x)).coords == pytest.approx(x.coords)
    assert antipode(e1).coords == (-1.0, -0.0, -0.0)


@given(point3, point3, point3)
def test_triangle_inequality(x, y, z):
    assert geodesic_distance(x, z) <= geodesic_distance(x, y) + geodesic_distance(y, z) + 1e-9


@given(point3, point3)
def test_antipodal_complement(x, y):
    assert abs(geodesic_distance(y, antipode(x)) - (math.pi - geodesic_distance(y, x))) < 1e-12


@given(point3, point3)
def test_distance_symmetric_and_bounded(x, y):
    d = geodesic_distance(x, y)
    assert 0 <= d <= math.pi
    assert d == geodesic_distance(y, x)


# --- one-center -------------------------------------------------------------

def test_one_center_singleton():
    r = spherical_one_center([e1])
    assert r.radius == 0 and r.center.coords == pytest.approx(e1.coords)


def test_one_center_antipodal_pair():
    r = spherical_one_center([e1, antipode(e1)])
    assert r.radius == pytest.approx(math.pi / 2)
    assert geodesic_distance(r.center, e1) == pytest.approx(math.pi / 2)


def test_one_center_equator_triple_is_a_pole():
    pts = [SpherePoint((math.cos(t), math.sin(t), 0)) for t in (0, 2 * math.pi / 3, 4 * math.pi / 3)]
    r = spherical_one_center(pts)
    assert r.radius == pytest.approx(math.pi / 2)
    assert abs(r.center.coords[2]) == pytest.approx(1.0)
    G = fibonacci_array(10_000)
    assert abs(grid_one_center_radius(np.array([p.coords for p in pts]), G) - r.radius) <= grid_resolution(G)


@given(st.lists(point3, min_size=1, max_size=6))
@settings(max_examples=200, deadline=None)
def test_one_center_sandwich_and_coverage(pts):
    r = spherical_one_center(pts)
    diam = max(geodesic_distance(a, b) for a in pts for b in pts)
    assert diam / 2 - 1e-9 <= r.radius <= diam + 1e-9
    assert all(geodesic_distance(r.center, p) <= r.radius + 1e-9 for p in pts)
    # Tied points are all reported, so the support may exceed n + 1.
    assert r.support and all(geodesic_distance(r.center, pts[i]) >= r.radius - 1e-9 for i in r.support)


def test_one_center_deterministic():
    pts = sample_uniform(2, 5, 11)
    assert spherical_one_center(pts) == spherical_one_center(pts)


def test_one_center_large_input_uses_iteration_consistently():
    # A cap of 30 points: the iterative path must agree with a grid search.
    X = sample_uniform(2, 30, 4).array
    X[:, 2] = np.abs(X[:, 2]) + 1.0
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    r = spherical_one_center(X)
    G = fibonacci_array(20_000)
    g = grid_one_center_radius(X, G)
    assert r.radius <= g + 1e-9
    assert g - r.radius <= grid_resolution(G)


def test_circle_examples():
    assert circle_one_center([0, math.pi]).radius == pytest.approx(math.pi / 2)
    assert circle_one_center([0, 2 * math.pi / 3, 4 * math.pi / 3]).radius == pytest.approx(2 * math.pi / 3)
    assert circle_one_center([0, math.pi / 6]).radius == pytest.approx(math.pi / 12)
    assert circle_one_center_brute([0, 2 * math.pi / 3, 4 * math.pi / 3]) == pytest.approx(2 * math.pi / 3, abs=1e-3)


@given(st.lists(angle, min_size=1, max_size=8))
@settings(max_examples=300, deadline=None)
def test_circle_matches_general_path(angles):
    a = circle_one_center(angles).radius
    b = spherical_one_center([SpherePoint.from_angle(t) for t in angles]).radius
    assert abs(a - b) < 1e-9


@given(st.lists(angle, min_size=1, max_size=6))
@settings(max_examples=100, deadline=None)
def test_circle_matches_brute_grid(angles):
    assert abs(circle_one_center(angles).radius - circle_one_center_brute(angles)) <= math.pi / 10_000 + 1e-12


# --- samplers and density ---------------------------------------------------

def test_evenly_spaced_angles():
    assert sample_evenly_spaced_circle(4).angles() == pytest.approx([0, math.pi / 2, math.pi, 3 * math.pi / 2])


def test_uniform_reproducible():
    a, b = sample_uniform(2, 20, 5), sample_uniform(2, 20, 5)
    assert np.array_equal(a.array, b.array)
    assert not np.array_equal(a.array, sample_uniform(2, 20, 6).array)


def test_fibonacci_shape():
    s = sample_fibonacci_s2(100)
    assert s.array.shape == (100, 3)
    assert np.allclose(np.linalg.norm(s.array, axis=1), 1, atol=1e-12)


def test_sample_rejects_mixed_or_empty():
    with pytest.raises(ValueError):
        Sample(())
    with pytest.raises(ValueError):
        Sample((e1, SpherePoint((1, 0))))


def test_density_examples():
    assert density_radius(sample_evenly_spaced_circle(8)).epsilon == pytest.approx(math.pi / 8)
    assert density_radius(Sample.from_angles([1.0])).epsilon == pytest.approx(math.pi)
    d = density_radius(sample_fibonacci_s2(500))
    assert not d.exact and 0 < d.epsilon and d.grid_resolution > 0


def test_grid_resolution_bounds_true_covering_radius():
    # The evenly spaced circle grid has exact half-gap resolution.
    from scl.sphere_geom import grid_points
    assert grid_resolution(grid_points(1, 100)) == pytest.approx(math.pi / 100)
    assert grid_resolution(fibonacci_array(10_000)) < 0.05


def test_csv_round_trip(tmp_path):
    s = sample_uniform(2, 7, 1)
    p = tmp_path / "s.csv"
    write_sample_csv(s, p)
    assert np.allclose(read_sample_csv(p).array, s.array, atol=1e-15)
    c = sample_evenly_spaced_circle(5)
    assert np.allclose(parse_sample_csv(write_sample_csv(c, circle=True)).array, c.array, atol=1e-15)


def test_csv_header_mismatch():
    with pytest.raises(ValueError):
        parse_sample_csv("# dim=3\n1,0,0\n")
