import math

import numpy as np
import pytest

from walklimits import (
    PointSet,
    convex_hull,
    diameter,
    drift_map,
    hausdorff,
    mean_width,
    steiner_neighborhood_volume,
    support,
    surface_area,
    volume,
    volume_mc,
)
from walklimits.geometry import (
    drift_basis,
    hausdorff_support,
    mean_width_stderr,
    sphere_directions,
)

from conftest import random_origin_points


def _polygon(rng, m=12, scale=1.0, shift=(0.0, 0.0)):
    pts = rng.normal(size=(m, 2)) * scale + np.asarray(shift)
    return convex_hull(pts, validate=False)


def _point_to_polygon(p, body):
    # independent point-to-convex-polygon distance via edges
    loop = body.loop
    if len(loop) == 1:
        return float(np.linalg.norm(p - loop[0]))
    best = math.inf
    for a, b in zip(loop, np.roll(loop, -1, axis=0)):
        ab = b - a
        denom = float(ab @ ab)
        t = 0.0 if denom == 0.0 else float(np.clip((p - a) @ ab / denom, 0.0, 1.0))
        best = min(best, float(np.linalg.norm(p - (a + t * ab))))
    if body.normals is not None and bool(body.contains(p[None, :], 0.0)[0]):
        return 0.0
    return best


def _body_hausdorff(a, b):
    d1 = max(_point_to_polygon(v, b) for v in a.loop)
    d2 = max(_point_to_polygon(v, a) for v in b.loop)
    return max(d1, d2)


# ------------------------------------------------------------- hausdorff

def test_hausdorff_basic():
    a = PointSet([[0.0, 0.0]])
    b = PointSet([[0.0, 0.0], [1.0, 0.0]])
    assert hausdorff(a, a) == 0.0
    assert hausdorff(a, b) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        hausdorff(a, PointSet([[0.0]]))


def test_hausdorff_duplicate_and_closure_invariance(rng):
    for _ in range(200):
        pts_a = random_origin_points(rng, 12)
        pts_b = random_origin_points(rng, 9)
        base = hausdorff(pts_a, pts_b)
        dup = np.vstack([pts_a, pts_a[rng.integers(0, len(pts_a), 5)]])
        assert hausdorff(dup, pts_b) == pytest.approx(base, abs=1e-15)


# ------------------------------------------------------------ convex hull

def test_hull_square_with_centre():
    body = convex_hull([[0, 0], [1, 0], [1, 1], [0, 1], [0.5, 0.5]])
    assert len(body.vertices) == 4
    assert not any(np.allclose(v, [0.5, 0.5]) for v in body.vertices)


def test_hull_collinear_degenerates_to_segment():
    body = convex_hull([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [0.5, 0.5]])
    assert body.degenerate
    assert len(body.vertices) == 2
    assert volume(body) == 0.0
    assert surface_area(body) == pytest.approx(2.0 * math.sqrt(8.0))


def test_hull_idempotent(rng):
    pts = random_origin_points(rng, 100)
    body = convex_hull(pts)
    again = convex_hull(body.vertices)
    assert sorted(map(tuple, body.vertices)) == sorted(map(tuple, again.vertices))


def test_hull_membership_against_triangle_oracle(rng):
    pts = random_origin_points(rng, 1000)
    body = convex_hull(pts)
    verts = body.vertices
    k = len(verts)
    def cross2(u, w):
        return u[0] * w[:, 1] - u[1] * w[:, 0]

    covered = np.zeros(len(pts), dtype=bool)
    for i in range(k):
        for j in range(i + 1, k):
            for l in range(j + 1, k):
                a, b, c = verts[i], verts[j], verts[l]
                d1 = cross2(b - a, pts - a)
                d2 = cross2(c - b, pts - b)
                d3 = cross2(a - c, pts - c)
                eps = 1e-9
                inside = ((d1 >= -eps) & (d2 >= -eps) & (d3 >= -eps)) | (
                    (d1 <= eps) & (d2 <= eps) & (d3 <= eps)
                )
                covered |= inside
    assert covered.all()
    assert body.contains(pts).all()


def test_hull_requires_points():
    with pytest.raises(ValueError):
        convex_hull(np.empty((0, 2)))


# --------------------------------------------------------------- support

def test_support_values():
    poly = convex_hull(
        np.c_[np.cos(np.linspace(0, 2 * np.pi, 513)[:-1]),
              np.sin(np.linspace(0, 2 * np.pi, 513)[:-1])]
    )
    for theta in np.linspace(0, 2 * np.pi, 17):
        u = np.array([np.cos(theta), np.sin(theta)])
        u /= np.linalg.norm(u)
        assert support(poly, u) == pytest.approx(1.0, abs=1e-3)
    seg = convex_hull([[0.0, 0.0], [0.6, 0.8]])
    mu = np.array([0.6, 0.8])
    for theta in np.linspace(0, 2 * np.pi, 23):
        u = np.array([np.cos(theta), np.sin(theta)])
        assert support(seg, u) == pytest.approx(max(0.0, mu @ u), abs=1e-12)
    with pytest.raises(ValueError):
        support(seg, np.array([1.0, 1.0]))


def test_support_hausdorff_identity_on_polygons(rng):
    # support-grid form vs an independent polygon-distance oracle
    for _ in range(50):
        a = _polygon(rng, 10)
        b = _polygon(rng, 8, scale=1.3, shift=(0.2, -0.1))
        via_support = hausdorff_support(a, b, 10_000)
        oracle = _body_hausdorff(a, b)
        assert via_support == pytest.approx(oracle, abs=1e-6)


# -------------------------------------------------------------- diameter

def test_diameter_values(rng):
    assert diameter(PointSet([[0, 0], [3, 4]])) == pytest.approx(5.0)
    assert diameter(np.array([[0.0, 0.0], [0.6, 0.8]])) == pytest.approx(1.0)
    for _ in range(1000):
        a = random_origin_points(rng, 14)
        b = random_origin_points(rng, 11)
        assert abs(diameter(a) - diameter(b)) <= 2.0 * hausdorff(a, b) + 1e-9


def test_diameter_matches_bruteforce_on_large_set(rng):
    pts = random_origin_points(rng, 500)
    brute = 0.0
    for i in range(len(pts)):
        brute = max(brute, float(np.linalg.norm(pts - pts[i], axis=1).max()))
    assert diameter(pts) == pytest.approx(brute, abs=1e-12)


# ------------------------------------------------------------ mean width

def test_mean_width_segment_and_disc():
    seg = convex_hull([[0.0, 0.0], [0.3, 0.4]])
    assert mean_width(seg, 10_000) == pytest.approx(1.0, abs=1e-6)
    angles = np.linspace(0, 2 * np.pi, 257)[:-1]
    disc = convex_hull(np.c_[np.cos(angles), np.sin(angles)])
    assert mean_width(disc, 10_000) == pytest.approx(2 * np.pi, abs=1e-3)
    point = convex_hull([[0.0, 0.0]])
    assert mean_width(point, 64) == 0.0
    with pytest.raises(ValueError):
        mean_width(seg, 0)


def test_mean_width_d3_ball_with_stderr():
    dirs = sphere_directions(3, 2048)
    ball = convex_hull(dirs * 1.0, validate=False)
    w = mean_width(ball, 4096)
    # integral of h = 1 over the 2-sphere is 4 pi
    assert w == pytest.approx(4 * np.pi, rel=0.02)
    assert mean_width_stderr(ball, 4096) < 0.05


# ---------------------------------------------------------- surface area

def test_surface_area_square_and_cauchy(rng):
    sq = convex_hull([[0, 0], [1, 0], [1, 1], [0, 1]])
    assert surface_area(sq) == pytest.approx(4.0)
    for _ in range(100):
        poly = _polygon(rng)
        assert surface_area(poly) == pytest.approx(
            mean_width(poly, 20_000), abs=1e-4 * max(1.0, surface_area(poly))
        )


def test_surface_area_d3_ball():
    dirs = sphere_directions(3, 4096)
    ball = convex_hull(dirs, validate=False)
    assert surface_area(ball) == pytest.approx(4 * np.pi, rel=0.01)


def test_surface_area_monotone_under_inclusion(rng):
    for _ in range(200):
        outer = _polygon(rng, 14)
        shrink = rng.uniform(0.2, 0.9)
        inner = convex_hull(outer.vertices * shrink, validate=False)
        assert surface_area(inner) <= surface_area(outer) + 1e-12


# ---------------------------------------------------------------- volume

def test_volume_reference_values():
    sq = convex_hull([[0, 0], [1, 0], [1, 1], [0, 1]])
    assert volume(sq) == pytest.approx(1.0)
    tri = convex_hull([[0, 0], [1, 0], [0, 1]])
    assert volume(tri) == pytest.approx(0.5)
    simplex = convex_hull([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert volume(simplex) == pytest.approx(1.0 / 6.0)


def test_volume_d3_matches_qhull_oracle(rng):
    from scipy.spatial import ConvexHull as QHullOracle

    for _ in range(50):
        pts = rng.normal(size=(int(rng.integers(5, 40)), 3))
        body = convex_hull(pts, validate=False)
        oracle = QHullOracle(pts)
        assert volume(body) == pytest.approx(oracle.volume, rel=1e-10)
        assert surface_area(body) == pytest.approx(oracle.area, rel=1e-10)


def test_volume_mc_hypercube():
    corners = np.array(
        [[float(b) for b in np.binary_repr(i, 4)] for i in range(16)]
    )
    cube = convex_hull(corners, validate=False)
    with pytest.raises(ValueError):
        volume(cube)
    est, se = volume_mc(cube, samples=4096, seed=1)
    assert est == pytest.approx(1.0, abs=1e-9)
    assert se == pytest.approx(0.0, abs=1e-12)
    cross = convex_hull(np.vstack([np.eye(4), -np.eye(4)]), validate=False)
    est, se = volume_mc(cross, samples=1 << 15, seed=2)
    # volume of the 4-d cross-polytope is 2^4 / 4! = 2/3
    assert abs(est - 2.0 / 3.0) <= 4.0 * se


# ---------------------------------------------------------------- steiner

def test_steiner_reference_values():
    sq = convex_hull([[0, 0], [1, 0], [1, 1], [0, 1]])
    for eps in (0.0, 0.1, 0.5, 2.0):
        assert steiner_neighborhood_volume(sq, eps) == pytest.approx(
            1.0 + 4.0 * eps + np.pi * eps * eps
        )
    pt = convex_hull([[0.0, 0.0]])
    assert steiner_neighborhood_volume(pt, 0.3) == pytest.approx(np.pi * 0.09)
    seg = convex_hull([[0.0, 0.0], [2.0, 0.0]])
    assert steiner_neighborhood_volume(seg, 0.25) == pytest.approx(
        2 * 2.0 * 0.25 + np.pi * 0.0625
    )
    with pytest.raises(ValueError):
        steiner_neighborhood_volume(convex_hull([[0, 0, 0], [1, 0, 0]]), 0.1)


def test_steiner_finite_difference_matches_surface(rng):
    for _ in range(50):
        poly = _polygon(rng)
        eps = 1e-4
        deriv = (
            steiner_neighborhood_volume(poly, eps) - steiner_neighborhood_volume(poly, 0.0)
        ) / eps
        s = surface_area(poly)
        assert abs(deriv - s) / s < 1e-3


# ------------------------------------------------------------- drift map

def test_drift_map_values():
    mu = np.array([1.0, 0.0])
    n = 4
    out = drift_map(n * mu, n, mu)
    assert np.allclose(out, [1.0, 0.0], atol=1e-12)
    perp = np.array([0.0, 2.0])
    out = drift_map(perp, n, mu)
    assert out[0] == pytest.approx(0.0, abs=1e-12)
    assert abs(out[1]) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        drift_map(perp, n, [0.0, 0.0])


def test_drift_basis_orthonormal(rng):
    for _ in range(300):
        d = int(rng.integers(2, 6))
        mu = rng.normal(size=d)
        basis = drift_basis(mu)
        gram = basis.T @ basis
        assert np.allclose(gram, np.eye(d), atol=1e-12)
        assert np.allclose(basis[:, 0], mu / np.linalg.norm(mu), atol=1e-12)


# --------------------------------------------------- set-level invariants

def test_hull_contraction_under_hausdorff(rng):
    for _ in range(1000):
        a = random_origin_points(rng, 10)
        b = random_origin_points(rng, 8)
        da = hausdorff(a, b)
        ha = convex_hull(a, validate=False)
        hb = convex_hull(b, validate=False)
        dh = hausdorff_support(ha, hb, 512)
        assert dh <= da + 1e-6


def test_mean_width_lipschitz_in_hausdorff(rng):
    for _ in range(1000):
        a = _polygon(rng, 9)
        b = _polygon(rng, 9, scale=1.1)
        dh = hausdorff_support(a, b, 2048)
        dw = abs(mean_width(a, 2048) - mean_width(b, 2048))
        assert dw <= 2 * np.pi * dh + 1e-9


def test_mean_width_bound_exponent_monitor_d3(rng):
    # monitored, not asserted: the d = 3 form of the width bound uses the
    # (d-1)-th power of the distance, which is not a Lipschitz bound; print
    # the observed worst ratio for inspection
    worst = 0.0
    for _ in range(50):
        a = convex_hull(rng.normal(size=(12, 3)), validate=False)
        b = convex_hull(rng.normal(size=(12, 3)) * 1.1, validate=False)
        dh = hausdorff_support(a, b, 2048)
        dw = abs(mean_width(a, 4096) - mean_width(b, 4096))
        if dh > 0:
            worst = max(worst, dw / (2 * np.pi * dh**2))
    assert np.isfinite(worst)
    print(f"d=3 width-vs-distance^2 worst observed ratio: {worst:.3f}")
