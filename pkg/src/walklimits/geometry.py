"""Point-set and convex-body geometry: hulls, Hausdorff distance, functionals.

Exact algorithms where the experiments live (d <= 3): monotone chain in the
plane, qhull facets in d = 3, shoelace / tetrahedron volumes, polygon
perimeters and the d = 2 Steiner formula.  Above d = 3 the support
evaluator, Cauchy-formula Monte Carlo and hit-or-miss volume estimates
degrade gracefully.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import QhullError, cKDTree
from scipy.spatial import ConvexHull as _QHull

from .rng import replica_stream


@dataclass(frozen=True)
class PointSet:
    """A finite set of d-vectors containing the origin."""

    points: np.ndarray

    def __init__(self, points):
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or len(pts) == 0:
            raise ValueError("point set must be a nonempty (m, d) array")
        if not np.any(np.all(pts == 0.0, axis=1)):
            raise ValueError("point set must contain the origin")
        pts = pts.copy()
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def dim(self) -> int:
        return self.points.shape[1]


def _as_points(obj) -> np.ndarray:
    pts = obj.points if isinstance(obj, PointSet) else np.asarray(obj, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    return pts


def _directed_hausdorff(a: np.ndarray, b: np.ndarray) -> float:
    dists, _ = cKDTree(b).query(a, k=1)
    return float(np.max(dists))


def hausdorff(a, b) -> float:
    """Hausdorff distance between two finite point sets, exact."""
    pa, pb = _as_points(a), _as_points(b)
    if pa.shape[1] != pb.shape[1]:
        raise ValueError("point sets must have equal dimension")
    return max(_directed_hausdorff(pa, pb), _directed_hausdorff(pb, pa))


def _quad_filter(pts: np.ndarray) -> np.ndarray:
    """Akl-Toussaint pre-filter: drop points strictly inside the polygon of
    extreme points along 4 axes; exact, they cannot be hull vertices."""
    proj = (pts[:, 0], pts[:, 1], pts[:, 0] + pts[:, 1], pts[:, 0] - pts[:, 1])
    idx = set()
    for pr in proj:
        idx.add(int(np.argmin(pr)))
        idx.add(int(np.argmax(pr)))
    poly = _chain(pts[sorted(idx)])
    if len(poly) < 3:
        return pts
    normals, offsets = _edges_to_halfspaces(poly)
    inside = np.all(pts @ normals.T <= offsets - 1e-12, axis=1)
    return pts[~inside]


def _chain(points: np.ndarray) -> np.ndarray:
    """Monotone-chain hull of 2-d points; CCW vertices, collinear dropped."""
    if len(points) > 512:
        points = _quad_filter(points)
    order = np.lexsort((points[:, 1], points[:, 0]))
    pts = points[order]
    keep = np.ones(len(pts), dtype=bool)
    keep[1:] = np.any(np.diff(pts, axis=0) != 0.0, axis=1)
    pts = pts[keep]
    if len(pts) <= 2:
        return pts

    def half(seq):
        hull = []
        for p in seq:
            while len(hull) > 1:
                ox, oy = hull[-2]
                ax, ay = hull[-1]
                if (ax - ox) * (p[1] - oy) - (p[0] - ox) * (ay - oy) <= 0.0:
                    hull.pop()
                else:
                    break
            hull.append((p[0], p[1]))
        return hull

    lower = half(pts)
    upper = half(pts[::-1])
    loop = lower[:-1] + upper[:-1]
    if len(loop) < 2:
        return pts[[0, -1]]
    return np.asarray(loop)


@dataclass(frozen=True)
class ConvexBody:
    """A convex hull: extreme points plus an exact support evaluator.

    ``loop`` orders the vertices counter-clockwise in d = 2 (two entries
    for a degenerate segment); ``faces`` holds facet triangles in d = 3;
    ``normals``/``offsets`` give the halfspace form A x <= b of a
    full-dimensional body.  ``planar_area`` carries the in-plane area of a
    flat body embedded in d = 3.
    """

    dim: int
    vertices: np.ndarray
    loop: np.ndarray | None = None
    faces: np.ndarray | None = None
    normals: np.ndarray | None = None
    offsets: np.ndarray | None = None
    planar_area: float | None = None
    degenerate: bool = False

    def support(self, u) -> float:
        """h(u) = max over vertices of u . v (no unit check; see support())."""
        return float(np.max(self.vertices @ np.asarray(u, dtype=float)))

    def support_many(self, dirs: np.ndarray) -> np.ndarray:
        return np.max(dirs @ self.vertices.T, axis=1)

    def contains(self, points, tol: float = 1e-9) -> np.ndarray:
        """Half-space (or affine-subspace) membership test with slack tol."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if self.normals is not None:
            return np.all(pts @ self.normals.T <= self.offsets + tol, axis=1)
        return _contains_degenerate(self, pts, tol)


def _contains_degenerate(body: ConvexBody, pts: np.ndarray, tol: float) -> np.ndarray:
    verts = body.vertices
    if len(verts) == 1:
        return np.linalg.norm(pts - verts[0], axis=1) <= tol
    base = verts[0]
    span = verts[1:] - base
    _, sv, vt = np.linalg.svd(span, full_matrices=False)
    scale = max(1.0, float(sv.max(initial=0.0)))
    basis = vt[sv > 1e-12 * scale].T
    if basis.shape[1] == 0:
        return np.linalg.norm(pts - base, axis=1) <= tol
    rel = pts - base
    proj = rel @ basis
    off_plane = np.linalg.norm(rel - proj @ basis.T, axis=1)
    flat = np.vstack([np.zeros(basis.shape[1]), span @ basis])
    if basis.shape[1] == 1:
        lo, hi = float(flat.min()), float(flat.max())
        coord = proj[:, 0]
        return (off_plane <= tol) & (coord >= lo - tol) & (coord <= hi + tol)
    sub = convex_hull(flat, validate=False)
    return (off_plane <= tol) & sub.contains(proj, tol)


def _polygon_area(loop: np.ndarray) -> float:
    x, y = loop[:, 0], loop[:, 1]
    return 0.5 * float(np.abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


def _edges_to_halfspaces(loop: np.ndarray):
    nxt = np.roll(loop, -1, axis=0)
    edge = nxt - loop
    normals = np.column_stack([edge[:, 1], -edge[:, 0]])
    norms = np.linalg.norm(normals, axis=1)
    normals = normals / norms[:, None]
    offsets = np.sum(normals * loop, axis=1)
    return normals, offsets


def convex_hull(points, validate: bool = True) -> ConvexBody:
    """Convex hull of a point set; degenerate (flat) hulls are legal."""
    pts = _as_points(points)
    if len(pts) < 1:
        raise ValueError("need at least one point")
    d = pts.shape[1]
    if d == 1:
        lo, hi = float(pts.min()), float(pts.max())
        verts = np.array([[lo]]) if lo == hi else np.array([[lo], [hi]])
        return ConvexBody(
            dim=1,
            vertices=verts,
            normals=np.array([[1.0], [-1.0]]),
            offsets=np.array([hi, -lo]),
            degenerate=lo == hi,
        )
    if d == 2:
        loop = _chain(pts)
        if len(loop) <= 2:
            body = ConvexBody(2, loop, loop=loop, degenerate=True)
        else:
            normals, offsets = _edges_to_halfspaces(loop)
            body = ConvexBody(2, loop, loop=loop, normals=normals, offsets=offsets)
    else:
        body = _hull_nd(pts, d)
    if validate and d <= 3 and not bool(np.all(body.contains(pts, 1e-9))):
        raise AssertionError("hull does not contain an input point")
    return body


def _hull_nd(pts: np.ndarray, d: int) -> ConvexBody:
    try:
        q = _QHull(pts)
    except QhullError:
        return _hull_degenerate(pts, d)
    return ConvexBody(
        dim=d,
        vertices=pts[q.vertices],
        faces=pts[q.simplices] if d == 3 else None,
        normals=q.equations[:, :-1],
        offsets=-q.equations[:, -1],
    )


def _match_rows(selected: np.ndarray, pool: np.ndarray) -> list:
    index = {}
    for i, row in enumerate(map(tuple, pool)):
        index.setdefault(row, i)
    return [index[tuple(row)] for row in selected]


def _hull_degenerate(pts: np.ndarray, d: int) -> ConvexBody:
    base = pts.mean(axis=0)
    centered = pts - base
    _, sv, vt = np.linalg.svd(centered, full_matrices=False)
    scale = max(1.0, float(sv.max(initial=0.0)))
    rank = int(np.sum(sv > 1e-9 * scale))
    if rank == 0:
        return ConvexBody(dim=d, vertices=pts[:1].copy(), degenerate=True)
    basis = vt[:rank].T
    flat = centered @ basis
    if rank == 1:
        idx = [int(np.argmin(flat[:, 0])), int(np.argmax(flat[:, 0]))]
        return ConvexBody(dim=d, vertices=pts[idx], degenerate=True)
    if rank == 2:
        loop2 = _chain(flat)
        # map the in-plane hull back to the original points so vertices stay
        # an exact subset of the input
        verts = pts[_match_rows(loop2, flat)]
        return ConvexBody(
            dim=d,
            vertices=verts,
            planar_area=_polygon_area(loop2) if len(loop2) > 2 else 0.0,
            degenerate=True,
        )
    sub = convex_hull(flat, validate=False)
    return ConvexBody(
        dim=d, vertices=pts[_match_rows(sub.vertices, flat)], degenerate=True
    )


def support(body: ConvexBody, u) -> float:
    """Support function h(u) = max over vertices of u . v, for unit u."""
    u = np.asarray(u, dtype=float)
    if abs(np.linalg.norm(u) - 1.0) > 1e-12:
        raise ValueError("direction must be a unit vector")
    return body.support(u)


def hausdorff_support(a: ConvexBody, b: ConvexBody, directions: int = 4096) -> float:
    """Support-function form of the Hausdorff distance between convex bodies.

    In the plane the coarse angle scan is followed by bracket refinement
    around the leading local maxima (the sup often sits on a kink of the
    support difference, where a plain grid is only first-order accurate);
    the refined value is good to ~1e-8.  For d >= 3 it is the plain
    quasi-random grid maximum.
    """
    if a.dim != b.dim:
        raise ValueError("bodies must have equal dimension")
    dirs = sphere_directions(a.dim, directions)
    gaps = np.abs(a.support_many(dirs) - b.support_many(dirs))
    if a.dim != 2:
        return float(gaps.max())

    def gap_at(theta):
        u = np.column_stack([np.cos(theta), np.sin(theta)])
        return np.abs(a.support_many(u) - b.support_many(u))

    m = directions
    best = float(gaps.max())
    order = np.argsort(gaps)[-5:]
    width = 2.0 * np.pi / m
    for idx in order:
        theta0 = 2.0 * np.pi * idx / m
        lo, hi = theta0 - width, theta0 + width
        for _ in range(5):
            grid = np.linspace(lo, hi, 65)
            vals = gap_at(grid)
            k = int(np.argmax(vals))
            best = max(best, float(vals[k]))
            lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, 64)]
    return best


def diameter(points) -> float:
    """Largest pairwise distance in a point set, exact."""
    pts = _as_points(points)
    if len(pts) == 0:
        raise ValueError("empty point set")
    if len(pts) > 64 and pts.shape[1] <= 3:
        pts = convex_hull(pts, validate=False).vertices
    best = 0.0
    block = 512
    for i in range(0, len(pts), block):
        chunk = pts[i : i + block]
        diff = chunk[:, None, :] - pts[None, :, :]
        best = max(best, float(np.sqrt((diff**2).sum(axis=2)).max()))
    return best


_SPHERE_CACHE: dict = {}


def sphere_directions(dim: int, m: int) -> np.ndarray:
    """Deterministic, seed-independent unit directions for quadrature."""
    key = (dim, m)
    if key in _SPHERE_CACHE:
        return _SPHERE_CACHE[key]
    if dim == 1:
        dirs = np.array([[1.0], [-1.0]])
    elif dim == 2:
        theta = 2.0 * np.pi * np.arange(m) / m
        dirs = np.column_stack([np.cos(theta), np.sin(theta)])
    elif dim == 3:
        # Fibonacci spiral on the sphere.
        golden = (1.0 + math.sqrt(5.0)) / 2.0
        k = np.arange(m)
        z = 1.0 - (2.0 * k + 1.0) / m
        r = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
        phi = 2.0 * np.pi * k / golden
        dirs = np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
    else:
        rng = replica_stream(0x5D1E7, dim)
        z = rng.standard_normal((m, dim))
        dirs = z / np.linalg.norm(z, axis=1, keepdims=True)
    dirs.setflags(write=False)
    _SPHERE_CACHE[key] = dirs
    return dirs


def sphere_area(dim: int) -> float:
    """Surface measure of the unit sphere S^{d-1} in R^d."""
    return 2.0 * math.pi ** (dim / 2.0) / math.gamma(dim / 2.0)


def unit_ball_volume(dim: int) -> float:
    return math.pi ** (dim / 2.0) / math.gamma(dim / 2.0 + 1.0)


def mean_width(body: ConvexBody, directions: int = 4096) -> float:
    """Sphere integral of the support function (un-normalized convention).

    This is the plain integral over S^{d-1}, not the conventional
    normalized mean width; in d = 2 it equals the perimeter.  d = 2 uses
    the trapezoid rule on a uniform angle grid (deterministic, O(m^-2));
    d >= 3 uses deterministic quasi-random sphere points times the sphere
    area, with the standard error available from mean_width_stderr.
    """
    if directions < 1:
        raise ValueError("direction count must be >= 1")
    d = body.dim
    if d == 1:
        return body.support(np.array([1.0])) + body.support(np.array([-1.0]))
    dirs = sphere_directions(d, directions)
    h = body.support_many(dirs)
    if d == 2:
        return float(h.mean() * 2.0 * np.pi)
    return float(h.mean() * sphere_area(d))


def mean_width_stderr(body: ConvexBody, directions: int = 4096) -> float:
    """Quadrature standard error of mean_width (0 for the exact d <= 2 path)."""
    if body.dim <= 2:
        return 0.0
    dirs = sphere_directions(body.dim, directions)
    h = body.support_many(dirs)
    return float(h.std(ddof=1) / math.sqrt(len(h)) * sphere_area(body.dim))


def _perimeter(loop: np.ndarray) -> float:
    nxt = np.roll(loop, -1, axis=0)
    return float(np.linalg.norm(nxt - loop, axis=1).sum())


def surface_area(body: ConvexBody, directions: int = 4096) -> float:
    """Boundary measure: perimeter (d=2), facet-area sum (d=3), Cauchy MC above.

    A flat body returns twice its lower-dimensional boundary measure (both
    sides of the degenerate surface): a segment of length L in the plane
    gives 2L, a flat polygon in d = 3 twice its area.
    """
    d = body.dim
    if d == 1:
        return 2.0
    if d == 2:
        if len(body.vertices) == 1:
            return 0.0
        return _perimeter(body.loop)
    if d == 3:
        if body.degenerate:
            if body.planar_area is not None:
                return 2.0 * body.planar_area
            if len(body.vertices) == 2:
                return 2.0 * float(np.linalg.norm(body.vertices[1] - body.vertices[0]))
            return 0.0
        a, b, c = body.faces[:, 0], body.faces[:, 1], body.faces[:, 2]
        cross = np.cross(b - a, c - a)
        return float(0.5 * np.linalg.norm(cross, axis=1).sum())
    # Cauchy's formula: average projected (d-1)-volume over directions.
    dirs = sphere_directions(d, directions)
    proj_vols = np.empty(len(dirs))
    for i, u in enumerate(dirs):
        basis = _orth_complement(u)
        sub = convex_hull(body.vertices @ basis, validate=False)
        proj_vols[i] = volume(sub) if sub.dim <= 3 else volume_mc(sub)[0]
    return float(proj_vols.mean() * sphere_area(d) / unit_ball_volume(d - 1))


def _orth_complement(u: np.ndarray) -> np.ndarray:
    d = len(u)
    # left singular vectors of the rank-(d-1) projector span u-perp exactly
    w, _, _ = np.linalg.svd(np.eye(d) - np.outer(u, u))
    return w[:, : d - 1]


def volume(body: ConvexBody) -> float:
    """Exact d-dimensional volume for d <= 3 (0 for degenerate bodies)."""
    d = body.dim
    if d == 1:
        return float(body.vertices.max() - body.vertices.min())
    if body.degenerate:
        return 0.0
    if d == 2:
        return _polygon_area(body.loop)
    if d == 3:
        centroid = body.vertices.mean(axis=0)
        a = body.faces[:, 0] - centroid
        b = body.faces[:, 1] - centroid
        c = body.faces[:, 2] - centroid
        return float(np.abs(np.einsum("ij,ij->i", a, np.cross(b, c))).sum() / 6.0)
    raise ValueError("exact volume is limited to d <= 3; use volume_mc")


def volume_mc(body: ConvexBody, samples: int = 1 << 16, seed: int = 0):
    """Hit-or-miss volume estimate inside the bounding box: (value, stderr)."""
    lo = body.vertices.min(axis=0)
    hi = body.vertices.max(axis=0)
    box = float(np.prod(hi - lo))
    if box == 0.0:
        return 0.0, 0.0
    rng = replica_stream(seed, 0)
    pts = lo + rng.random((samples, body.dim)) * (hi - lo)
    hits = body.contains(pts) if body.normals is not None else _hits_linprog(body, pts)
    p = float(hits.mean())
    se = box * math.sqrt(max(p * (1.0 - p), 0.0) / samples)
    return box * p, se


def _hits_linprog(body: ConvexBody, pts: np.ndarray) -> np.ndarray:
    from scipy.optimize import linprog

    verts = body.vertices
    k = len(verts)
    out = np.zeros(len(pts), dtype=bool)
    a_eq = np.vstack([verts.T, np.ones(k)])
    for i, x in enumerate(pts):
        res = linprog(
            np.zeros(k),
            A_eq=a_eq,
            b_eq=np.concatenate([x, [1.0]]),
            bounds=(0, None),
            method="highs",
        )
        out[i] = res.status == 0
    return out


def steiner_neighborhood_volume(body: ConvexBody, eps: float) -> float:
    """Exact area of the eps-neighborhood of a planar convex body.

    Steiner expansion V + S*eps + pi*eps^2; valid for degenerate bodies via
    the doubled-boundary convention (a segment yields the stadium area).
    """
    if body.dim != 2:
        raise ValueError("Steiner neighborhood volume implemented for d = 2")
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    return volume(body) + surface_area(body) * eps + math.pi * eps * eps


def drift_basis(mu, dim: int | None = None) -> np.ndarray:
    """Deterministic orthonormal basis with first column the drift direction.

    Gram-Schmidt over the standard basis, skipping the axis most aligned
    with mu so the remaining vectors stay well conditioned.
    """
    mu = np.atleast_1d(np.asarray(mu, dtype=float))
    if dim is not None and mu.size != dim:
        raise ValueError("drift vector has the wrong dimension")
    norm = np.linalg.norm(mu)
    if norm == 0.0:
        raise ValueError("drift vector must be nonzero")
    d = mu.size
    u1 = mu / norm
    cols = [u1]
    skip = int(np.argmax(np.abs(u1)))
    for i in range(d):
        if i == skip:
            continue
        w = np.zeros(d)
        w[i] = 1.0
        for c in cols:
            w = w - (w @ c) * c
        w_norm = np.linalg.norm(w)
        if w_norm < 1e-12:
            continue
        cols.append(w / w_norm)
    basis = np.column_stack(cols)
    basis.setflags(write=False)
    return basis


def drift_map(x, n: int, mu) -> np.ndarray:
    """Drift-frame rescaling: along-drift part / (n|mu|), the rest / sqrt(n)."""
    mu = np.atleast_1d(np.asarray(mu, dtype=float))
    basis = drift_basis(mu)
    comp = np.asarray(x, dtype=float) @ basis
    scale = np.full(mu.size, 1.0 / math.sqrt(n))
    scale[0] = 1.0 / (n * np.linalg.norm(mu))
    return comp * scale
