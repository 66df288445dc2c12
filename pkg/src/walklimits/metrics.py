"""Metrics and functionals on piecewise paths.

rho_inf                     supremum metric, exact for piecewise inputs
rho_skorokhod               time-change metric, exact on step pairs
rho_skorokhod_circ          chord-slope variant on the same candidates
lambda_circ_norm, c_lambda  norms of a time change
modulus_w, modulus_w_prime  moduli of continuity
max_functional, occupation  path functionals

The exact Skorokhod value on step functions is found by a dynamic program
over the monotone staircase of co-occupied piece pairs; see
docs/skorokhod_search.md for why that search class attains the infimum.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .trajectory import CONSTANT, LINEAR, Trajectory, _frozen

EXACT = "exact"
UPPER_BOUND = "upper-bound"


@dataclass(frozen=True)
class TimeChange:
    """A strictly increasing piecewise-linear bijection of [0, 1]."""

    times: np.ndarray
    images: np.ndarray

    def __init__(self, times, images):
        times = _frozen(times)
        images = _frozen(images)
        if times.ndim != 1 or times.shape != images.shape or len(times) < 2:
            raise ValueError("times and images must be matching 1-d arrays")
        if times[0] != 0.0 or times[-1] != 1.0 or images[0] != 0.0 or images[-1] != 1.0:
            raise ValueError("a time change must map 0 to 0 and 1 to 1")
        if np.any(np.diff(times) <= 0) or np.any(np.diff(images) <= 0):
            raise ValueError("a time change must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "images", images)

    def __call__(self, t):
        return np.interp(t, self.times, self.images)

    def inverse(self) -> "TimeChange":
        return TimeChange(self.images, self.times)

    def sup_deviation(self) -> float:
        """sup over t of |lambda(t) - t| (attained at a breakpoint)."""
        return float(np.max(np.abs(self.images - self.times)))


def identity_time_change() -> TimeChange:
    return TimeChange([0.0, 1.0], [0.0, 1.0])


@dataclass(frozen=True)
class MetricResult:
    """A metric value with an optional witnessing time change."""

    value: float
    witness: TimeChange | None
    mode: str


def lambda_circ_norm(lam: TimeChange) -> float:
    """sup over s < t of |log of the chord slope between s and t|.

    Chord slopes of a piecewise-linear bijection are convex combinations of
    its segment slopes, so the supremum is the max |log| over segments.
    """
    slopes = np.diff(lam.images) / np.diff(lam.times)
    return float(np.max(np.abs(np.log(slopes))))


def c_lambda(lam: TimeChange) -> float:
    """max(e^norm - 1, 1 - e^-norm); bounds |lambda(t) - t| <= t * c(lambda)."""
    x = lambda_circ_norm(lam)
    return max(math.exp(x) - 1.0, 1.0 - math.exp(-x))


def _check_pair(f: Trajectory, g: Trajectory, same_kind: bool = False) -> None:
    if f.dim != g.dim:
        raise ValueError("trajectories must have equal dimension")
    if same_kind and f.kind != g.kind:
        raise ValueError("trajectories must be of the same kind")


def rho_inf(f: Trajectory, g: Trajectory) -> float:
    """Supremum distance, exact for piecewise inputs.

    The difference is piecewise linear (or constant) between merged
    breakpoints and the Euclidean norm is convex, so the supremum is
    attained at a breakpoint or a one-sided limit at one.
    """
    _check_pair(f, g)
    ts = np.union1d(f.times, g.times)
    right = np.linalg.norm(f(ts) - g(ts), axis=1)
    left = np.linalg.norm(f.left_limit(ts[1:]) - g.left_limit(ts[1:]), axis=1)
    return float(max(right.max(), left.max() if len(left) else 0.0))


def _step_pieces(f: Trajectory):
    """Jump times and piece values of a step trajectory, duplicates merged."""
    t, v = f.times, f.values
    jumps, vals = [], [v[0]]
    for i in range(1, len(t)):
        if not np.array_equal(v[i], v[i - 1]):
            jumps.append(float(t[i]))
            vals.append(v[i])
    return np.asarray(jumps), np.asarray(vals)


def _staircase_dp(u, a, v, b):
    """Exact Skorokhod distance between step functions via the staircase DP.

    Cell (i, j) is occupied when f sits in piece i while g s lambda sits in
    piece j; a path of right/up/diagonal moves from (0,0) to (p,q) fixes
    which cells get co-occupied, a diagonal move being a jump of f mapped
    exactly onto a jump of g.  The cost of a path is the max of the cell
    mismatches and of the time displacements needed to realize each move;
    minimizing over paths gives the infimum over all time changes.
    """
    p, q = len(u), len(v)
    mism = np.linalg.norm(a[:, None, :] - b[None, :, :], axis=2)
    uu = np.concatenate([[0.0], u, [1.0]])
    vv = np.concatenate([[0.0], v, [1.0]])
    inf = math.inf

    def disp_right(i, j):  # f jumps at u_i while g stays in piece j
        t = u[i - 1]
        if t == 1.0:
            return 0.0 if j == q else inf
        if vv[j] == 1.0:  # zero-width final piece of g is only reachable at t = 1
            return inf
        return max(0.0, vv[j] - t, t - vv[j + 1])

    def disp_up(i, j):  # lambda crosses v_j while f stays in piece i
        x = v[j - 1]
        if x == 1.0:
            return 0.0 if i == p else inf
        if uu[i] == 1.0:  # zero-width final piece of f exists only at t = 1
            return inf
        return max(0.0, uu[i] - x, x - uu[i + 1])

    def disp_diag(i, j):  # simultaneous jumps: lambda(u_i) = v_j
        t, x = u[i - 1], v[j - 1]
        if (t == 1.0) != (x == 1.0):
            return inf
        return abs(t - x)

    cost = np.full((p + 1, q + 1), inf)
    move = np.zeros((p + 1, q + 1), dtype=np.int8)
    cost[0, 0] = mism[0, 0]
    for i in range(p + 1):
        for j in range(q + 1):
            if i == 0 and j == 0:
                continue
            best, how = inf, 0
            if i > 0:
                c = max(cost[i - 1, j], disp_right(i, j))
                if c < best:
                    best, how = c, 1
            if j > 0:
                c = max(cost[i, j - 1], disp_up(i, j))
                if c < best:
                    best, how = c, 2
            if i > 0 and j > 0:
                c = max(cost[i - 1, j - 1], disp_diag(i, j))
                if c < best:
                    best, how = c, 3
            cost[i, j] = max(best, mism[i, j])
            move[i, j] = how
    return float(cost[p, q]), move


def _witness_from_moves(u, v, move) -> TimeChange | None:
    """Reconstruct a near-optimal time change from the DP path.

    Matched jumps anchor exact nodes; unmatched crossings are clamped just
    inside their target interval, so the witness objective can exceed the
    exact value by at most the clamping margin.
    """
    p, q = len(u), len(v)
    uu = np.concatenate([[0.0], u, [1.0]])
    vv = np.concatenate([[0.0], v, [1.0]])
    nodes = []
    i, j = p, q
    while i > 0 or j > 0:
        how = move[i, j]
        if how == 1:
            lo, hi = vv[j], vv[j + 1]
            gap = min(1e-9, (hi - lo) / 4.0)
            nodes.append((u[i - 1], min(max(u[i - 1], lo + gap), hi - gap)))
            i -= 1
        elif how == 2:
            lo, hi = uu[i], uu[i + 1]
            gap = min(1e-9, (hi - lo) / 4.0)
            nodes.append((min(max(v[j - 1], lo + gap), hi - gap), v[j - 1]))
            j -= 1
        else:
            nodes.append((u[i - 1], v[j - 1]))
            i -= 1
            j -= 1
    nodes.reverse()
    ts, xs = [0.0], [0.0]
    for t, x in nodes:
        if t <= ts[-1] or x <= xs[-1] or t >= 1.0 or x >= 1.0:
            continue
        ts.append(float(t))
        xs.append(float(x))
    ts.append(1.0)
    xs.append(1.0)
    try:
        return TimeChange(ts, xs)
    except ValueError:
        return None


def rho_skorokhod(f: Trajectory, g: Trajectory, j_max: int = 64) -> MetricResult:
    """Skorokhod distance inf over time changes of max(|lambda - I|, |f - g o lambda|).

    Exact for piecewise-constant pairs with at most j_max jumps per side;
    otherwise an upper bound (the identity time change is always a
    candidate, so the bound never exceeds rho_inf).
    """
    _check_pair(f, g, same_kind=True)
    if f.kind == LINEAR:
        return MetricResult(rho_inf(f, g), identity_time_change(), UPPER_BOUND)
    u, a = _step_pieces(f)
    v, b = _step_pieces(g)
    if len(u) > j_max or len(v) > j_max:
        return MetricResult(rho_inf(f, g), identity_time_change(), UPPER_BOUND)
    value, move = _staircase_dp(u, a, v, b)
    return MetricResult(value, _witness_from_moves(u, v, move), EXACT)


def _sup_diff_under(u, a, v, b, lam: TimeChange) -> float:
    """sup over t of |f(t) - g(lambda(t))| for step pieces under a fixed lambda."""
    inv = lam.inverse()
    w = np.asarray(inv(v)) if len(v) else np.asarray([])
    events = [(t, 0) for t in u] + [(float(t), 1) for t in w]
    events.sort()
    i = j = 0
    best = float(np.linalg.norm(a[0] - b[0]))
    k = 0
    while k < len(events):
        t = events[k][0]
        while k < len(events) and events[k][0] == t:
            if events[k][1] == 0:
                i += 1
            else:
                j += 1
            k += 1
        best = max(best, float(np.linalg.norm(a[i] - b[j])))
    return best


def _matching_count(p: int, q: int) -> int:
    return math.comb(p + q, p)


def rho_skorokhod_circ(
    f: Trajectory,
    g: Trajectory,
    j_max: int = 64,
    budget: int = 200_000,
) -> MetricResult:
    """Variant minimizing max(chord-slope log norm, |f - g o lambda|).

    Exact mode enumerates piecewise-linear time changes whose breakpoints
    match jumps of f monotonically onto jumps of g; the enumeration is
    capped at j_max jumps per side and `budget` matchings, beyond which an
    upper bound is returned (best of the identity and the rho_skorokhod
    witness re-scored under this objective).
    """
    _check_pair(f, g, same_kind=True)
    if f.kind == LINEAR:
        return MetricResult(rho_inf(f, g), identity_time_change(), UPPER_BOUND)
    u, a = _step_pieces(f)
    v, b = _step_pieces(g)
    p, q = len(u), len(v)
    if p > j_max or q > j_max or _matching_count(p, q) > budget:
        ident = identity_time_change()
        best, wit = rho_inf(f, g), ident
        alt = rho_skorokhod(f, g, j_max=j_max).witness
        if alt is not None:
            obj = max(lambda_circ_norm(alt), _sup_diff_under(u, a, v, b, alt))
            if obj < best:
                best, wit = obj, alt
        return MetricResult(best, wit, UPPER_BOUND)
    best, wit = math.inf, None
    for k in range(0, min(p, q) + 1):
        for fi in itertools.combinations(range(p), k):
            for gj in itertools.combinations(range(q), k):
                ts, xs = [0.0], [0.0]
                ok = True
                for ii, jj in zip(fi, gj):
                    t, x = u[ii], v[jj]
                    if (t == 1.0) != (x == 1.0):
                        ok = False
                        break
                    if t < 1.0:
                        ts.append(t)
                        xs.append(x)
                if not ok:
                    continue
                ts.append(1.0)
                xs.append(1.0)
                lam = TimeChange(ts, xs)
                obj = max(lambda_circ_norm(lam), _sup_diff_under(u, a, v, b, lam))
                if obj < best:
                    best, wit = obj, lam
    return MetricResult(best, wit, EXACT)


def max_functional(f: Trajectory) -> float:
    """sup of a one-dimensional trajectory; exact at breakpoints."""
    if f.dim != 1:
        raise ValueError("the maximum functional is one-dimensional")
    return float(f.values[:, 0].max())


def modulus_w(f: Trajectory, delta: float) -> float:
    """Modulus of continuity sup over |s - t| <= delta of |f(s) - f(t)|.

    Computed as the closure supremum (the strict-inequality version has the
    same value for the limits used downstream).
    """
    if not 0.0 < delta <= 1.0:
        raise ValueError("delta must lie in (0, 1]")
    if f.kind == CONSTANT:
        starts, ends, vals = _piece_intervals(f)
        best = 0.0
        for i in range(len(vals)):
            for j in range(i + 1, len(vals)):
                if starts[j] - ends[i] <= delta:
                    best = max(best, float(np.linalg.norm(vals[i] - vals[j])))
        return best
    cand = np.concatenate([f.times, f.times - delta, f.times + delta])
    cand = np.unique(np.clip(cand, 0.0, 1.0))
    vals = f(cand)
    best = 0.0
    for i in range(len(cand)):
        close = np.abs(cand - cand[i]) <= delta + 1e-15
        if np.any(close):
            best = max(best, float(np.linalg.norm(vals[close] - vals[i], axis=1).max()))
    return best


def _piece_intervals(f: Trajectory):
    """Half-open constant pieces (start, end, value); the endpoint value of a
    jump at t = 1 appears as a zero-length final piece."""
    u, a = _step_pieces(f)
    bounds = np.concatenate([[0.0], u, [1.0]])
    return bounds[:-1], bounds[1:], a


def modulus_w_prime(f: Trajectory, delta: float) -> float:
    """Cadlag modulus: min over delta-sparse partitions of the max cell oscillation.

    Cells are half-open, so a partition point sitting on a jump isolates it.
    Dynamic program over candidate breakpoints: the jump times, the
    endpoints, gap midpoints and jump +- delta (jump times alone can miss
    the optimum when sparsity forces off-jump cuts).
    """
    if f.kind != CONSTANT:
        raise ValueError("the cadlag modulus applies to piecewise-constant paths")
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    starts, ends, vals = _piece_intervals(f)
    jumps = [float(t) for t in starts[1:] if t < 1.0]
    cand = {0.0, 1.0}
    cand.update(jumps)
    edges = [0.0] + jumps + [1.0]
    for a, b in zip(edges[:-1], edges[1:]):
        cand.add((a + b) / 2.0)
    for t in jumps:
        for s in (t - delta, t + delta):
            if 0.0 < s < 1.0:
                cand.add(s)
    cand = sorted(cand)
    m = len(cand)

    norms = np.linalg.norm(vals[:, None, :] - vals[None, :, :], axis=2)

    def osc(lo: float, hi: float) -> float:
        live = (starts < hi) & (ends > lo)
        idx = np.flatnonzero(live)
        if len(idx) <= 1:
            return 0.0
        return float(norms[np.ix_(idx, idx)].max())

    best = [math.inf] * m
    best[0] = 0.0
    for i in range(1, m):
        for j in range(i):
            if cand[i] - cand[j] > delta and best[j] < math.inf:
                c = max(best[j], osc(cand[j], cand[i]))
                if c < best[i]:
                    best[i] = c
    return best[m - 1]


class FullSphere:
    """The whole unit sphere (zero vectors still excluded)."""

    def contains(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(points)
        return np.linalg.norm(pts, axis=1) > 0.0


@dataclass(frozen=True)
class HalfspaceCap:
    """Directions x with x-hat . axis >= offset; the zero vector is excluded."""

    axis: np.ndarray
    offset: float = 0.0

    def __init__(self, axis, offset: float = 0.0):
        axis = np.atleast_1d(np.asarray(axis, dtype=float))
        norm = np.linalg.norm(axis)
        if norm == 0.0:
            raise ValueError("cap axis must be nonzero")
        axis = axis / norm
        axis.setflags(write=False)
        object.__setattr__(self, "axis", axis)
        object.__setattr__(self, "offset", float(offset))

    def contains(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(points)
        norms = np.linalg.norm(pts, axis=1)
        with np.errstate(invalid="ignore", divide="ignore"):
            proj = (pts @ self.axis) / norms
        return (norms > 0.0) & (proj >= self.offset)


@dataclass(frozen=True)
class SphereRect:
    """Axis-aligned bounds on the components of the direction vector."""

    lo: np.ndarray
    hi: np.ndarray

    def __init__(self, lo, hi):
        lo = _frozen(np.atleast_1d(lo))
        hi = _frozen(np.atleast_1d(hi))
        if lo.shape != hi.shape:
            raise ValueError("bounds must have matching shape")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def contains(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(points)
        norms = np.linalg.norm(pts, axis=1)
        safe = np.where(norms > 0.0, norms, 1.0)[:, None]
        unit = pts / safe
        ok = np.all((unit >= self.lo) & (unit <= self.hi), axis=1)
        return (norms > 0.0) & ok


def positive_halfline() -> HalfspaceCap:
    """The d = 1 region of strictly positive values."""
    return HalfspaceCap(np.array([1.0]), 0.0)


def occupation(f: Trajectory, region) -> float:
    """Lebesgue measure of the times whose direction vector lies in the region.

    Exact for piecewise-constant paths; piecewise-linear pieces are cut at
    the roots of the region's boundary functions (bracketed and refined to
    ~1e-12, well inside the 1e-6 contract).
    """
    if not hasattr(region, "contains"):
        raise ValueError("unsupported region specification")
    if f.kind == CONSTANT:
        if len(f.times) == 1:
            return 1.0 if bool(region.contains(f.values[:1])[0]) else 0.0
        lengths = np.diff(f.times)
        member = region.contains(f.values[:-1])
        return float(lengths[member].sum())
    total = 0.0
    for i in range(len(f.times) - 1):
        total += _linear_piece_measure(
            f.values[i], f.values[i + 1], float(f.times[i]), float(f.times[i + 1]), region
        )
    return total


def _region_boundaries(region, p0, p1):
    """Scalar functions whose sign changes can toggle region membership."""
    seg = p1 - p0

    def path(s):
        return p0 + s * seg

    funcs = []
    if isinstance(region, HalfspaceCap):
        ax, c = region.axis, region.offset

        def cap(s):
            x = path(s)
            return float(x @ ax - c * np.linalg.norm(x))

        funcs.append(cap)
    elif isinstance(region, SphereRect):
        for k in range(len(p0)):
            for bound, sign in ((region.lo[k], 1.0), (region.hi[k], -1.0)):
                def rect(s, k=k, bound=bound, sign=sign):
                    x = path(s)
                    return float(sign * (x[k] - bound * np.linalg.norm(x)))

                funcs.append(rect)

    def norm_f(s):
        return float(np.linalg.norm(path(s)))

    funcs.append(norm_f)
    return funcs


def _linear_piece_measure(p0, p1, t0, t1, region) -> float:
    if np.array_equal(p0, p1):
        inside = bool(region.contains(p0[None, :])[0])
        return (t1 - t0) if inside else 0.0
    cuts = {0.0, 1.0}
    grid = np.linspace(0.0, 1.0, 65)
    for fun in _region_boundaries(region, p0, p1):
        vals = np.array([fun(s) for s in grid])
        for k in range(len(grid) - 1):
            lo, hi = vals[k], vals[k + 1]
            if lo == 0.0:
                cuts.add(float(grid[k]))
            if lo * hi < 0.0:
                cuts.add(float(brentq(fun, grid[k], grid[k + 1], xtol=1e-13)))
    cuts = sorted(cuts)
    seg = np.asarray(p1) - np.asarray(p0)
    total = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        mid = p0 + 0.5 * (a + b) * seg
        if bool(region.contains(mid[None, :])[0]):
            total += (b - a) * (t1 - t0)
    return total
