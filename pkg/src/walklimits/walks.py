"""Random walks, their rescaled trajectories and centre-of-mass series."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .laws import CovSpec, sqrt_psd
from .rng import replica_stream
from .trajectory import LINEAR, Trajectory, _frozen

LAW_KINDS = (
    "rademacher",
    "gaussian",
    "uniform-cube",
    "deterministic",
    "lattice-simple-symmetric",
)


@dataclass(frozen=True)
class IncrementLaw:
    """A step distribution with exactly known mean vector and covariance.

    The closed enumeration (no user plug-ins) keeps the exact mu and Sigma
    visible to every test and reference-law computation.
    """

    kind: str
    dim: int
    mu: np.ndarray
    sigma: np.ndarray
    _root: np.ndarray = field(repr=False, default=None)

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """Draw n increments as an (n, dim) array."""
        d = self.dim
        if self.kind == "rademacher":
            return (rng.integers(0, 2, size=(n, d)) * 2 - 1).astype(float)
        if self.kind == "gaussian":
            z = rng.standard_normal((n, d))
            return self.mu + z @ self._root
        if self.kind == "uniform-cube":
            return self.mu + rng.random((n, d)) - 0.5
        if self.kind == "deterministic":
            return np.tile(self.mu, (n, 1))
        if self.kind == "lattice-simple-symmetric":
            moves = rng.integers(0, 2 * d, size=n)
            out = np.zeros((n, d))
            out[np.arange(n), moves // 2] = np.where(moves % 2 == 0, 1.0, -1.0)
            return out
        raise ValueError(f"unknown increment law kind: {self.kind!r}")


def _vec(mu, dim) -> np.ndarray:
    mu = np.atleast_1d(np.asarray(mu, dtype=float))
    if dim is not None and mu.size != dim:
        raise ValueError(f"mean vector has dimension {mu.size}, expected {dim}")
    return _frozen(mu)


def rademacher(dim: int = 1) -> IncrementLaw:
    """Independent +-1 coordinates; mean 0, covariance identity."""
    return IncrementLaw("rademacher", dim, _frozen(np.zeros(dim)), _frozen(np.eye(dim)))


def gaussian(mu, sigma) -> IncrementLaw:
    """Normal increments with the given mean and covariance."""
    mu = _vec(mu, None)
    spec = sqrt_psd(sigma)
    if spec.dim != mu.size:
        raise ValueError("mean and covariance dimensions do not match")
    return IncrementLaw("gaussian", mu.size, mu, spec.matrix, _root=spec.root)


def uniform_cube(mu) -> IncrementLaw:
    """Uniform on the unit cube centred at mu; covariance identity / 12."""
    mu = _vec(mu, None)
    d = mu.size
    return IncrementLaw("uniform-cube", d, mu, _frozen(np.eye(d) / 12.0))


def deterministic(mu) -> IncrementLaw:
    """Every step equals mu exactly; covariance 0."""
    mu = _vec(mu, None)
    d = mu.size
    return IncrementLaw("deterministic", d, mu, _frozen(np.zeros((d, d))))


def lattice(dim: int = 1) -> IncrementLaw:
    """Simple symmetric lattice steps +-e_i; mean 0, covariance identity / d."""
    return IncrementLaw(
        "lattice-simple-symmetric",
        dim,
        _frozen(np.zeros(dim)),
        _frozen(np.eye(dim) / dim),
    )


@dataclass(frozen=True)
class Walk:
    """Increments and prefix sums of one walk; immutable after construction."""

    dim: int
    increments: np.ndarray
    sums: np.ndarray

    @property
    def n(self) -> int:
        return len(self.increments)


def _walk_from_increments(increments: np.ndarray) -> Walk:
    inc = np.asarray(increments, dtype=float)
    d = inc.shape[1]
    sums = np.vstack([np.zeros(d), np.cumsum(inc, axis=0)])
    return Walk(dim=d, increments=_frozen(inc), sums=_frozen(sums))


def sample_walk(law: IncrementLaw, n: int, seed: int, replica: int = 0) -> Walk:
    """Sample a walk of n steps; identical (law, n, seed, replica) reproduce it."""
    if n < 1:
        raise ValueError("walk length n must be >= 1")
    inc = law.sample(n, replica_stream(seed, replica))
    return _walk_from_increments(inc)


def lln_trajectory(walk: Walk, kind: str) -> Trajectory:
    """Law-of-large-numbers scaling: values S_k / n at breakpoints k / n."""
    n = walk.n
    times = np.arange(n + 1) / n
    times[-1] = 1.0
    return Trajectory(kind, times, walk.sums / n)


def clt_trajectory(walk: Walk, kind: str, mu) -> Trajectory:
    """Central-limit scaling of the centred walk: (S_k - k mu) / sqrt(n)."""
    n = walk.n
    mu = np.atleast_1d(np.asarray(mu, dtype=float))
    times = np.arange(n + 1) / n
    times[-1] = 1.0
    centered = walk.sums - np.outer(np.arange(n + 1), mu)
    return Trajectory(kind, times, centered / np.sqrt(n))


@dataclass(frozen=True)
class ComSeries:
    """Running averages G_k = (S_1 + ... + S_k) / k with G_0 = 0."""

    values: np.ndarray


def centre_of_mass(walk: Walk) -> ComSeries:
    n = walk.n
    csum = np.cumsum(walk.sums[1:], axis=0)
    g = csum / np.arange(1, n + 1)[:, None]
    return ComSeries(values=_frozen(np.vstack([np.zeros(walk.dim), g])))


def centre_of_mass_weighted(walk: Walk) -> np.ndarray:
    """G_n as the triangular weighted sum of increments, sum_i ((n-i+1)/n) xi_i."""
    n = walk.n
    weights = (n - np.arange(1, n + 1) + 1) / n
    return weights @ walk.increments


def sample_brownian(cov: CovSpec, grid, seed: int, replica: int = 0) -> Trajectory:
    """Brownian sample on a grid: independent N(0, dt * Sigma) increments.

    The grid must be strictly increasing from 0 to 1 (a Trajectory spans
    [0, 1]); the value at 0 is 0.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) < 2:
        raise ValueError("grid must have at least two points")
    if grid[0] != 0.0 or grid[-1] != 1.0 or np.any(np.diff(grid) <= 0):
        raise ValueError("grid must increase strictly from 0 to 1")
    d = cov.dim
    dt = np.diff(grid)
    z = replica_stream(seed, replica).standard_normal((len(grid) - 1, d))
    steps = np.sqrt(dt)[:, None] * (z @ cov.root)
    values = np.vstack([np.zeros(d), np.cumsum(steps, axis=0)])
    return Trajectory(LINEAR, grid, values)


def sample_tilde_bd(cov_perp: CovSpec, grid, seed: int, replica: int = 0) -> Trajectory:
    """Time-space path (t, b_{d-1}(t)): first coordinate is exactly t."""
    if cov_perp.dim < 1:
        raise ValueError("needs ambient dimension >= 2")
    bm = sample_brownian(cov_perp, grid, seed, replica)
    values = np.column_stack([bm.times, bm.values])
    return Trajectory(LINEAR, bm.times, values)
