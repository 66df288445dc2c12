"""Monte Carlo harness: walk ensembles against closed-form or surrogate laws.

Each runner simulates `replicas` independent walks (per-replica derived
streams, so results are schedule-independent), evaluates one functional
per replica, and compares the empirical distribution or moments against
the matching reference law.  Replica loops run in fixed index order and
reductions are ordered, so every report is bit-reproducible from
(config, seed).
"""

from __future__ import annotations

import csv
import hashlib
import io
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import geometry, laws, metrics, stats, walks
from .config import ConfigError, ExperimentConfig, manifest_text
from .rng import replica_stream

CSV_HEADER = "name,estimate,stderr,reference,ks,pass,threshold"


@dataclass
class ReportRow:
    name: str
    estimate: float | None = None
    stderr: float | None = None
    reference: float | None = None
    ks: float | None = None
    passed: bool | None = None
    threshold: float | None = None
    note: str = ""


@dataclass
class Report:
    experiment: str
    rows: list
    seed: int
    config_hash: str
    runtime: float
    samples: dict = field(default_factory=dict)

    def csv_text(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(CSV_HEADER.split(","))
        for r in self.rows:
            writer.writerow(
                [
                    r.name,
                    _fmt(r.estimate),
                    _fmt(r.stderr),
                    _fmt(r.reference),
                    _fmt(r.ks),
                    "" if r.passed is None else ("true" if r.passed else "false"),
                    _fmt(r.threshold),
                ]
            )
        return out.getvalue()

    def summary_text(self) -> str:
        lines = [f"experiment: {self.experiment}"]
        lines.append(f"seed: {self.seed}")
        lines.append(f"config-hash: {self.config_hash}")
        lines.append(f"runtime-seconds: {self.runtime:.3f}")
        lines.append("")
        for r in self.rows:
            bits = [f"{r.name}:"]
            if r.estimate is not None:
                bits.append(f"estimate={r.estimate:.6g}")
            if r.stderr is not None:
                bits.append(f"stderr={r.stderr:.3g}")
            if r.reference is not None:
                bits.append(f"reference={r.reference:.6g}")
            if r.ks is not None:
                bits.append(f"ks={r.ks:.4g}")
            if r.threshold is not None:
                bits.append(f"threshold={r.threshold:.4g}")
            if r.passed is not None:
                bits.append("PASS" if r.passed else "FAIL")
            if r.note:
                bits.append(f"({r.note})")
            lines.append("  " + " ".join(bits))
        return "\n".join(lines) + "\n"

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows if r.passed is not None)


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return repr(float(x))


def law_from_config(cfg: ExperimentConfig) -> walks.IncrementLaw:
    d = cfg.dim
    mu = np.asarray(cfg.mu, dtype=float) if cfg.mu else np.zeros(d)
    if cfg.law == "rademacher":
        return walks.rademacher(d)
    if cfg.law == "lattice-simple-symmetric":
        return walks.lattice(d)
    if cfg.law == "uniform-cube":
        return walks.uniform_cube(mu)
    if cfg.law == "deterministic":
        return walks.deterministic(mu)
    if cfg.law == "gaussian":
        sigma = np.asarray(cfg.sigma, dtype=float) if cfg.sigma else np.eye(d)
        return walks.gaussian(mu, sigma)
    raise ConfigError(f"unknown value for law: {cfg.law!r}")


def _batch_ranges(total: int, size: int = 256):
    for lo in range(0, total, size):
        yield lo, min(lo + size, total)


def _sums_batch(law, n: int, seed: int, lo: int, hi: int) -> np.ndarray:
    """Prefix sums (hi-lo, n+1, d) for replicas lo..hi-1, streams by index."""
    out = np.empty((hi - lo, n + 1, law.dim))
    out[:, 0] = 0.0
    for r in range(lo, hi):
        inc = law.sample(n, replica_stream(seed, r))
        np.cumsum(inc, axis=0, out=out[r - lo, 1:])
    return out


def _functional_scale(functional: str, n: int, dim: int) -> float:
    if functional == "volume":
        return float(n) ** (dim / 2.0)
    if functional == "arcsine":
        return 1.0
    return math.sqrt(n)


def _eval_points_functional(functional: str, points: np.ndarray, directions: int) -> float:
    """Functional of a point cloud at native scale."""
    if functional == "max":
        return float(points[:, 0].max())
    if functional == "diameter":
        return geometry.diameter(points)
    body = geometry.convex_hull(points, validate=False)
    if functional == "perimeter":
        return geometry.surface_area(body, directions)
    if functional == "mean-width":
        return geometry.mean_width(body, directions)
    if functional == "volume":
        return geometry.volume(body)
    raise ConfigError(f"unknown value for functional: {functional!r}")


def _walk_samples(cfg: ExperimentConfig, law) -> np.ndarray:
    """One functional value per replica, at the CLT scaling of the config."""
    n, m = cfg.n, cfg.replicas
    scale = _functional_scale(cfg.functional, n, cfg.dim)
    out = np.empty(m)
    region = metrics.HalfspaceCap(np.eye(cfg.dim)[0], 0.0)
    for lo, hi in _batch_ranges(m):
        sums = _sums_batch(law, n, cfg.seed, lo, hi)
        if cfg.functional == "max":
            if cfg.dim != 1:
                raise ConfigError("functional max needs dim = 1")
            out[lo:hi] = sums[:, :, 0].max(axis=1) / scale
        elif cfg.functional == "arcsine":
            pts = sums[:, 1:, :].reshape(-1, cfg.dim)
            member = region.contains(pts).reshape(hi - lo, n)
            out[lo:hi] = member.mean(axis=1)
        elif cfg.functional == "com":
            k = int(math.floor(n * cfg.t))
            if k < 1:
                raise ConfigError("t too small: floor(n*t) must be >= 1")
            csum = np.cumsum(sums[:, 1:, :], axis=1)
            out[lo:hi] = csum[:, k - 1, 0] / k / scale
        else:
            for b in range(hi - lo):
                val = _eval_points_functional(
                    cfg.functional, sums[b], cfg.directions
                )
                out[lo + b] = val / scale
    return out


def _surrogate_samples(cfg: ExperimentConfig, law) -> np.ndarray:
    """Functional values of Brownian-path surrogates at the limit scale.

    Walks and surrogates share the seed but use disjoint replica indices.
    The default grid matches the walk's step count so both sides carry the
    same discretization bias.
    """
    steps = cfg.surrogate_grid or cfg.n
    m2 = cfg.surrogate_replicas or cfg.replicas
    grid = np.linspace(0.0, 1.0, steps + 1)
    cov = laws.sqrt_psd(law.sigma)
    out = np.empty(m2)
    for r in range(m2):
        path = walks.sample_brownian(cov, grid, cfg.seed, replica=cfg.replicas + r)
        out[r] = _eval_points_functional(cfg.functional, path.values, cfg.directions)
    return out


def _closed_form_cdf(cfg: ExperimentConfig, law):
    if cfg.functional == "max":
        sigma = math.sqrt(float(law.sigma[0, 0]))
        if sigma == 0.0:
            return None
        return lambda x: laws.sup_bm_cdf(np.asarray(x) / sigma)
    if cfg.functional == "arcsine":
        return laws.arcsine_cdf
    if cfg.functional == "com":
        var = cfg.t * float(law.sigma[0, 0]) / 3.0
        if var == 0.0 or cfg.dim != 1:
            return None
        sd = math.sqrt(var)
        return lambda x: laws.std_normal_cdf(np.asarray(x) / sd)
    return None


def run_distributional(cfg: ExperimentConfig) -> Report:
    """Empirical CDF of a per-replica functional vs its limit law."""
    law = law_from_config(cfg)
    sample = _walk_samples(cfg, law)
    m = cfg.replicas
    row = ReportRow(
        name=cfg.functional,
        estimate=float(sample.mean()),
        stderr=float(sample.std(ddof=1) / math.sqrt(m)) if m > 1 else None,
    )
    rows = [row]
    samples = {cfg.functional: sample}
    mode = cfg.reference
    cdf = _closed_form_cdf(cfg, law) if mode in ("auto", "closed-form") else None
    if mode == "closed-form" and cdf is None:
        raise ConfigError(
            f"functional {cfg.functional!r} has no closed-form reference; "
            "set reference = surrogate"
        )
    if mode == "auto" and cdf is None:
        mode = "surrogate"
    if cdf is not None and mode in ("auto", "closed-form"):
        if m > 1:
            row.ks = stats.ks_statistic(sample, cdf)
            row.threshold = cfg.threshold or stats.kolmogorov_threshold(m)
            row.passed = row.ks <= row.threshold
        else:
            row.note = "ks undefined for a single replica"
    elif mode == "surrogate":
        if cfg.functional in ("arcsine", "com"):
            raise ConfigError(
                f"functional {cfg.functional!r} has no surrogate mode; "
                "set reference = closed-form or none"
            )
        surr = _surrogate_samples(cfg, law)
        samples[cfg.functional + "-surrogate"] = surr
        rows.append(
            ReportRow(
                name=cfg.functional + "-surrogate",
                estimate=float(surr.mean()),
                stderr=float(surr.std(ddof=1) / math.sqrt(len(surr)))
                if len(surr) > 1
                else None,
            )
        )
        if m > 1 and len(surr) > 1:
            row.ks = stats.ks_two_sample(sample, surr)
            row.threshold = cfg.threshold or stats.kolmogorov_threshold_two(m, len(surr))
            row.passed = row.ks <= row.threshold
        else:
            row.note = "ks undefined for a single replica"
    return _finish(cfg, rows, samples)


def run_lln_sweep(cfg: ExperimentConfig) -> Report:
    """Per-n estimates of a first-order functional against its limit constant."""
    law = law_from_config(cfg)
    reference = np.atleast_1d(laws.lln_reference(cfg.functional, law.mu, cfg.t))
    rows = []
    errors = []
    samples = {}
    for n in cfg.n_list:
        vals = np.empty((cfg.replicas, len(reference)))
        for r in range(cfg.replicas):
            w = walks.sample_walk(law, n, cfg.seed, replica=r)
            if cfg.functional == "max":
                vals[r, 0] = w.sums[:, 0].max() / n
            elif cfg.functional == "diameter":
                vals[r, 0] = geometry.diameter(w.sums) / n
            elif cfg.functional == "perimeter":
                body = geometry.convex_hull(w.sums, validate=False)
                vals[r, 0] = geometry.surface_area(body, cfg.directions) / n
            elif cfg.functional == "com":
                k = max(1, int(math.floor(n * cfg.t)))
                csum = np.cumsum(w.sums[1:], axis=0)
                vals[r] = csum[k - 1] / k / n
            else:
                raise ConfigError(f"unknown value for functional: {cfg.functional!r}")
        mean_vec = vals.mean(axis=0)
        err = float(np.linalg.norm(mean_vec - reference))
        errors.append(err)
        est = float(mean_vec[0]) if len(reference) == 1 else float(
            np.linalg.norm(mean_vec)
        )
        ref_val = float(reference[0]) if len(reference) == 1 else float(
            np.linalg.norm(reference)
        )
        rows.append(
            ReportRow(
                name=f"{cfg.functional}@n={n}",
                estimate=est,
                stderr=float(vals[:, 0].std(ddof=1) / math.sqrt(len(vals)))
                if len(vals) > 1
                else None,
                reference=ref_val,
                passed=(err <= cfg.threshold) if cfg.threshold > 0 else None,
                threshold=cfg.threshold if cfg.threshold > 0 else None,
            )
        )
        samples[f"{cfg.functional}@n={n}"] = vals[:, 0]
    rows.append(
        ReportRow(
            name="error-trend",
            estimate=errors[-1],
            reference=errors[0],
            passed=errors[-1] <= errors[0],
            threshold=errors[0],
            note="error at largest n must not exceed the error at smallest n",
        )
    )
    return _finish(cfg, rows, samples)


def run_com_kernel_check(cfg: ExperimentConfig) -> Report:
    """Empirical covariances of the scaled centre of mass vs the limit kernel."""
    law = law_from_config(cfg)
    kernel = laws.ComKernel(laws.sqrt_psd(law.sigma))
    n, m, d = cfg.n, cfg.replicas, cfg.dim
    times = sorted({t for pair in cfg.pairs for t in pair})
    indices = {t: max(1, int(math.floor(n * t))) for t in times}
    values = {t: np.empty((m, d)) for t in times}
    root_n = math.sqrt(n)
    for lo, hi in _batch_ranges(m):
        sums = _sums_batch(law, n, cfg.seed, lo, hi)
        csum = np.cumsum(sums[:, 1:, :], axis=1)
        for t in times:
            k = indices[t]
            values[t][lo:hi] = csum[:, k - 1, :] / k / root_n
    rows = []
    threshold = cfg.threshold or 0.05
    for t1, t2 in cfg.pairs:
        x, y = values[t1], values[t2]
        ref = laws.com_kernel_eval(kernel, t1, t2)
        ref_val = float(ref[0, 0]) if d == 1 else float(np.linalg.norm(ref))
        if m > 1:
            xc, yc = x - x.mean(axis=0), y - y.mean(axis=0)
            cov = xc.T @ yc / (m - 1)
            est = float(cov[0, 0]) if d == 1 else float(np.linalg.norm(cov))
            rel_den = np.linalg.norm(ref)
            rel = float(np.linalg.norm(cov - ref)) / rel_den if rel_den else est
            se = (
                float((xc[:, 0] * yc[:, 0]).std(ddof=1) / math.sqrt(m))
                if d == 1
                else None
            )
            passed = rel <= threshold
        else:
            est, se, passed = None, None, None
        rows.append(
            ReportRow(
                name=f"cov({t1:g},{t2:g})",
                estimate=est,
                stderr=se,
                reference=ref_val,
                passed=passed,
                threshold=threshold,
                note="relative tolerance on the covariance",
            )
        )
    samples = {f"G@{t:g}": values[t][:, 0] if d == 1 else values[t] for t in times}
    return _finish(cfg, rows, samples)


def run_etemadi(cfg: ExperimentConfig) -> Report:
    """Falsification-only check of the maximal inequality on an x grid.

    Left side: P(max_j |S_j| >= 3x); right side: 3 max_j P(|S_j| >= x).
    A violation is flagged only when the 99% Wilson intervals separate
    (left lower bound above 3x the largest per-j upper bound).
    """
    law = law_from_config(cfg)
    n, m = cfg.n, cfg.replicas
    xs = np.asarray(cfg.x_grid, dtype=float)
    left_counts = np.zeros(len(xs), dtype=np.int64)
    right_counts = np.zeros((len(xs), n + 1), dtype=np.int64)
    for lo, hi in _batch_ranges(m):
        sums = _sums_batch(law, n, cfg.seed, lo, hi)
        norms = np.linalg.norm(sums, axis=2)
        peak = norms.max(axis=1)
        for i, x in enumerate(xs):
            left_counts[i] += int((peak >= 3.0 * x).sum())
            right_counts[i] += (norms >= x).sum(axis=0)
    rows = []
    for i, x in enumerate(xs):
        left_p = left_counts[i] / m
        right_best = int(right_counts[i].max())
        right_p = right_best / m
        left_lo, _ = stats.wilson_interval(int(left_counts[i]), m)
        # Wilson upper bound is monotone in the count, so the max over j of
        # per-j upper bounds is the bound at the max count.
        _, right_hi = stats.wilson_interval(right_best, m)
        violated = left_lo > 3.0 * right_hi
        rows.append(
            ReportRow(
                name=f"x={x:g}",
                estimate=float(left_p),
                stderr=float(math.sqrt(left_p * (1.0 - left_p) / m)),
                reference=3.0 * float(right_p),
                passed=not violated,
                threshold=2.5758293035489004,
                note="left P(max>=3x) vs 3 max_j P(>=x); threshold is the Wilson z",
            )
        )
    return _finish(cfg, rows, {})


def run_hull_drift_volume(cfg: ExperimentConfig) -> Report:
    """Scaled hull volume of a drifting walk vs the time-space path surrogate."""
    law = law_from_config(cfg)
    mu = law.mu
    n, m = cfg.n, cfg.replicas
    d = cfg.dim
    scale = float(n) ** ((d + 1) / 2.0)
    walk_vals = np.empty(m)
    for lo, hi in _batch_ranges(m):
        sums = _sums_batch(law, n, cfg.seed, lo, hi)
        for b in range(hi - lo):
            body = geometry.convex_hull(sums[b], validate=False)
            walk_vals[lo + b] = geometry.volume(body) / scale
    perp, _ = laws.sigma_mu_perp(laws.sqrt_psd(law.sigma), mu)
    det_factor = float(np.linalg.norm(mu)) * math.sqrt(
        max(float(np.linalg.det(perp.matrix)), 0.0) if perp.dim > 1
        else float(perp.matrix[0, 0])
    )
    steps = cfg.surrogate_grid or 2048
    m2 = cfg.surrogate_replicas or m
    grid = np.linspace(0.0, 1.0, steps + 1)
    surr_vals = np.empty(m2)
    for r in range(m2):
        path = walks.sample_tilde_bd(perp, grid, cfg.seed, replica=m + r)
        body = geometry.convex_hull(path.values, validate=False)
        surr_vals[r] = geometry.volume(body)
    walk_mean = float(walk_vals.mean())
    walk_se = float(walk_vals.std(ddof=1) / math.sqrt(m)) if m > 1 else 0.0
    vtilde = float(surr_vals.mean())
    vtilde_se = float(surr_vals.std(ddof=1) / math.sqrt(m2)) if m2 > 1 else 0.0
    theory = det_factor * vtilde
    theory_se = det_factor * vtilde_se
    rows = [
        ReportRow(name="walk-side", estimate=walk_mean, stderr=walk_se),
        ReportRow(name="vtilde", estimate=vtilde, stderr=vtilde_se),
        ReportRow(name="theory-side", estimate=theory, stderr=theory_se),
    ]
    threshold = cfg.threshold or 0.15
    if theory > 0.0 and walk_mean > 0.0:
        ratio = walk_mean / theory
        ratio_se = ratio * math.sqrt(
            (walk_se / walk_mean) ** 2 + (theory_se / theory) ** 2
        )
        rows.append(
            ReportRow(
                name="ratio",
                estimate=ratio,
                stderr=ratio_se,
                reference=1.0,
                passed=abs(ratio - 1.0) <= threshold,
                threshold=threshold,
            )
        )
    else:
        rows.append(
            ReportRow(
                name="ratio",
                reference=1.0,
                threshold=threshold,
                note="undefined: a side is degenerate (zero volume)",
            )
        )
    return _finish(
        cfg, rows, {"walk-volume": walk_vals, "surrogate-volume": surr_vals}
    )


_RUNNERS = {
    "distributional": run_distributional,
    "lln-sweep": run_lln_sweep,
    "com-kernel": run_com_kernel_check,
    "etemadi": run_etemadi,
    "hull-drift-volume": run_hull_drift_volume,
}


def run_experiment(cfg: ExperimentConfig) -> Report:
    runner = _RUNNERS.get(cfg.experiment)
    if runner is None:
        raise ConfigError(f"unknown value for experiment: {cfg.experiment!r}")
    start = time.perf_counter()
    report = runner(cfg)
    report.runtime = time.perf_counter() - start
    return report


def _finish(cfg: ExperimentConfig, rows, samples) -> Report:
    digest = hashlib.sha256(manifest_text(cfg).encode()).hexdigest()[:16]
    report = Report(
        experiment=cfg.experiment,
        rows=rows,
        seed=cfg.seed,
        config_hash=digest,
        runtime=0.0,
        samples=samples if cfg.dump_samples else {},
    )
    return report
