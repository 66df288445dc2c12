"""Batch command-line frontend.

Subcommands: simulate, metric, hull, experiment, report.  Every run writes
a manifest echoing its fully-resolved config next to its outputs, and all
files are written to a temp name then renamed, so interrupted runs never
leave partial output.  Exit codes: 0 success, 2 configuration error
(diagnostic names the offending key), 1 runtime failure.  The default
output directory comes from $WALKLIMITS_OUT (falling back to '.').
"""

from __future__ import annotations

import argparse
import os
import re
import sys
import tempfile

import numpy as np

from . import csvio, geometry, metrics
from .config import ConfigError, build_config, load_config, manifest_text, parse_text
from .experiments import Report, run_experiment
from .fixtures import BUILTIN_CONFIGS, FIXTURES, builtin_examples, get_fixture
from .trajectory import CONSTANT, LINEAR
from .walks import (
    clt_trajectory,
    deterministic,
    gaussian,
    lattice,
    lln_trajectory,
    rademacher,
    sample_walk,
    uniform_cube,
)


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(path) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _out_dir(args) -> str:
    return args.out or os.environ.get("WALKLIMITS_OUT") or "."


def _slug(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.@=-]+", "_", name)


def _write_report(report: Report, out: str) -> list[str]:
    paths = []
    csv_path = os.path.join(out, "report.csv")
    _write_atomic(csv_path, report.csv_text())
    paths.append(csv_path)
    txt_path = os.path.join(out, "report.txt")
    _write_atomic(txt_path, report.summary_text())
    paths.append(txt_path)
    for name, values in report.samples.items():
        sample_path = os.path.join(out, f"samples_{_slug(name)}.csv")
        _write_atomic(sample_path, csvio.samples_csv(values))
        paths.append(sample_path)
    return paths


def _cmd_experiment(args) -> int:
    if bool(args.config) == bool(args.builtin):
        raise ConfigError("pass exactly one of --config PATH or --builtin NAME")
    if args.builtin:
        if args.builtin not in BUILTIN_CONFIGS:
            known = ", ".join(sorted(BUILTIN_CONFIGS))
            raise ConfigError(f"unknown builtin config: {args.builtin} (known: {known})")
        cfg = build_config(parse_text(BUILTIN_CONFIGS[args.builtin]), args.override)
    else:
        cfg = load_config(args.config, args.override)
    if args.seed is not None:
        cfg = build_config(parse_text(manifest_text(cfg)), [f"seed={args.seed}"])
    out = _out_dir(args)
    report = run_experiment(cfg)
    os.makedirs(out, exist_ok=True)
    _write_atomic(os.path.join(out, "manifest.cfg"), manifest_text(cfg))
    paths = _write_report(report, out)
    print(report.summary_text(), end="")
    for p in paths:
        print(f"wrote {p}")
    return 0


_METRIC_FUNCS = {
    "rho-inf": lambda f, g: metrics.rho_inf(f, g),
    "rho-s": lambda f, g: metrics.rho_skorokhod(f, g).value,
    "rho-s-circ": lambda f, g: metrics.rho_skorokhod_circ(f, g).value,
}


def _cmd_metric(args) -> int:
    if args.list_examples:
        for name, desc in builtin_examples():
            print(f"{name}: {desc}")
        return 0
    if args.example:
        return _metric_example(args.example)
    if not (args.f and args.g):
        raise ConfigError("pass --example NAME, --list-examples, or --f/--g CSV paths")
    with open(args.f, encoding="utf-8") as fh:
        f = csvio.read_trajectory_csv(fh.read())
    with open(args.g, encoding="utf-8") as fh:
        g = csvio.read_trajectory_csv(fh.read())
    fn = _METRIC_FUNCS.get(args.metric)
    if fn is None:
        raise ConfigError(f"unknown metric: {args.metric}")
    print(f"{args.metric}(f,g) = {fn(f, g):.10g}")
    return 0


def _metric_example(name: str) -> int:
    if name not in ("paper-2.1", "paper-2.2") and name not in FIXTURES:
        raise ConfigError(f"unknown example: {name}")
    f = get_fixture("paper-2.1-f")
    g = get_fixture("paper-2.1-g")
    h = get_fixture("paper-2.1-h")
    if name == "paper-2.1" or name.startswith("paper-2.1"):
        print(f"rho_inf(f,g) = {metrics.rho_inf(f, g):.10g}")
        print(f"rho_inf(f,h) = {metrics.rho_inf(f, h):.10g}")
        return 0
    lam = get_fixture("paper-2.2-lambda")
    res_fg = metrics.rho_skorokhod(f, g)
    res_fh = metrics.rho_skorokhod(f, h)
    print(f"rho_S(f,g) = {res_fg.value:.10g}")
    print(f"rho_S(f,h) = {res_fh.value:.10g}")
    if res_fh.witness is not None:
        print(f"witness sup|lambda - id| = {res_fh.witness.sup_deviation():.10g}")
    print(f"bundled lambda chord-log norm = {metrics.lambda_circ_norm(lam):.10g}")
    return 0


_LAW_BUILDERS = {
    "rademacher": lambda dim, mu: rademacher(dim),
    "lattice-simple-symmetric": lambda dim, mu: lattice(dim),
    "gaussian": lambda dim, mu: gaussian(mu, np.eye(dim)),
    "uniform-cube": lambda dim, mu: uniform_cube(mu),
    "deterministic": lambda dim, mu: deterministic(mu),
}


def _simulate_law(args):
    builder = _LAW_BUILDERS.get(args.law)
    if builder is None:
        raise ConfigError(f"unknown value for law: {args.law}")
    mu = np.zeros(args.dim)
    if args.mu:
        mu = np.asarray([float(x) for x in args.mu.split(",")])
        if len(mu) != args.dim:
            raise ConfigError("mu must have exactly dim components")
    return builder(args.dim, mu), mu


def _cmd_simulate(args) -> int:
    if args.n < 1:
        raise ConfigError("n must be >= 1")
    law, mu = _simulate_law(args)
    walk = sample_walk(law, args.n, args.seed)
    out = _out_dir(args)
    os.makedirs(out, exist_ok=True)
    if args.kind == "walk":
        _write_atomic(os.path.join(out, "walk.csv"), csvio.walk_csv(walk))
        written = "walk.csv"
    else:
        tkind = CONSTANT if args.kind.endswith("constant") else LINEAR
        if args.kind.startswith("lln"):
            traj = lln_trajectory(walk, tkind)
        else:
            traj = clt_trajectory(walk, tkind, mu)
        _write_atomic(os.path.join(out, "trajectory.csv"), csvio.trajectory_csv(traj))
        written = "trajectory.csv"
    manifest = "\n".join(
        [
            "subcommand = simulate",
            f"law = {args.law}",
            f"dim = {args.dim}",
            f"mu = {args.mu or ''}",
            f"n = {args.n}",
            f"seed = {args.seed}",
            f"kind = {args.kind}",
        ]
    )
    _write_atomic(os.path.join(out, "manifest.cfg"), manifest + "\n")
    print(f"wrote {os.path.join(out, written)}")
    return 0


def _cmd_hull(args) -> int:
    if args.points:
        data = np.loadtxt(args.points, delimiter=",", skiprows=1, ndmin=2)
        points = data
        source = f"points = {args.points}"
    else:
        if args.n < 1:
            raise ConfigError("n must be >= 1 (or pass --points CSV)")
        law, _ = _simulate_law(args)
        points = sample_walk(law, args.n, args.seed).sums
        source = f"law = {args.law}\ndim = {args.dim}\nn = {args.n}\nseed = {args.seed}"
    body = geometry.convex_hull(points)
    out = _out_dir(args)
    os.makedirs(out, exist_ok=True)
    _write_atomic(os.path.join(out, "vertices.csv"), csvio.vertices_csv(body))
    _write_atomic(os.path.join(out, "body.off"), csvio.off_text(body))
    rows = [
        ("diameter", geometry.diameter(points)),
        ("mean-width", geometry.mean_width(body, args.directions)),
        ("surface-area", geometry.surface_area(body, args.directions)),
    ]
    if body.dim <= 3:
        rows.append(("volume", geometry.volume(body)))
    lines = ["name,estimate,stderr,reference,ks,pass,threshold"]
    lines += [f"{name},{repr(float(v))},,,,," for name, v in rows]
    _write_atomic(os.path.join(out, "hull_report.csv"), "\n".join(lines) + "\n")
    manifest = f"subcommand = hull\n{source}\ndirections = {args.directions}\n"
    _write_atomic(os.path.join(out, "manifest.cfg"), manifest)
    for name, v in rows:
        print(f"{name} = {v:.10g}")
    return 0


def _cmd_report(args) -> int:
    import csv as _csv

    with open(args.csv, encoding="utf-8", newline="") as fh:
        rows = list(_csv.reader(fh))
    print(f"report: {args.csv}")
    for parts in rows[1:]:
        name, est, se, ref, ks, ok, thr = (parts + [""] * 7)[:7]
        bits = [f"{name}:"]
        if est:
            bits.append(f"estimate={float(est):.6g}")
        if se:
            bits.append(f"stderr={float(se):.3g}")
        if ref:
            bits.append(f"reference={float(ref):.6g}")
        if ks:
            bits.append(f"ks={float(ks):.4g}")
        if thr:
            bits.append(f"threshold={float(thr):.4g}")
        if ok:
            bits.append("PASS" if ok == "true" else "FAIL")
        print("  " + " ".join(bits))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="walklimits",
        description="Simulate random walks and check their limit laws in batch.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_sim = sub.add_parser("simulate", help="sample a walk or rescaled trajectory")
    p_sim.add_argument("--law", default="rademacher")
    p_sim.add_argument("--dim", type=int, default=1)
    p_sim.add_argument("--mu", default="")
    p_sim.add_argument("--n", type=int, default=0)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument(
        "--kind",
        default="walk",
        choices=["walk", "lln-linear", "lln-constant", "clt-linear", "clt-constant"],
    )
    p_sim.add_argument("--out", default="")
    p_sim.set_defaults(func=_cmd_simulate)

    p_met = sub.add_parser("metric", help="evaluate path metrics")
    p_met.add_argument("--example", default="")
    p_met.add_argument("--list-examples", action="store_true")
    p_met.add_argument("--f", default="")
    p_met.add_argument("--g", default="")
    p_met.add_argument("--metric", default="rho-s",
                       choices=sorted(_METRIC_FUNCS))
    p_met.set_defaults(func=_cmd_metric)

    p_hull = sub.add_parser("hull", help="hull vertices, facets and functionals")
    p_hull.add_argument("--points", default="", help="CSV of points (with header)")
    p_hull.add_argument("--law", default="rademacher")
    p_hull.add_argument("--dim", type=int, default=2)
    p_hull.add_argument("--mu", default="")
    p_hull.add_argument("--n", type=int, default=0)
    p_hull.add_argument("--seed", type=int, default=0)
    p_hull.add_argument("--directions", type=int, default=4096)
    p_hull.add_argument("--out", default="")
    p_hull.set_defaults(func=_cmd_hull)

    p_exp = sub.add_parser("experiment", help="run a Monte Carlo experiment")
    p_exp.add_argument("--config", default="")
    p_exp.add_argument("--builtin", default="",
                       help=f"one of: {', '.join(sorted(BUILTIN_CONFIGS))}")
    p_exp.add_argument("--override", action="append", default=[],
                       metavar="KEY=VALUE")
    p_exp.add_argument("--seed", type=int, default=None)
    p_exp.add_argument("--out", default="")
    p_exp.set_defaults(func=_cmd_experiment)

    p_rep = sub.add_parser("report", help="pretty-print a report CSV")
    p_rep.add_argument("--csv", required=True)
    p_rep.set_defaults(func=_cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failure
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
