import os
import subprocess
import sys

CONFIG_OK = """
experiment = distributional
functional = max
law = rademacher
dim = 1
n = 128
replicas = 64
seed = 5
"""


def run_cli(*args, env=None):
    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    return subprocess.run(
        [sys.executable, "-m", "walklimits", *args],
        capture_output=True,
        text=True,
        env=full_env,
    )


def test_experiment_happy_path(tmp_path):
    cfg = tmp_path / "max.cfg"
    cfg.write_text(CONFIG_OK)
    out = tmp_path / "run"
    res = run_cli("experiment", "--config", str(cfg), "--out", str(out))
    assert res.returncode == 0, res.stderr
    for name in ("report.csv", "report.txt", "manifest.cfg"):
        assert (out / name).exists()
    header = (out / "report.csv").read_text().splitlines()[0]
    assert header == "name,estimate,stderr,reference,ks,pass,threshold"


def test_experiment_manifest_roundtrip_byte_identical(tmp_path):
    cfg = tmp_path / "max.cfg"
    cfg.write_text(CONFIG_OK)
    first = tmp_path / "a"
    res = run_cli("experiment", "--config", str(cfg), "--out", str(first))
    assert res.returncode == 0, res.stderr
    second = tmp_path / "b"
    res = run_cli(
        "experiment", "--config", str(first / "manifest.cfg"), "--out", str(second)
    )
    assert res.returncode == 0, res.stderr
    assert (first / "report.csv").read_bytes() == (second / "report.csv").read_bytes()
    assert (first / "manifest.cfg").read_bytes() == (second / "manifest.cfg").read_bytes()


def test_experiment_rejects_zero_replicas(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text(CONFIG_OK.replace("replicas = 64", "replicas = 0"))
    res = run_cli("experiment", "--config", str(cfg), "--out", str(tmp_path / "x"))
    assert res.returncode == 2
    assert "replicas" in res.stderr


def test_experiment_rejects_unknown_key(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text(CONFIG_OK + "walkers = 3\n")
    res = run_cli("experiment", "--config", str(cfg), "--out", str(tmp_path / "x"))
    assert res.returncode == 2
    assert "walkers" in res.stderr


def test_experiment_missing_config_is_config_error(tmp_path):
    res = run_cli("experiment", "--config", str(tmp_path / "nope.cfg"))
    assert res.returncode == 2
    assert "nope.cfg" in res.stderr


def test_experiment_seed_override(tmp_path):
    cfg = tmp_path / "max.cfg"
    cfg.write_text(CONFIG_OK)
    out = tmp_path / "s"
    res = run_cli(
        "experiment", "--config", str(cfg), "--out", str(out), "--seed", "123"
    )
    assert res.returncode == 0
    assert "seed = 123" in (out / "manifest.cfg").read_text()


def test_experiment_builtin_with_small_overrides(tmp_path):
    out = tmp_path / "b"
    res = run_cli(
        "experiment",
        "--builtin",
        "max-clt",
        "--override",
        "n=64",
        "--override",
        "replicas=32",
        "--override",
        "threshold=0.9",
        "--out",
        str(out),
    )
    assert res.returncode == 0, res.stderr
    assert (out / "report.csv").exists()


def test_metric_example_values():
    res = run_cli("metric", "--example", "paper-2.2")
    assert res.returncode == 0
    assert "rho_S(f,h) = 0.05" in res.stdout
    assert "0.01" in res.stdout
    res = run_cli("metric", "--example", "paper-2.1")
    assert "rho_inf(f,h) = 0.95" in res.stdout


def test_metric_listing_contains_fixtures():
    res = run_cli("metric", "--list-examples")
    assert res.returncode == 0
    assert "paper-2.1-f" in res.stdout
    assert "paper-2.2-lambda" in res.stdout
    assert "config:max-clt" in res.stdout


def test_metric_between_trajectory_files(tmp_path):
    from walklimits import csvio
    from walklimits.fixtures import step_f, step_h

    fa = tmp_path / "f.csv"
    fb = tmp_path / "h.csv"
    fa.write_text(csvio.trajectory_csv(step_f()))
    fb.write_text(csvio.trajectory_csv(step_h()))
    res = run_cli("metric", "--f", str(fa), "--g", str(fb), "--metric", "rho-s")
    assert res.returncode == 0
    assert "0.05" in res.stdout


def test_simulate_writes_walk_and_manifest(tmp_path):
    out = tmp_path / "sim"
    res = run_cli(
        "simulate", "--law", "rademacher", "--dim", "1", "--n", "32",
        "--seed", "9", "--out", str(out),
    )
    assert res.returncode == 0
    walk_lines = (out / "walk.csv").read_text().splitlines()
    assert walk_lines[0] == "k,x1"
    assert len(walk_lines) == 34
    assert (out / "manifest.cfg").exists()


def test_simulate_trajectory_kind(tmp_path):
    out = tmp_path / "sim2"
    res = run_cli(
        "simulate", "--law", "deterministic", "--dim", "2", "--mu", "1,0",
        "--n", "8", "--seed", "1", "--kind", "lln-linear", "--out", str(out),
    )
    assert res.returncode == 0
    text = (out / "trajectory.csv").read_text()
    assert text.startswith("# kind = piecewise-linear")


def test_hull_subcommand_outputs(tmp_path):
    out = tmp_path / "hull"
    res = run_cli(
        "hull", "--law", "gaussian", "--dim", "2", "--n", "256",
        "--seed", "3", "--out", str(out),
    )
    assert res.returncode == 0, res.stderr
    assert (out / "vertices.csv").exists()
    off = (out / "body.off").read_text().splitlines()
    assert off[0] == "OFF"
    assert (out / "hull_report.csv").exists()
    assert "volume" in res.stdout


def test_report_subcommand_pretty_prints(tmp_path):
    cfg = tmp_path / "max.cfg"
    cfg.write_text(CONFIG_OK)
    out = tmp_path / "r"
    run_cli("experiment", "--config", str(cfg), "--out", str(out))
    res = run_cli("report", "--csv", str(out / "report.csv"))
    assert res.returncode == 0
    assert "max:" in res.stdout


def test_report_handles_quoted_row_names(tmp_path):
    # covariance rows are named like cov(0.5,1); the comma must be CSV-quoted
    cfg = tmp_path / "ck.cfg"
    cfg.write_text(
        """
experiment = com-kernel
law = rademacher
dim = 1
n = 200
replicas = 300
pairs = 0.5:1
seed = 3
"""
    )
    out = tmp_path / "ck"
    res = run_cli("experiment", "--config", str(cfg), "--out", str(out))
    assert res.returncode == 0, res.stderr
    assert '"cov(0.5,1)"' in (out / "report.csv").read_text()
    res = run_cli("report", "--csv", str(out / "report.csv"))
    assert res.returncode == 0, res.stderr
    assert "cov(0.5,1):" in res.stdout


def test_dump_samples_written(tmp_path):
    cfg = tmp_path / "max.cfg"
    cfg.write_text(CONFIG_OK + "dump_samples = true\n")
    out = tmp_path / "d"
    res = run_cli("experiment", "--config", str(cfg), "--out", str(out))
    assert res.returncode == 0, res.stderr
    sample_files = list(out.glob("samples_*.csv"))
    assert sample_files
    lines = sample_files[0].read_text().splitlines()
    assert lines[0] == "sample_id,value"
    assert len(lines) == 65


def test_out_dir_from_environment(tmp_path):
    cfg = tmp_path / "max.cfg"
    cfg.write_text(CONFIG_OK)
    out = tmp_path / "envout"
    res = run_cli(
        "experiment", "--config", str(cfg), env={"WALKLIMITS_OUT": str(out)}
    )
    assert res.returncode == 0
    assert (out / "report.csv").exists()


def test_runtime_failure_exits_one(tmp_path):
    cfg = tmp_path / "max.cfg"
    cfg.write_text(CONFIG_OK)
    blocker = tmp_path / "not-a-dir"
    blocker.write_text("occupied")
    res = run_cli("experiment", "--config", str(cfg), "--out", str(blocker))
    assert res.returncode == 1
    assert res.stderr.strip()
