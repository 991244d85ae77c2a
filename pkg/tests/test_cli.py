"""CLI tests: table contents, figure and manifest output, config file
precedence, formats, determinism, and exit codes."""

import csv
import json
import math
import os
import subprocess
import sys

import pytest

from fountainmix.cli import main


def run_cli(args, cwd):
    old = os.getcwd()
    os.chdir(cwd)
    try:
        return main(list(args))
    finally:
        os.chdir(old)


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


# --- chain ---

def test_chain_trivial_instance(tmp_path):
    rc = run_cli(["chain", "--n", "1", "--systems", "1", "--no-plot"], tmp_path)
    assert rc == 0
    rows = read_csv(tmp_path / "chain.csv")
    assert rows[0] == ["ell", "unseen", "probability"]
    assert rows[1:] == [["0", "1", "1.000000"], ["1", "0", "1.000000"]]


def test_chain_rows_form_pmfs_per_step(tmp_path):
    rc = run_cli(["chain", "--n", "6", "--systems", "2", "--no-plot",
                  "--out", "c.csv"], tmp_path)
    assert rc == 0
    rows = read_csv(tmp_path / "c.csv")[1:]
    by_step = {}
    for ell, _, prob in rows:
        by_step[ell] = by_step.get(ell, 0.0) + float(prob)
    assert set(by_step) == {str(ell) for ell in range(13)}
    for total in by_step.values():
        assert total == pytest.approx(1.0, abs=2e-6)


def test_chain_runs_are_byte_identical(tmp_path):
    for name in ("a.csv", "b.csv"):
        run_cli(["chain", "--n", "5", "--systems", "3", "--no-plot",
                 "--out", name], tmp_path)
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_chain_renders_figure_and_manifest(tmp_path):
    rc = run_cli(["chain", "--n", "4", "--systems", "2", "--out", "x.csv"],
                 tmp_path)
    assert rc == 0
    png = tmp_path / "x.png"
    assert png.exists() and png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    manifest = json.loads((tmp_path / "x.csv.manifest.json").read_text())
    assert manifest["command"] == "chain"
    assert manifest["config"]["n"] == 4
    assert manifest["config"]["systems"] == 2
    assert manifest["figure"] == "x.png"
    assert manifest["rows"] == len(read_csv(tmp_path / "x.csv")) - 1
    assert not list(tmp_path.glob(".*tmp"))


def test_no_plot_skips_figure(tmp_path):
    run_cli(["chain", "--n", "3", "--systems", "1", "--no-plot"], tmp_path)
    assert not list(tmp_path.glob("*.png"))
    manifest = json.loads((tmp_path / "chain.csv.manifest.json").read_text())
    assert manifest["figure"] is None


# --- tradeoff ---

def test_tradeoff_single_source_is_flat(tmp_path):
    run_cli(["tradeoff", "--systems", "1", "--no-plot", "--out", "t.csv"],
            tmp_path)
    rows = read_csv(tmp_path / "t.csv")
    assert rows[0] == ["systems", "n", "sigma", "delta"]
    assert len(rows) == 62
    assert all(r[3] == "1.000000" for r in rows[1:])
    assert all(r[1] == "inf" for r in rows[1:])


def test_tradeoff_known_value_present(tmp_path):
    run_cli(["tradeoff", "--systems", "2", "--sigma-points", "4",
             "--sigma-max", "4.0", "--no-plot", "--out", "t.csv"], tmp_path)
    rows = read_csv(tmp_path / "t.csv")[1:]
    by_sigma = {r[2]: r[3] for r in rows}
    assert by_sigma["1.000000"] == "2.000000"
    assert by_sigma["2.000000"] == f"{4 - 2 * math.sqrt(2):.6f}"


def test_tradeoff_finite_n_rows(tmp_path):
    run_cli(["tradeoff", "--systems", "2", "--n", "8", "--sigma-max", "4.0",
             "--no-plot", "--out", "t.csv"], tmp_path)
    rows = read_csv(tmp_path / "t.csv")[1:]
    # k runs 8 down to ceil(8 / 4) = 2
    assert [r[1] for r in rows] == ["8"] * 7
    assert [float(r[2]) for r in rows] == pytest.approx([8 / k for k in range(8, 1, -1)])


def test_tradeoff_mixed_finite_and_limit(tmp_path):
    run_cli(["tradeoff", "--systems", "2", "--n", "inf,8", "--sigma-points",
             "3", "--no-plot", "--out", "t.csv"], tmp_path)
    rows = read_csv(tmp_path / "t.csv")[1:]
    assert sum(r[1] == "inf" for r in rows) == 3
    assert sum(r[1] == "8" for r in rows) == 7


# --- mixture and overhead (tiny trial counts) ---

def test_mixture_coarse_grid(tmp_path):
    rc = run_cli(["mixture", "--step", "64", "--trials", "40", "--no-plot",
                  "--out", "m.csv"], tmp_path)
    assert rc == 0
    rows = read_csv(tmp_path / "m.csv")
    assert rows[0] == ["rln", "rs", "ldpc", "trials", "successes", "probability"]
    assert len(rows) == 7
    by_counts = {(r[0], r[1], r[2]): r for r in rows[1:]}
    rs_only = by_counts[("0", "128", "0")]
    assert rs_only[4] == "40" and rs_only[5] == "1.000000"


def test_mixture_quick_divides_trials(tmp_path):
    run_cli(["mixture", "--step", "128", "--trials", "40", "--quick",
             "--no-plot", "--out", "q.csv"], tmp_path)
    rows = read_csv(tmp_path / "q.csv")[1:]
    assert all(r[3] == "4" for r in rows)
    manifest = json.loads((tmp_path / "q.csv.manifest.json").read_text())
    assert manifest["config"]["trials"] == 4
    assert manifest["config"]["quick"] is True


def test_mixture_json_format(tmp_path):
    run_cli(["mixture", "--step", "128", "--trials", "10", "--format", "json",
             "--no-plot", "--out", "m.json"], tmp_path)
    data = json.loads((tmp_path / "m.json").read_text())
    assert len(data) == 3
    assert {row["rln"] + row["rs"] + row["ldpc"] for row in data} == {128}
    assert all(0.0 <= row["probability"] <= 1.0 for row in data)


def test_mixture_reruns_match(tmp_path):
    for name in ("a.csv", "b.csv"):
        run_cli(["mixture", "--step", "128", "--trials", "25", "--no-plot",
                 "--out", name], tmp_path)
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_overhead_table(tmp_path):
    rc = run_cli(["overhead", "--mixture", "43,43,42", "--extra-max", "2",
                  "--trials", "30", "--no-plot", "--out", "o.csv"], tmp_path)
    assert rc == 0
    rows = read_csv(tmp_path / "o.csv")
    assert rows[0] == ["extra", "rln", "rs", "ldpc", "trials", "successes",
                       "probability"]
    assert [r[0] for r in rows[1:]] == ["0", "1", "2"]
    assert [r[1:4] for r in rows[1:]] == [
        ["43", "43", "42"], ["44", "43", "42"], ["44", "44", "42"]
    ]


# --- simulate-same ---

def test_simulate_same_small(tmp_path):
    rc = run_cli(["simulate-same", "--n", "6", "--k", "4", "--systems", "2",
                  "--trials", "500", "--no-plot", "--out", "s.csv"], tmp_path)
    assert rc == 0
    rows = read_csv(tmp_path / "s.csv")
    assert rows[0] == ["transmissions", "count", "probability"]
    values = [int(r[0]) for r in rows[1:]]
    assert min(values) >= 4 and max(values) <= 12
    assert sum(int(r[1]) for r in rows[1:]) == 500
    assert sum(float(r[2]) for r in rows[1:]) == pytest.approx(1.0, abs=1e-4)


def test_simulate_same_budget_failures_row(tmp_path):
    run_cli(["simulate-same", "--n", "6", "--k", "6", "--systems", "2",
             "--trials", "300", "--budget", "6", "--no-plot",
             "--out", "s.csv"], tmp_path)
    rows = read_csv(tmp_path / "s.csv")[1:]
    assert rows[-1][0] == "inf"
    assert int(rows[-1][1]) > 0


def test_simulate_same_erasure_path(tmp_path):
    rc = run_cli(["simulate-same", "--n", "10", "--k", "5", "--systems", "2",
                  "--erasure", "0.0,0.5", "--trials", "200", "--no-plot",
                  "--out", "e.csv"], tmp_path)
    assert rc == 0
    rows = read_csv(tmp_path / "e.csv")[1:]
    assert sum(int(r[1]) for r in rows) == 200


def test_simulate_same_renders_overlay_figure(tmp_path):
    rc = run_cli(["simulate-same", "--n", "8", "--k", "6", "--systems", "2",
                  "--trials", "400", "--out", "s.csv"], tmp_path)
    assert rc == 0
    assert (tmp_path / "s.png").read_bytes()[:4] == b"\x89PNG"


def test_tradeoff_renders_figure(tmp_path):
    rc = run_cli(["tradeoff", "--out", "t.csv"], tmp_path)
    assert rc == 0
    assert (tmp_path / "t.png").read_bytes()[:4] == b"\x89PNG"


def test_mixture_and_overhead_render_figures(tmp_path):
    rc = run_cli(["mixture", "--step", "128", "--trials", "10",
                  "--out", "m.csv"], tmp_path)
    assert rc == 0
    assert (tmp_path / "m.png").read_bytes()[:4] == b"\x89PNG"
    rc = run_cli(["overhead", "--mixture", "43,43,42", "--extra-max", "1",
                  "--trials", "10", "--out", "o.csv"], tmp_path)
    assert rc == 0
    assert (tmp_path / "o.png").read_bytes()[:4] == b"\x89PNG"


# --- config files and precedence ---

def test_config_file_supplies_defaults(tmp_path):
    (tmp_path / "cfg.json").write_text(json.dumps({"n": 3, "systems": 2}))
    run_cli(["chain", "--config", "cfg.json", "--no-plot"], tmp_path)
    manifest = json.loads((tmp_path / "chain.csv.manifest.json").read_text())
    assert manifest["config"]["n"] == 3
    assert manifest["config"]["systems"] == 2


def test_cli_flags_beat_config_file(tmp_path):
    (tmp_path / "cfg.json").write_text(json.dumps({"n": 3, "systems": 2}))
    run_cli(["chain", "--config", "cfg.json", "--n", "2", "--no-plot"],
            tmp_path)
    manifest = json.loads((tmp_path / "chain.csv.manifest.json").read_text())
    assert manifest["config"]["n"] == 2
    assert manifest["config"]["systems"] == 2


def test_unknown_config_key_is_an_error(tmp_path):
    (tmp_path / "cfg.json").write_text(json.dumps({"banana": 1}))
    assert run_cli(["chain", "--config", "cfg.json", "--no-plot"], tmp_path) == 2


def test_malformed_config_is_an_error(tmp_path):
    (tmp_path / "cfg.json").write_text("{nope")
    assert run_cli(["chain", "--config", "cfg.json", "--no-plot"], tmp_path) == 2
    (tmp_path / "cfg2.json").write_text("[1, 2]")
    assert run_cli(["chain", "--config", "cfg2.json", "--no-plot"], tmp_path) == 2


# --- failure modes ---

def test_invalid_parameters_exit_2(tmp_path):
    assert run_cli(["chain", "--n", "0", "--no-plot"], tmp_path) == 2
    assert run_cli(["simulate-same", "--erasure", "1.5", "--no-plot"],
                   tmp_path) == 2
    assert run_cli(["mixture", "--step", "7", "--trials", "5", "--no-plot"],
                   tmp_path) == 2
    assert run_cli(["tradeoff", "--sigma-max", "0.5", "--no-plot"],
                   tmp_path) == 2


def test_unwritable_output_exits_1(tmp_path):
    rc = run_cli(["chain", "--n", "2", "--systems", "1", "--no-plot",
                  "--out", "missing/dir/x.csv"], tmp_path)
    assert rc == 1


def test_entry_point_subprocess(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "fountainmix.cli", "chain", "--n", "2",
         "--systems", "1", "--no-plot"],
        cwd=tmp_path,
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "wrote chain.csv" in proc.stdout
    assert (tmp_path / "chain.csv").exists()
