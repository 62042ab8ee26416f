import os

import numpy as np
import pytest

from miptlab.harness import (
    ConfigError,
    CSV_COLUMNS,
    aggregate,
    expand_sweep,
    parse_config_text,
    read_csv,
    run_ensemble,
    run_experiment,
    write_csv,
)
from miptlab.protocols import ExperimentConfig


def test_parse_minimal_config_fills_defaults():
    cfgs = expand_sweep(parse_config_text("protocol = clifford1d\nL = 8\np = 0.2\n"))
    assert len(cfgs) == 1
    cfg = cfgs[0]
    assert cfg.boundary == "periodic"
    assert cfg.window == 4
    assert cfg.probe == "i3"


def test_parse_rejects_bad_probability():
    with pytest.raises(ConfigError):
        expand_sweep(parse_config_text("protocol = clifford1d\nL = 8\np = 1.3\n"))


def test_parse_rejects_odd_L_for_2d():
    with pytest.raises(ConfigError):
        expand_sweep(parse_config_text("protocol = clifford2d\nL = 7\np = 0.3\n"))


def test_parse_unknown_key_line_number():
    with pytest.raises(ConfigError, match="line 2"):
        parse_config_text("protocol = clifford1d\nwhat = 3\nL = 8\np = 0.1")


def test_parse_sweeps_and_comments():
    raw = parse_config_text(
        "# sweep\nprotocol = clifford1d\nL = 8,12\np = 0.1, 0.2  # two rates\nn_traj = 3\n"
    )
    cfgs = expand_sweep(raw)
    assert [(c.L, c.p) for c in cfgs] == [(8, 0.1), (8, 0.2), (12, 0.1), (12, 0.2)]


def test_write_csv_header_only(tmp_path):
    path = tmp_path / "empty.csv"
    write_csv([], str(path))
    assert path.read_text() == ",".join(CSV_COLUMNS) + "\n"


def test_csv_roundtrip(tmp_path):
    rows = [
        {
            "protocol": "clifford1d",
            "L": 8,
            "p": 0.1234567890123,
            "t": 32,
            "observable": "i3",
            "value": -0.5,
            "stderr": 0.01,
            "n_traj": 7,
        }
    ]
    path = tmp_path / "x.csv"
    write_csv(rows, str(path))
    back = read_csv(str(path))
    assert back == rows


def test_run_experiment_writes_manifest_and_csv(tmp_path):
    cfg = ExperimentConfig(protocol="clifford1d", L=8, p=0.2, probe="i3", n_traj=4, seed=5, t_max=8)
    manifest = run_experiment(cfg, workers=1, out_dir=str(tmp_path))
    assert os.path.exists(manifest.csv_paths[0])
    rows = read_csv(manifest.csv_paths[0])
    names = {r["observable"] for r in rows}
    assert "i3" in names and "i3_steady" in names and "mean_cluster_size" in names
    assert os.path.exists(tmp_path / "manifest.json")


def test_worker_count_does_not_change_bytes(tmp_path):
    cfg = ExperimentConfig(protocol="clifford1d", L=8, p=0.25, probe="i3", n_traj=6, seed=9, t_max=8)
    m1 = run_experiment(cfg, workers=1, out_dir=str(tmp_path / "w1"))
    m2 = run_experiment(cfg, workers=2, out_dir=str(tmp_path / "w2"))
    b1 = open(m1.csv_paths[0], "rb").read()
    b2 = open(m2.csv_paths[0], "rb").read()
    assert b1 == b2


def test_aggregate_counts_match():
    cfg = ExperimentConfig(protocol="clifford1d", L=8, p=0.2, probe="i3", n_traj=3, seed=1, t_max=8)
    recs = run_ensemble(cfg)
    rows = aggregate(cfg, recs)
    ns_rows = [r for r in rows if r["observable"].startswith("ns_")]
    # total sites accounted for by the n_s histogram: sum_s s * n_s * volume = L
    tot = sum(int(r["observable"].split("_")[1]) * r["value"] * cfg.n_sites for r in ns_rows)
    assert tot == pytest.approx(cfg.n_sites)


def test_zero_trajectories_rejected():
    with pytest.raises(ValueError):
        ExperimentConfig(protocol="clifford1d", L=8, p=0.2, n_traj=0).validate()
