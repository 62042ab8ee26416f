"""Ensemble runner: config files, deterministic parallel execution, CSV.

Config files are flat ``key = value`` text, one experiment per file;
``L`` and ``p`` take comma-separated sweeps. Trajectory i of a run is
seeded by the counter pair (master seed, i), so aggregated output is
byte-identical for any worker count.

CSV schema (long format, documented column order):
    protocol, L, p, t, observable, value, stderr, n_traj
Floats are serialized with 17 significant digits.
"""

from __future__ import annotations

import csv
import hashlib
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .protocols import (
    PROBE_OBSERVABLE,
    ExperimentConfig,
    TrajectoryRecord,
    run_trajectory,
    steady_value,
)

__all__ = [
    "ConfigError",
    "RunManifest",
    "parse_config",
    "parse_config_text",
    "expand_sweep",
    "run_ensemble",
    "aggregate",
    "run_experiment",
    "write_csv",
    "read_csv",
    "CSV_COLUMNS",
]

CSV_COLUMNS = ("protocol", "L", "p", "t", "observable", "value", "stderr", "n_traj")

_INT_KEYS = {"L", "t_max", "t0", "window", "n_traj", "seed"}
_FLOAT_KEYS = {"p"}
_STR_KEYS = {"protocol", "boundary", "probe"}
_SWEEP_KEYS = {"L", "p"}
_ALL_KEYS = _INT_KEYS | _FLOAT_KEYS | _STR_KEYS


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunManifest:
    config_hash: str
    seed: int
    n_traj: int
    version: str
    csv_paths: tuple[str, ...]

    def write(self, path: str) -> None:
        with open(path, "w") as fh:
            json.dump(
                {
                    "config_hash": self.config_hash,
                    "seed": self.seed,
                    "n_traj": self.n_traj,
                    "version": self.version,
                    "csv_paths": list(self.csv_paths),
                },
                fh,
                indent=2,
                sort_keys=True,
            )
            fh.write("\n")


def parse_config_text(text: str) -> dict:
    """Parse the flat key=value format; unknown keys and bad types are
    rejected with line-level messages."""
    out: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _ALL_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            if key in _SWEEP_KEYS:
                parts = [v.strip() for v in value.split(",") if v.strip()]
                if not parts:
                    raise ValueError("empty sweep")
                conv = int if key in _INT_KEYS else float
                out[key] = [conv(v) for v in parts]
            elif key in _INT_KEYS:
                out[key] = int(value)
            elif key in _FLOAT_KEYS:
                out[key] = float(value)
            else:
                out[key] = value
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {exc}") from None
    if "protocol" not in out:
        raise ConfigError("missing required key 'protocol'")
    if "L" not in out:
        raise ConfigError("missing required key 'L'")
    if "p" not in out:
        raise ConfigError("missing required key 'p'")
    return out


def parse_config(path: str) -> list[ExperimentConfig]:
    """Parse a config file into the (L, p) sweep of experiment configs."""
    with open(path) as fh:
        text = fh.read()
    raw = parse_config_text(text)
    return expand_sweep(raw)


def expand_sweep(raw: dict) -> list[ExperimentConfig]:
    raw = dict(raw)
    Ls = raw.pop("L")
    ps = raw.pop("p")
    if not isinstance(Ls, list):
        Ls = [Ls]
    if not isinstance(ps, list):
        ps = [ps]
    base = ExperimentConfig(protocol=raw.pop("protocol"), L=Ls[0], p=ps[0], **raw)
    cfgs = []
    for L in Ls:
        for p in ps:
            cfg = replace(base, L=int(L), p=float(p))
            try:
                cfg.validate()
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
            cfgs.append(cfg)
    return cfgs


# ---------------------------------------------------------------------------
# ensemble execution
# ---------------------------------------------------------------------------


def _job(args) -> TrajectoryRecord:
    cfg, traj_id = args
    return run_trajectory(cfg, traj_id)


def _warmup() -> None:
    """Compile the hot kernels once (in the parent, before forking)."""
    cfg = ExperimentConfig(
        protocol="clifford1d", L=4, p=0.5, probe="i3", t_max=2, window=1, n_traj=1, seed=0
    )
    run_trajectory(cfg, 0)
    cfg = ExperimentConfig(
        protocol="ptfim1d", L=4, p=0.5, probe="i3", t_max=1, window=1, n_traj=1, seed=0
    )
    run_trajectory(cfg, 0)


def run_ensemble(cfg: ExperimentConfig, workers: int = 1) -> list[TrajectoryRecord]:
    """All trajectories of one config, in traj_id order."""
    cfg.validate()
    jobs = [(cfg, i) for i in range(cfg.n_traj)]
    if workers <= 1:
        return [_job(j) for j in jobs]
    _warmup()
    chunk = max(1, len(jobs) // (workers * 8))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        recs = list(pool.map(_job, jobs, chunksize=chunk))
    recs.sort(key=lambda r: r.traj_id)
    return recs


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def aggregate(cfg: ExperimentConfig, records: list[TrajectoryRecord]) -> list[dict]:
    """Reduce an ensemble to long-format rows (deterministic order)."""
    n = len(records)
    t_max = cfg.resolved_t_max()
    rows: list[dict] = []

    def push(t, name, value, stderr):
        rows.append(
            {
                "protocol": cfg.protocol,
                "L": cfg.L,
                "p": cfg.p,
                "t": t,
                "observable": name,
                "value": value,
                "stderr": stderr,
                "n_traj": n,
            }
        )

    obs = PROBE_OBSERVABLE.get(cfg.probe)
    if obs is not None and records and records[0].times.size:
        times = records[0].times
        stack = np.stack([r.values[obs] for r in records])  # (n, T)
        mean = stack.mean(axis=0)
        err = stack.std(axis=0, ddof=1) / np.sqrt(n) if n > 1 else np.zeros_like(mean)
        for k, t in enumerate(times):
            push(int(t), obs, float(mean[k]), float(err[k]))
        # steady-state scalar: trailing-window mean per trajectory
        w = min(cfg.window, times.size)
        steadies = np.array([steady_value(r.values[obs], w) for r in records])
        push(
            t_max,
            f"{obs}_steady",
            float(steadies.mean()),
            float(steadies.std(ddof=1) / np.sqrt(n)) if n > 1 else 0.0,
        )
        finals = stack[:, -1]
        push(
            t_max,
            f"{obs}_final",
            float(finals.mean()),
            float(finals.std(ddof=1) / np.sqrt(n)) if n > 1 else 0.0,
        )

    # cluster statistics of the final state
    vol = cfg.n_sites
    sbar = np.array(
        [float((r.cluster_sizes.astype(float) ** 2).sum() / r.cluster_sizes.sum()) for r in records]
    )
    smax = np.array([float(r.cluster_sizes.max()) for r in records])
    for name, arr in (
        ("mean_cluster_size", sbar),
        ("largest_cluster_size", smax),
        ("largest_cluster_frac", smax / vol),
    ):
        push(
            t_max,
            name,
            float(arr.mean()),
            float(arr.std(ddof=1) / np.sqrt(n)) if n > 1 else 0.0,
        )

    # cluster-number histograms: all components, and with the largest
    # component of each realization excluded (the percolating peak)
    for tag, drop in (("ns", False), ("nstail", True)):
        counts: dict[int, np.ndarray] = {}
        for k, r in enumerate(records):
            sizes = r.cluster_sizes
            if drop and sizes.size:
                sizes = np.delete(sizes, int(np.argmax(sizes)))
            for s in sizes:
                s = int(s)
                if s not in counts:
                    counts[s] = np.zeros(n)
                counts[s][k] += 1
        for s in sorted(counts):
            per_traj = counts[s] / vol
            push(
                t_max,
                f"{tag}_{s}",
                float(per_traj.mean()),
                float(per_traj.std(ddof=1) / np.sqrt(n)) if n > 1 else 0.0,
            )
    return rows


def write_csv(rows: list[dict], path: str) -> None:
    """Header plus rows in the documented column order; 17-digit floats."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow(
                [
                    row["protocol"],
                    row["L"],
                    _fmt(row["p"]),
                    row["t"],
                    row["observable"],
                    _fmt(row["value"]),
                    _fmt(row["stderr"]),
                    row["n_traj"],
                ]
            )


def read_csv(path: str) -> list[dict]:
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            out.append(
                {
                    "protocol": row["protocol"],
                    "L": int(row["L"]),
                    "p": float(row["p"]),
                    "t": int(row["t"]),
                    "observable": row["observable"],
                    "value": float(row["value"]),
                    "stderr": float(row["stderr"]),
                    "n_traj": int(row["n_traj"]),
                }
            )
    return out


def run_experiment(cfgs, workers: int = 1, out_dir: str = ".") -> RunManifest:
    """Run a config sweep, aggregate, and persist CSV plus manifest.

    A failure in any worker aborts the run and removes partial outputs.
    """
    if isinstance(cfgs, ExperimentConfig):
        cfgs = [cfgs]
    if not cfgs:
        raise ConfigError("empty experiment sweep")
    for cfg in cfgs:
        cfg.validate()
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, "observables.csv")
    manifest_path = os.path.join(out_dir, "manifest.json")
    rows: list[dict] = []
    try:
        for cfg in cfgs:
            recs = run_ensemble(cfg, workers=workers)
            rows.extend(aggregate(cfg, recs))
        rows.sort(
            key=lambda r: (r["protocol"], r["L"], r["p"], r["t"], r["observable"])
        )
        write_csv(rows, csv_path)
    except Exception:
        for path in (csv_path, manifest_path):
            if os.path.exists(path):
                os.remove(path)
        raise

    from . import __version__

    canon = json.dumps(
        [
            {
                "protocol": c.protocol,
                "L": c.L,
                "p": c.p,
                "boundary": c.boundary,
                "t_max": c.t_max,
                "t0": c.t0,
                "probe": c.probe,
                "window": c.window,
                "n_traj": c.n_traj,
                "seed": c.seed,
            }
            for c in cfgs
        ],
        sort_keys=True,
    )
    manifest = RunManifest(
        config_hash=hashlib.sha256(canon.encode()).hexdigest(),
        seed=cfgs[0].seed,
        n_traj=cfgs[0].n_traj,
        version=__version__,
        csv_paths=(csv_path,),
    )
    manifest.write(manifest_path)
    return manifest
