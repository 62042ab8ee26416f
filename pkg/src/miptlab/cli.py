"""Command-line interface.

Subcommands map onto the analyses: ``run`` executes a config sweep,
``collapse`` fits (p_c, nu) from a CSV, ``fit`` does power-law fits,
``clusters`` fits the cluster-size tail, ``perc`` runs percolation
baselines, ``selftest`` exercises the toolkit on synthetic data.

Exit codes: 0 success, 2 config error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np


def _cmd_run(args) -> int:
    from .harness import ConfigError, parse_config, run_experiment

    try:
        cfgs = parse_config(args.config)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    if args.seed is not None:
        from dataclasses import replace

        cfgs = [replace(c, seed=args.seed) for c in cfgs]
    manifest = run_experiment(cfgs, workers=args.workers, out_dir=args.out)
    print(f"wrote {manifest.csv_paths[0]}")
    return 0


def _collapse_points(rows, observable):
    from .fss import CollapsePoint

    pts = []
    for r in rows:
        if r["observable"] == observable:
            pts.append(CollapsePoint(p=r["p"], L=r["L"], y=r["value"], d=max(r["stderr"], 1e-9)))
    if not pts:
        raise ValueError(f"no rows with observable {observable!r}")
    return pts


def _cmd_collapse(args) -> int:
    from .fss import optimize_collapse
    from .harness import read_csv

    rows = read_csv(args.csv)
    pts = _collapse_points(rows, args.observable)
    res = optimize_collapse(
        pts,
        p_range=tuple(args.p_range),
        nu_range=tuple(args.nu_range),
        prefactor_power=args.prefactor_power,
    )
    landscape_path = args.out.replace(".json", "_landscape.csv")
    with open(landscape_path, "w") as fh:
        fh.write("p_c,nu,eps\n")
        for i, pc in enumerate(res.p_grid):
            for j, nu in enumerate(res.nu_grid):
                fh.write(f"{pc:.17g},{nu:.17g},{res.eps_grid[i, j]:.17g}\n")
    report = res.to_dict()
    report["landscape_path"] = landscape_path
    report["observable"] = args.observable
    with open(args.out, "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(
        f"p_c = {res.p_c:.4f} +- {res.p_c_err:.4f}, nu = {res.nu:.3f} +- {res.nu_err:.3f}"
        f" (eps_min = {res.eps_min:.3f})"
    )
    return 0


def _cmd_fit(args) -> int:
    from .fss import fit_power_law
    from .harness import read_csv

    rows = read_csv(args.csv)
    sel = [
        r
        for r in rows
        if r["observable"] == args.observable and (args.p is None or abs(r["p"] - args.p) < 1e-12)
    ]
    if not sel:
        print("no matching rows", file=sys.stderr)
        return 2
    xs = np.array([r["L"] for r in sel], float)
    ys = np.array([r["value"] for r in sel], float)
    es = np.array([max(r["stderr"], 1e-9) for r in sel], float)
    res = fit_power_law(xs, ys, with_constant=args.with_constant, errs=es)
    with open(args.out, "w") as fh:
        json.dump({"params": res.params, "errors": res.errors, "residual": res.residual}, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(json.dumps(res.params))
    return 0


def _cmd_clusters(args) -> int:
    from .clusters import tail_window
    from .fss import fit_cluster_tail
    from .harness import read_csv

    rows = read_csv(args.csv)
    sel = [
        r
        for r in rows
        if r["observable"].startswith("nstail_")
        and r["L"] == args.L
        and (args.p is None or abs(r["p"] - args.p) < 1e-12)
    ]
    if not sel:
        print("no matching nstail rows", file=sys.stderr)
        return 2
    sizes = np.array([int(r["observable"].split("_")[1]) for r in sel], float)
    ns = np.array([r["value"] for r in sel], float)
    errs = np.array([max(r["stderr"], 1e-12) for r in sel], float)
    dim = 1 if sel[0]["protocol"].endswith("1d") else 2
    window = tail_window(args.L**dim)
    res = fit_cluster_tail(sizes, ns, window, errs=errs)
    with open(args.out, "w") as fh:
        json.dump(
            {
                "params": res.params,
                "errors": res.errors,
                "window": list(window),
                "converged": res.converged,
            },
            fh,
            indent=2,
            sort_keys=True,
        )
        fh.write("\n")
    print(json.dumps(res.params))
    return 0


def _cmd_perc(args) -> int:
    from .percolation import PercConfig, perc_realization, surface_cluster_stats

    dims = tuple(args.dims)
    rows = []
    for r in range(args.realizations):
        labels = perc_realization(
            PercConfig(kind=args.kind, dims=dims, p=args.p, seed=args.seed + r)
        )
        stats = surface_cluster_stats(labels, dims)
        rows.append((r, stats.s_mean, stats.s_max))
    with open(args.out, "w") as fh:
        fh.write("realization,surface_mean_cluster,surface_largest\n")
        for r, sm, sx in rows:
            fh.write(f"{r},{sm:.17g},{sx}\n")
    print(f"wrote {args.out}")
    return 0


def _cmd_selftest(args) -> int:
    from .fss import (
        CollapsePoint,
        cost_function,
        optimize_collapse,
        synthetic_collapse_points,
    )

    ok = True
    # exact collinear data must give eps == 0
    pts = [CollapsePoint(p=p, L=L, y=2.0 * (p - 0.5) * L, d=0.01) for L in (8, 16, 32) for p in (0.4, 0.5, 0.6)]
    eps = cost_function(pts, 0.5, 1.0)
    line = "collinear eps == 0"
    if eps < 1e-12:
        print(f"PASS {line} ({eps:.2e})")
    else:
        print(f"FAIL {line} ({eps:.2e})")
        ok = False

    hits = 0
    n_rep = 20
    for rep in range(n_rep):
        pts = synthetic_collapse_points(
            p_c=0.31, nu=0.9, Ls=(8, 12, 16, 24), p_values=np.linspace(0.25, 0.37, 13),
            noise=0.01, seed=1000 + rep,
        )
        res = optimize_collapse(pts, (0.27, 0.35), (0.5, 1.5))
        if (
            abs(res.p_c - 0.31) <= max(res.p_c_err, 1e-4) + 1e-9
            and abs(res.nu - 0.9) <= max(res.nu_err, 1e-3) + 1e-9
        ):
            hits += 1
    line = f"synthetic recovery {hits}/{n_rep}"
    if hits >= int(0.9 * n_rep):
        print(f"PASS {line}")
    else:
        print(f"FAIL {line}")
        ok = False
    return 0 if ok else 3


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="miptlab", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    p_run = sub.add_parser("run", help="run an experiment config")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--workers", type=int, default=1)
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--out", default=".")
    p_run.set_defaults(func=_cmd_run)

    p_col = sub.add_parser("collapse", help="fit (p_c, nu) by data collapse")
    p_col.add_argument("--csv", required=True)
    p_col.add_argument("--observable", default="i3_steady")
    p_col.add_argument("--p-range", type=float, nargs=2, required=True)
    p_col.add_argument("--nu-range", type=float, nargs=2, required=True)
    p_col.add_argument("--prefactor-power", type=float, default=0.0)
    p_col.add_argument("--out", required=True)
    p_col.set_defaults(func=_cmd_collapse)

    p_fit = sub.add_parser("fit", help="power-law fit of an observable vs L")
    p_fit.add_argument("--csv", required=True)
    p_fit.add_argument("--observable", required=True)
    p_fit.add_argument("--p", type=float, default=None)
    p_fit.add_argument("--with-constant", action="store_true")
    p_fit.add_argument("--out", required=True)
    p_fit.set_defaults(func=_cmd_fit)

    p_cl = sub.add_parser("clusters", help="cluster-size tail fit from nstail rows")
    p_cl.add_argument("--csv", required=True)
    p_cl.add_argument("--L", type=int, required=True)
    p_cl.add_argument("--p", type=float, default=None)
    p_cl.add_argument("--out", required=True)
    p_cl.set_defaults(func=_cmd_clusters)

    p_pc = sub.add_parser("perc", help="percolation baseline realizations")
    p_pc.add_argument("--kind", choices=("site", "bond"), required=True)
    p_pc.add_argument("--dims", type=int, nargs="+", required=True)
    p_pc.add_argument("--p", type=float, required=True)
    p_pc.add_argument("--realizations", type=int, default=10)
    p_pc.add_argument("--seed", type=int, default=0)
    p_pc.add_argument("--out", required=True)
    p_pc.set_defaults(func=_cmd_perc)

    p_st = sub.add_parser("selftest", help="synthetic finite-size-scaling self-test")
    p_st.set_defaults(func=_cmd_selftest)

    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failures
        print(f"runtime error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
