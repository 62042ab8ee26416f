"""Calibration: 2+1D critical dynamics fit, purification, I3 crossing + collapse."""
import sys
import time

import numpy as np

import miptlab as m
from miptlab.fss import CollapsePoint, crossing_estimate, dynamics_collapse, optimize_collapse
from miptlab.protocols import window_average


def dynamics(L=32, n_traj=120):
    t0 = time.time()
    cfg = m.ExperimentConfig(protocol="clifford2d", L=L, p=0.312, probe="half_entropy", n_traj=n_traj, seed=11)
    recs = m.run_ensemble(cfg)
    stack = np.stack([r.values["half_entropy"] for r in recs])
    mean = stack.mean(axis=0)
    times = recs[0].times.astype(float)
    w = 4
    tb = window_average(times, w)
    sb = window_average(mean, w)
    keep = (tb >= L / 2) & (tb <= 3 * L)
    x1 = 1.0 / tb[keep]
    x2 = np.log(tb[keep])
    y = sb[keep] / L
    for name, x in (("1/t", x1), ("log t", x2)):
        k, c = np.polyfit(x, y, 1)
        pred = k * x + c
        ss_res = ((y - pred) ** 2).sum()
        ss_tot = ((y - y.mean()) ** 2).sum()
        r2 = 1 - ss_res / ss_tot
        print(f"fit vs {name}: R^2 = {r2:.5f}")
    print(f"dynamics elapsed {time.time()-t0:.0f}s; S/L at late times ~ {sb[-1]/L:.3f}")


def purification():
    t0 = time.time()
    p_values = [0.26, 0.28, 0.30, 0.32, 0.34, 0.36]
    for L in (8, 12):
        row = []
        for p in p_values:
            cfg = m.ExperimentConfig(protocol="clifford2d", L=L, p=p, probe="purification", n_traj=150, seed=21)
            recs = m.run_ensemble(cfg)
            finals = [r.values["entropy_density"][-1] for r in recs]
            row.append((np.mean(finals), np.std(finals) / np.sqrt(len(finals))))
        print(f"L={L}: " + " ".join(f"{v:.4f}({e:.4f})" for v, e in row) + f" ({time.time()-t0:.0f}s)")
    # z collapse at p=0.312
    curves = {}
    for L in (8, 12, 16):
        cfg = m.ExperimentConfig(protocol="clifford2d", L=L, p=0.312, probe="purification", n_traj=200, seed=22)
        recs = m.run_ensemble(cfg)
        stack = np.stack([r.values["entropy_density"] for r in recs])
        ts = recs[0].times.astype(float)
        keep = ts >= 2
        mean = stack.mean(axis=0)[keep]
        err = stack.std(axis=0, ddof=1)[keep] / np.sqrt(len(recs))
        curves[L] = (ts[keep], mean, np.maximum(err, 1e-6))
    res = dynamics_collapse(curves, kind="z", exponent_range=(0.6, 1.6), t_min=2.0)
    print(f"z = {res.params['exponent']:.3f} +- {res.errors['exponent']:.3f} (expect ~1.07), elapsed {time.time()-t0:.0f}s")


def i3_crossing(n_traj=400):
    t0 = time.time()
    p_values = [0.28, 0.29, 0.30, 0.31, 0.32, 0.33, 0.34]
    pts = []
    curves = {}
    for L in (8, 12, 16):
        ys = []
        for p in p_values:
            cfg = m.ExperimentConfig(protocol="clifford2d", L=L, p=p, probe="i3", n_traj=n_traj, seed=31)
            recs = m.run_ensemble(cfg)
            vals = [r.steady("i3", 4) for r in recs]
            mu = float(np.mean(vals))
            se = float(np.std(vals, ddof=1) / np.sqrt(len(vals)))
            ys.append(mu)
            pts.append(CollapsePoint(p=p, L=L, y=mu, d=max(se, 1e-9)))
        curves[L] = np.array(ys)
        print(f"L={L}: {['%.3f' % v for v in ys]} ({time.time()-t0:.0f}s)")
    pc = crossing_estimate(p_values, curves)
    print(f"2+1D crossing: {pc:.4f} (expect 0.312 +- 0.015)")
    res = optimize_collapse(pts, (0.28, 0.345), (0.4, 1.6))
    print(f"collapse: p_c={res.p_c:.4f}+-{res.p_c_err:.4f} nu={res.nu:.3f}+-{res.nu_err:.3f} "
          f"eps={res.eps_min:.2f} boundary={res.boundary_hit} connected={res.region_connected}")
    print(f"elapsed {time.time()-t0:.0f}s")


if __name__ == "__main__":
    which = sys.argv[1] if len(sys.argv) > 1 else "all"
    if which in ("all", "dyn"):
        dynamics()
    if which in ("all", "pur"):
        purification()
    if which in ("all", "i3"):
        i3_crossing()
