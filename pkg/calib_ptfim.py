"""Calibration: PTFIM 1+1D crossing + largest-cluster exponent; 1+1D Clifford cluster exponents."""
import time

import numpy as np

import miptlab as m
from miptlab.fss import crossing_estimate, fit_power_law


def ptfim_crossing():
    t0 = time.time()
    p_values = [0.44, 0.47, 0.50, 0.53, 0.56]
    curves = {}
    for L in (16, 32, 64):
        ys = []
        for p in p_values:
            cfg = m.ExperimentConfig(protocol="ptfim1d", L=L, p=p, probe="i3", n_traj=400, seed=101)
            recs = m.run_ensemble(cfg)
            vals = [r.steady("i3", 4) for r in recs]
            ys.append(np.mean(vals))
        curves[L] = np.array(ys)
        print(f"L={L}: {['%.3f' % v for v in ys]}  ({time.time()-t0:.0f}s)")
    pc = crossing_estimate(p_values, curves)
    print(f"PTFIM 1+1D crossing: {pc:.4f} (expect 0.5), elapsed {time.time()-t0:.0f}s")
    return pc


def ptfim_smax(pc):
    t0 = time.time()
    sizes = [32, 64, 128, 256]
    fr, fe = [], []
    for L in sizes:
        n_traj = 400 if L <= 128 else 250
        cfg = m.ExperimentConfig(protocol="ptfim1d", L=L, p=pc, probe="none", n_traj=n_traj, seed=202)
        recs = m.run_ensemble(cfg)
        fracs = [r.cluster_sizes.max() / L for r in recs]
        fr.append(np.mean(fracs))
        fe.append(np.std(fracs) / np.sqrt(len(fracs)))
        print(f"L={L}: smax/L = {fr[-1]:.4f} +- {fe[-1]:.4f}  ({time.time()-t0:.0f}s)")
    res = fit_power_law(np.array(sizes, float), np.array(fr), errs=np.array(fe))
    print(f"PTFIM beta_ec/nu = {-res.params['exponent']:.3f} +- {res.errors['exponent']:.3f} (expect 0.332)")


def clifford_clusters(pc=0.16):
    t0 = time.time()
    sizes = [32, 64, 128, 256]
    sb, se, fr, fe = [], [], [], []
    for L in sizes:
        n_traj = 400 if L <= 128 else 250
        cfg = m.ExperimentConfig(protocol="clifford1d", L=L, p=pc, probe="none", n_traj=n_traj, seed=303)
        recs = m.run_ensemble(cfg)
        sbar = [float((r.cluster_sizes.astype(float) ** 2).sum() / r.cluster_sizes.sum()) for r in recs]
        fracs = [r.cluster_sizes.max() / L for r in recs]
        sb.append(np.mean(sbar)); se.append(np.std(sbar) / np.sqrt(len(sbar)))
        fr.append(np.mean(fracs)); fe.append(np.std(fracs) / np.sqrt(len(fracs)))
        print(f"L={L}: sbar={sb[-1]:.2f}+-{se[-1]:.2f} smax/L={fr[-1]:.4f}+-{fe[-1]:.4f} ({time.time()-t0:.0f}s)")
    r1 = fit_power_law(np.array(sizes, float), np.array(sb), errs=np.array(se))
    r2 = fit_power_law(np.array(sizes, float), np.array(fr), errs=np.array(fe))
    print(f"Clifford 1+1D gamma_ec/nu = {r1.params['exponent']:.3f} +- {r1.errors['exponent']:.3f} (expect 0.95)")
    print(f"Clifford 1+1D -beta_ec/nu = {r2.params['exponent']:.3f} +- {r2.errors['exponent']:.3f} (expect ~0.009)")


if __name__ == "__main__":
    pc = ptfim_crossing()
    ptfim_smax(pc)
    clifford_clusters()
