"""Full dry-run of the PTFIM acceptance pipeline."""
import time

import numpy as np

import miptlab as m
from miptlab.fss import fit_power_law


def locate_crossing(seed=909, n_traj=1200):
    p_values = np.array([0.48, 0.49, 0.50, 0.51, 0.52])
    lines = {}
    t0 = time.time()
    for L in (64, 128):
        ys, es = [], []
        for p in p_values:
            cfg = m.ExperimentConfig(
                protocol="ptfim1d", L=L, p=float(p), probe="i3", window=L // 2,
                n_traj=n_traj, seed=seed,
            )
            recs = m.run_ensemble(cfg)
            vals = np.array([r.steady("i3", L // 2) for r in recs])
            ys.append(vals.mean())
            es.append(vals.std(ddof=1) / np.sqrt(len(vals)))
        w = 1.0 / np.array(es) ** 2
        (k, c), cov = np.polyfit(p_values, ys, 1, w=np.sqrt(w), cov=True)
        lines[L] = (k, c)
        print(f"L={L}: ys={['%.3f' % y for y in ys]} slope={k:.2f} ({time.time()-t0:.0f}s)")
    (k1, c1), (k2, c2) = lines[64], lines[128]
    pc = (c1 - c2) / (k2 - k1)
    print(f"crossing-located p_c = {pc:.4f}")
    return float(pc)


def exponent(pc, seed=910):
    t0 = time.time()
    sizes = [32, 64, 128, 256]
    fr, fe = [], []
    for L in sizes:
        n_traj = 400 if L <= 128 else 250
        cfg = m.ExperimentConfig(protocol="ptfim1d", L=L, p=pc, probe="none", n_traj=n_traj, seed=seed)
        recs = m.run_ensemble(cfg)
        fracs = [r.cluster_sizes.max() / L for r in recs]
        fr.append(np.mean(fracs))
        fe.append(np.std(fracs) / np.sqrt(len(fracs)))
    res = fit_power_law(np.array(sizes, float), np.array(fr), errs=np.array(fe))
    print(f"beta_ec/nu = {-res.params['exponent']:.3f} +- {res.errors['exponent']:.3f} ({time.time()-t0:.0f}s)")


if __name__ == "__main__":
    t0 = time.time()
    pc = locate_crossing()
    exponent(pc)
    print(f"total {time.time()-t0:.0f}s")
