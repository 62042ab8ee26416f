"""Finite-size-scaling toolkit.

Data collapse uses the linear-interpolation cost: after mapping each
point to x = (p - p_c) L^(1/nu) (optionally rescaling y by L^a), every
interior point of the x-sorted sequence is compared with the straight
line through its two neighbors, normalized by the propagated errors.
Values near 1 indicate a collapse compatible with the error bars.
Parameter error bars are read off the region where the cost is below
twice its minimum.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import curve_fit, least_squares

__all__ = [
    "CollapsePoint",
    "CollapseResult",
    "FitResult",
    "cost_function",
    "interpolation_cost",
    "optimize_collapse",
    "dynamics_collapse",
    "fit_power_law",
    "fit_cluster_tail",
    "bootstrap",
    "crossing_estimate",
    "synthetic_collapse_points",
]

_D_FLOOR = 1e-12


@dataclass(frozen=True)
class CollapsePoint:
    """One (tuning parameter, size) observation with its standard error."""

    p: float
    L: int
    y: float
    d: float


@dataclass
class CollapseResult:
    p_c: float
    nu: float
    eps_min: float
    p_c_err: float
    nu_err: float
    boundary_hit: bool
    region_connected: bool
    p_grid: np.ndarray = field(repr=False)
    nu_grid: np.ndarray = field(repr=False)
    eps_grid: np.ndarray = field(repr=False)

    def to_dict(self) -> dict:
        return {
            "p_c": self.p_c,
            "nu": self.nu,
            "eps_min": self.eps_min,
            "p_c_err": self.p_c_err,
            "nu_err": self.nu_err,
            "boundary_hit": self.boundary_hit,
            "region_connected": self.region_connected,
        }


@dataclass
class FitResult:
    params: dict
    errors: dict
    residual: float
    converged: bool = True


def _merge_coincident(x: np.ndarray, y: np.ndarray, d: np.ndarray):
    """Combine runs of (numerically) equal x by inverse-variance weighting.

    Different sizes can land on the same scaled abscissa (e.g. p = p_c,
    or t = t0 in dynamics collapses); the neighbor-span division is
    singular there, and the statistically correct treatment is a single
    pooled measurement.
    """
    if x.shape[0] < 2:
        return x, y, d
    tol = max(1e-300, (x[-1] - x[0]) * 1e-9)
    out_x, out_y, out_d = [], [], []
    i = 0
    n = x.shape[0]
    while i < n:
        j = i + 1
        while j < n and x[j] - x[i] <= tol:
            j += 1
        if j == i + 1:
            out_x.append(x[i])
            out_y.append(y[i])
            out_d.append(d[i])
        else:
            wts = 1.0 / d[i:j] ** 2
            out_x.append(float(x[i:j].mean()))
            out_y.append(float((y[i:j] * wts).sum() / wts.sum()))
            out_d.append(float(np.sqrt(1.0 / wts.sum())))
        i = j
    return np.asarray(out_x), np.asarray(out_y), np.asarray(out_d)


def interpolation_cost(x: np.ndarray, y: np.ndarray, d: np.ndarray) -> float:
    """Mean squared deviation of interior points from their neighbors' line.

    Input arrays must be sorted by x. Standard errors of zero are floored;
    coincident abscissas are pooled first.
    """
    if x.shape[0] < 3:
        raise ValueError("need at least 3 points")
    d = np.maximum(d, _D_FLOOR)
    x, y, d = _merge_coincident(x, y, d)
    n = x.shape[0]
    if n < 3:
        raise ValueError("fewer than 3 distinct abscissas after pooling")
    xm, x0, xp = x[:-2], x[1:-1], x[2:]
    ym, y0, yp = y[:-2], y[1:-1], y[2:]
    dm, d0, dp = d[:-2], d[1:-1], d[2:]
    span = xp - xm
    ybar = ((xp - x0) * ym - (xm - x0) * yp) / span
    var = d0**2 + ((xp - x0) / span) ** 2 * dm**2 + ((xm - x0) / span) ** 2 * dp**2
    w = (y0 - ybar) ** 2 / var
    return float(w.mean())


def _scaled_sorted(points, p_c: float, nu: float, prefactor_power: float):
    xs = np.array([(pt.p - p_c) * pt.L ** (1.0 / nu) for pt in points])
    ys = np.array([pt.y * pt.L**prefactor_power for pt in points])
    ds = np.array([pt.d * pt.L**prefactor_power for pt in points])
    # deterministic ordering: x, then L, then p
    order = np.lexsort(
        (
            np.array([pt.p for pt in points]),
            np.array([pt.L for pt in points]),
            xs,
        )
    )
    return xs[order], ys[order], ds[order]


def cost_function(points, p_c: float, nu: float, prefactor_power: float = 0.0) -> float:
    """Collapse cost for the ansatz y L^a = F[(p - p_c) L^(1/nu)].

    ``prefactor_power`` a = 0 tests a size-independent crossing; a = -1
    reproduces the y/L variant.
    """
    if len(points) < 3:
        raise ValueError("need at least 3 points")
    if nu <= 0:
        raise ValueError("nu must be positive")
    x, y, d = _scaled_sorted(points, p_c, nu, prefactor_power)
    return interpolation_cost(x, y, d)


def _pattern_search(f, x0, steps, lo, hi, tol=1e-6, max_iter=200):
    """Deterministic coordinate descent with shrinking steps."""
    x = np.asarray(x0, dtype=float)
    fx = f(x)
    steps = np.asarray(steps, dtype=float)
    for _ in range(max_iter):
        improved = False
        for k in range(x.size):
            for sgn in (1.0, -1.0):
                trial = x.copy()
                trial[k] = np.clip(trial[k] + sgn * steps[k], lo[k], hi[k])
                ft = f(trial)
                if ft < fx - 1e-15:
                    x, fx = trial, ft
                    improved = True
        if not improved:
            steps = steps / 2.0
            if np.all(steps < tol):
                break
    return x, fx


def _connected_region(mask: np.ndarray, start: tuple[int, int]) -> bool:
    """True if all set cells of the mask are 4-connected to ``start``."""
    if not mask[start]:
        return False
    seen = np.zeros_like(mask, dtype=bool)
    stack = [start]
    seen[start] = True
    while stack:
        i, j = stack.pop()
        for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            a, b = i + di, j + dj
            if 0 <= a < mask.shape[0] and 0 <= b < mask.shape[1]:
                if mask[a, b] and not seen[a, b]:
                    seen[a, b] = True
                    stack.append((a, b))
    return bool((seen == mask).all())


def optimize_collapse(
    points,
    p_range: tuple[float, float],
    nu_range: tuple[float, float],
    prefactor_power: float = 0.0,
    grid: int = 51,
) -> CollapseResult:
    """Grid scan plus coordinate-descent refinement of (p_c, nu).

    Error bars are the half-widths of the bounding box of the region with
    eps < 2 eps_min, evaluated on a zoomed grid around the optimum. A
    minimum on the search boundary or a disconnected error region is
    flagged on the result rather than silently returned.
    """
    p_lo, p_hi = p_range
    nu_lo, nu_hi = nu_range
    pg = np.linspace(p_lo, p_hi, grid)
    ng = np.linspace(nu_lo, nu_hi, grid)
    eps = np.empty((grid, grid))
    for i, pc in enumerate(pg):
        for j, nu in enumerate(ng):
            eps[i, j] = cost_function(points, pc, nu, prefactor_power)
    i0, j0 = np.unravel_index(np.argmin(eps), eps.shape)

    f = lambda v: cost_function(points, v[0], v[1], prefactor_power)
    step = np.array([pg[1] - pg[0], ng[1] - ng[0]])
    (pc_best, nu_best), eps_min = _pattern_search(
        f, np.array([pg[i0], ng[j0]]), step, np.array([p_lo, nu_lo]), np.array([p_hi, nu_hi])
    )

    boundary_hit = bool(
        np.isclose(pc_best, p_lo)
        or np.isclose(pc_best, p_hi)
        or np.isclose(nu_best, nu_lo)
        or np.isclose(nu_best, nu_hi)
    )

    # zoomed landscape around the coarse 2-eps region for the error box
    mask = eps < 2.0 * eps_min
    if mask.any():
        sel_p = pg[mask.any(axis=1)]
        sel_n = ng[mask.any(axis=0)]
        dp = max(sel_p.max() - sel_p.min(), 2 * step[0])
        dn = max(sel_n.max() - sel_n.min(), 2 * step[1])
    else:
        dp, dn = 2 * step[0], 2 * step[1]
    zp_lo = max(p_lo, pc_best - 0.75 * dp)
    zp_hi = min(p_hi, pc_best + 0.75 * dp)
    zn_lo = max(nu_lo, nu_best - 0.75 * dn)
    zn_hi = min(nu_hi, nu_best + 0.75 * dn)
    zpg = np.linspace(zp_lo, zp_hi, grid)
    zng = np.linspace(zn_lo, zn_hi, grid)
    zeps = np.empty((grid, grid))
    for i, pc in enumerate(zpg):
        for j, nu in enumerate(zng):
            zeps[i, j] = cost_function(points, pc, nu, prefactor_power)
    zmask = zeps < 2.0 * eps_min
    iz = int(np.argmin(np.abs(zpg - pc_best)))
    jz = int(np.argmin(np.abs(zng - nu_best)))
    zmask[iz, jz] = True  # numerical safety: the optimum belongs to its region
    region_connected = _connected_region(zmask, (iz, jz))
    p_sel = zpg[zmask.any(axis=1)]
    n_sel = zng[zmask.any(axis=0)]
    p_err = float((p_sel.max() - p_sel.min()) / 2) if p_sel.size else float(step[0])
    nu_err = float((n_sel.max() - n_sel.min()) / 2) if n_sel.size else float(step[1])

    return CollapseResult(
        p_c=float(pc_best),
        nu=float(nu_best),
        eps_min=float(eps_min),
        p_c_err=p_err,
        nu_err=nu_err,
        boundary_hit=boundary_hit,
        region_connected=region_connected,
        p_grid=zpg,
        nu_grid=zng,
        eps_grid=zeps,
    )


def dynamics_collapse(
    curves: dict,
    kind: str = "z",
    exponent_range: tuple[float, float] = (0.5, 2.0),
    t0: float = 0.0,
    t_min: float = 0.0,
    grid: int = 201,
) -> FitResult:
    """Collapse time series from several sizes onto one curve.

    curves: {L: (times, values, errors)}. kind "z" collapses (t/L^z, y);
    kind "prefactor" collapses ((t - t0)/L, L^(1+eta) y) with eta the
    fitted exponent. Times below t_min are excluded (non-universal early
    dynamics).
    """
    if len(curves) < 3:
        raise ValueError("need series from at least 3 sizes")
    data = []
    for L, (ts, ys, ds) in sorted(curves.items()):
        ts = np.asarray(ts, float)
        ys = np.asarray(ys, float)
        ds = np.asarray(ds, float)
        keep = ts >= t_min
        data.append((float(L), ts[keep], ys[keep], ds[keep]))

    def cost(expo: float) -> float:
        xs, ys, ds, ls = [], [], [], []
        for L, t, y, d in data:
            if kind == "z":
                xs.append(t / L**expo)
                ys.append(y)
                ds.append(d)
            elif kind == "prefactor":
                xs.append((t - t0) / L)
                ys.append(y * L ** (1.0 + expo))
                ds.append(d * L ** (1.0 + expo))
            else:
                raise ValueError(f"unknown collapse kind {kind!r}")
            ls.append(np.full(t.shape, L))
        x = np.concatenate(xs)
        y = np.concatenate(ys)
        d = np.concatenate(ds)
        lab = np.concatenate(ls)
        order = np.lexsort((lab, x))
        return interpolation_cost(x[order], y[order], d[order])

    es = np.linspace(exponent_range[0], exponent_range[1], grid)
    vals = np.array([cost(e) for e in es])
    k0 = int(np.argmin(vals))
    (best,), eps_min = _pattern_search(
        lambda v: cost(v[0]),
        np.array([es[k0]]),
        np.array([es[1] - es[0]]),
        np.array([exponent_range[0]]),
        np.array([exponent_range[1]]),
    )
    inside = es[vals < 2.0 * eps_min]
    err = float((inside.max() - inside.min()) / 2) if inside.size else float(es[1] - es[0])
    return FitResult(
        params={"exponent": float(best), "eps_min": float(eps_min)},
        errors={"exponent": err},
        residual=float(eps_min),
    )


def fit_power_law(xs, ys, with_constant: bool = False, errs=None) -> FitResult:
    """Fit y = a x^k (log-log least squares) or y = a x^k + b.

    The constant-corrected form runs an outer 1-d search over the
    exponent with an inner linear solve for (a, b), then polishes with a
    full nonlinear fit for the covariance.
    """
    xs = np.asarray(xs, float)
    ys = np.asarray(ys, float)
    if xs.size < 3:
        raise ValueError("need at least 3 points")
    if not with_constant:
        if np.any(ys <= 0) or np.any(xs <= 0):
            raise ValueError("log-log fit needs positive data")
        lx, ly = np.log(xs), np.log(ys)
        w = None
        if errs is not None:
            w = np.asarray(errs, float) / ys  # log-space errors
        A = np.vstack([lx, np.ones_like(lx)]).T
        if w is not None:
            A = A / w[:, None]
            b = ly / w
        else:
            b = ly
        coef, res, *_ = np.linalg.lstsq(A, b, rcond=None)
        k, loga = coef
        dof = max(1, xs.size - 2)
        resid = ly - (k * lx + loga)
        if w is not None:
            resid = resid / w
        s2 = float(resid @ resid) / dof
        cov = s2 * np.linalg.inv(A.T @ A)
        return FitResult(
            params={"exponent": float(k), "amplitude": float(np.exp(loga))},
            errors={"exponent": float(np.sqrt(cov[0, 0]))},
            residual=float(resid @ resid),
        )

    # outer scan over the exponent, inner linear solve for (a, b)
    def inner(k):
        X = np.vstack([xs**k, np.ones_like(xs)]).T
        coef, *_ = np.linalg.lstsq(X, ys, rcond=None)
        r = ys - X @ coef
        return float(r @ r), coef

    k_grid = np.linspace(0.01, 3.0, 300)
    sses = [inner(k)[0] for k in k_grid]
    k0 = float(k_grid[int(np.argmin(sses))])
    (k_best,), _ = _pattern_search(
        lambda v: inner(v[0])[0],
        np.array([k0]),
        np.array([k_grid[1] - k_grid[0]]),
        np.array([0.001]),
        np.array([5.0]),
    )
    _, (a0, b0) = inner(k_best)

    def model(x, a, k, b):
        return a * x**k + b

    sigma = np.asarray(errs, float) if errs is not None else None
    try:
        popt, pcov = curve_fit(
            model, xs, ys, p0=(a0, k_best, b0), sigma=sigma, maxfev=20000
        )
        perr = np.sqrt(np.diag(pcov))
        resid = ys - model(xs, *popt)
        return FitResult(
            params={"amplitude": float(popt[0]), "exponent": float(popt[1]), "offset": float(popt[2])},
            errors={"amplitude": float(perr[0]), "exponent": float(perr[1]), "offset": float(perr[2])},
            residual=float(resid @ resid),
        )
    except RuntimeError:
        resid, _ = inner(k_best)
        return FitResult(
            params={"amplitude": float(a0), "exponent": float(k_best), "offset": float(b0)},
            errors={"amplitude": float("nan"), "exponent": float("nan"), "offset": float("nan")},
            residual=float(resid),
            converged=False,
        )


def fit_cluster_tail(sizes, ns, window: tuple[int, int], errs=None) -> FitResult:
    """Fit n_s = s^(-tau) (c0 + c1 s^(-Omega)) in log space over ``window``.

    The percolating peak must already be excluded from the histogram.
    """
    sizes = np.asarray(sizes, float)
    ns = np.asarray(ns, float)
    lo, hi = window
    keep = (sizes >= lo) & (sizes <= hi) & (ns > 0)
    s = sizes[keep]
    y = np.log(ns[keep])
    if s.size < 5:
        raise ValueError("empty or too-small fit window")
    w = None
    if errs is not None:
        w = np.asarray(errs, float)[keep] / ns[keep]
        w = np.maximum(w, 1e-9)

    # plain power law seeds the nonlinear fit
    seed_fit = np.polyfit(np.log(s), y, 1)
    tau0, logc0 = -seed_fit[0], seed_fit[1]

    def resid(theta):
        tau, omega, c0, c1 = theta
        base = c0 + c1 * s ** (-omega)
        base = np.maximum(base, 1e-12)
        r = (-tau * np.log(s) + np.log(base)) - y
        return r / w if w is not None else r

    theta0 = np.array([tau0, 0.5, np.exp(logc0), 0.0])
    sol = least_squares(
        resid,
        theta0,
        bounds=([0.5, 0.01, 1e-12, -np.inf], [4.0, 4.0, np.inf, np.inf]),
        max_nfev=20000,
    )
    tau, omega, c0, c1 = sol.x
    # covariance from the jacobian at the solution
    try:
        dof = max(1, s.size - 4)
        jtj = sol.jac.T @ sol.jac
        cov = np.linalg.pinv(jtj) * 2 * sol.cost / dof
        errs_out = np.sqrt(np.abs(np.diag(cov)))
    except np.linalg.LinAlgError:
        errs_out = np.full(4, np.nan)
    return FitResult(
        params={"tau": float(tau), "omega": float(omega), "c0": float(c0), "c1": float(c1)},
        errors={
            "tau": float(errs_out[0]),
            "omega": float(errs_out[1]),
            "c0": float(errs_out[2]),
            "c1": float(errs_out[3]),
        },
        residual=float(2 * sol.cost),
        converged=bool(sol.success),
    )


def bootstrap(fit, rows, n_resamples: int, seed: int = 0):
    """Resample rows with replacement, refit, report (mean, std, samples)."""
    if n_resamples < 100:
        raise ValueError("need at least 100 resamples")
    rng = np.random.default_rng(seed)
    rows = list(rows)
    n = len(rows)
    out = []
    for _ in range(n_resamples):
        idx = rng.integers(0, n, size=n)
        out.append(fit([rows[i] for i in idx]))
    samples = np.asarray(out, dtype=float)
    return float(samples.mean()), float(samples.std(ddof=1)), samples


def crossing_estimate(p_values, curves_by_L: dict) -> float:
    """Average pairwise crossing of y(p) curves for successive sizes.

    curves_by_L maps L -> array of y values on the common p grid.
    """
    p = np.asarray(p_values, float)
    Ls = sorted(curves_by_L)
    if len(Ls) < 2:
        raise ValueError("need curves for at least 2 sizes")
    crossings = []
    for a in range(len(Ls) - 1):
        d = np.asarray(curves_by_L[Ls[a + 1]], float) - np.asarray(
            curves_by_L[Ls[a]], float
        )
        for i in range(d.size - 1):
            if d[i] == 0.0:
                crossings.append(float(p[i]))
            elif d[i] * d[i + 1] < 0:
                crossings.append(
                    float(p[i] - d[i] * (p[i + 1] - p[i]) / (d[i + 1] - d[i]))
                )
    if not crossings:
        raise ValueError("curves do not cross on the scanned grid")
    return float(np.mean(crossings))


def synthetic_collapse_points(
    p_c: float,
    nu: float,
    Ls,
    p_values,
    noise: float,
    seed: int = 0,
    scale=None,
) -> list[CollapsePoint]:
    """Noisy samples from an exact single-parameter scaling function.

    Used by the toolkit self-test: optimize_collapse must recover
    (p_c, nu) within the 2-eps error region.
    """
    rng = np.random.default_rng(seed)
    if scale is None:
        scale = lambda u: -0.5 * (1.0 + np.tanh(u)) + 0.05 * u
    pts = []
    for L in Ls:
        for p in p_values:
            u = (p - p_c) * L ** (1.0 / nu)
            y = scale(u) + noise * rng.standard_normal()
            pts.append(CollapsePoint(p=float(p), L=int(L), y=float(y), d=noise))
    return pts
