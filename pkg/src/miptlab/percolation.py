"""Classical percolation baselines on hypercubic lattices.

Union-find (union by size, path compression) cluster finding for site
and bond percolation in 2 and 3 dimensions, surface-cluster statistics
on the open ("final time") axis, and spanning-probability threshold
scans.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .clusters import ClusterStats, cluster_stats

__all__ = [
    "PercConfig",
    "perc_realization",
    "surface_cluster_stats",
    "spanning_probability",
    "threshold_scan",
]


@dataclass(frozen=True)
class PercConfig:
    kind: str                 # "site" | "bond"
    dims: tuple[int, ...]     # (Lx, ..., T); last axis is the open "time" axis
    p: float
    seed: int = 0
    periodic: tuple[bool, ...] | None = None  # per axis; default: all but last

    def __post_init__(self):
        if self.kind not in ("site", "bond"):
            raise ValueError("kind must be 'site' or 'bond'")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must be in [0, 1]")
        if len(self.dims) not in (2, 3):
            raise ValueError("2- or 3-dimensional lattices only")

    def axes_periodic(self) -> tuple[bool, ...]:
        if self.periodic is not None:
            return self.periodic
        return tuple([True] * (len(self.dims) - 1) + [False])


@njit(cache=True)
def _uf_find(parent, i):
    root = i
    while parent[root] != root:
        root = parent[root]
    while parent[i] != root:
        nxt = parent[i]
        parent[i] = root
        i = nxt
    return root


@njit(cache=True)
def _uf_union(parent, size, a, b):
    ra = _uf_find(parent, a)
    rb = _uf_find(parent, b)
    if ra == rb:
        return
    if size[ra] < size[rb]:
        ra, rb = rb, ra
    parent[rb] = ra
    size[ra] += size[rb]


@njit(cache=True)
def _cluster_labels(occupied, dims, periodic, bond_occ):
    """Union-find labels; occupied is per-site, bond_occ per (site, axis)."""
    n = occupied.shape[0]
    ndim = dims.shape[0]
    parent = np.arange(n, dtype=np.int32)
    size = np.ones(n, dtype=np.int32)
    strides = np.ones(ndim, dtype=np.int64)
    for a in range(ndim - 2, -1, -1):
        strides[a] = strides[a + 1] * dims[a + 1]
    coord = np.zeros(ndim, dtype=np.int64)
    for i in range(n):
        if not occupied[i]:
            continue
        rem = i
        for a in range(ndim):
            coord[a] = rem // strides[a]
            rem -= coord[a] * strides[a]
        for a in range(ndim):
            c = coord[a]
            if c + 1 < dims[a]:
                j = i + strides[a]
            elif periodic[a] and dims[a] > 2:
                j = i - c * strides[a]
            else:
                continue
            if occupied[j] and bond_occ[i, a]:
                _uf_union(parent, size, i, j)
    labels = np.full(n, -1, dtype=np.int32)
    for i in range(n):
        if occupied[i]:
            labels[i] = _uf_find(parent, i)
    return labels


def perc_realization(cfg: PercConfig) -> np.ndarray:
    """Occupy sites/bonds independently with probability p and label clusters.

    Returns per-site root labels (-1 for unoccupied sites). For bond
    percolation all sites are occupied and bonds open with probability p.
    """
    rng = np.random.Generator(np.random.Philox(key=cfg.seed))
    dims = np.asarray(cfg.dims, dtype=np.int64)
    n = int(np.prod(dims))
    ndim = len(cfg.dims)
    if cfg.kind == "site":
        occupied = rng.random(n) < cfg.p
        bond_occ = np.ones((n, ndim), dtype=np.bool_)
    else:
        occupied = np.ones(n, dtype=np.bool_)
        bond_occ = rng.random((n, ndim)) < cfg.p
    periodic = np.asarray(cfg.axes_periodic(), dtype=np.bool_)
    return _cluster_labels(occupied, dims, periodic, bond_occ)


def _axis_slice_sites(dims, axis: int, index: int) -> np.ndarray:
    """Flat indices of the lattice slice {coord[axis] == index}."""
    grids = np.meshgrid(*[np.arange(d) for d in dims], indexing="ij")
    mask = grids[axis] == index
    flat = np.arange(int(np.prod(dims))).reshape(dims)
    return flat[mask].ravel()


def surface_cluster_stats(labels: np.ndarray, dims, axis: int | None = None) -> ClusterStats:
    """Cluster sizes counted as surface-site counts, for clusters with at
    least one site on the final slice of the open axis."""
    dims = tuple(dims)
    if axis is None:
        axis = len(dims) - 1
    surf = _axis_slice_sites(dims, axis, dims[axis] - 1)
    lab = labels[surf]
    lab = lab[lab >= 0]
    if lab.size == 0:
        raise ValueError("no occupied surface sites")
    _, counts = np.unique(lab, return_counts=True)
    area = int(np.prod(dims) // dims[axis])
    return cluster_stats(counts, area)


def spanning_probability(kind: str, dims, p: float, n_real: int, seed: int = 0) -> float:
    """Fraction of realizations with a cluster touching both open-axis faces."""
    dims = tuple(dims)
    axis = len(dims) - 1
    hits = 0
    for r in range(n_real):
        labels = perc_realization(
            PercConfig(kind=kind, dims=dims, p=p, seed=seed * 1_000_003 + r)
        )
        lo = labels[_axis_slice_sites(dims, axis, 0)]
        hi = labels[_axis_slice_sites(dims, axis, dims[axis] - 1)]
        lo = set(int(x) for x in lo[lo >= 0])
        hi = set(int(x) for x in hi[hi >= 0])
        if lo & hi:
            hits += 1
    return hits / n_real


def threshold_scan(
    kind: str,
    base_dims,
    sizes,
    p_values,
    n_real: int = 100,
    seed: int = 0,
) -> float:
    """Estimate p_c from spanning-probability crossings of successive sizes.

    ``base_dims`` gives the aspect ratio (e.g. (1, 1) for 2D, (1, 1, 1) for
    3D); each entry is scaled by the linear size. Needs >= 2 sizes and >= 3
    p values bracketing the crossing.
    """
    sizes = list(sizes)
    p_values = np.asarray(sorted(p_values), dtype=float)
    if len(sizes) < 2 or p_values.size < 3:
        raise ValueError("need >= 2 sizes and >= 3 p values")
    curves = []
    for k, L in enumerate(sizes):
        dims = tuple(int(b * L) for b in base_dims)
        curves.append(
            np.asarray(
                [
                    spanning_probability(kind, dims, float(p), n_real, seed + 7919 * k)
                    for p in p_values
                ]
            )
        )
    crossings = []
    for a in range(len(sizes) - 1):
        d = curves[a + 1] - curves[a]
        for i in range(d.size - 1):
            if d[i] * d[i + 1] < 0:
                x0, x1 = p_values[i], p_values[i + 1]
                y0, y1 = d[i], d[i + 1]
                crossings.append(x0 - y0 * (x1 - x0) / (y1 - y0))
    if not crossings:
        raise ValueError("no crossing within the scanned p range")
    return float(np.mean(crossings))
