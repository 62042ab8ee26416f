"""Entanglement-cluster statistics on steady-state graphs.

A cluster is a connected component of the graph underlying the
graph-state representation; vertex operators are ignored since local
operators do not change connectivity. Sizes are qubit counts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphstate import GraphState

__all__ = [
    "ClusterStats",
    "find_components",
    "cluster_stats",
    "largest_cluster_fraction",
    "ns_histogram",
    "log_binned_ns",
    "TAIL_FIT_MIN",
]

# power-law tail fits exclude the percolating peak and use s in [8, volume/8]
TAIL_FIT_MIN = 8


@dataclass
class ClusterStats:
    """Cluster-size statistics of one realization."""

    sizes: np.ndarray       # all component sizes (multiset)
    volume: int             # L^d
    s_mean: float           # site-weighted mean: sum n_s s^2 / sum n_s s
    s_max: int

    @property
    def n_s(self) -> dict[int, float]:
        """Cluster number: clusters of size s per unit volume."""
        sizes, counts = np.unique(self.sizes, return_counts=True)
        return {int(s): float(c) / self.volume for s, c in zip(sizes, counts)}


def find_components(state: GraphState, sites=None) -> list[np.ndarray]:
    """Connected components of the subgraph induced on ``sites``.

    Isolated vertices are size-1 components. When ``sites`` is None the
    first state.n vertices are used. Components are returned as sorted
    index arrays.
    """
    if sites is None:
        n_sites = state.n
        sites = range(n_sites)
    sites = sorted(set(int(s) for s in sites))
    site_set = set(sites)
    nbrs = state.neighbor_sets()
    seen: set[int] = set()
    comps = []
    for s in sites:
        if s in seen:
            continue
        stack = [s]
        seen.add(s)
        comp = []
        while stack:
            v = stack.pop()
            comp.append(v)
            for u in nbrs[v]:
                if u in site_set and u not in seen:
                    seen.add(u)
                    stack.append(u)
        comps.append(np.asarray(sorted(comp), dtype=np.int64))
    return comps


def cluster_stats(component_sizes, volume: int) -> ClusterStats:
    """Site-weighted statistics from a multiset of component sizes."""
    sizes = np.asarray(
        [len(c) if np.ndim(c) else int(c) for c in component_sizes], dtype=np.int64
    )
    if sizes.size == 0:
        raise ValueError("no components")
    s_mean = float((sizes.astype(float) ** 2).sum() / sizes.sum())
    return ClusterStats(
        sizes=sizes,
        volume=int(volume),
        s_mean=s_mean,
        s_max=int(sizes.max()),
    )


def largest_cluster_fraction(stats: ClusterStats) -> float:
    return stats.s_max / stats.volume


def ns_histogram(all_sizes, volume: int, n_real: int, drop_largest_per_real=None):
    """Aggregate cluster-number n_s over an ensemble.

    ``all_sizes`` is a list of per-realization size arrays. Returns
    (sizes, n_s) with n_s = clusters of that size per volume per
    realization. When ``drop_largest_per_real`` is true the largest
    component of each realization (the percolating peak) is excluded.
    """
    counts: dict[int, int] = {}
    for sizes in all_sizes:
        sizes = np.asarray(sizes, dtype=np.int64)
        if drop_largest_per_real and sizes.size:
            sizes = np.delete(sizes, int(np.argmax(sizes)))
        for s in sizes:
            counts[int(s)] = counts.get(int(s), 0) + 1
    ss = np.asarray(sorted(counts), dtype=np.int64)
    ns = np.asarray([counts[int(s)] for s in ss], dtype=float) / (volume * n_real)
    return ss, ns


def log_binned_ns(sizes: np.ndarray, ns: np.ndarray, bins_per_decade: int = 8):
    """Logarithmically binned (s, n_s) for figure-facing output.

    Within a bin, n_s values are averaged weighted by the number of
    integer sizes they represent; the bin abscissa is the geometric
    mean of its edges.
    """
    if sizes.size == 0:
        return np.array([]), np.array([])
    lo, hi = float(sizes.min()), float(sizes.max())
    nbins = max(1, int(np.ceil(np.log10(hi / lo + 1e-12) * bins_per_decade)) + 1)
    edges = lo * (10 ** (np.arange(nbins + 1) / bins_per_decade))
    xs, ys = [], []
    for k in range(nbins):
        a, b = edges[k], edges[k + 1]
        m = (sizes >= a) & (sizes < b)
        if not m.any():
            continue
        width = max(1.0, np.floor(b) - np.ceil(a) + 1)
        xs.append(np.sqrt(a * b))
        ys.append(ns[m].sum() / width)
    return np.asarray(xs), np.asarray(ys)


def tail_window(volume: int) -> tuple[int, int]:
    """Fit window for the n_s power-law tail: s in [8, volume/8]."""
    return TAIL_FIT_MIN, max(TAIL_FIT_MIN + 1, volume // 8)
