"""Lattice geometry and gate scheduling.

Site indexing is row-major: site = x + L*y. The 2+1D schedule follows a
two-index clock: at step n, sublattice n mod 2 supplies the control
sites ((x+y) even is sublattice 0) and clock floor(n/2) mod 4 picks the
partner direction, 0..3 = up, right, down, left; the sequence has
period 8. The 1+1D schedule is the usual brick wall with period 2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Lattice",
    "schedule_1d",
    "schedule_2d",
    "gate_layers",
    "quarter_partition",
    "half_region",
]

# clock index -> (dx, dy)
_DIRS = ((0, 1), (1, 0), (0, -1), (-1, 0))


@dataclass(frozen=True)
class Lattice:
    dim: int
    L: int
    boundary: str = "periodic"

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError("dim must be 1 or 2")
        if self.L < 2:
            raise ValueError("L must be at least 2")
        if self.boundary not in ("periodic", "open"):
            raise ValueError("boundary must be 'periodic' or 'open'")

    @property
    def n_sites(self) -> int:
        return self.L**self.dim

    def site(self, x: int, y: int = 0) -> int:
        return x + self.L * y

    def edges(self) -> np.ndarray:
        """Nearest-neighbor edges in raster order (site order; right then up)."""
        L = self.L
        out = []
        if self.dim == 1:
            for x in range(L):
                if x + 1 < L:
                    out.append((x, x + 1))
                elif self.boundary == "periodic" and L > 2:
                    out.append((x, 0))
        else:
            for y in range(L):
                for x in range(L):
                    s = self.site(x, y)
                    if x + 1 < L:
                        out.append((s, self.site(x + 1, y)))
                    elif self.boundary == "periodic" and L > 2:
                        out.append((s, self.site(0, y)))
                    if y + 1 < L:
                        out.append((s, self.site(x, y + 1)))
                    elif self.boundary == "periodic" and L > 2:
                        out.append((s, self.site(x, 0)))
        return np.asarray(out, dtype=np.int64)


def schedule_1d(L: int, n: int, boundary: str = "periodic") -> np.ndarray:
    """Brick-wall layer at step n: even n pairs (0,1),(2,3),...; odd n pairs
    (1,2),(3,4),...,(L-1,0)."""
    if L % 2:
        raise ValueError("1+1D schedule needs even L")
    pairs = []
    if n % 2 == 0:
        for x in range(0, L, 2):
            pairs.append((x, x + 1))
    else:
        for x in range(1, L, 2):
            a, b = x, (x + 1) % L
            if b == 0 and boundary == "open":
                continue
            pairs.append((a, b))
    return np.asarray(pairs, dtype=np.int64)


def schedule_2d(L: int, n: int, boundary: str = "periodic") -> np.ndarray:
    """Gate layer at step n of the sublattice/clock schedule.

    Controls are the sites of sublattice n mod 2; each pairs with its
    neighbor in the direction given by the clock index. With periodic
    boundaries every site is covered exactly once. With open boundaries,
    gates whose partner would wrap are dropped.
    """
    if L % 2:
        raise ValueError("2+1D schedule needs even L")
    sub = n % 2
    dx, dy = _DIRS[(n // 2) % 4]
    pairs = []
    for y in range(L):
        for x in range(L):
            if (x + y) % 2 != sub:
                continue
            px, py = x + dx, y + dy
            if boundary == "open" and not (0 <= px < L and 0 <= py < L):
                continue
            pairs.append((x + L * y, (px % L) + L * (py % L)))
    return np.asarray(pairs, dtype=np.int64)


def gate_layers(lat: Lattice) -> list[np.ndarray]:
    """All distinct layers of the periodic schedule (period 8 in 2D, 2 in 1D)."""
    period = 8 if lat.dim == 2 else 2
    sched = schedule_2d if lat.dim == 2 else schedule_1d
    return [sched(lat.L, n, lat.boundary) for n in range(period)]


def quarter_partition(lat: Lattice) -> tuple[np.ndarray, ...]:
    """Four contiguous slabs of width L/4 along x (full extent along y in 2D),
    in cyclic order."""
    L = lat.L
    if L % 4:
        raise ValueError("quarter partition needs L divisible by 4")
    w = L // 4
    slabs = []
    for k in range(4):
        xs = range(k * w, (k + 1) * w)
        if lat.dim == 1:
            slabs.append(np.asarray(list(xs), dtype=np.int64))
        else:
            slabs.append(
                np.asarray([x + L * y for y in range(L) for x in xs], dtype=np.int64)
            )
    return tuple(slabs)


def half_region(lat: Lattice) -> np.ndarray:
    """Half system: x < L/2 (an L/2 x L half-plane in 2D)."""
    L = lat.L
    if lat.dim == 1:
        return np.arange(L // 2, dtype=np.int64)
    return np.asarray(
        [x + L * y for y in range(L) for x in range(L // 2)], dtype=np.int64
    )
