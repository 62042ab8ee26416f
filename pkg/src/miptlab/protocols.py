"""Trajectory drivers for hybrid Clifford circuits and the projective TFIM.

One trajectory = one random circuit realization. Each trajectory owns a
counter-based random stream keyed by (master seed, trajectory id), so
results are bit-identical regardless of how trajectories are scheduled
across workers. Per step the order is: gate layer, then measurement
round with coins consumed in site-index order (PTFIM: edge observables
first, then site observables).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _engine as eng
from .cliffords import c2_tables
from .graphstate import GraphState
from .lattice import Lattice, gate_layers, half_region, quarter_partition

__all__ = [
    "ExperimentConfig",
    "TrajectoryRecord",
    "run_trajectory",
    "setup_purification",
    "attach_ancilla",
    "tripartite_information",
    "window_average",
    "steady_value",
    "trajectory_rng",
]

PROTOCOLS = ("clifford1d", "clifford2d", "ptfim1d", "ptfim2d")
PROBES = ("none", "i3", "half_entropy", "purification", "ancilla_pair", "single_ancilla")

# probe -> observable name recorded in TrajectoryRecord.values
PROBE_OBSERVABLE = {
    "i3": "i3",
    "half_entropy": "half_entropy",
    "purification": "entropy_density",
    "ancilla_pair": "pair_mutual_info",
    "single_ancilla": "ancilla_entropy",
}


@dataclass(frozen=True)
class ExperimentConfig:
    protocol: str
    L: int
    p: float
    boundary: str = "periodic"
    t_max: int | None = None       # default 4L (ancilla probes: t0 + 2L)
    t0: int | None = None          # ancilla attachment step (default 2L)
    probe: str = "i3"
    window: int = 4
    n_traj: int = 100
    seed: int = 0

    @property
    def dim(self) -> int:
        return 1 if self.protocol.endswith("1d") else 2

    @property
    def n_sites(self) -> int:
        return self.L**self.dim

    def resolved_t0(self) -> int:
        return 2 * self.L if self.t0 is None else self.t0

    def resolved_t_max(self) -> int:
        if self.t_max is not None:
            return self.t_max
        if self.probe in ("ancilla_pair", "single_ancilla"):
            return self.resolved_t0() + 2 * self.L
        return 4 * self.L

    def validate(self) -> None:
        if self.protocol not in PROTOCOLS:
            raise ValueError(f"unknown protocol {self.protocol!r}")
        if self.probe not in PROBES:
            raise ValueError(f"unknown probe {self.probe!r}")
        if self.boundary not in ("periodic", "open"):
            raise ValueError(f"unknown boundary {self.boundary!r}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must be in [0, 1]")
        if self.resolved_t_max() < 1:
            raise ValueError("t_max must be >= 1")
        if self.window < 1:
            raise ValueError("window must be >= 1")
        if self.n_traj < 1:
            raise ValueError("n_traj must be >= 1")
        if self.L < 2:
            raise ValueError("L too small")
        if self.protocol.startswith("clifford") and self.L % 2:
            raise ValueError(f"{self.protocol} needs even L")
        if self.probe == "i3" and self.L % 4:
            raise ValueError("the i3 probe needs L divisible by 4")
        if self.protocol.startswith("ptfim") and self.probe not in (
            "none",
            "i3",
            "half_entropy",
        ):
            raise ValueError("ptfim supports probes none/i3/half_entropy")
        if self.probe in ("ancilla_pair", "single_ancilla") and self.resolved_t0() < 0:
            raise ValueError("t0 must be >= 0")


@dataclass
class TrajectoryRecord:
    """Per-realization observable series plus a final-state summary."""

    traj_id: int
    seed: int
    times: np.ndarray
    values: dict[str, np.ndarray]
    cluster_sizes: np.ndarray | None = None
    n_qubits: int = 0
    final_edges: int = 0

    def steady(self, name: str, window: int) -> float:
        return steady_value(self.values[name], window)


def trajectory_rng(master_seed: int, traj_id: int) -> np.random.Generator:
    """Counter-based stream for one trajectory; independent of all others."""
    key = np.array([master_seed, traj_id], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def window_average(series, w: int) -> np.ndarray:
    """Trailing block means over w consecutive recorded steps.

    Blocks align so the final block ends at the last sample; a leading
    remainder shorter than w is dropped.
    """
    series = np.asarray(series, dtype=float)
    if w < 1:
        raise ValueError("window must be >= 1")
    if w > series.shape[0]:
        raise ValueError("window longer than series")
    nblocks = series.shape[0] // w
    tail = series[series.shape[0] - nblocks * w :]
    return tail.reshape(nblocks, w).mean(axis=1)


def steady_value(series, window: int) -> float:
    """Mean of the final `window` recorded values (the steady-state scalar)."""
    series = np.asarray(series, dtype=float)
    if window > series.shape[0]:
        raise ValueError("window longer than series")
    return float(series[-window:].mean())


# ---------------------------------------------------------------------------
# state preparation and probes
# ---------------------------------------------------------------------------


def setup_purification(cfg: ExperimentConfig) -> GraphState:
    """System register maximally entangled pairwise with an untouched
    reference register, so the initial system entropy is L^d bits."""
    N = cfg.n_sites
    state = GraphState(2 * N)
    for i in range(N):
        state.apply_cz(i, N + i)
    return state


def attach_ancilla(state: GraphState, q: int, anc: int, rng: np.random.Generator) -> None:
    """Maximally entangle vertex ``anc`` with system qubit q.

    q is measured in Z (outcome discarded, conditional X reset to |0>),
    the ancilla is prepared in |+>, and a CNOT ancilla->q is applied;
    afterwards S(ancilla) = 1 regardless of the prior state.
    """
    ids = state.tbl[6]
    mul = state.tbl[0]
    m = state.measure_pauli(q, eng.PAULI_Z, rng)
    if m < 0:
        x_idx = mul[mul[ids[eng.IDS_H], ids[eng.IDS_Z]], ids[eng.IDS_H]]  # X = H Z H
        state.apply_local(q, int(x_idx))
    if state.deg[anc] != 0:
        raise ValueError("ancilla vertex is not isolated")
    state.vop[anc] = ids[eng.IDS_I]
    state.apply_local(q, int(ids[eng.IDS_H]))
    state.apply_cz(anc, q)
    state.apply_local(q, int(ids[eng.IDS_H]))


def _region_pairs(n: int, regions: dict[str, np.ndarray]) -> dict[str, tuple]:
    pairs = {}
    for name, reg in regions.items():
        reg = np.asarray(sorted(reg), dtype=np.int64)
        mask = np.zeros(n, dtype=bool)
        mask[reg] = True
        comp = np.flatnonzero(~mask).astype(np.int64)
        pairs[name] = (reg, comp)
    return pairs


class _EntropySet:
    """Precomputed (region, complement) index pairs for repeated evaluation."""

    def __init__(self, n: int, regions: dict[str, np.ndarray]):
        self.pairs = _region_pairs(n, regions)

    def __call__(self, state: GraphState) -> dict[str, float]:
        return {
            k: float(eng.region_rank(state.adj, r, c))
            for k, (r, c) in self.pairs.items()
        }


def _i3_regions(slabs) -> dict[str, np.ndarray]:
    A, B, C, _ = slabs
    return {
        "A": A,
        "B": B,
        "C": C,
        "AB": np.concatenate([A, B]),
        "AC": np.concatenate([A, C]),
        "BC": np.concatenate([B, C]),
        "ABC": np.concatenate([A, B, C]),
    }


def _i3_from(s: dict[str, float]) -> float:
    return s["A"] + s["B"] + s["C"] - s["AB"] - s["AC"] - s["BC"] + s["ABC"]


def tripartite_information(state: GraphState, slabs) -> float:
    """I3(A:B:C) = I2(A:B) + I2(A:C) - I2(A:BC) over the quarter partition."""
    return _i3_from(_EntropySet(state.n, _i3_regions(slabs))(state))


# ---------------------------------------------------------------------------
# trajectory drivers
# ---------------------------------------------------------------------------


def run_trajectory(cfg: ExperimentConfig, traj_id: int) -> TrajectoryRecord:
    """Execute one realization and record observables per the probe."""
    cfg.validate()
    rng = trajectory_rng(cfg.seed, traj_id)
    if cfg.protocol.startswith("clifford"):
        return _run_clifford(cfg, rng, traj_id)
    return _run_ptfim(cfg, rng, traj_id)


def _finish(cfg, traj_id, state, N, grid, series) -> TrajectoryRecord:
    values = {}
    if cfg.probe != "none":
        values[PROBE_OBSERVABLE[cfg.probe]] = np.asarray(series, dtype=float)
    rec = TrajectoryRecord(
        traj_id=traj_id,
        seed=cfg.seed,
        times=np.asarray(grid, dtype=np.int64),
        values=values,
        cluster_sizes=state.component_sizes(N),
        n_qubits=state.n,
        final_edges=int(state.deg[: state.n].sum()) // 2,
    )
    return rec


def _run_clifford(cfg: ExperimentConfig, rng, traj_id: int) -> TrajectoryRecord:
    lat = Lattice(cfg.dim, cfg.L, cfg.boundary)
    N = lat.n_sites
    layers = gate_layers(lat)
    c2 = c2_tables()
    t_max = cfg.resolved_t_max()
    probe = cfg.probe
    t0 = cfg.resolved_t0() if probe in ("ancilla_pair", "single_ancilla") else 0

    anc1 = anc2 = -1
    if probe == "purification":
        state = setup_purification(cfg)
    elif probe == "ancilla_pair":
        state = GraphState(N + 2)
        anc1, anc2 = N, N + 1
    elif probe == "single_ancilla":
        state = GraphState(N + 1)
        anc1 = N
    else:
        state = GraphState(N)

    measure: _EntropySet | None = None
    if probe == "i3":
        measure = _EntropySet(state.n, _i3_regions(quarter_partition(lat)))
    elif probe == "half_entropy":
        measure = _EntropySet(state.n, {"half": half_region(lat)})
    elif probe == "purification":
        measure = _EntropySet(state.n, {"sys": np.arange(N, dtype=np.int64)})
    elif probe == "ancilla_pair":
        measure = _EntropySet(
            state.n,
            {
                "1": np.array([anc1], dtype=np.int64),
                "2": np.array([anc2], dtype=np.int64),
                "12": np.array([anc1, anc2], dtype=np.int64),
            },
        )
    elif probe == "single_ancilla":
        measure = _EntropySet(state.n, {"anc": np.array([anc1], dtype=np.int64)})

    if probe == "ancilla_pair":
        if cfg.dim == 1:
            probe_sites = (0, cfg.L // 2)
        else:
            probe_sites = (lat.site(0, 0), lat.site(cfg.L // 2, 0))
    elif probe == "single_ancilla":
        probe_sites = (0,)

    grid: list[int] = []
    series: list[float] = []

    def attach() -> None:
        attach_ancilla(state, probe_sites[0], anc1, rng)
        if probe == "ancilla_pair":
            attach_ancilla(state, probe_sites[1], anc2, rng)

    def record(t: int) -> None:
        if probe == "none":
            return
        if probe == "i3":
            if t > t_max - cfg.window:
                grid.append(t)
                series.append(_i3_from(measure(state)))
        elif probe == "half_entropy":
            grid.append(t)
            series.append(measure(state)["half"])
        elif probe == "purification":
            grid.append(t)
            series.append(measure(state)["sys"] / N)
        elif probe == "ancilla_pair":
            if t >= t0:
                s = measure(state)
                grid.append(t)
                series.append(s["1"] + s["2"] - s["12"])
        elif probe == "single_ancilla":
            if t >= t0:
                grid.append(t)
                series.append(measure(state)["anc"])

    if probe == "purification":
        record(0)
    if probe in ("ancilla_pair", "single_ancilla") and t0 == 0:
        attach()
        record(0)

    for step in range(t_max):
        pairs = layers[step % len(layers)]
        eng.apply_gate_layer(
            state.adj,
            state.deg,
            state.vop,
            pairs,
            rng,
            c2.dec_kind,
            c2.dec_arg,
            c2.dec_len,
            state.tbl,
            state._nbuf,
        )
        eng.measure_round(
            state.adj, state.deg, state.vop, N, cfg.p, rng, state.tbl, state._nbuf
        )
        t = step + 1
        if probe in ("ancilla_pair", "single_ancilla") and t == t0:
            attach()
        record(t)

    return _finish(cfg, traj_id, state, N, grid, series)


def _run_ptfim(cfg: ExperimentConfig, rng, traj_id: int) -> TrajectoryRecord:
    lat = Lattice(cfg.dim, cfg.L, cfg.boundary)
    N = lat.n_sites
    edges = lat.edges()
    t_max = cfg.resolved_t_max()
    state = GraphState(N)
    scratch = state.scratch_vertex()

    measure: _EntropySet | None = None
    if cfg.probe == "i3":
        measure = _EntropySet(state.n, _i3_regions(quarter_partition(lat)))
    elif cfg.probe == "half_entropy":
        measure = _EntropySet(state.n, {"half": half_region(lat)})

    grid: list[int] = []
    series: list[float] = []
    for step in range(t_max):
        eng.ptfim_step(
            state.adj,
            state.deg,
            state.vop,
            edges,
            N,
            cfg.p,
            scratch,
            rng,
            state.tbl,
            state._nbuf,
        )
        t = step + 1
        if cfg.probe == "i3" and t > t_max - cfg.window:
            grid.append(t)
            series.append(_i3_from(measure(state)))
        elif cfg.probe == "half_entropy":
            grid.append(t)
            series.append(measure(state)["half"])

    return _finish(cfg, traj_id, state, N, grid, series)
