"""miptlab: measurement-induced phase transition laboratory.

Graph-state stabilizer engine for hybrid Clifford circuits in 1+1D and
2+1D, the projective transverse-field Ising model, entanglement-cluster
analytics, classical percolation baselines, and a finite-size-scaling
toolkit (interpolation-cost data collapse, power-law and cluster-tail
fits, bootstrap errors).
"""

__version__ = "0.1.0"

from .cliffords import (
    C2_GROUP_ORDER,
    c1_compose,
    c1_conjugate_pauli,
    c1_tables,
    c2_tables,
    decompose_c2,
    sample_c2,
)
from .fss import (
    CollapsePoint,
    CollapseResult,
    FitResult,
    bootstrap,
    cost_function,
    crossing_estimate,
    dynamics_collapse,
    fit_cluster_tail,
    fit_power_law,
    optimize_collapse,
)
from .gf2 import BitMatrix, biadjacency, gf2_rank
from .graphstate import GraphState, new_plus_state
from .harness import (
    RunManifest,
    parse_config,
    read_csv,
    run_ensemble,
    run_experiment,
    write_csv,
)
from .lattice import Lattice, quarter_partition, schedule_1d, schedule_2d
from .protocols import (
    ExperimentConfig,
    TrajectoryRecord,
    attach_ancilla,
    run_trajectory,
    setup_purification,
    steady_value,
    tripartite_information,
    window_average,
)

__all__ = [
    "__version__",
    "BitMatrix",
    "biadjacency",
    "gf2_rank",
    "GraphState",
    "new_plus_state",
    "C2_GROUP_ORDER",
    "c1_compose",
    "c1_conjugate_pauli",
    "c1_tables",
    "c2_tables",
    "decompose_c2",
    "sample_c2",
    "Lattice",
    "schedule_1d",
    "schedule_2d",
    "quarter_partition",
    "ExperimentConfig",
    "TrajectoryRecord",
    "run_trajectory",
    "run_ensemble",
    "run_experiment",
    "setup_purification",
    "attach_ancilla",
    "tripartite_information",
    "window_average",
    "steady_value",
    "RunManifest",
    "parse_config",
    "read_csv",
    "write_csv",
    "CollapsePoint",
    "CollapseResult",
    "FitResult",
    "cost_function",
    "optimize_collapse",
    "dynamics_collapse",
    "fit_power_law",
    "fit_cluster_tail",
    "bootstrap",
    "crossing_estimate",
]
