"""Graph-state stabilizer engine.

A state on n qubits is a graph (bit-packed adjacency) plus one local
Clifford per vertex. CZ toggles an edge once the operand vertex
operators commute with it; otherwise they are first reduced by local
complementations, with a precomputed two-qubit lookup table covering
the case where an operand has no non-operand neighbor. Single-qubit
measurements route the basis through the vertex operator and reduce,
again by local complementations, to the graph-basis Z rule.

Entanglement of any bipartition is the GF(2) rank of the biadjacency
block between the region and its complement, independent of the vertex
operators.
"""

from __future__ import annotations

import functools
import json

import numpy as np

from . import _engine as eng
from .cliffords import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    STEP_CZ,
    STEP_LOCAL_A,
    c1_tables,
    c2_tables,
    decompose_c2,
)

__all__ = ["GraphState", "engine_tables", "new_plus_state"]


def _apply_1q_dense(psi: np.ndarray, U: np.ndarray, q: int, n: int) -> np.ndarray:
    """Apply a 1-qubit gate to a dense state; qubit 0 is the most significant bit."""
    psi = psi.reshape(1 << q, 2, 1 << (n - q - 1))
    return np.einsum("ab,ibj->iaj", U, psi).reshape(-1)


def _cz_diag_dense(n: int, a: int, b: int) -> np.ndarray:
    idx = np.arange(1 << n)
    ba = (idx >> (n - 1 - a)) & 1
    bb = (idx >> (n - 1 - b)) & 1
    d = np.ones(1 << n)
    d[(ba & bb) == 1] = -1.0
    return d


def _build_cz_table(c1) -> np.ndarray:
    """Two-qubit CZ lookup table, solved densely with witness qubits.

    Entry [wa, wb, e, va, vb] holds (e', va', vb') such that applying CZ to
    (vop_a, vop_b, edge e) yields (vop_a', vop_b', edge e'). The witness flags
    wa/wb mark an operand that keeps external neighbors; such an operand must
    carry (and keeps) a Z-diagonal vertex operator, which makes the entry
    valid as an operator identity on that side. Unreachable entries are 255.
    """
    zgrp = c1.zgrp
    mats = c1.mats
    table = np.full((2, 2, 2, 24, 24, 3), 255, dtype=np.uint8)

    n = 4  # qubits: a, b, witness_a, witness_b
    plus = np.full(1 << n, 1.0 / (1 << (n // 2)), dtype=complex)
    cz_ab = _cz_diag_dense(n, 0, 1)
    cz_awa = _cz_diag_dense(n, 0, 2)
    cz_bwb = _cz_diag_dense(n, 1, 3)

    def state(e, va, vb, wa, wb):
        psi = plus.copy()
        if e:
            psi = cz_ab * psi
        if wa:
            psi = cz_awa * psi
        if wb:
            psi = cz_bwb * psi
        psi = _apply_1q_dense(psi, mats[va], 0, n)
        psi = _apply_1q_dense(psi, mats[vb], 1, n)
        return psi

    def key(psi):
        k = np.argmax(np.abs(psi) > 0.05)
        psi = psi / (psi[k] / abs(psi[k]))
        return (np.round(psi, 6) + (0.0 + 0.0j)).tobytes()

    for wa in (0, 1):
        va_pool = [v for v in range(24) if not wa or zgrp[v]]
        for wb in (0, 1):
            vb_pool = [v for v in range(24) if not wb or zgrp[v]]
            lookup = {}
            for e2 in (0, 1):
                for va2 in va_pool:
                    for vb2 in vb_pool:
                        k = key(state(e2, va2, vb2, wa, wb))
                        if k not in lookup:
                            lookup[k] = (e2, va2, vb2)
            for e in (0, 1):
                for va in va_pool:
                    for vb in vb_pool:
                        target = cz_ab * state(e, va, vb, wa, wb)
                        hit = lookup.get(key(target))
                        assert hit is not None, "CZ table entry unsolvable"
                        table[wa, wb, e, va, vb] = hit
    return table


@functools.lru_cache(maxsize=1)
def engine_tables() -> tuple:
    """Frozen table tuple consumed by the numba kernels."""
    c1 = c1_tables()
    c2 = c2_tables()
    ids = np.zeros(6, dtype=np.uint8)
    ids[eng.IDS_I] = c1.id_i
    ids[eng.IDS_H] = c1.id_h
    ids[eng.IDS_S] = c1.id_s
    ids[eng.IDS_Z] = c1.id_z
    ids[eng.IDS_XH] = c1.id_xh
    ids[eng.IDS_SQRT_IX] = c1.id_sqrt_ix
    cp_table = _build_cz_table(c1)
    tbl = (
        c1.mul,
        c1.conj_pauli,
        c1.conj_sign,
        c1.reduce_move,
        c1.zgrp,
        cp_table,
        ids,
    )
    return tbl


class GraphState:
    """Mutable stabilizer state of n qubits in graph + vertex-operator form.

    Single-threaded by design: move it between workers, never share it.
    """

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("need at least one qubit")
        self.n = n
        self._capacity = n  # vertices allocated (n plus optional scratch)
        self._scratch = -1
        W = max(1, (n + 63) >> 6)
        self.adj = np.zeros((n, W), dtype=np.uint64)
        self.deg = np.zeros(n, dtype=np.int64)
        self.vop = np.zeros(n, dtype=np.uint8)  # index 0 is the identity
        self.tbl = engine_tables()
        self._nbuf = np.zeros(n, dtype=np.int64)

    # -- allocation ------------------------------------------------------

    def _grow(self, extra: int) -> None:
        cap = self._capacity + extra
        W = max(1, (cap + 63) >> 6)
        adj = np.zeros((cap, W), dtype=np.uint64)
        adj[: self._capacity, : self.adj.shape[1]] = self.adj
        self.adj = adj
        self.deg = np.concatenate([self.deg, np.zeros(extra, dtype=np.int64)])
        self.vop = np.concatenate([self.vop, np.zeros(extra, dtype=np.uint8)])
        self._capacity = cap
        self._nbuf = np.zeros(cap, dtype=np.int64)

    def scratch_vertex(self) -> int:
        """Lazily allocated scratch vertex for parity measurements."""
        if self._scratch < 0:
            self._scratch = self._capacity
            self._grow(1)
        return self._scratch

    # -- gates -----------------------------------------------------------

    def _check(self, q: int) -> None:
        if not 0 <= q < self.n:
            raise IndexError(f"qubit {q} out of range [0, {self.n})")

    def apply_local(self, q: int, g: int) -> None:
        """vop[q] <- g . vop[q] (g applied after the current operator)."""
        self._check(q)
        self.vop[q] = self.tbl[0][g, self.vop[q]]

    def local_complement(self, q: int) -> None:
        self._check(q)
        eng.local_complement(self.adj, self.deg, self.vop, q, self.tbl, self._nbuf)

    def apply_cz(self, a: int, b: int) -> None:
        self._check(a)
        self._check(b)
        if a == b:
            raise ValueError("CZ needs distinct qubits")
        eng.apply_cz(self.adj, self.deg, self.vop, a, b, self.tbl, self._nbuf)

    def apply_two_qubit_clifford(self, a: int, b: int, c2_id: int) -> None:
        self._check(a)
        self._check(b)
        if a == b:
            raise ValueError("two-qubit gate needs distinct qubits")
        for kind, arg in decompose_c2(c2_id):
            if kind == STEP_LOCAL_A:
                self.apply_local(a, arg)
            elif kind == STEP_CZ:
                self.apply_cz(a, b)
            else:
                self.apply_local(b, arg)

    # -- measurements ------------------------------------------------------

    def measure_pauli(self, q: int, basis: int, rng: np.random.Generator) -> int:
        """Measure X/Y/Z (basis 0/1/2) on qubit q; returns the outcome (+-1)."""
        self._check(q)
        return int(
            eng.measure_pauli(self.adj, self.deg, self.vop, q, basis, rng, self.tbl, self._nbuf)
        )

    def measure_parity_zz(self, a: int, b: int, rng: np.random.Generator) -> int:
        """Projective Z_a Z_b measurement through a scratch ancilla."""
        self._check(a)
        self._check(b)
        if a == b:
            raise ValueError("parity measurement needs distinct qubits")
        sc = self.scratch_vertex()
        return int(
            eng.measure_parity_zz(
                self.adj, self.deg, self.vop, a, b, sc, rng, self.tbl, self._nbuf
            )
        )

    # -- observables -------------------------------------------------------

    def entanglement_entropy(self, region) -> int:
        """Bipartite entropy in bits of ``region`` vs the rest of the qubits.

        All Renyi entropies coincide for stabilizer states, so this is also
        the von Neumann entropy.
        """
        reg = np.asarray(sorted(set(int(q) for q in region)), dtype=np.int64)
        if reg.size and (reg[0] < 0 or reg[-1] >= self.n):
            raise IndexError("region out of range")
        mask = np.zeros(self._capacity, dtype=bool)
        mask[reg] = True
        comp = np.flatnonzero(~mask[: self.n]).astype(np.int64)
        return int(eng.region_rank(self.adj, reg, comp))

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for i in range(self.n):
            row = self.adj[i]
            for w in range(row.shape[0]):
                word = int(row[w])
                base = w << 6
                while word:
                    low = word & -word
                    j = base + (low.bit_length() - 1)
                    word ^= low
                    if i < j < self.n:
                        out.append((i, j))
        return out

    def neighbor_sets(self) -> list[set]:
        sets = [set() for _ in range(self.n)]
        for i, j in self.edges():
            sets[i].add(j)
            sets[j].add(i)
        return sets

    def component_sizes(self, n_sites: int | None = None) -> np.ndarray:
        """Sizes of the connected components among the first n_sites vertices."""
        ns = self.n if n_sites is None else n_sites
        sizes = np.zeros(ns, dtype=np.int64)
        queue = np.zeros(ns, dtype=np.int64)
        visited = np.zeros(self._capacity, dtype=np.uint8)
        k = eng.component_sizes(self.adj, ns, sizes, queue, visited)
        return sizes[:k]

    def to_statevector(self) -> np.ndarray:
        """Dense amplitudes (qubit 0 = most significant bit); test use, n <= 12."""
        if self.n > 12:
            raise ValueError("statevector bridge limited to 12 qubits")
        c1 = c1_tables()
        n = self.n
        psi = np.full(1 << n, 1.0 / np.sqrt(1 << n), dtype=complex)
        for i, j in self.edges():
            psi = _cz_diag_dense(n, i, j) * psi
        for q in range(n):
            v = int(self.vop[q])
            if v != c1.id_i:
                psi = _apply_1q_dense(psi, c1.mats[v], q, n)
        return psi

    def dump(self) -> str:
        """Debug dump of (n, edges, vops) as JSON."""
        return json.dumps(
            {"n": self.n, "edges": self.edges(), "vops": self.vop[: self.n].tolist()}
        )

    def check_invariants(self) -> None:
        adj = self.adj
        for i in range(self.n):
            assert not (adj[i, i >> 6] >> np.uint64(i & 63)) & np.uint64(1), "self loop"
            d = 0
            for w in range(adj.shape[1]):
                d += bin(int(adj[i, w])).count("1")
            assert d == self.deg[i], "degree out of sync"
        for i, j in self.edges():
            assert (adj[j, i >> 6] >> np.uint64(i & 63)) & np.uint64(1), "asymmetric edge"


def new_plus_state(n: int) -> GraphState:
    """|+>^n: empty graph, identity vertex operators."""
    return GraphState(n)
