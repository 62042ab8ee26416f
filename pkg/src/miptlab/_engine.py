"""Numba kernels for the graph-state engine.

State layout (shared by all kernels):
  adj  : (n, W) uint64 — bit-packed symmetric adjacency, no self loops
  deg  : (n,)  int64   — vertex degrees (kept in sync with adj)
  vop  : (n,)  uint8   — per-vertex local Clifford index

Tables are passed in a single tuple ``tbl``:
  (mul, conj_p, conj_s, reduce_move, zgrp, cp_table, ids)
with ids = [id_i, id_h, id_s, id_z, id_xh, id_sqrt_ix] (see IDS_* constants).
"""

from __future__ import annotations

import numpy as np
from numba import njit

U0 = np.uint64(0)
U1 = np.uint64(1)

# positions in the ids array
IDS_I = 0
IDS_H = 1
IDS_S = 2
IDS_Z = 3
IDS_XH = 4
IDS_SQRT_IX = 5

PAULI_X, PAULI_Y, PAULI_Z = 0, 1, 2


@njit(cache=True, inline="always")
def _popcount(x):
    x = x - ((x >> U1) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return np.int64((x * np.uint64(0x0101010101010101)) >> np.uint64(56))


@njit(cache=True, inline="always")
def _edge(adj, a, b):
    return np.int64((adj[a, b >> 6] >> np.uint64(b & 63)) & U1)


@njit(cache=True)
def _set_edge(adj, deg, a, b, val):
    wb = b >> 6
    mb = U1 << np.uint64(b & 63)
    wa = a >> 6
    ma = U1 << np.uint64(a & 63)
    had = (adj[a, wb] & mb) != U0
    if val != 0:
        if not had:
            adj[a, wb] |= mb
            adj[b, wa] |= ma
            deg[a] += 1
            deg[b] += 1
    else:
        if had:
            adj[a, wb] &= ~mb
            adj[b, wa] &= ~ma
            deg[a] -= 1
            deg[b] -= 1


@njit(cache=True)
def _neighbors(adj, q, out):
    """Fill ``out`` with the sorted neighbor indices of q; return the count."""
    cnt = 0
    W = adj.shape[1]
    for w in range(W):
        word = adj[q, w]
        base = w << 6
        while word != U0:
            low = word & (~word + U1)
            out[cnt] = base + _popcount(low - U1)
            cnt += 1
            word ^= low
    return cnt


@njit(cache=True)
def _first_neighbor_avoiding(adj, q, avoid):
    W = adj.shape[1]
    for w in range(W):
        word = adj[q, w]
        base = w << 6
        while word != U0:
            low = word & (~word + U1)
            b = base + _popcount(low - U1)
            if b != avoid:
                return b
            word ^= low
    return np.int64(-1)


@njit(cache=True)
def local_complement(adj, deg, vop, a, tbl, nbuf):
    """Toggle all edges among N(a); compensate so the state is unchanged."""
    mul, conj_p, conj_s, reduce_move, zgrp, cp_table, ids = tbl
    W = adj.shape[1]
    cnt = _neighbors(adj, a, nbuf)
    for k in range(cnt):
        i = nbuf[k]
        for w in range(W):
            adj[i, w] ^= adj[a, w]
        adj[i, i >> 6] &= ~(U1 << np.uint64(i & 63))
        d = 0
        for w in range(W):
            d += _popcount(adj[i, w])
        deg[i] = d
        vop[i] = mul[vop[i], ids[IDS_S]]
    vop[a] = mul[vop[a], ids[IDS_SQRT_IX]]


@njit(cache=True)
def _remove_vop(adj, deg, vop, t, avoid, tbl, nbuf):
    """Reduce vop[t] to the identity using local complementations at t and at
    its lowest-index non-avoid neighbor (which must exist)."""
    mul, conj_p, conj_s, reduce_move, zgrp, cp_table, ids = tbl
    partner = _first_neighbor_avoiding(adj, t, avoid)
    while vop[t] != ids[IDS_I]:
        if reduce_move[vop[t]] == 0:
            local_complement(adj, deg, vop, t, tbl, nbuf)
        else:
            local_complement(adj, deg, vop, partner, tbl, nbuf)


@njit(cache=True)
def apply_cz(adj, deg, vop, a, b, tbl, nbuf):
    mul, conj_p, conj_s, reduce_move, zgrp, cp_table, ids = tbl
    if deg[a] - _edge(adj, a, b) > 0:
        _remove_vop(adj, deg, vop, a, b, tbl, nbuf)
    if deg[b] - _edge(adj, a, b) > 0:
        _remove_vop(adj, deg, vop, b, a, tbl, nbuf)
    # the second reduction can hand a new external neighbors with a dirty vop
    if deg[a] - _edge(adj, a, b) > 0 and not zgrp[vop[a]]:
        _remove_vop(adj, deg, vop, a, b, tbl, nbuf)
    wa = 1 if deg[a] - _edge(adj, a, b) > 0 else 0
    wb = 1 if deg[b] - _edge(adj, a, b) > 0 else 0
    e = _edge(adj, a, b)
    e2 = cp_table[wa, wb, e, vop[a], vop[b], 0]
    va2 = cp_table[wa, wb, e, vop[a], vop[b], 1]
    vb2 = cp_table[wa, wb, e, vop[a], vop[b], 2]
    if e2 == 255:
        raise ValueError("invalid CZ table entry reached")
    _set_edge(adj, deg, a, b, np.int64(e2))
    vop[a] = va2
    vop[b] = vb2


@njit(cache=True)
def measure_pauli(adj, deg, vop, q, basis, gen, tbl, nbuf):
    """Projective measurement of a Pauli on qubit q; returns the outcome.

    The physical basis is routed through vop[q]; effective Y (and X on a
    non-isolated vertex) is rotated to the Z rule by local complementations.
    Exactly one coin is consumed iff the outcome is nondeterministic, with
    outcome +1 for coin < 1/2.
    """
    mul, conj_p, conj_s, reduce_move, zgrp, cp_table, ids = tbl
    W = adj.shape[1]
    while True:
        p_eff = conj_p[vop[q], basis]
        s_eff = conj_s[vop[q], basis]
        if p_eff == PAULI_Y:
            local_complement(adj, deg, vop, q, tbl, nbuf)
            continue
        if p_eff == PAULI_X:
            if deg[q] == 0:
                return np.int64(s_eff)  # deterministic; projector acts trivially
            b0 = _first_neighbor_avoiding(adj, q, -1)
            local_complement(adj, deg, vop, b0, tbl, nbuf)
            continue
        # effective Z: always nondeterministic on a graph-basis state
        m = np.int64(1) if gen.random() < 0.5 else np.int64(-1)
        mg = m * s_eff
        if deg[q] > 0:
            cnt = _neighbors(adj, q, nbuf)
            wq = q >> 6
            mq = U1 << np.uint64(q & 63)
            for k in range(cnt):
                i = nbuf[k]
                adj[i, wq] &= ~mq
                deg[i] -= 1
                if mg < 0:
                    vop[i] = mul[vop[i], ids[IDS_Z]]
            for w in range(W):
                adj[q, w] = U0
            deg[q] = 0
        if mg > 0:
            vop[q] = mul[vop[q], ids[IDS_H]]
        else:
            vop[q] = mul[vop[q], ids[IDS_XH]]
        return m


@njit(cache=True)
def apply_gate_layer(adj, deg, vop, pairs, gen, dec_kind, dec_arg, dec_len, tbl, nbuf):
    """One layer of uniformly random two-qubit Cliffords on disjoint pairs."""
    mul = tbl[0]
    for g in range(pairs.shape[0]):
        a = pairs[g, 0]
        b = pairs[g, 1]
        c = gen.integers(0, 11520)
        for j in range(dec_len[c]):
            kind = dec_kind[c, j]
            arg = dec_arg[c, j]
            if kind == 0:
                vop[a] = mul[arg, vop[a]]
            elif kind == 1:
                vop[b] = mul[arg, vop[b]]
            else:
                apply_cz(adj, deg, vop, a, b, tbl, nbuf)


@njit(cache=True)
def measure_round(adj, deg, vop, n_sites, p, gen, tbl, nbuf):
    """Z-measure each site with probability p, coins in site-index order."""
    for q in range(n_sites):
        if gen.random() < p:
            measure_pauli(adj, deg, vop, q, PAULI_Z, gen, tbl, nbuf)


@njit(cache=True)
def measure_parity_zz(adj, deg, vop, a, b, scratch, gen, tbl, nbuf):
    """Projective Z_a Z_b measurement via the scratch vertex.

    Equivalent to: prepare |0>, CNOT a->scratch, CNOT b->scratch, measure
    scratch in Z (the two inner Hadamards cancel). The scratch vertex must be
    isolated on entry and is left isolated.
    """
    mul, conj_p, conj_s, reduce_move, zgrp, cp_table, ids = tbl
    vop[scratch] = ids[IDS_I]
    apply_cz(adj, deg, vop, a, scratch, tbl, nbuf)
    apply_cz(adj, deg, vop, b, scratch, tbl, nbuf)
    vop[scratch] = mul[ids[IDS_H], vop[scratch]]
    return measure_pauli(adj, deg, vop, scratch, PAULI_Z, gen, tbl, nbuf)


@njit(cache=True)
def ptfim_step(adj, deg, vop, edges, n_sites, p, scratch, gen, tbl, nbuf):
    """One projective-TFIM step: ZZ on each edge with prob 1-p (raster
    order), then X on each site with prob p (site order)."""
    for e in range(edges.shape[0]):
        if gen.random() < 1.0 - p:
            measure_parity_zz(adj, deg, vop, edges[e, 0], edges[e, 1], scratch, gen, tbl, nbuf)
    for q in range(n_sites):
        if gen.random() < p:
            measure_pauli(adj, deg, vop, q, PAULI_X, gen, tbl, nbuf)


@njit(cache=True)
def region_rank(adj, region, comp):
    """GF(2) rank of the biadjacency block between region and comp."""
    na = region.shape[0]
    nb = comp.shape[0]
    if na == 0 or nb == 0:
        return np.int64(0)
    W2 = max(1, (nb + 63) >> 6)
    block = np.zeros((na, W2), dtype=np.uint64)
    for i in range(na):
        ri = region[i]
        for j in range(nb):
            cj = comp[j]
            if (adj[ri, cj >> 6] >> np.uint64(cj & 63)) & U1:
                block[i, j >> 6] |= U1 << np.uint64(j & 63)
    # in-place elimination
    r = 0
    for col in range(nb):
        w = col >> 6
        bit = U1 << np.uint64(col & 63)
        pivot = -1
        for i in range(r, na):
            if block[i, w] & bit:
                pivot = i
                break
        if pivot < 0:
            continue
        if pivot != r:
            for k in range(W2):
                tmp = block[r, k]
                block[r, k] = block[pivot, k]
                block[pivot, k] = tmp
        for i in range(pivot + 1, na):
            if block[i, w] & bit:
                for k in range(W2):
                    block[i, k] ^= block[r, k]
        r += 1
        if r == na:
            break
    return np.int64(r)


@njit(cache=True)
def component_sizes(adj, n_sites, sizes, queue, visited):
    """Connected components of the subgraph induced on vertices [0, n_sites).

    Returns the number of components; their sizes fill ``sizes``.
    """
    for i in range(n_sites):
        visited[i] = 0
    ncomp = 0
    for s in range(n_sites):
        if visited[s]:
            continue
        visited[s] = 1
        queue[0] = s
        head = 0
        tail = 1
        size = 0
        W = adj.shape[1]
        while head < tail:
            v = queue[head]
            head += 1
            size += 1
            for w in range(W):
                word = adj[v, w]
                base = w << 6
                while word != U0:
                    low = word & (~word + U1)
                    u = base + _popcount(low - U1)
                    word ^= low
                    if u < n_sites and not visited[u]:
                        visited[u] = 1
                        queue[tail] = u
                        tail += 1
        sizes[ncomp] = size
        ncomp += 1
    return ncomp
