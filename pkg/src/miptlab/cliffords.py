"""Precomputed single- and two-qubit Clifford group tables.

The 24-element single-qubit group is enumerated by breadth-first search
from the identity over the generator order [H, S]; element 0 is the
identity and indices are stable across runs. The 11,520-element
projective two-qubit group is enumerated by BFS over the generator
order [H_a, S_a, H_b, S_b, CZ]. Each two-qubit element carries a
decomposition into local gates plus at most 3 CZ layers, obtained from
a right-coset factorization (20 cosets of the 576-element local
subgroup).

Tables are built once per process from dense 2x2 / 4x4 matrix
arithmetic and then frozen; the hot paths only index numpy arrays.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "STEP_LOCAL_A",
    "STEP_LOCAL_B",
    "STEP_CZ",
    "C1Tables",
    "C2Tables",
    "c1_tables",
    "c2_tables",
    "c1_compose",
    "c1_conjugate_pauli",
    "sample_c2",
    "decompose_c2",
    "C2_GROUP_ORDER",
]

PAULI_X, PAULI_Y, PAULI_Z = 0, 1, 2

# step kinds in a two-qubit decomposition
STEP_LOCAL_A, STEP_LOCAL_B, STEP_CZ = 0, 1, 2

C2_GROUP_ORDER = 11520

_SQ2 = 1.0 / np.sqrt(2.0)
_MAT_I = np.eye(2, dtype=complex)
_MAT_H = np.array([[1, 1], [1, -1]], dtype=complex) * _SQ2
_MAT_S = np.array([[1, 0], [0, 1j]], dtype=complex)
_MAT_X = np.array([[0, 1], [1, 0]], dtype=complex)
_MAT_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_MAT_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_PAULI_MATS = (_MAT_X, _MAT_Y, _MAT_Z)

# exp(+i pi X / 4): the local-complementation byproduct on the complemented vertex
_MAT_SQRT_IX = (np.eye(2, dtype=complex) + 1j * _MAT_X) * _SQ2


def _conj_image(U: np.ndarray, P: np.ndarray) -> tuple[int, int]:
    """Identify U^dagger P U as (pauli index, sign)."""
    Q = U.conj().T @ P @ U
    for k, M in enumerate(_PAULI_MATS):
        tr = np.trace(M @ Q) / 2.0
        if abs(tr - 1.0) < 1e-9:
            return k, 1
        if abs(tr + 1.0) < 1e-9:
            return k, -1
    raise AssertionError("conjugation image is not a signed Pauli")


def _phase_key(U: np.ndarray) -> bytes:
    """Hashable identity of a unitary modulo global phase.

    Clifford matrix entries are 0 or have magnitude >= 2^(-n/2), so fixing
    the first nonzero entry to be positive real and rounding is exact.
    """
    flat = U.ravel()
    for a in flat:
        if abs(a) > 0.1:
            U = U / (a / abs(a))
            break
    return (np.round(U, 6) + (0.0 + 0.0j)).tobytes()


def _c1_key(U: np.ndarray) -> bytes:
    return _phase_key(U)


@dataclass(frozen=True)
class C1Tables:
    """Frozen lookup tables for the 24-element single-qubit Clifford group."""

    mats: np.ndarray          # (24, 2, 2) complex, canonical representatives
    mul: np.ndarray           # (24, 24) uint8: mul[a, b] = index of a . b
    adj: np.ndarray           # (24,) uint8: index of the adjoint
    conj_pauli: np.ndarray    # (24, 3) uint8: pauli index of g^dagger P g
    conj_sign: np.ndarray     # (24, 3) int8: sign of g^dagger P g
    zgrp: np.ndarray          # (24,) bool: g Z g^dagger = +Z (commutes with CZ)
    reduce_move: np.ndarray   # (24,) int8: next move reducing g to identity
                              #   0 -> local complementation at the vertex
                              #   1 -> local complementation at a neighbor
    id_i: int
    id_h: int
    id_s: int
    id_sdg: int
    id_x: int
    id_y: int
    id_z: int
    id_xh: int                # matrix X.H (maps |+> to |1>)
    id_sqrt_ix: int           # exp(+i pi X/4)


@functools.lru_cache(maxsize=1)
def c1_tables() -> C1Tables:
    # BFS enumeration over documented generator order [H, S]
    mats = [_MAT_I]
    key_to_idx = {_c1_key(_MAT_I): 0}
    head = 0
    while head < len(mats):
        cur = mats[head]
        head += 1
        for gen in (_MAT_H, _MAT_S):
            cand = gen @ cur
            key = _c1_key(cand)
            if key not in key_to_idx:
                key_to_idx[key] = len(mats)
                mats.append(cand)
    assert len(mats) == 24, f"C1 enumeration found {len(mats)} elements"

    mul = np.zeros((24, 24), dtype=np.uint8)
    for a in range(24):
        for b in range(24):
            mul[a, b] = key_to_idx[_c1_key(mats[a] @ mats[b])]
    adj = np.zeros(24, dtype=np.uint8)
    for a in range(24):
        adj[a] = key_to_idx[_c1_key(mats[a].conj().T)]

    conj_pauli = np.zeros((24, 3), dtype=np.uint8)
    conj_sign = np.zeros((24, 3), dtype=np.int8)
    for a in range(24):
        for p, P in enumerate(_PAULI_MATS):
            k, s = _conj_image(mats[a], P)
            conj_pauli[a, p] = k
            conj_sign[a, p] = s

    zgrp = np.zeros(24, dtype=np.bool_)
    for a in range(24):
        # g commutes with CZ iff g Z g^dagger = +Z, i.e. g^dagger Z g = +Z
        zgrp[a] = conj_pauli[a, PAULI_Z] == PAULI_Z and conj_sign[a, PAULI_Z] == 1

    def locate(U):
        return key_to_idx[_c1_key(U)]

    id_i = locate(_MAT_I)
    id_h = locate(_MAT_H)
    id_s = locate(_MAT_S)
    id_sdg = locate(_MAT_S.conj().T)
    id_x = locate(_MAT_X)
    id_y = locate(_MAT_Y)
    id_z = locate(_MAT_Z)
    id_xh = locate(_MAT_X @ _MAT_H)
    id_sqrt_ix = locate(_MAT_SQRT_IX)
    assert id_i == 0

    # Reduction walk: local complementation at the vertex itself appends
    # sqrt(iX) to its operator, at a neighbor appends S. BFS on the Cayley
    # graph toward the identity gives, per element, the first move of a
    # shortest reducing word.
    reduce_move = np.full(24, -1, dtype=np.int8)
    dist = np.full(24, 127, dtype=np.int16)
    dist[id_i] = 0
    frontier = [id_i]
    factors = (id_sqrt_ix, id_s)
    while frontier:
        nxt = []
        for v in frontier:
            for move, f in enumerate(factors):
                # u with u.factor == v  =>  u = v.factor^dagger
                u = int(mul[v, adj[f]])
                if dist[u] > dist[v] + 1:
                    dist[u] = dist[v] + 1
                    reduce_move[u] = move
                    nxt.append(u)
        frontier = nxt
    assert dist.max() < 127, "reduction factors do not generate C1"

    return C1Tables(
        mats=np.array(mats),
        mul=mul,
        adj=adj,
        conj_pauli=conj_pauli,
        conj_sign=conj_sign,
        zgrp=zgrp,
        reduce_move=reduce_move,
        id_i=id_i,
        id_h=id_h,
        id_s=id_s,
        id_sdg=id_sdg,
        id_x=id_x,
        id_y=id_y,
        id_z=id_z,
        id_xh=id_xh,
        id_sqrt_ix=id_sqrt_ix,
    )


def c1_compose(a: int, b: int) -> int:
    """Index of a.b (a applied after b)."""
    return int(c1_tables().mul[a, b])


def c1_conjugate_pauli(g: int, pauli: int) -> tuple[int, int]:
    """g^dagger P g as (sign, pauli index)."""
    t = c1_tables()
    return int(t.conj_sign[g, pauli]), int(t.conj_pauli[g, pauli])


# ---------------------------------------------------------------------------
# two-qubit group
# ---------------------------------------------------------------------------

_CZ4 = np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex)


def _c2_key(M: np.ndarray) -> bytes:
    return _phase_key(M)


@dataclass(frozen=True)
class C2Tables:
    """Frozen decomposition tables for the 11,520-element two-qubit group."""

    size: int
    dec_kind: np.ndarray   # (size, maxlen) uint8 in {STEP_LOCAL_A, STEP_LOCAL_B, STEP_CZ}
    dec_arg: np.ndarray    # (size, maxlen) uint8: local Clifford index (0 for CZ steps)
    dec_len: np.ndarray    # (size,) uint8
    n_cz: np.ndarray       # (size,) uint8: CZ steps in the decomposition
    mats: np.ndarray | None = field(default=None, compare=False)

    def steps(self, idx: int) -> list[tuple[int, int]]:
        k = int(self.dec_len[idx])
        return [(int(self.dec_kind[idx, j]), int(self.dec_arg[idx, j])) for j in range(k)]


def _build_c2(with_matrices: bool) -> C2Tables:
    c1 = c1_tables()
    gens = [
        np.kron(_MAT_H, _MAT_I),
        np.kron(_MAT_S, _MAT_I),
        np.kron(_MAT_I, _MAT_H),
        np.kron(_MAT_I, _MAT_S),
        _CZ4,
    ]

    # 1) full enumeration: stable ids by BFS discovery order
    mats = [np.eye(4, dtype=complex)]
    key_to_idx = {_c2_key(mats[0]): 0}
    head = 0
    while head < len(mats):
        cur = mats[head]
        head += 1
        for gen in gens:
            cand = gen @ cur
            key = _c2_key(cand)
            if key not in key_to_idx:
                key_to_idx[key] = len(mats)
                mats.append(cand)
    size = len(mats)
    assert size == C2_GROUP_ORDER, f"C2 enumeration found {size} elements"

    # 2) left-coset representatives of the local subgroup: g = (u x v) . rep,
    #    i.e. the free local layer is applied after the rep's word
    local_key_to_uv = {}
    local_mats = {}
    for u in range(24):
        for v in range(24):
            M = np.kron(c1.mats[u], c1.mats[v])
            local_key_to_uv[_c2_key(M)] = (u, v)
            local_mats[(u, v)] = M

    reps: list[np.ndarray] = [np.eye(4, dtype=complex)]
    rep_words: list[list[tuple[int, int]]] = [[]]
    rep_ncz = [0]

    def find_rep(M):
        """Return (rep index, u, v) with M = (u x v) . rep, or None."""
        for ri, R in enumerate(reps):
            L = M @ R.conj().T
            uv = local_key_to_uv.get(_c2_key(L))
            if uv is not None:
                return ri, uv[0], uv[1]
        return None

    frontier = [0]
    while frontier:
        nxt = []
        for ri in frontier:
            R = reps[ri]
            for u in range(24):
                for v in range(24):
                    cand = _CZ4 @ local_mats[(u, v)] @ R
                    if find_rep(cand) is None:
                        word = list(rep_words[ri])
                        if u != c1.id_i:
                            word.append((STEP_LOCAL_A, u))
                        if v != c1.id_i:
                            word.append((STEP_LOCAL_B, v))
                        word.append((STEP_CZ, 0))
                        reps.append(cand)
                        rep_words.append(word)
                        rep_ncz.append(rep_ncz[ri] + 1)
                        nxt.append(len(reps) - 1)
        frontier = nxt
    assert len(reps) == 20, f"expected 20 local cosets, found {len(reps)}"
    assert max(rep_ncz) <= 3

    # 3) per-element decomposition: the rep word, then the free local layer
    words = []
    for idx in range(size):
        hit = find_rep(mats[idx])
        assert hit is not None
        ri, u, v = hit
        word = list(rep_words[ri])
        if u != c1.id_i:
            word.append((STEP_LOCAL_A, u))
        if v != c1.id_i:
            word.append((STEP_LOCAL_B, v))
        words.append((word, rep_ncz[ri]))

    maxlen = max(len(w) for w, _ in words)
    dec_kind = np.zeros((size, maxlen), dtype=np.uint8)
    dec_arg = np.zeros((size, maxlen), dtype=np.uint8)
    dec_len = np.zeros(size, dtype=np.uint8)
    n_cz = np.zeros(size, dtype=np.uint8)
    for idx, (word, ncz) in enumerate(words):
        dec_len[idx] = len(word)
        n_cz[idx] = ncz
        for j, (kind, arg) in enumerate(word):
            dec_kind[idx, j] = kind
            dec_arg[idx, j] = arg

    return C2Tables(
        size=size,
        dec_kind=dec_kind,
        dec_arg=dec_arg,
        dec_len=dec_len,
        n_cz=n_cz,
        mats=np.array(mats) if with_matrices else None,
    )


@functools.lru_cache(maxsize=2)
def c2_tables(with_matrices: bool = False) -> C2Tables:
    return _build_c2(with_matrices)


def sample_c2(rng: np.random.Generator) -> int:
    """Uniform two-qubit Clifford element id."""
    return int(rng.integers(0, C2_GROUP_ORDER))


def decompose_c2(idx: int) -> list[tuple[int, int]]:
    """Step sequence [(kind, arg), ...], applied first step first.

    kind is STEP_LOCAL_A / STEP_LOCAL_B (arg = local Clifford index) or
    STEP_CZ (arg unused). At most 3 CZ steps.
    """
    t = c2_tables()
    if not 0 <= idx < t.size:
        raise ValueError(f"two-qubit Clifford id out of range: {idx}")
    return t.steps(idx)


def c2_matrix(idx: int) -> np.ndarray:
    """Dense 4x4 matrix of an element (test/oracle use)."""
    t = c2_tables(with_matrices=True)
    return t.mats[idx]
