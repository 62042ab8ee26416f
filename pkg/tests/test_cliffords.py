import numpy as np
import pytest

from miptlab.cliffords import (
    C2_GROUP_ORDER,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    STEP_CZ,
    STEP_LOCAL_A,
    STEP_LOCAL_B,
    c1_compose,
    c1_conjugate_pauli,
    c1_tables,
    c2_matrix,
    c2_tables,
    decompose_c2,
    sample_c2,
)

CZ4 = np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex)


@pytest.fixture(scope="module")
def c1():
    return c1_tables()


@pytest.fixture(scope="module")
def c2():
    return c2_tables(with_matrices=True)


def test_c1_identity_and_closure(c1):
    assert c1.mul.shape == (24, 24)
    assert c1.mul.min() >= 0 and c1.mul.max() < 24
    for g in range(24):
        assert c1_compose(c1.id_i, g) == g
        assert c1_compose(g, c1.id_i) == g


def test_c1_h_squared_and_s_fourth(c1):
    assert c1_compose(c1.id_h, c1.id_h) == c1.id_i
    g = c1.id_s
    for _ in range(3):
        g = c1_compose(c1.id_s, g)
    assert g == c1.id_i


def test_c1_associativity_full(c1):
    _m = c1.mul
    left = _m[_m, :]          # left[a, b, c] = (a.b).c
    right = _m[:, _m]         # right[a, b, c] = a.(b.c)
    assert np.array_equal(left, right)


def test_c1_inverses(c1):
    for g in range(24):
        assert c1.mul[g, c1.adj[g]] == c1.id_i
        assert c1.mul[c1.adj[g], g] == c1.id_i


def test_c1_conjugation_examples(c1):
    assert c1_conjugate_pauli(c1.id_i, PAULI_Z) == (1, PAULI_Z)
    assert c1_conjugate_pauli(c1.id_h, PAULI_Z) == (1, PAULI_X)
    # g^dagger X g for g = S = diag(1, i) is -Y (and S X S^dagger = +Y)
    assert c1_conjugate_pauli(c1.id_s, PAULI_X) == (-1, PAULI_Y)
    assert c1_conjugate_pauli(c1.id_sdg, PAULI_X) == (1, PAULI_Y)


def test_c1_conjugation_is_signed_permutation(c1):
    for g in range(24):
        images = [c1.conj_pauli[g, p] for p in (PAULI_X, PAULI_Y, PAULI_Z)]
        assert sorted(images) == [0, 1, 2]
        # X and Z images anticommute: they stay distinct Paulis
        assert c1.conj_pauli[g, PAULI_X] != c1.conj_pauli[g, PAULI_Z]


_PAULIS = (
    np.array([[0, 1], [1, 0]], complex),
    np.array([[0, -1j], [1j, 0]], complex),
    np.array([[1, 0], [0, -1]], complex),
)


def _conj_oracle(U, p):
    """Identify U^dagger P U by direct 2x2 matrix conjugation."""
    Q = U.conj().T @ _PAULIS[p] @ U
    for k, P in enumerate(_PAULIS):
        tr = np.trace(P @ Q) / 2
        if abs(tr - 1) < 1e-9:
            return 1, k
        if abs(tr + 1) < 1e-9:
            return -1, k
    raise AssertionError("not a signed Pauli")


def test_c1_conjugation_matches_matrix_oracle(c1):
    for g in range(24):
        for p in range(3):
            s, q = _conj_oracle(c1.mats[g], p)
            assert (c1.conj_sign[g, p], c1.conj_pauli[g, p]) == (s, q)


def test_c2_group_order(c2):
    assert c2.size == C2_GROUP_ORDER == 11520


def test_c2_identity_decomposition():
    assert decompose_c2(0) == []


def test_c2_cz_element_single_step(c2):
    for idx in range(c2.size):
        steps = decompose_c2(idx)
        if len(steps) == 1 and steps[0][0] == STEP_CZ:
            assert np.allclose(c2.mats[idx], CZ4)
            return
    raise AssertionError("no element decomposes to a bare CZ step")


def test_c2_max_three_cz(c2):
    assert int(c2.n_cz.max()) <= 3
    for idx in (0, 1, 17, 4040, 11519):
        steps = decompose_c2(idx)
        assert sum(1 for k, _ in steps if k == STEP_CZ) == int(c2.n_cz[idx])


def test_c2_entangling_class_sizes(c2):
    assert np.bincount(c2.n_cz).tolist() == [576, 5184, 5184, 576]


def test_c2_sampler_deterministic():
    r1 = np.random.Generator(np.random.Philox(key=5))
    r2 = np.random.Generator(np.random.Philox(key=5))
    a = [sample_c2(r1) for _ in range(50)]
    b = [sample_c2(r2) for _ in range(50)]
    assert a == b
    assert all(0 <= x < C2_GROUP_ORDER for x in a)


def test_c2_sampler_uniform_chi_square():
    rng = np.random.Generator(np.random.Philox(key=99))
    n = 10**6
    counts = np.bincount(rng.integers(0, C2_GROUP_ORDER, size=n), minlength=C2_GROUP_ORDER)
    expected = n / C2_GROUP_ORDER
    chi2 = float(((counts - expected) ** 2 / expected).sum())
    dof = C2_GROUP_ORDER - 1
    # 3-sigma band for a chi-square with dof degrees of freedom
    assert abs(chi2 - dof) < 3 * np.sqrt(2 * dof)


def test_c2_class_marginal_matches_enumeration(c2):
    rng = np.random.Generator(np.random.Philox(key=123))
    n = 200_000
    draws = rng.integers(0, C2_GROUP_ORDER, size=n)
    samp = np.bincount(c2.n_cz[draws], minlength=4) / n
    exact = np.bincount(c2.n_cz).astype(float) / c2.size
    assert np.allclose(samp, exact, atol=5e-3)


def test_c2_decomposition_replay_sample(c2, c1):
    rng = np.random.default_rng(0)
    for idx in rng.integers(0, c2.size, size=200):
        M = np.eye(4, dtype=complex)
        for kind, arg in decompose_c2(int(idx)):
            if kind == STEP_LOCAL_A:
                G = np.kron(c1.mats[arg], np.eye(2))
            elif kind == STEP_LOCAL_B:
                G = np.kron(np.eye(2), c1.mats[arg])
            else:
                G = CZ4
            M = G @ M
        T = c2.mats[int(idx)]
        k = int(np.argmax(np.abs(T)))
        ratio = M.flat[k] / T.flat[k]
        assert np.allclose(M, ratio * T, atol=1e-9)


def test_c2_invalid_id_rejected():
    with pytest.raises(ValueError):
        decompose_c2(11520)
