import numpy as np
import pytest

from miptlab.cliffords import (
    C2_GROUP_ORDER,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    c1_tables,
    c2_matrix,
)
from miptlab.graphstate import GraphState, new_plus_state

from _dense import DenseSim, states_equal


def _rng(seed):
    return np.random.Generator(np.random.Philox(key=seed))


def test_new_plus_state_examples():
    gs = new_plus_state(3)
    assert gs.edges() == []
    for region in ([0], [1], [0, 1], [2]):
        assert gs.entanglement_entropy(region) == 0

    gs = new_plus_state(1)
    assert gs.measure_pauli(0, PAULI_X, _rng(0)) == 1

    gs = new_plus_state(2)
    gs.apply_cz(0, 1)
    assert gs.edges() == [(0, 1)]


def test_zero_qubits_rejected():
    with pytest.raises(ValueError):
        GraphState(0)


def test_apply_local_identity_and_h_twice():
    c1 = c1_tables()
    gs = new_plus_state(2)
    gs.apply_cz(0, 1)
    ref = gs.to_statevector()
    gs.apply_local(0, c1.id_i)
    assert states_equal(gs.to_statevector(), ref)
    gs.apply_local(0, c1.id_h)
    gs.apply_local(0, c1.id_h)
    assert states_equal(gs.to_statevector(), ref)


def test_local_gates_leave_entropies_unchanged():
    c1 = c1_tables()
    rng = np.random.default_rng(5)
    gen = _rng(5)
    for _ in range(20):
        n = 5
        gs = new_plus_state(n)
        for _ in range(8):
            a, b = rng.choice(n, 2, replace=False)
            gs.apply_two_qubit_clifford(int(a), int(b), int(rng.integers(0, C2_GROUP_ORDER)))
        region = list(rng.choice(n, int(rng.integers(1, n)), replace=False))
        before = gs.entanglement_entropy(region)
        gs.apply_local(int(rng.integers(0, n)), int(rng.integers(0, 24)))
        assert gs.entanglement_entropy(region) == before


def test_local_complement_isolated_noop():
    gs = new_plus_state(3)
    gs.apply_cz(1, 2)
    gs.local_complement(0)
    assert gs.edges() == [(1, 2)]


def test_local_complement_triangle():
    gs = new_plus_state(3)
    for a, b in [(0, 1), (0, 2), (1, 2)]:
        gs.apply_cz(a, b)
    ref = gs.to_statevector()
    gs.local_complement(0)
    assert sorted(gs.edges()) == [(0, 1), (0, 2)]
    assert states_equal(gs.to_statevector(), ref)


def test_local_complement_preserves_random_states():
    rng = np.random.default_rng(17)
    for _ in range(25):
        n = 5
        gs = new_plus_state(n)
        for _ in range(10):
            a, b = rng.choice(n, 2, replace=False)
            gs.apply_two_qubit_clifford(int(a), int(b), int(rng.integers(0, C2_GROUP_ORDER)))
        ref = gs.to_statevector()
        gs.local_complement(int(rng.integers(0, n)))
        gs.check_invariants()
        assert states_equal(gs.to_statevector(), ref)


def test_apply_cz_toggles_edge_with_identity_vops():
    gs = new_plus_state(2)
    gs.apply_cz(0, 1)
    assert gs.edges() == [(0, 1)]
    gs.apply_cz(0, 1)
    assert gs.edges() == []
    with pytest.raises(ValueError):
        gs.apply_cz(1, 1)


def test_two_qubit_identity_and_cz_element():
    gs = new_plus_state(3)
    gs.apply_cz(0, 1)
    ref = gs.to_statevector()
    gs.apply_two_qubit_clifford(0, 2, 0)  # identity element
    assert states_equal(gs.to_statevector(), ref)

    # element equal to CZ acts like apply_cz
    czidx = None
    from miptlab.cliffords import STEP_CZ, decompose_c2

    for idx in range(C2_GROUP_ORDER):
        steps = decompose_c2(idx)
        if len(steps) == 1 and steps[0][0] == STEP_CZ:
            czidx = idx
            break
    g1 = new_plus_state(2)
    g1.apply_two_qubit_clifford(0, 1, czidx)
    g2 = new_plus_state(2)
    g2.apply_cz(0, 1)
    assert states_equal(g1.to_statevector(), g2.to_statevector())


def test_measure_z_on_plus_is_fair():
    gen = _rng(42)
    tot = 0
    for _ in range(10_000):
        gs = new_plus_state(1)
        tot += gs.measure_pauli(0, PAULI_Z, gen)
    # 3-sigma band for a fair coin
    assert abs(tot) < 3 * np.sqrt(10_000)


def test_bell_pair_z_outcomes_correlated():
    c1 = c1_tables()
    gen = _rng(7)
    for _ in range(50):
        gs = new_plus_state(2)
        gs.apply_cz(0, 1)
        gs.apply_local(1, c1.id_h)  # (I x H) CZ |++> = (|00> + |11>)/sqrt(2)
        m0 = gs.measure_pauli(0, PAULI_Z, gen)
        m1 = gs.measure_pauli(1, PAULI_Z, gen)
        assert m0 == m1


def test_measure_x_on_plus_deterministic():
    gen = _rng(3)
    gs = new_plus_state(1)
    assert gs.measure_pauli(0, PAULI_X, gen) == 1
    # state unchanged: measuring again gives the same
    assert gs.measure_pauli(0, PAULI_X, gen) == 1


def test_z_measurement_isolates_vertex():
    rng = np.random.default_rng(23)
    gen = _rng(23)
    for _ in range(20):
        n = 5
        gs = new_plus_state(n)
        for _ in range(8):
            a, b = rng.choice(n, 2, replace=False)
            gs.apply_two_qubit_clifford(int(a), int(b), int(rng.integers(0, C2_GROUP_ORDER)))
        q = int(rng.integers(0, n))
        gs.measure_pauli(q, PAULI_Z, gen)
        assert gs.deg[q] == 0
        gs.check_invariants()


def test_parity_zz_examples():
    c1 = c1_tables()
    gen = _rng(11)
    # |00>
    gs = new_plus_state(2)
    gs.apply_local(0, c1.id_h)
    gs.apply_local(1, c1.id_h)
    assert gs.measure_parity_zz(0, 1, gen) == 1

    # Bell state -> +1 deterministically
    for _ in range(20):
        gs = new_plus_state(2)
        gs.apply_cz(0, 1)
        gs.apply_local(1, c1.id_h)  # (I x H) CZ |++> = Bell
        assert gs.measure_parity_zz(0, 1, gen) == 1


def test_parity_zz_on_plus_plus_matches_oracle():
    c1 = c1_tables()
    plus_minus = 0
    for seed in range(60):
        gen = _rng(1000 + seed)
        oracle_gen = _rng(1000 + seed)
        gs = new_plus_state(2)
        m = gs.measure_parity_zz(0, 1, gen)
        plus_minus += m
        # oracle: project |++> onto the ZZ = m eigenspace
        dn = DenseSim(2)
        ZZ = np.kron(np.diag([1, -1]), np.diag([1, -1])).astype(complex)
        psi = dn.psi
        mo = 1 if oracle_gen.random() < 0.5 else -1
        proj = (psi + mo * (ZZ @ psi)) / 2
        assert m == mo  # same coin convention, same stream
        assert states_equal(gs.to_statevector(), proj / np.linalg.norm(proj))
    assert abs(plus_minus) < 30  # roughly fair


def test_entropy_examples():
    gs = new_plus_state(2)
    gs.apply_cz(0, 1)
    assert gs.entanglement_entropy([]) == 0
    assert gs.entanglement_entropy([0]) == 1

    # star (GHZ class): center 0, leaves 1..3; two leaves carry 1 bit
    gs = new_plus_state(4)
    for leaf in (1, 2, 3):
        gs.apply_cz(0, leaf)
    assert gs.entanglement_entropy([1, 2]) == 1
    # dense check
    dn = DenseSim(4)
    for leaf in (1, 2, 3):
        dn.apply_cz(0, leaf)
    assert dn.entropy([1, 2]) == 1


def test_statevector_examples():
    gs = new_plus_state(2)
    assert states_equal(gs.to_statevector(), np.array([1, 1, 1, 1]) / 2)
    gs.apply_cz(0, 1)
    assert states_equal(gs.to_statevector(), np.array([1, 1, 1, -1]) / 2)


def test_subadditivity_spot_check():
    rng = np.random.default_rng(29)
    for _ in range(25):
        n = 6
        gs = new_plus_state(n)
        for _ in range(10):
            a, b = rng.choice(n, 2, replace=False)
            gs.apply_two_qubit_clifford(int(a), int(b), int(rng.integers(0, C2_GROUP_ORDER)))
        sites = list(rng.permutation(n))
        ka = int(rng.integers(1, 3))
        kb = int(rng.integers(1, 3))
        A, B = sites[:ka], sites[ka : ka + kb]
        SA = gs.entanglement_entropy(A)
        SB = gs.entanglement_entropy(B)
        SAB = gs.entanglement_entropy(A + B)
        assert SA + SB >= SAB


def test_oracle_equivalence_small():
    """Random hybrid circuits with X/Y/Z measurements and shared coins."""
    rng = np.random.default_rng(99)
    for circ in range(60):
        n = int(rng.integers(2, 7))
        gen_g = _rng(5000 + circ)
        gen_d = _rng(5000 + circ)
        gs = new_plus_state(n)
        dn = DenseSim(n)
        for _ in range(8):
            a, b = rng.choice(n, 2, replace=False)
            cid = int(rng.integers(0, C2_GROUP_ORDER))
            gs.apply_two_qubit_clifford(int(a), int(b), cid)
            dn.apply_2q(int(a), int(b), c2_matrix(cid))
            for q in range(n):
                if rng.random() < 0.25:
                    basis = int(rng.integers(0, 3))
                    m1 = gs.measure_pauli(q, basis, gen_g)
                    m2 = dn.measure_pauli(q, basis, gen_d)
                    assert m1 == m2
            assert states_equal(gs.to_statevector(), dn.psi)
            gs.check_invariants()
        for _ in range(4):
            k = int(rng.integers(1, n))
            region = list(rng.choice(n, k, replace=False))
            assert gs.entanglement_entropy(region) == dn.entropy(region)


def test_dump_roundtrip():
    import json

    gs = new_plus_state(3)
    gs.apply_cz(0, 2)
    d = json.loads(gs.dump())
    assert d["n"] == 3
    assert d["edges"] == [[0, 2]]
    assert len(d["vops"]) == 3
