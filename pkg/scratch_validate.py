"""Scratch: validate engine conventions against a dense simulator."""
import sys

sys.path.insert(0, "src")
import numpy as np

from miptlab.cliffords import c1_tables, c2_matrix, C2_GROUP_ORDER, PAULI_Z
from miptlab.graphstate import GraphState, _apply_1q_dense, _cz_diag_dense


class Dense:
    def __init__(self, n):
        self.n = n
        self.psi = np.full(1 << n, 1.0 / np.sqrt(1 << n), dtype=complex)

    def cz(self, a, b):
        self.psi = _cz_diag_dense(self.n, a, b) * self.psi

    def local(self, q, U):
        self.psi = _apply_1q_dense(self.psi, U, q, self.n)

    def two_qubit(self, a, b, M4):
        n = self.n
        psi = self.psi.reshape([2] * n)
        psi = np.moveaxis(psi, (a, b), (0, 1)).reshape(4, -1)
        psi = (M4 @ psi).reshape([2, 2] + [2] * (n - 2))
        self.psi = np.moveaxis(psi, (0, 1), (a, b)).reshape(-1)

    def measure_pauli(self, q, P2, rng):
        n = self.n
        full = 1.0
        # build projector application via dense op
        op = [np.eye(2)] * n
        op[q] = P2
        M = op[0]
        for k in range(1, n):
            M = np.kron(M, op[k])
        pplus = np.vdot(self.psi, (self.psi + M @ self.psi) / 2).real
        if pplus > 1 - 1e-9:
            m = 1
        elif pplus < 1e-9:
            m = -1
        else:
            m = 1 if rng.random() < 0.5 else -1
        proj = (self.psi + m * (M @ self.psi)) / 2
        self.psi = proj / np.linalg.norm(proj)
        return m

    def entropy(self, region):
        n = self.n
        region = sorted(region)
        rest = [q for q in range(n) if q not in region]
        psi = self.psi.reshape([2] * n)
        psi = np.moveaxis(psi, region, range(len(region))).reshape(1 << len(region), -1)
        sv = np.linalg.svd(psi, compute_uv=False)
        return int(round(np.log2(np.count_nonzero(sv > 1e-9))))


def states_equal(psi, phi, tol=1e-8):
    k = np.argmax(np.abs(phi))
    if abs(phi[k]) < tol:
        return False
    ratio = psi[k] / phi[k]
    return abs(abs(ratio) - 1) < 1e-6 and np.allclose(psi, ratio * phi, atol=tol)


def run_random_circuits(n_circ=300, n=5, depth=8, p=0.3, seed=0):
    c1 = c1_tables()
    X = np.array([[0, 1], [1, 0]], complex)
    Y = np.array([[0, -1j], [1j, 0]], complex)
    Z = np.diag([1, -1]).astype(complex)
    paulis = [X, Y, Z]
    master = np.random.default_rng(seed)
    fails = 0
    for c in range(n_circ):
        seed_c = int(master.integers(0, 2**62))
        rng_g = np.random.Generator(np.random.Philox(key=seed_c))
        rng_d = np.random.Generator(np.random.Philox(key=seed_c))
        # structural choices shared via a separate stream
        rng_s = np.random.default_rng(seed_c)
        gs = GraphState(n)
        dn = Dense(n)
        for t in range(depth):
            # random two-qubit gate on a random pair
            a, b = rng_s.choice(n, size=2, replace=False)
            cid = int(rng_s.integers(0, C2_GROUP_ORDER))
            gs.apply_two_qubit_clifford(int(a), int(b), cid)
            dn.two_qubit(int(a), int(b), c2_matrix(cid))
            if not states_equal(gs.to_statevector(), dn.psi):
                print(f"circuit {c} step {t}: GATE mismatch a={a} b={b} cid={cid}")
                return False
            # random measurements
            for q in range(n):
                if rng_s.random() < p:
                    basis = int(rng_s.integers(0, 3))
                    m1 = gs.measure_pauli(q, basis, rng_g)
                    m2 = dn.measure_pauli(q, paulis[basis], rng_d)
                    if m1 != m2:
                        print(f"circuit {c} step {t}: outcome mismatch q={q} basis={basis} {m1} vs {m2}")
                        return False
                    if not states_equal(gs.to_statevector(), dn.psi):
                        print(f"circuit {c} step {t}: MEAS mismatch q={q} basis={basis} m={m1}")
                        return False
            # entropies
            for _ in range(2):
                k = int(rng_s.integers(1, n))
                region = list(rng_s.choice(n, size=k, replace=False))
                s1 = gs.entanglement_entropy(region)
                s2 = dn.entropy(region)
                if s1 != s2:
                    print(f"circuit {c} step {t}: entropy mismatch {region}: {s1} vs {s2}")
                    return False
    print("all circuits match")
    return True


if __name__ == "__main__":
    t = c1_tables()
    # quick sanity of local complement + CZ on tiny cases first
    gs = GraphState(2)
    gs.apply_cz(0, 1)
    print("edge after CZ:", gs.edges())
    psi = gs.to_statevector()
    print("CZ|++> ok:", states_equal(psi, np.array([1, 1, 1, -1]) / 2))

    # triangle local complement
    gs = GraphState(3)
    for (a, b) in [(0, 1), (0, 2), (1, 2)]:
        gs.apply_cz(a, b)
    ref = gs.to_statevector()
    gs.local_complement(0)
    print("LC triangle edges:", sorted(gs.edges()))
    print("LC preserves state:", states_equal(gs.to_statevector(), ref))

    ok = run_random_circuits()
    sys.exit(0 if ok else 1)
