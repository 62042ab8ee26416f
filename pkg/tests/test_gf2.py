import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from miptlab.gf2 import BitMatrix, biadjacency, gf2_rank, pack_rows


def naive_rank(dense) -> int:
    """Reference O(n^3) elimination on a dense integer matrix (mod 2)."""
    a = [list(map(int, row)) for row in dense]
    if not a or not a[0]:
        return 0
    nrows, ncols = len(a), len(a[0])
    rank = 0
    row = 0
    for col in range(ncols):
        piv = None
        for r in range(row, nrows):
            if a[r][col] % 2:
                piv = r
                break
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        for r in range(nrows):
            if r != row and a[r][col] % 2:
                a[r] = [(x + y) % 2 for x, y in zip(a[r], a[row])]
        row += 1
        rank += 1
    return rank


def test_identity_rank():
    assert gf2_rank(BitMatrix.from_dense(np.eye(3))) == 3


def test_zero_rank():
    assert gf2_rank(BitMatrix(4, 7)) == 0


def test_duplicate_rows():
    m = BitMatrix.from_dense([[1, 1, 0], [1, 1, 0]])
    assert gf2_rank(m) == 1


def test_empty_matrix_rank_zero():
    assert gf2_rank(BitMatrix(0, 5)) == 0
    assert gf2_rank(BitMatrix(5, 0)) == 0


def test_rank_matches_naive_oracle():
    rng = np.random.default_rng(7)
    for _ in range(200):
        r = int(rng.integers(1, 65))
        c = int(rng.integers(1, 65))
        dense = rng.integers(0, 2, size=(r, c))
        m = BitMatrix.from_dense(dense)
        assert gf2_rank(m) == naive_rank(dense)
        # input unchanged (pure function)
        assert np.array_equal(m.to_dense(), dense.astype(np.uint8))


def test_rank_bounded_and_transpose_symmetric():
    rng = np.random.default_rng(3)
    for _ in range(100):
        r = int(rng.integers(1, 40))
        c = int(rng.integers(1, 40))
        dense = rng.integers(0, 2, size=(r, c))
        k = gf2_rank(BitMatrix.from_dense(dense))
        assert k <= min(r, c)
        assert k == gf2_rank(BitMatrix.from_dense(dense.T))


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 20),
    st.integers(1, 20),
    st.integers(0, 2**32 - 1),
)
def test_rank_row_permutation_invariant(r, c, seed):
    rng = np.random.default_rng(seed)
    dense = rng.integers(0, 2, size=(r, c))
    perm = rng.permutation(r)
    assert gf2_rank(BitMatrix.from_dense(dense)) == gf2_rank(
        BitMatrix.from_dense(dense[perm])
    )


def test_biadjacency_single_edge():
    adj = [{1}, {0}]
    m = biadjacency(adj, [0], [1])
    assert m.to_dense().tolist() == [[1]]


def test_biadjacency_empty_graph():
    adj = [set(), set(), set()]
    m = biadjacency(adj, [0], [1, 2])
    assert m.to_dense().tolist() == [[0, 0]]


def test_biadjacency_star():
    adj = [{1, 2, 3}, {0}, {0}, {0}]
    m = biadjacency(adj, [0], [1, 2, 3])
    assert m.to_dense().tolist() == [[1, 1, 1]]
    assert gf2_rank(m) == 1


def test_biadjacency_overlap_rejected():
    adj = [{1}, {0}]
    with pytest.raises(ValueError):
        biadjacency(adj, [0], [0, 1])


def test_biadjacency_respects_iteration_order():
    adj = [{2}, {3}, {0}, {1}]
    m = biadjacency(adj, [0, 1], [3, 2])
    assert m.to_dense().tolist() == [[0, 1], [1, 0]]


def test_biadjacency_rank_equals_transpose():
    rng = np.random.default_rng(11)
    for _ in range(30):
        n = int(rng.integers(4, 24))
        sets = [set() for _ in range(n)]
        for _ in range(n * 2):
            i, j = rng.integers(0, n, size=2)
            if i != j:
                sets[int(i)].add(int(j))
                sets[int(j)].add(int(i))
        adj = pack_rows(sets)
        cut = int(rng.integers(1, n))
        a = list(range(cut))
        b = list(range(cut, n))
        assert gf2_rank(biadjacency(adj, a, b)) == gf2_rank(biadjacency(adj, b, a))
