import numpy as np
import pytest

from miptlab.lattice import (
    Lattice,
    gate_layers,
    half_region,
    quarter_partition,
    schedule_1d,
    schedule_2d,
)


def test_schedule_1d_examples():
    assert schedule_1d(4, 0).tolist() == [[0, 1], [2, 3]]
    assert schedule_1d(4, 1).tolist() == [[1, 2], [3, 0]]
    for n in range(6):
        assert schedule_1d(8, n).tolist() == schedule_1d(8, n + 2).tolist()


def test_schedule_1d_odd_L_rejected():
    with pytest.raises(ValueError):
        schedule_1d(5, 0)


def test_schedule_1d_open_boundary_drops_wrap():
    layer = schedule_1d(4, 1, boundary="open")
    assert layer.tolist() == [[1, 2]]


def test_schedule_2d_covers_every_site_once():
    for L in (2, 4, 6):
        for n in range(8):
            layer = schedule_2d(L, n)
            sites = layer.ravel().tolist()
            assert sorted(sites) == list(range(L * L))


def test_schedule_2d_period_8():
    for n in range(10):
        assert schedule_2d(4, n).tolist() == schedule_2d(4, n + 8).tolist()


def test_schedule_2d_L2_two_gates():
    for n in range(8):
        layer = schedule_2d(2, n)
        assert layer.shape == (2, 2)
        assert sorted(layer.ravel().tolist()) == [0, 1, 2, 3]


def test_schedule_2d_direction_structure():
    """Over one period each direction is used twice (once per sublattice)."""
    L = 4
    seen = []
    for n in range(8):
        layer = schedule_2d(L, n)
        # recover the displacement of the first gate's partner
        a, b = layer[0]
        ax, ay = a % L, a // L
        bx, by = b % L, b // L
        dx = (bx - ax + L // 2) % L - L // 2
        dy = (by - ay + L // 2) % L - L // 2
        seen.append((dx, dy))
    from collections import Counter

    counts = Counter(seen)
    assert set(counts) == {(0, 1), (1, 0), (0, -1), (-1, 0)}
    assert all(v == 2 for v in counts.values())


def test_schedule_2d_controls_alternate_sublattice():
    L = 4
    for n in range(8):
        layer = schedule_2d(L, n)
        par = {(int(a) % L + int(a) // L) % 2 for a, _ in layer}
        assert par == {n % 2}


def test_schedule_2d_open_boundary_drops_wrapping_gates():
    L = 4
    full = schedule_2d(L, 0)
    open_layer = schedule_2d(L, 0, boundary="open")
    assert open_layer.shape[0] < full.shape[0]
    for a, b in open_layer:
        ax, ay = a % L, a // L
        bx, by = b % L, b // L
        assert abs(ax - bx) + abs(ay - by) == 1  # no wrap


def test_schedule_2d_odd_L_rejected():
    with pytest.raises(ValueError):
        schedule_2d(6 + 1, 0)


def test_quarter_partition_1d():
    lat = Lattice(1, 8)
    slabs = quarter_partition(lat)
    assert [s.tolist() for s in slabs] == [[0, 1], [2, 3], [4, 5], [6, 7]]


def test_quarter_partition_2d():
    lat = Lattice(2, 4)
    slabs = quarter_partition(lat)
    for k, slab in enumerate(slabs):
        assert slab.shape[0] == 4
        assert all(s % 4 == k for s in slab)  # column slabs
    union = np.concatenate(slabs)
    assert sorted(union.tolist()) == list(range(16))


def test_quarter_partition_requires_divisible_by_4():
    with pytest.raises(ValueError):
        quarter_partition(Lattice(1, 6))


def test_partition_properties():
    for dim, L in ((1, 16), (2, 8)):
        lat = Lattice(dim, L)
        slabs = quarter_partition(lat)
        sizes = {s.shape[0] for s in slabs}
        assert sizes == {L**dim // 4}
        union = np.concatenate(slabs)
        assert len(set(union.tolist())) == L**dim


def test_gate_layers_period():
    assert len(gate_layers(Lattice(1, 8))) == 2
    assert len(gate_layers(Lattice(2, 4))) == 8


def test_half_region():
    assert half_region(Lattice(1, 8)).tolist() == [0, 1, 2, 3]
    half = half_region(Lattice(2, 4))
    assert half.shape[0] == 8
    assert all(s % 4 < 2 for s in half)


def test_lattice_edges_raster():
    lat = Lattice(1, 4)
    assert lat.edges().tolist() == [[0, 1], [1, 2], [2, 3], [3, 0]]
    lat = Lattice(1, 4, boundary="open")
    assert lat.edges().tolist() == [[0, 1], [1, 2], [2, 3]]
    lat2 = Lattice(2, 2)
    # two sites per edge direction, periodic wrap suppressed for L=2 along x/y?
    edges = lat2.edges()
    assert edges.shape[1] == 2
