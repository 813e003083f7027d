import random

import pytest

from miscube.cube import Cube, CubeError, Edge, EVEN, ODD, hamming, vertex_parity

from util import vset, vx


def test_flip_examples():
    c = Cube(3)
    assert c.flip(vx("000"), 1) == vx("100")
    assert c.flip(vx("101"), 3) == vx("100")


def test_flip_is_involution():
    c = Cube(4)
    for v in range(c.N):
        for i in range(1, 5):
            assert c.flip(c.flip(v, i), i) == v


def test_vertex_parity():
    assert vertex_parity(vx("000")) == EVEN
    assert vertex_parity(vx("101")) == EVEN
    assert vertex_parity(vx("100")) == ODD


def test_edge_parity_examples():
    c = Cube(3)
    assert c.edge_parity(Edge(vx("000"), 1)) == EVEN
    assert c.edge_parity(Edge(vx("010"), 1)) == ODD


def test_edge_parity_same_from_both_ends():
    c = Cube(4)
    for e in c.edges():
        u, v = e.ends()
        assert c.edge_parity(c.edge(u, v)) == c.edge_parity(c.edge(v, u))
        assert vertex_parity(u & ~(1 << (e.dir - 1))) == c.edge_parity(e)


def test_edge_ids_round_trip():
    c = Cube(4)
    es = c.edges()
    assert len(es) == 4 * 8
    assert [c.edge_id(e) for e in es] == list(range(len(es)))
    for e in es:
        assert c.edge_from_id(c.edge_id(e)) == e
        assert Edge.parse(str(e)) == e


def test_edge_needs_adjacent_ends():
    c = Cube(3)
    with pytest.raises(CubeError):
        c.edge(0, 3)


def test_neighborhood_examples():
    assert Cube(3).neighborhood(vset(Cube(3), "000")) == vset(Cube(3), "100", "010", "001")
    assert Cube(2).neighborhood(Cube(2).full) == Cube(2).full
    c = Cube(4)
    assert c.neighborhood(c.even) == c.odd
    assert c.odd.bit_count() == 8


def test_boundary_examples():
    c2 = Cube(2)
    assert c2.boundary_size(vset(c2, "00")) == 2
    c3 = Cube(3)
    half = c3.subcube(1, 0)
    assert c3.boundary(half) == c3.boundary_i(half, 1)
    assert c3.boundary_size(half) == 4


def test_boundary_splits_by_direction():
    c = Cube(5)
    rng = random.Random(3)
    for _ in range(1000):
        A = rng.getrandbits(c.N)
        assert sum(len(c.boundary_i(A, i)) for i in range(1, 6)) == c.boundary_size(A)


def test_boundary_between_requires_disjoint():
    c = Cube(3)
    with pytest.raises(CubeError):
        c.boundary_between(0b11, 0b10)
    assert len(c.boundary_between(vset(c, "000"), vset(c, "100", "010"))) == 2


def test_projection_and_fibers():
    c = Cube(3)
    assert c.project(vx("101"), 2) == 1
    assert c.fiber(1, 2) == vset(c, "100", "110", "101", "111")
    c4 = Cube(4)
    union = 0
    for w in range(8):
        F = c4.fiber(w, 1)
        assert F.bit_count() == 2 and not union & F
        union |= F
    assert union == c4.full
    for w in range(4):
        assert {c4.project(v, 2) for v in c4.vertices(c4.fiber(w, 2))} == {w}


def test_shift_and_neighborhood_agree():
    c = Cube(4)
    rng = random.Random(0)
    for _ in range(200):
        A = rng.getrandbits(c.N)
        via_shifts = 0
        for i in range(1, 5):
            via_shifts |= c.shift(A, i)
        assert via_shifts == c.neighborhood(A)


def test_hex_round_trip():
    for n in (1, 3, 6, 7, 8):
        c = Cube(n)
        rng = random.Random(n)
        for _ in range(50):
            A = rng.getrandbits(c.N)
            assert c.from_hex(c.to_hex(A)) == A
    assert Cube(3).to_hex(Cube(3).even) == "69"
    with pytest.raises(CubeError):
        Cube(3).from_hex("069")


def test_rejects_out_of_range():
    c = Cube(3)
    with pytest.raises(CubeError):
        c.check_vertex(8)
    with pytest.raises(CubeError):
        c.check_dir(0)
    with pytest.raises(CubeError):
        c.check_set(1 << 8)
    with pytest.raises(CubeError):
        Cube(0)


def test_hamming():
    assert hamming(vx("000"), vx("111")) == 3
