import pytest

from miscube.cube import Cube, Edge
from miscube.matchings import CanonicalMatching, Matching, MatchingError, enumerate_induced_matchings
from miscube.mis import InducedSubgraph
from miscube.projection import (BLUE, NONE, RED, ProjectionError, analyze, check_structure, component_measures,
                                least_used_directions, permute_vertex)


def test_permute_vertex():
    assert permute_vertex(0b001, {1: 3, 2: 1, 3: 2}) == 0b100
    assert permute_vertex(0b110, {1: 3, 2: 1, 3: 2}) == 0b011


def test_least_used_directions_tie_to_lower_index():
    c = Cube(4)
    M = CanonicalMatching(1, 0).matching(c)
    assert least_used_directions(c, M) == (2, 3)
    assert least_used_directions(c, Matching(c, ())) == (1, 2)


def test_canonical_direction_one():
    c = Cube(4)
    P = analyze(CanonicalMatching(1, 0).matching(c))
    assert all(col != NONE for col in P.color)
    assert all(P.good)
    assert P.W == 0
    assert check_structure(P) == []
    ms, w = component_measures(P)
    assert ms == [pytest.approx(0.5)] * 2 and w == 0


def test_empty_matching():
    P = analyze(Matching(Cube(4), ()))
    assert set(P.color) == {NONE} and P.X == 0
    assert set(P.bad_case) == {"ii"}
    assert component_measures(P)[0] == []


def test_single_edge_leaves_sparse_fibers():
    c = Cube(3)
    M = Matching.from_edges(c, [Edge(0, 1)])
    P = analyze(M)
    # the edge's direction is used, so it moves to the first slot and crosses fibers
    assert P.bad_case == ["ii", "ii"]
    VM = P.relabeled.vertices()
    for v in range(2):
        fiber = [P.fiber_vertex(v, a, b) for a in (0, 1) for b in (0, 1)]
        assert sum(VM >> x & 1 for x in fiber) == 1


def test_small_n_rejected():
    with pytest.raises(ProjectionError):
        analyze(Matching(Cube(2), ()))


def test_non_induced_rejected():
    c = Cube(3)
    M = Matching.from_edges(c, [Edge(0b000, 1), Edge(0b010, 1)])
    with pytest.raises(MatchingError):
        analyze(M)


def test_structure_on_large_ims_of_q4():
    c = Cube(4)
    seen = 0
    for M in enumerate_induced_matchings(InducedSubgraph.whole(c)):
        if len(M) >= 3:
            seen += 1
            assert check_structure(analyze(M)) == []
    assert seen == 40


@pytest.mark.parametrize("n", [4, 5])
def test_structure_on_canonical(n):
    c = Cube(n)
    for i in range(1, n + 1):
        for eps in (0, 1):
            P = analyze(CanonicalMatching(i, eps).matching(c))
            assert check_structure(P) == []
            ms, _ = component_measures(P)
            assert len(ms) == 2 and sum(ms) == 1


def test_colors_partition_good_vertices():
    c = Cube(5)
    P = analyze(CanonicalMatching(3, 1).matching(c))
    t = P.tallies()
    assert t["red"] + t["blue"] + t["uncolored"] == 8
    assert {P.color[v] for v in range(8)} <= {RED, BLUE}
    assert '"bad_measure": "0/1"' in P.to_json()
