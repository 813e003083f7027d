import numpy as np
import pytest

from miscube.cube import Cube, Edge
from miscube.matchings import (CanonicalMatching, Matching, MatchingError, assignment_matching,
                               assignment_matching_oracle, canonical_matchings, enumerate_induced_matchings,
                               is_induced_matching, largest_im, matching_distance, meets, nearest_canonical)
from miscube.mis import InducedSubgraph, enumerate_mis, mis_list

from util import vset, vx


def whole(n):
    return InducedSubgraph.whole(Cube(n))


def test_induced_examples():
    c = Cube(2)
    G = InducedSubgraph.whole(c)
    assert is_induced_matching(G, Matching.from_edges(c, [Edge(0, 1)]))
    # opposite edges of the 4-cycle induce the whole cycle
    assert not is_induced_matching(G, Matching.from_edges(c, [Edge(vx("00"), 1), Edge(vx("01"), 1)]))
    c3 = Cube(3)
    M = Matching.from_edges(c3, [Edge(vx("000"), 1), Edge(vx("011"), 1)])
    assert is_induced_matching(InducedSubgraph.whole(c3), M)


def test_from_edges_rejects_shared_vertices():
    c = Cube(2)
    with pytest.raises(MatchingError):
        Matching.from_edges(c, [Edge(0, 1), Edge(0, 2)])


@pytest.mark.parametrize("n", [2, 3, 4])
def test_canonical_matchings(n):
    c = Cube(n)
    Ms = canonical_matchings(c)
    assert len(Ms) == 2 * n
    for C in Ms:
        M = C.matching(c)
        assert len(M) == c.N // 4
        assert is_induced_matching(InducedSubgraph.whole(c), M)
        assert {c.edge_parity(e) for e in M.edges} == {C.eps}
        assert {e.dir for e in M.edges} == {C.dir}


def _all_ims_oracle(G):
    # subsets of the edge list that are induced matchings
    es = G.edges()
    out = []
    for k in range(1 << len(es)):
        chosen = [es[j] for j in range(len(es)) if k >> j & 1]
        V = 0
        ok = True
        for e in chosen:
            if V & ((1 << e.lo) | (1 << e.hi)):
                ok = False
                break
            V |= (1 << e.lo) | (1 << e.hi)
        if ok and G.cube.internal_edges(V) == len(chosen):
            out.append(tuple(sorted(G.cube.edge_id(e) for e in chosen)))
    return sorted(out)


@pytest.mark.parametrize("n", [2, 3])
def test_im_enumeration_matches_subset_oracle(n):
    G = whole(n)
    assert sorted(M.ids for M in enumerate_induced_matchings(G)) == _all_ims_oracle(G)


def test_im_counts():
    assert [sum(1 for _ in enumerate_induced_matchings(whole(n))) for n in (2, 3, 4)] == [5, 19, 233]


@pytest.mark.parametrize("n,size", [(2, 1), (3, 2), (4, 4)])
def test_largest_im(n, size):
    G = whole(n)
    got, M = largest_im(G)
    assert got == size == G.cube.N // 4
    assert is_induced_matching(G, M) and len(M) == size
    top = {M.ids for M in enumerate_induced_matchings(G) if len(M) == size}
    assert top == {C.matching(G.cube).ids for C in canonical_matchings(G.cube)}


def test_assignment_matching_examples():
    c = Cube(2)
    G = InducedSubgraph.whole(c)
    I = vset(c, "00", "11")
    # both edges at 00 end next to 11, which then sits outside V(M) but touches it
    M = assignment_matching(G, I)
    assert len(M) == 0 and M == assignment_matching_oracle(G, I)
    edge = InducedSubgraph(c, vset(c, "00", "10"))
    assert assignment_matching(edge, vset(c, "00")).edges == [Edge(0, 1)]


@pytest.mark.parametrize("n", [3, 4])
def test_assignment_matching_of_a_class_is_empty(n):
    # every vertex outside a class sees n >= 2 class vertices, so no edge qualifies
    c = Cube(n)
    for I in (c.even, c.odd):
        M = assignment_matching(InducedSubgraph.whole(c), I)
        assert len(M) == 0
        assert M == assignment_matching_oracle(InducedSubgraph.whole(c), I)


def test_assignment_matching_of_canonical_family_member():
    c = Cube(4)
    G = InducedSubgraph.whole(c)
    for I in mis_list(c):
        M = assignment_matching(G, I)
        assert meets(I, M)
        assert not c.boundary_between(M.vertices(), I & ~M.vertices())


def test_assignment_matching_matches_oracle_on_q3():
    G = whole(3)
    for I in mis_list(G.cube):
        assert assignment_matching(G, I) == assignment_matching_oracle(G, I)


def test_assignment_matching_matches_oracle_on_random_subgraphs():
    c = Cube(4)
    rng = np.random.default_rng(2)
    for _ in range(60):
        W = int(rng.integers(0, 1 << 16))
        G = InducedSubgraph(c, W)
        for I in enumerate_mis(G).sets[:5]:
            assert assignment_matching(G, I) == assignment_matching_oracle(G, I)


def test_assignment_matching_requires_mis():
    with pytest.raises(MatchingError):
        assignment_matching(whole(2), 0)


def test_distance_examples():
    c = Cube(3)
    A = CanonicalMatching(1, 0).matching(c)
    B = CanonicalMatching(1, 1).matching(c)
    assert matching_distance(A, A) == 0
    assert matching_distance(A, B) == 4
    assert matching_distance(A, Matching(c, A.ids[1:])) == 1


def test_nearest_canonical():
    c = Cube(4)
    for C in canonical_matchings(c):
        M = C.matching(c)
        assert nearest_canonical(M) == (C, 0)
        assert nearest_canonical(Matching(c, M.ids[:-1])) == (C, 1)
