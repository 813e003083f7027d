"""Randomized properties over small cubes (hypothesis)."""

from hypothesis import given, settings, strategies as st

from miscube.cube import Cube
from miscube.labelings import closure, from_labeling, k_components, to_labeling
from miscube.matchings import assignment_matching, meets
from miscube.mis import InducedSubgraph, enumerate_mis, is_mis
from miscube.peeling import Empty, peel, replay

cubes = st.integers(min_value=2, max_value=5).map(Cube)


@st.composite
def cube_and_set(draw):
    c = draw(cubes)
    return c, draw(st.integers(min_value=0, max_value=c.full))


@settings(max_examples=150, deadline=None)
@given(cube_and_set())
def test_every_enumerated_set_is_maximal(cs):
    c, W = cs
    G = InducedSubgraph(c, W)
    sets = enumerate_mis(G).sets
    assert sets == sorted(set(sets))
    assert all(is_mis(G, I) for I in sets)


@settings(max_examples=100, deadline=None)
@given(cube_and_set(), st.data())
def test_peeling_replays(cs, data):
    c, W = cs
    G = InducedSubgraph(c, W)
    sets = enumerate_mis(G).sets
    I = sets[data.draw(st.integers(0, len(sets) - 1))]
    res = peel(c, W, I, Empty())
    assert replay(res.trace) == (0, I)


@settings(max_examples=100, deadline=None)
@given(cube_and_set(), st.data())
def test_assignment_matching_constraints(cs, data):
    c, W = cs
    if c.n > 4:
        return
    G = InducedSubgraph(c, W)
    sets = enumerate_mis(G).sets
    I = sets[data.draw(st.integers(0, len(sets) - 1))]
    M = assignment_matching(G, I)
    VM = M.vertices()
    assert meets(I, M)
    assert not c.boundary_between(VM, I & ~VM)
    assert c.internal_edges(VM) == len(M)


@settings(max_examples=150, deadline=None)
@given(cube_and_set())
def test_closure_is_a_closure(cs):
    c, A = cs
    C = closure(c, A)
    assert A & ~C == 0 and closure(c, C) == C


@settings(max_examples=150, deadline=None)
@given(cube_and_set(), st.integers(1, 3))
def test_k_components_partition(cs, k):
    c, A = cs
    parts = k_components(c, A, k)
    total = 0
    for p in parts:
        assert not total & p
        total |= p
    assert total == A


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 4), st.data())
def test_labeling_round_trip(n, data):
    c = Cube(n)
    sets = enumerate_mis(InducedSubgraph.whole(c)).sets
    I = sets[data.draw(st.integers(0, len(sets) - 1))]
    assert from_labeling(to_labeling(c, I)) == I
