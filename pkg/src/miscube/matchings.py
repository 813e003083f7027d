"""Induced matchings of induced subgraphs of Q_n.

Matchings are ordered by the sorted tuple of their edge ids (Python tuple
comparison, so a proper prefix sorts first).  "First" always means first in
this order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .cube import Cube, CubeError, Edge, bits
from .mis import InducedSubgraph, is_mis


class MatchingError(ValueError):
    pass


@dataclass(frozen=True)
class Matching:
    cube: Cube
    ids: tuple[int, ...]

    @classmethod
    def from_edges(cls, cube: Cube, edges: Iterable[Edge]) -> "Matching":
        ids = sorted({cube.edge_id(e) for e in edges})
        m = cls(cube, tuple(ids))
        if m.vertices().bit_count() != 2 * len(ids):
            raise MatchingError("edges are not pairwise vertex-disjoint")
        return m

    @property
    def edges(self) -> list[Edge]:
        return [self.cube.edge_from_id(k) for k in self.ids]

    def __len__(self) -> int:
        return len(self.ids)

    def vertices(self) -> int:
        out = 0
        for e in self.edges:
            out |= (1 << e.lo) | (1 << e.hi)
        return out

    def key(self) -> tuple[int, ...]:
        return self.ids

    def serialize(self) -> list[int]:
        return list(self.ids)


@dataclass(frozen=True, order=True)
class CanonicalMatching:
    """All edges ``v v^dir`` of edge parity ``eps``."""

    dir: int
    eps: int

    def edge_list(self, cube: Cube) -> list[Edge]:
        cube.check_dir(self.dir)
        bit = 1 << (self.dir - 1)
        out = []
        for lo in range(cube.N):
            if lo & bit:
                continue
            if (lo.bit_count() & 1) == self.eps:
                out.append(Edge(lo, self.dir))
        return sorted(out, key=cube.edge_id)

    def matching(self, cube: Cube) -> Matching:
        return Matching.from_edges(cube, self.edge_list(cube))

    def __str__(self) -> str:
        return f"canonical({self.dir},{self.eps})"


def canonical_matchings(cube: Cube) -> list[CanonicalMatching]:
    return [CanonicalMatching(i, eps) for i in range(1, cube.n + 1) for eps in (0, 1)]


def _closed(cube: Cube, S: int) -> int:
    return S | cube.neighborhood(S)


def is_induced_matching(G: InducedSubgraph, M: Matching) -> bool:
    if M.cube != G.cube:
        raise MatchingError("matching and graph live in different cubes")
    VM = M.vertices()
    if VM & ~G.verts:
        raise MatchingError("matching uses edges outside G")
    return VM.bit_count() == 2 * len(M) and G.cube.internal_edges(VM) == len(M)


def enumerate_induced_matchings(G: InducedSubgraph, edges: list[Edge] | None = None) -> Iterator[Matching]:
    """Every induced matching (including the empty one) drawn from ``edges``."""
    cube = G.cube
    if edges is None:
        edges = G.edges()
    ends = [(1 << e.lo) | (1 << e.hi) for e in edges]
    ids = [cube.edge_id(e) for e in edges]

    def rec(k: int, chosen: tuple[int, ...], blocked: int):
        yield Matching(cube, chosen)
        for j in range(k, len(edges)):
            if ends[j] & blocked:
                continue
            yield from rec(j + 1, chosen + (ids[j],), blocked | _closed(cube, ends[j]))

    yield from rec(0, (), 0)


# -- exact search -----------------------------------------------------------


def _search(cube: Cube, edges: list[Edge]) -> tuple[int, tuple[int, ...]]:
    """Largest induced matching within ``edges`` and the first one of that size."""
    edges = sorted(edges, key=cube.edge_id)
    ends = [(1 << e.lo) | (1 << e.hi) for e in edges]
    closed = [_closed(cube, x) for x in ends]
    ids = [cube.edge_id(e) for e in edges]
    m = len(edges)

    def bound(k: int, blocked: int) -> int:
        cnt = 0
        verts = 0
        for j in range(k, m):
            if not ends[j] & blocked:
                cnt += 1
                verts |= ends[j]
        return min(cnt, verts.bit_count() // 2)

    best = 0

    def grow(k: int, size: int, blocked: int) -> None:
        nonlocal best
        if size > best:
            best = size
        if k == m or size + bound(k, blocked) <= best:
            return
        if not ends[k] & blocked:
            grow(k + 1, size + 1, blocked | closed[k])
        grow(k + 1, size, blocked)

    grow(0, 0, 0)

    def first(k: int, chosen: list[int], blocked: int):
        if len(chosen) == best:
            return tuple(chosen)
        if k == m or len(chosen) + bound(k, blocked) < best:
            return None
        if not ends[k] & blocked:
            chosen.append(ids[k])
            hit = first(k + 1, chosen, blocked | closed[k])
            if hit is not None:
                return hit
            chosen.pop()
        return first(k + 1, chosen, blocked)

    return best, first(0, [], 0)


def largest_im(G: InducedSubgraph, cap: int = 64) -> tuple[int, Matching]:
    """``im(G)`` and the first induced matching attaining it."""
    if G.order() > cap:
        raise CubeError(f"largest_im capped at {cap} vertices")
    size, ids = _search(G.cube, G.edges())
    return size, Matching(G.cube, ids)


def _admissible_edges(G: InducedSubgraph, I: int) -> list[Edge]:
    # e = uv with u in I: meets I, and v's only I-neighbor is u, else some
    # other I-vertex outside V(M) is adjacent to V(M)
    cube = G.cube
    out = []
    for e in G.edges():
        lo_in, hi_in = I >> e.lo & 1, I >> e.hi & 1
        if lo_in == hi_in:
            continue
        v = e.hi if lo_in else e.lo
        if (cube.nbr_masks[v] & I).bit_count() == 1:
            out.append(e)
    return out


def assignment_matching(G: InducedSubgraph, I: int) -> Matching:
    """The first largest induced matching M with every edge meeting ``I`` and
    no edge between ``V(M)`` and ``I - V(M)``."""
    if not is_mis(G, I):
        raise MatchingError("I is not a maximal independent set of G")
    _, ids = _search(G.cube, _admissible_edges(G, I))
    return Matching(G.cube, ids)


def assignment_matching_oracle(G: InducedSubgraph, I: int) -> Matching:
    """Brute force over all induced matchings, filtering both constraints literally."""
    cube = G.cube
    best = None
    for M in enumerate_induced_matchings(G):
        VM = M.vertices()
        if any(not (I >> e.lo & 1 or I >> e.hi & 1) for e in M.edges):
            continue
        if cube.boundary_between(VM, I & ~VM):
            continue
        if best is None or (-len(M), M.key()) < (-len(best), best.key()):
            best = M
    return best


def meets(I: int, M: Matching) -> bool:
    """Every edge of ``M`` meets ``I``."""
    return all(I >> e.lo & 1 or I >> e.hi & 1 for e in M.edges)


def matching_distance(M1: Matching, M2: Matching) -> int:
    if M1.cube != M2.cube:
        raise MatchingError("matchings live in different cubes")
    return len(set(M1.ids) ^ set(M2.ids))


def nearest_canonical(M: Matching) -> tuple[CanonicalMatching, int]:
    cube = M.cube
    if not is_induced_matching(InducedSubgraph.whole(cube), M):
        raise MatchingError("matching is not induced")
    best = None
    for C in canonical_matchings(cube):
        d = matching_distance(M, C.matching(cube))
        if best is None or d < best[1]:
            best = (C, d)
    return best
