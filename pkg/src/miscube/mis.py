"""Maximal independent sets of induced subgraphs of Q_n.

The enumerator is Bron-Kerbosch with Tomita pivoting, phrased directly on
independence: a maximal independent set of G is a maximal clique of the
complement, so after choosing a pivot ``u`` only the candidates in the closed
neighborhood ``N[u]`` need to be branched on.  All sets are bitmask ints.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from concurrent.futures import TimeoutError as FutureTimeout
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .cube import ENUM_CAP, Cube, CubeError, Edge, bits


class MisError(ValueError):
    pass


class NotIndependent(MisError):
    pass


class NotUnique(MisError):
    def __init__(self, witness: tuple[int, int]):
        super().__init__(f"completion is not unique; residual edge {witness}")
        self.witness = witness


class BudgetExhausted(MisError):
    def __init__(self, partial: int, elapsed_ms: float):
        super().__init__(f"time budget exhausted after {partial} sets ({elapsed_ms:.0f} ms)")
        self.partial = partial
        self.elapsed_ms = elapsed_ms


@dataclass(frozen=True)
class InducedSubgraph:
    """``Q_n[verts]``.  Adjacency always comes from the cube."""

    cube: Cube
    verts: int

    def __post_init__(self):
        self.cube.check_set(self.verts)

    @classmethod
    def whole(cls, cube: Cube) -> "InducedSubgraph":
        return cls(cube, cube.full)

    def nbrs(self, v: int) -> int:
        return self.cube.nbr_masks[v] & self.verts

    def adjacency(self) -> list[int]:
        """Neighbor masks indexed by cube vertex (0 for vertices outside G)."""
        masks = self.cube.nbr_masks
        return [masks[v] & self.verts if self.verts >> v & 1 else 0 for v in range(self.cube.N)]

    def edges(self) -> list[Edge]:
        out = []
        for v in bits(self.verts):
            for u in bits(self.nbrs(v)):
                if u > v:
                    out.append(self.cube.edge(v, u))
        return sorted(out, key=self.cube.edge_id)

    def order(self) -> int:
        return self.verts.bit_count()


@dataclass
class MisReport:
    count: int
    elapsed_ms: float
    workers: int
    n: int | None = None
    sets: list[int] | None = field(default=None, repr=False)

    def to_json(self, with_time: bool = True) -> str:
        payload = {"n": self.n, "count": str(self.count), "workers": self.workers}
        if with_time:
            payload["elapsed_ms"] = round(self.elapsed_ms, 3)
        return json.dumps(payload, sort_keys=True)


def _check_subset(G: InducedSubgraph, S: int) -> None:
    if S & ~G.verts:
        raise MisError("set is not contained in the vertex set of G")


def is_independent(G: InducedSubgraph, S: int) -> bool:
    _check_subset(G, S)
    return not (G.cube.neighborhood(S) & S)


def is_mis(G: InducedSubgraph, S: int) -> bool:
    if not is_independent(G, S):
        return False
    dominated = S | G.cube.neighborhood(S)
    return not (G.verts & ~dominated)


# -- the enumerator ---------------------------------------------------------


class _Budget:
    __slots__ = ("deadline", "ticks", "found")

    def __init__(self, budget_ms: float | None):
        self.deadline = None if budget_ms is None else time.perf_counter() + budget_ms / 1000
        self.ticks = 0
        self.found = 0

    def tick(self) -> None:
        self.ticks += 1
        if self.deadline is not None and not self.ticks & 1023 and time.perf_counter() > self.deadline:
            raise _OutOfTime(self.found)


class _OutOfTime(Exception):
    def __init__(self, found: int):
        self.found = found


def _pivot(adj: Sequence[int], P: int, X: int) -> int:
    """Vertex of ``P | X`` whose closed neighborhood covers fewest of ``P``."""
    best, best_hits = -1, None
    for u in bits(P | X):
        hits = ((adj[u] | (1 << u)) & P).bit_count()
        if best_hits is None or hits < best_hits:
            best, best_hits = u, hits
            if hits <= 1:
                break
    return best


def _branches(adj: Sequence[int], P: int, X: int) -> Iterator[tuple[int, int, int]]:
    """Children ``(v, P', X')`` of a search node, in ascending ``v``."""
    u = _pivot(adj, P, X)
    todo = (adj[u] | (1 << u)) & P
    for v in bits(todo):
        closed = adj[v] | (1 << v)
        yield v, P & ~closed, X & ~closed
        P &= ~(1 << v)
        X |= 1 << v


def _extend(adj: Sequence[int], R: int, P: int, X: int, out: list | None, budget: _Budget) -> int:
    if not P:
        if X:
            return 0
        budget.found += 1
        if out is not None:
            out.append(R)
        return 1
    budget.tick()
    total = 0
    for v, P2, X2 in _branches(adj, P, X):
        total += _extend(adj, R | (1 << v), P2, X2, out, budget)
    return total


def _split(adj: Sequence[int], P: int, depth: int) -> list[tuple[int, int, int]]:
    """Search nodes ``(R, P, X)`` at ``depth`` (leaves above it kept as-is), in DFS order."""
    frontier = [(0, P, 0)]
    for _ in range(depth):
        nxt = []
        for R, P1, X1 in frontier:
            if not P1:
                nxt.append((R, P1, X1))
                continue
            for v, P2, X2 in _branches(adj, P1, X1):
                nxt.append((R | (1 << v), P2, X2))
        frontier = nxt
    return frontier


def _run_task(args) -> tuple[int, list[int] | None]:
    adj, R, P, X, collect = args
    out = [] if collect else None
    count = _extend(adj, R, P, X, out, _Budget(None))
    return count, out


def mis_masks(adj: Sequence[int], verts: int, *, collect: bool = True, workers: int = 1,
              budget_ms: float | None = None) -> tuple[int, list[int] | None]:
    """Count (and optionally list, ascending) the MIS's of the graph ``adj`` on ``verts``."""
    if workers < 1:
        raise MisError("workers must be >= 1")
    if workers == 1:
        out = [] if collect else None
        budget = _Budget(budget_ms)
        try:
            count = _extend(adj, 0, verts, 0, out, budget)
        except _OutOfTime as exc:
            raise BudgetExhausted(exc.found, budget_ms) from None
        if out is not None:
            out.sort()
        return count, out

    tasks = [(list(adj), R, P, X, collect) for R, P, X in _split(adj, verts, 2)]
    count = 0
    merged: list[int] | None = [] if collect else None
    start = time.perf_counter()
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_run_task, t) for t in tasks]
        for fut in futures:
            timeout = None
            if budget_ms is not None:
                timeout = max(0.0, budget_ms / 1000 - (time.perf_counter() - start))
            try:
                c, part = fut.result(timeout=timeout)
            except FutureTimeout:
                for f in futures:
                    f.cancel()
                raise BudgetExhausted(count, budget_ms) from None
            count += c
            if merged is not None:
                merged.extend(part)
    if merged is not None:
        merged.sort()
    return count, merged


def enumerate_mis(G: InducedSubgraph, *, collect: bool = True, workers: int = 1,
                  budget_ms: float | None = None, cap: int = ENUM_CAP) -> MisReport:
    """Exact MIS count of ``G`` and, if ``collect``, the sets in ascending order."""
    if G.cube.n > cap:
        raise CubeError(f"enumeration capped at n <= {cap}, got n = {G.cube.n}")
    start = time.perf_counter()
    count, sets = mis_masks(G.adjacency(), G.verts, collect=collect, workers=workers,
                            budget_ms=budget_ms)
    elapsed = (time.perf_counter() - start) * 1000
    return MisReport(count=count, elapsed_ms=elapsed, workers=workers, n=G.cube.n, sets=sets)


def mis_list(cube: Cube) -> list[int]:
    return enumerate_mis(InducedSubgraph.whole(cube)).sets


def brute_force_mis(G: InducedSubgraph) -> list[int]:
    """Independent oracle: test every subset of ``verts``."""
    vs = list(bits(G.verts))
    out = []
    for k in range(1 << len(vs)):
        S = 0
        for j, v in enumerate(vs):
            if k >> j & 1:
                S |= 1 << v
        if is_mis(G, S):
            out.append(S)
    return sorted(out)


# -- unique extension and the canonical families ----------------------------


def extend_to_mis(G: InducedSubgraph, S: int) -> int:
    """``S`` plus everything it leaves undominated, if that residue is edgeless."""
    if not is_independent(G, S):
        raise NotIndependent("set is not independent in G")
    cube = G.cube
    residue = G.verts & ~(S | cube.neighborhood(S))
    for v in bits(residue):
        hit = cube.nbr_masks[v] & residue
        if hit:
            u = (hit & -hit).bit_length() - 1
            raise NotUnique((min(u, v), max(u, v)))
    return S | residue


def canonical_family(cube: Cube, Mstar) -> list[int]:
    """The ``2^{N/4}`` MIS's of Q_n meeting every edge of ``Mstar``, ascending."""
    G = InducedSubgraph.whole(cube)
    edges = Mstar.edge_list(cube)
    out = set()
    for choice in range(1 << len(edges)):
        S = 0
        for j, e in enumerate(edges):
            S |= 1 << (e.hi if choice >> j & 1 else e.lo)
        try:
            out.add(extend_to_mis(G, S))
        except NotUnique as exc:
            raise AssertionError(f"canonical family of {Mstar} is not uniquely extendable") from exc
    return sorted(out)


def family_overlap(cube: Cube, M1, M2) -> int:
    if M1 == M2:
        raise MisError("family_overlap needs distinct canonical matchings")
    return len(set(canonical_family(cube, M1)) & set(canonical_family(cube, M2)))


# -- general triangle-free graphs ------------------------------------------


@dataclass(frozen=True)
class HTCheck:
    """Result of comparing mis(G) with ``2^{m/2}`` for an m-vertex graph."""

    count: int
    m: int
    perfect_matching: bool

    @property
    def bound(self) -> float:
        return 2 ** (self.m / 2)

    @property
    def equality(self) -> bool:
        return self.count ** 2 == 2 ** self.m

    @property
    def holds(self) -> bool:
        return self.count ** 2 <= 2 ** self.m and self.equality == self.perfect_matching


def adjacency_from_edges(m: int, edges: Iterable[tuple[int, int]]) -> list[int]:
    adj = [0] * m
    for u, v in edges:
        if u == v or not (0 <= u < m and 0 <= v < m):
            raise MisError(f"bad edge {(u, v)} for {m} vertices")
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return adj


def is_triangle_free(adj: Sequence[int]) -> bool:
    for u, v in combinations(range(len(adj)), 2):
        if adj[u] >> v & 1 and adj[u] & adj[v]:
            return False
    return True


def is_perfect_matching(adj: Sequence[int]) -> bool:
    return all(a.bit_count() == 1 for a in adj)


def ht_bound_check(m: int, edges: Iterable[tuple[int, int]]) -> HTCheck:
    adj = adjacency_from_edges(m, edges)
    if not is_triangle_free(adj):
        raise MisError("graph has a triangle")
    count, _ = mis_masks(adj, (1 << m) - 1, collect=False)
    return HTCheck(count=count, m=m, perfect_matching=is_perfect_matching(adj))


def random_triangle_free(rng, max_vertices: int = 12) -> tuple[int, list[tuple[int, int]]]:
    """Random triangle-free graph: shuffled edge attempts, rejecting triangle-makers."""
    m = int(rng.integers(1, max_vertices + 1))
    pairs = list(combinations(range(m), 2))
    if not pairs:
        return m, []
    order = rng.permutation(len(pairs))
    attempts = int(rng.integers(0, len(pairs) + 1))
    adj = [0] * m
    edges = []
    for k in order[:attempts]:
        u, v = pairs[k]
        if adj[u] & adj[v]:
            continue
        adj[u] |= 1 << v
        adj[v] |= 1 << u
        edges.append((u, v))
    return m, edges
