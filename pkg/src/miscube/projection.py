"""Projection of an induced matching of Q_n onto Q_{n-2}.

Coordinates are first permuted so the two directions used least by the
matching (ties to the lower index) become the last two.  Each vertex ``v`` of
Q_{n-2} then owns the 4-vertex fiber ``U_v = {(v, a, b)}``, and is colored by
how the matching meets it:

* red:  ``U_v`` meets ``V(M)`` in exactly ``(v,0,0), (v,1,1)``;
* blue: ``U_v`` meets ``V(M)`` in exactly ``(v,1,0), (v,0,1)``;
* good: red or blue with a neighbor of the same color (its partner).

Everything else is bad, for one of three reasons: (i) ``U_v`` contains an
edge of the matching, (ii) ``U_v`` meets ``V(M)`` at most once, (iii) colored
but partnerless.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .cube import Cube, Edge, bits, vertex_parity
from .labelings import UnionFind
from .matchings import Matching, MatchingError, is_induced_matching
from .mis import InducedSubgraph

RED = "red"
BLUE = "blue"
NONE = "none"

_RED_PATTERN = frozenset({(0, 0), (1, 1)})
_BLUE_PATTERN = frozenset({(1, 0), (0, 1)})


class ProjectionError(ValueError):
    pass


def permute_vertex(v: int, perm: dict[int, int]) -> int:
    """Move coordinate ``i`` to position ``perm[i]`` (1-based)."""
    out = 0
    for i, j in perm.items():
        if v >> (i - 1) & 1:
            out |= 1 << (j - 1)
    return out


@dataclass
class ProjectionAnalysis:
    cube: Cube
    matching: Matching
    perm: dict[int, int]
    relabeled: Matching
    color: list[str]
    good: list[bool]
    partner: list[int | None]
    bad_case: list[str | None]
    X: int
    W: int
    T: list[tuple[int, int]]
    components: list[int] = field(default_factory=list)

    @property
    def sub(self) -> Cube:
        return Cube(self.cube.n - 2)

    def fiber_vertex(self, v: int, a: int, b: int) -> int:
        n = self.cube.n
        return v | (a << (n - 2)) | (b << (n - 1))

    def tallies(self) -> dict[str, int]:
        c = Counter(self.color)
        w = Counter(x for x in self.bad_case if x)
        return {"red": c[RED], "blue": c[BLUE], "uncolored": c[NONE],
                "good": sum(self.good), "bad_i": w["i"], "bad_ii": w["ii"], "bad_iii": w["iii"]}

    def to_json(self) -> str:
        measures, w = component_measures(self)
        payload = {"n": self.cube.n, "tallies": self.tallies(),
                   "component_measures": [f"{m.numerator}/{m.denominator}" for m in measures],
                   "bad_measure": f"{w.numerator}/{w.denominator}"}
        return json.dumps(payload, sort_keys=True)


def least_used_directions(cube: Cube, M: Matching) -> tuple[int, int]:
    use = Counter(e.dir for e in M.edges)
    order = sorted(range(1, cube.n + 1), key=lambda i: (use[i], i))
    return order[0], order[1]


def analyze(M: Matching) -> ProjectionAnalysis:
    cube = M.cube
    n = cube.n
    if n < 3:
        raise ProjectionError("projection needs n >= 3")
    if not is_induced_matching(InducedSubgraph.whole(cube), M):
        raise MatchingError("matching is not induced")
    d1, d2 = least_used_directions(cube, M)
    rest = [i for i in range(1, n + 1) if i not in (d1, d2)]
    perm = {i: k for k, i in enumerate(rest, start=1)}
    perm[d1] = n - 1
    perm[d2] = n
    edges = [cube.edge(permute_vertex(e.lo, perm), permute_vertex(e.hi, perm)) for e in M.edges]
    Mp = Matching.from_edges(cube, edges)
    VM = Mp.vertices()
    edge_set = set(Mp.ids)

    sub = Cube(n - 2) if n > 2 else None
    size = 1 << (n - 2)
    color, bad_case = [NONE] * size, [None] * size
    for v in range(size):
        pts = {(a, b) for a in (0, 1) for b in (0, 1)
               if VM >> (v | (a << (n - 2)) | (b << (n - 1))) & 1}
        inside = False
        for (a, b) in pts:
            for (c, d) in pts:
                if abs(a - c) + abs(b - d) == 1:
                    e = cube.edge(v | (a << (n - 2)) | (b << (n - 1)), v | (c << (n - 2)) | (d << (n - 1)))
                    inside |= cube.edge_id(e) in edge_set
        if inside:
            bad_case[v] = "i"
        elif len(pts) <= 1:
            bad_case[v] = "ii"
        elif pts == _RED_PATTERN:
            color[v] = RED
        elif pts == _BLUE_PATTERN:
            color[v] = BLUE
        else:
            raise AssertionError(f"fiber over {v} meets V(M) in {sorted(pts)} without an M-edge")

    good, partner = [False] * size, [None] * size
    for v in range(size):
        if color[v] == NONE:
            continue
        mates = [u for u in sub.neighbors(v) if color[u] == color[v]] if n > 2 else []
        if len(mates) > 1:
            raise AssertionError(f"vertex {v} has {len(mates)} same-colored neighbors")
        if mates:
            good[v], partner[v] = True, mates[0]
        else:
            bad_case[v] = "iii"
    X = sum(1 << v for v in range(size) if good[v])
    W = ((1 << size) - 1) & ~X
    T = sorted({(min(v, partner[v]), max(v, partner[v])) for v in bits(X)})
    P = ProjectionAnalysis(cube, M, perm, Mp, color, good, partner, bad_case, X, W, T)
    P.components = gamma_components(P)
    return P


def gamma_components(P: ProjectionAnalysis) -> list[int]:
    """Components of ``Q_{n-2}[X]`` minus ``T``, as vertex masks by least vertex."""
    sub = P.sub
    tset = set(P.T)
    vs = list(bits(P.X))
    uf = UnionFind(vs)
    for v in vs:
        for u in sub.neighbors(v):
            if u > v and P.X >> u & 1 and (v, u) not in tset:
                uf.union(u, v)
    return [sum(1 << v for v in g) for g in uf.groups()]


def check_structure(P: ProjectionAnalysis) -> list[str]:
    """Violations of the exact structural facts (empty on valid input)."""
    cube, sub = P.cube, P.sub
    out = []
    M_ids = set(P.relabeled.ids)
    # a good vertex's neighbor is the same color exactly when it is the partner
    for v in bits(P.X):
        for u in sub.neighbors(v):
            if P.good[u] and (P.color[u] == P.color[v]) != (u == P.partner[v]):
                out.append(f"good neighbors {v},{u}: color agreement does not match partnership")
    # good iff the fiber meets two matching edges of one direction
    for v in range(sub.N):
        dirs = []
        for a in (0, 1):
            for b in (0, 1):
                x = P.fiber_vertex(v, a, b)
                for j in range(cube.n):
                    y = x ^ (1 << j)
                    e = cube.edge(x, y)
                    if cube.edge_id(e) in M_ids:
                        dirs.append(e.dir)
        crosses = len(dirs) == 2 and dirs[0] == dirs[1] and dirs[0] <= cube.n - 2
        if P.good[v] != crosses:
            out.append(f"vertex {v}: goodness disagrees with its matching-edge pattern")
    # each T-edge lifts to two matching edges of predicted parity
    comp_of = {}
    for k, C in enumerate(P.components):
        for v in bits(C):
            comp_of[v] = k
    for v, w in P.T:
        e = sub.edge(v, w)
        pat = [(0, 0), (1, 1)] if P.color[v] == RED else [(1, 0), (0, 1)]
        want = sub.edge_parity(e) if P.color[v] == RED else 1 - sub.edge_parity(e)
        for a, b in pat:
            f = cube.edge(P.fiber_vertex(v, a, b), P.fiber_vertex(w, a, b))
            if cube.edge_id(f) not in M_ids:
                out.append(f"T-edge {v}{w}: lifted edge {f} not in M")
            elif cube.edge_parity(f) != want:
                out.append(f"T-edge {v}{w}: lifted edge {f} has wrong parity")
        if comp_of[v] == comp_of[w]:
            out.append(f"T-edge {v}{w} inside one component")
    if P.T:
        half = Fraction(1, 2)
        for m in component_measures(P)[0]:
            if m > half:
                out.append(f"component of measure {m} > 1/2")
    # on a component, color and parity agree or disagree together
    for C in P.components:
        keys = {(P.color[v] == RED) ^ vertex_parity(v) for v in bits(C)}
        if len(keys) > 1:
            out.append(f"component {sorted(bits(C))} mixes color/parity agreement")
    return out


def component_measures(P: ProjectionAnalysis) -> tuple[list[Fraction], Fraction]:
    """Uniform measures on Q_{n-2} of the components (descending) and of the bad set."""
    size = 1 << (P.cube.n - 2)
    ms = sorted((Fraction(C.bit_count(), size) for C in P.components), reverse=True)
    return ms, Fraction(P.W.bit_count(), size)
