"""MIS's of Q_n as labelings of Q_{n-1}, and the occupied-vertex structure.

Projecting away the last coordinate, each ``v`` in Q_{n-1} has fiber
``{v_0, v_1}`` (last coordinate 0 and 1).  An MIS ``I`` labels ``v`` with 0 or
1 if it contains ``v_0`` or ``v_1`` and with ``L`` if it contains neither.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .cube import Cube, bits, hamming
from .matchings import canonical_matchings
from .mis import InducedSubgraph, is_mis

LAMBDA = "L"


class LabelingError(ValueError):
    pass


class UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        px, py = self.find(x), self.find(y)
        if px != py:
            self.parent[max(px, py)] = min(px, py)

    def groups(self) -> list[list]:
        out = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return [sorted(g) for _, g in sorted(out.items())]


# -- labelings ----------------------------------------------------------------


@dataclass(frozen=True)
class Labeling:
    """Labels of Q_{m} in vertex order, as a string over ``0``, ``1``, ``L``."""

    m: int
    values: str

    def __post_init__(self):
        if len(self.values) != 1 << self.m or set(self.values) - {"0", "1", LAMBDA}:
            raise LabelingError(f"bad labeling string for Q_{self.m}")

    def __getitem__(self, v: int) -> str:
        return self.values[v]

    def with_label(self, label: str) -> int:
        return sum(1 << v for v, c in enumerate(self.values) if c == label)

    def occupied(self) -> int:
        return sum(1 << v for v, c in enumerate(self.values) if c != LAMBDA)

    def __str__(self) -> str:
        return self.values


def fiber_pair(cube: Cube, v: int) -> tuple[int, int]:
    """``(v_0, v_1)`` in Q_n for ``v`` in Q_{n-1}."""
    top = 1 << (cube.n - 1)
    return v, v | top


def lift(cube: Cube, X: int) -> int:
    """Preimage in Q_n of a vertex set of Q_{n-1}."""
    return X | (X << (cube.N >> 1))


def to_labeling(cube: Cube, I: int) -> Labeling:
    if cube.n < 2:
        raise LabelingError("labelings need n >= 2")
    if not is_mis(InducedSubgraph.whole(cube), I):
        raise LabelingError("I is not an MIS of Q_n")
    half = cube.N >> 1
    out = []
    for v in range(half):
        v0, v1 = fiber_pair(cube, v)
        out.append("0" if I >> v0 & 1 else "1" if I >> v1 & 1 else LAMBDA)
    return Labeling(cube.n - 1, "".join(out))


def legality_violations(sigma: Labeling) -> list[str]:
    sub = Cube(sigma.m)
    bad = []
    for v in range(sub.N):
        lab = sigma[v]
        nbr_labels = {sigma[u] for u in sub.neighbors(v)}
        if lab in "01" and lab in nbr_labels:
            bad.append(f"adjacent equal label {lab} at {v}")
        if lab == LAMBDA and not {"0", "1"} <= nbr_labels:
            bad.append(f"unoccupied {v} does not see both labels")
    return bad


def is_legal(sigma: Labeling) -> bool:
    return not legality_violations(sigma)


def from_labeling(sigma: Labeling) -> int:
    bad = legality_violations(sigma)
    if bad:
        raise LabelingError("illegal labeling: " + bad[0])
    cube = Cube(sigma.m + 1)
    I = 0
    for v, lab in enumerate(sigma.values):
        v0, v1 = fiber_pair(cube, v)
        if lab == "0":
            I |= 1 << v0
        elif lab == "1":
            I |= 1 << v1
    if not is_mis(InducedSubgraph.whole(cube), I):
        raise AssertionError("legal labeling did not give an MIS")
    return I


def legal_labelings(m: int) -> list[Labeling]:
    """All legal labelings of Q_m by exhaustion over ``3^(2^m)`` strings."""
    out = []
    for word in itertools.product("01" + LAMBDA, repeat=1 << m):
        sigma = Labeling(m, "".join(word))
        if is_legal(sigma):
            out.append(sigma)
    return out


# -- closure and linked components ------------------------------------------------


def closure(cube: Cube, A: int) -> int:
    """``{x : N_x inside N(A)}``."""
    NA = cube.neighborhood(A)
    out = cube.full
    for i in range(1, cube.n + 1):
        out &= cube.shift(NA, i)
    return out


def k_components(cube: Cube, A: int, k: int) -> list[int]:
    """Maximal k-linked subsets of ``A``, ordered by least vertex."""
    if k < 1:
        raise LabelingError("k must be >= 1")
    vs = list(bits(A))
    uf = UnionFind(vs)
    for u, v in itertools.combinations(vs, 2):
        if hamming(u, v) <= k:
            uf.union(u, v)
    return [sum(1 << v for v in g) for g in uf.groups()]


def is_k_linked(cube: Cube, A: int, k: int) -> bool:
    return len(k_components(cube, A, k)) <= 1


# -- the occupied structure ----------------------------------------------------------


@dataclass
class Component:
    A: int
    G: int
    closure: int
    small: bool

    @property
    def a(self) -> int:
        return self.closure.bit_count()

    @property
    def g(self) -> int:
        return self.G.bit_count()

    @property
    def t(self) -> int:
        return self.g - self.a


@dataclass
class OccupiedDecomposition:
    n: int
    labeling: Labeling
    Estar: int
    components: list[Component]
    threshold: int
    A: int = 0
    G: int = 0
    closure: int = 0

    @property
    def a(self) -> int:
        return self.closure.bit_count()

    @property
    def g(self) -> int:
        return self.G.bit_count()

    @property
    def t(self) -> int:
        return self.g - self.a

    def large(self) -> list[int]:
        return [k for k, c in enumerate(self.components) if not c.small]


def decompose(cube: Cube, I: int, small_threshold: int | None = None) -> OccupiedDecomposition:
    """Occupied even vertices of Q_{n-1} and their non-singleton 2-components.

    A component is small when ``|N(A_i)| < small_threshold`` (default ``n^4``).
    """
    sigma = to_labeling(cube, I)
    sub = Cube(cube.n - 1)
    threshold = cube.n ** 4 if small_threshold is None else small_threshold
    Estar = sigma.occupied() & sub.even
    comps = []
    for A_i in k_components(sub, Estar, 2):
        if A_i.bit_count() < 2:
            continue
        G_i = sub.neighborhood(A_i)
        comps.append(Component(A_i, G_i, closure(sub, A_i), G_i.bit_count() < threshold))
    A = 0
    for c in comps:
        A |= c.A
    return OccupiedDecomposition(cube.n, sigma, Estar, comps, threshold, A,
                                 sub.neighborhood(A), closure(sub, A))


@dataclass
class OccupancyReport:
    odd_outside_G_occupied: bool = True
    fiber_edges_dominated: bool = True
    fiber_edges_induced: bool = True
    closures_separated: bool = True
    neighborhoods_disjoint: bool = True
    t_subadditive: bool = True
    witnesses: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.witnesses


def check_occupancy_facts(cube: Cube, I: int, D: OccupiedDecomposition) -> OccupancyReport:
    """Exact structural facts of the decomposition of an MIS.

    * every odd vertex of Q_{n-1} outside ``G`` is occupied;
    * for each component, every fiber edge ``v_0 v_1`` (``v`` in ``G_i``) has an
      end with a neighbor in ``I`` over ``A_i``, and these fiber edges form an
      induced matching of Q_n;
    * ``[A_i]`` has no neighbor in ``G_j`` for ``i != j``; the ``G_i`` are disjoint;
    * ``t <= sum t_i``.
    """
    if D.n != cube.n or to_labeling(cube, I) != D.labeling:
        raise LabelingError("decomposition does not belong to this I")
    sub = Cube(cube.n - 1)
    rep = OccupancyReport()
    occupied = D.labeling.occupied()
    loose = sub.odd & ~D.G & ~occupied
    if loose:
        rep.odd_outside_G_occupied = False
        rep.witnesses.append(f"unoccupied odd vertices outside G: {list(bits(loose))}")
    for k, comp in enumerate(D.components):
        over = I & lift(cube, comp.A)
        seen = cube.neighborhood(over)
        fiber_edges = lift(cube, comp.G)
        for v in bits(comp.G):
            v0, v1 = fiber_pair(cube, v)
            if not (seen >> v0 & 1 or seen >> v1 & 1):
                rep.fiber_edges_dominated = False
                rep.witnesses.append(f"component {k}: fiber edge over {v} has no neighbor in I")
        if cube.internal_edges(fiber_edges) != comp.g:
            rep.fiber_edges_induced = False
            rep.witnesses.append(f"component {k}: fiber edges over G_i are not an induced matching")
        for j, other in enumerate(D.components):
            if j == k:
                continue
            if sub.neighborhood(comp.closure) & other.G:
                rep.closures_separated = False
                rep.witnesses.append(f"edge between closure of component {k} and G of {j}")
            if j > k and comp.G & other.G:
                rep.neighborhoods_disjoint = False
                rep.witnesses.append(f"G of components {k} and {j} intersect")
    if D.t > sum(c.t for c in D.components):
        rep.t_subadditive = False
        rep.witnesses.append(f"t = {D.t} exceeds sum of t_i")
    return rep


# -- container properties ----------------------------------------------------------


@dataclass(frozen=True)
class ContainerWitness:
    S: int
    F: int


@dataclass
class ContainerReport:
    contains: bool
    high_degree: bool
    balanced: bool
    degree_cutoff: int
    min_degree: int | None

    @property
    def ok(self) -> bool:
        return self.contains and self.high_degree and self.balanced


def _near_integer(x) -> int | None:
    k = int(mpmath.nint(x))
    return k if abs(x - k) < mpmath.mpf(10) ** -50 else None


def degree_cutoff(n: int) -> int:
    """``ceil(n - sqrt(n)/log2(n))``."""
    if n < 2:
        raise LabelingError("cutoff needs n >= 2")
    with mpmath.workdps(80):
        x = n - mpmath.sqrt(n) / mpmath.log(n, 2)
        k = _near_integer(x)
        return k if k is not None else int(mpmath.ceil(x))


def check_container(cube: Cube, A: int, W: ContainerWitness, t: int, c3: Fraction) -> ContainerReport:
    """Evaluate the three container properties of ``(S, F)`` for a closed 2-linked ``A``."""
    if A & ~cube.even or W.S & ~cube.even or W.F & ~cube.odd:
        raise LabelingError("need A, S in the even class and F in the odd class")
    if closure(cube, A) != A:
        raise LabelingError("A is not closed")
    if not is_k_linked(cube, A, 2):
        raise LabelingError("A is not 2-linked")
    G = cube.neighborhood(A)
    contains = (A & ~W.S) == 0 and (W.F & ~G) == 0
    cutoff = degree_cutoff(cube.n)
    degs = [cube.degree_in(u, W.F) for u in bits(W.S)]
    min_deg = min(degs) if degs else None
    high = all(d >= cutoff for d in degs)
    gap = W.S.bit_count() - W.F.bit_count()
    with mpmath.workdps(80):
        slack = mpmath.mpf(c3.numerator) / c3.denominator * t / (mpmath.sqrt(cube.n) * mpmath.log(cube.n, 2))
        balanced = bool(gap <= slack) if _near_integer(slack - gap) is None else True
    return ContainerReport(contains, high, balanced, cutoff, min_deg)


def tight_slack_classify(D: OccupiedDecomposition, witnesses: dict[int, ContainerWitness],
                         eps: Fraction) -> dict[int, str]:
    """``tight`` when ``g_i - f_i <= eps t_i``, else ``slack``, for each large component."""
    out = {}
    for k in D.large():
        if k not in witnesses:
            raise LabelingError(f"no container witness for large component {k}")
        comp = D.components[k]
        f = witnesses[k].F.bit_count()
        out[k] = "tight" if comp.g - f <= eps * comp.t else "slack"
    return out


def in_canonical_families(cube: Cube, I: int) -> bool:
    """Whether ``I`` meets every edge of some canonical matching."""
    for C in canonical_matchings(cube):
        if all(I >> e.lo & 1 or I >> e.hi & 1 for e in C.edge_list(cube)):
            return True
    return False
