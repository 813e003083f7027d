"""Counting and isoperimetric checks on Q_n.

Real-valued inequalities involving ``beta = log2(3/2)`` are decided with
certified enclosures: mpmath interval arithmetic gives rational endpoints for
each power ``d^beta``, and a check only passes or fails when the enclosure
clears the bound.  Undecided cases are retried at doubled precision.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import numpy as np
from mpmath import iv
from mpmath.libmp import to_rational

from .cube import Cube, bits

WORK_PREC = 128
MAX_PREC = 4096
# 2.71828182845 < e < 2.71828182846
E_LO = Fraction(271828182845, 10 ** 11)
E_HI = Fraction(271828182846, 10 ** 11)


class CombinatoricsError(ValueError):
    pass


class Undecided(CombinatoricsError):
    pass


# -- certified constants ---------------------------------------------------------


@contextmanager
def _iv_prec(prec: int):
    saved = iv.prec
    iv.prec = prec
    try:
        yield
    finally:
        iv.prec = saved


def _bounds(x) -> tuple[Fraction, Fraction]:
    lo, hi = x._mpi_
    return Fraction(*map(int, to_rational(lo))), Fraction(*map(int, to_rational(hi)))


@lru_cache(maxsize=None)
def exponent_bounds(exponent: str, prec: int = WORK_PREC) -> tuple[Fraction, Fraction]:
    """Enclosure of ``beta`` (``exponent='beta'``) or of a rational exponent like ``'1/2'``."""
    with _iv_prec(prec):
        return _bounds(_exponent(exponent))


def _exponent(exponent: str):
    if exponent == "beta":
        return iv.log(iv.mpf(3) / 2) / iv.log(iv.mpf(2))
    q = Fraction(exponent)
    return iv.mpf(q.numerator) / q.denominator


def exact_power(d: int, exponent: str) -> Fraction | None:
    """``d ** exponent`` when it is rational by construction, else None.

    ``2^beta = 3/2``, so powers of two are exact under ``beta``; a rational
    exponent ``p/q`` is exact on perfect q-th powers.
    """
    if d in (0, 1):
        return Fraction(d)
    if exponent == "beta":
        if d & (d - 1) == 0:
            return Fraction(3, 2) ** (d.bit_length() - 1)
        return None
    q = Fraction(exponent)
    root = round(d ** (1 / q.denominator))
    for r in (root - 1, root, root + 1):
        if r > 0 and r ** q.denominator == d:
            return Fraction(r) ** q.numerator
    return None


@lru_cache(maxsize=None)
def power_bounds(n: int, exponent: str = "beta", prec: int = WORK_PREC) -> tuple[tuple[Fraction, Fraction], ...]:
    """Enclosures of ``d ** exponent`` for ``d = 0..n``, degenerate where exact."""
    out = []
    with _iv_prec(prec):
        p = _exponent(exponent)
        for d in range(n + 1):
            x = exact_power(d, exponent)
            out.append((x, x) if x is not None else _bounds(iv.mpf(d) ** p))
    return tuple(out)


BETA = exponent_bounds("beta")


# -- the boundary functional ----------------------------------------------------------


def boundary_degree_histogram(cube: Cube, A: int) -> list[int]:
    """``c[d]`` = number of ``x`` in ``A`` with exactly ``d`` neighbors outside ``A``."""
    rest = cube.complement(A)
    c = [0] * (cube.n + 1)
    masks = cube.nbr_masks
    for x in bits(A):
        c[(masks[x] & rest).bit_count()] += 1
    return c


@dataclass(frozen=True)
class Verdict:
    holds: bool
    lower: Fraction
    upper: Fraction
    bound: Fraction
    prec: int


def _decide(hist: list[int], n: int, bound_scaled: Fraction, exponent: str) -> Verdict:
    """Is ``sum_d hist[d] * d^exponent >= bound_scaled``?  Escalates precision until decided."""
    prec = WORK_PREC
    while prec <= MAX_PREC:
        pw = power_bounds(n, exponent, prec)
        lo = sum(c * pw[d][0] for d, c in enumerate(hist) if c)
        hi = sum(c * pw[d][1] for d, c in enumerate(hist) if c)
        if lo >= bound_scaled:
            return Verdict(True, lo, hi, bound_scaled, prec)
        if hi < bound_scaled:
            return Verdict(False, lo, hi, bound_scaled, prec)
        prec *= 2
    raise Undecided(f"enclosure still straddles the bound at {MAX_PREC} bits")


def beta_functional(cube: Cube, A: int, prec: int = WORK_PREC, exponent: str = "beta") -> tuple[Fraction, Fraction]:
    """Enclosure of ``(1/N) sum_{x in A} d_{V-A}(x)^beta``."""
    pw = power_bounds(cube.n, exponent, prec)
    hist = boundary_degree_histogram(cube, A)
    lo = sum(c * pw[d][0] for d, c in enumerate(hist))
    hi = sum(c * pw[d][1] for d, c in enumerate(hist))
    return lo / cube.N, hi / cube.N


def beta_check(cube: Cube, A: int, exponent: str = "beta") -> Verdict:
    """Decide ``integral h_A^beta >= 2 mu(A)(1 - mu(A))`` (all quantities times ``N``)."""
    a, N = A.bit_count(), cube.N
    return _decide(boundary_degree_histogram(cube, A), cube.n, Fraction(2 * a * (N - a), N), exponent)


def partition_functional(cube: Cube, R: int, S: int, U: int, prec: int = WORK_PREC) -> tuple[Fraction, tuple[Fraction, Fraction]]:
    """``integral_R h_{R+U}`` (exact) and an enclosure of ``2a(1-a) - n^beta mu(U)``."""
    if R & S or R & U or S & U or (R | S | U) != cube.full:
        raise CombinatoricsError("R, S, U must partition V")
    N = cube.N
    outside = S
    lhs = Fraction(sum((cube.nbr_masks[x] & outside).bit_count() for x in bits(R)), N)
    alpha = Fraction((R | U).bit_count(), N)
    mu_u = Fraction(U.bit_count(), N)
    nb_lo, nb_hi = power_bounds(cube.n, "beta", prec)[cube.n]
    base = 2 * alpha * (1 - alpha)
    return lhs, (base - nb_hi * mu_u, base - nb_lo * mu_u)


def partition_check(cube: Cube, R: int, S: int, U: int) -> bool:
    prec = WORK_PREC
    while prec <= MAX_PREC:
        lhs, (lo, hi) = partition_functional(cube, R, S, U, prec)
        if lhs >= hi:
            return True
        if lhs < lo:
            return False
        prec *= 2
    raise Undecided("partition inequality undecided")


# -- vectorized sweeps (n <= 6, one uint64 per set) ------------------------------------


def _low_masks_u64(n: int) -> list[np.uint64]:
    cube = Cube(n)
    return [np.uint64(m) for m in cube.low_masks]


def _shift_u64(A: np.ndarray, j: int, low: np.uint64) -> np.ndarray:
    s = np.uint64(1 << j)
    return ((A & low) << s) | ((A >> s) & low)


def boundary_histograms(n: int, sets: np.ndarray) -> np.ndarray:
    """Row ``k``: boundary-degree histogram of ``sets[k]`` (shape ``(len, n+1)``)."""
    if n > 6:
        raise CombinatoricsError("vectorized sweep supports n <= 6")
    full = np.uint64((1 << (1 << n)) - 1)
    A = sets.astype(np.uint64) & full
    rest = ~A & full
    lows = _low_masks_u64(n)
    planes = [np.zeros_like(A) for _ in range(3)]
    for j in range(n):
        carry = A & _shift_u64(rest, j, lows[j])
        for p in range(3):
            nxt = planes[p] & carry
            planes[p] ^= carry
            carry = nxt
    out = np.empty((len(A), n + 1), dtype=np.int64)
    for d in range(n + 1):
        sel = A.copy()
        for p in range(3):
            sel &= planes[p] if d >> p & 1 else ~planes[p]
        out[:, d] = np.bitwise_count(sel)
    return out


@dataclass
class SweepResult:
    n: int
    count: int
    violations: list[int]
    escalated: int
    min_margin: Fraction | None

    def csv_row(self) -> str:
        m = "" if self.min_margin is None else f"{self.min_margin.numerator}/{self.min_margin.denominator}"
        return f"{self.n},{self.count},{m},{len(self.violations)}"


def beta_sweep(n: int, sets: np.ndarray, exponent: str = "beta", scale_bits: int = 40) -> SweepResult:
    """Certified check of the boundary-functional inequality on each set.

    Fast path: integer lower/upper bounds ``floor/ceil(2^scale_bits d^beta)``.
    Cases the fast path cannot decide go through ``_decide`` with escalation.
    ``min_margin`` is the least certified lower bound of ``N*lhs - 2a(N-a)/N``
    over the passing sets, divided by ``N``.
    """
    N = 1 << n
    pw = power_bounds(n, exponent)
    scale = 1 << scale_bits
    lo_int = np.array([math.floor(p[0] * scale) for p in pw], dtype=np.int64)
    hi_int = np.array([math.ceil(p[1] * scale) for p in pw], dtype=np.int64)
    hist = boundary_histograms(n, sets)
    a = hist.sum(axis=1)
    rhs = 2 * a * (N - a)
    lo_sum = hist @ lo_int
    hi_sum = hist @ hi_int
    # N * sum c_d d^beta >= 2a(N-a), scaled by 2^scale_bits
    lhs_lo = lo_sum * N
    lhs_hi = hi_sum * N
    target = rhs * scale
    passed = lhs_lo >= target
    failed = lhs_hi < target
    violations = [int(k) for k in np.nonzero(failed)[0]]
    unsure = np.nonzero(~passed & ~failed)[0]
    for k in unsure:
        v = _decide(hist[k].tolist(), n, Fraction(int(rhs[k]), N), exponent)
        if not v.holds:
            violations.append(int(k))
    violations.sort()
    margin = None
    if passed.any():
        k = int(np.argmin(np.where(passed, lhs_lo - target, np.iinfo(np.int64).max)))
        margin = Fraction(int(lhs_lo[k] - target[k]), scale * N * N)
    return SweepResult(n, len(sets), violations, len(unsure), margin)


def random_sets(rng: np.random.Generator, n: int, count: int) -> np.ndarray:
    """Seeded random subsets of V(Q_n), mixing densities 1/8, 1/4, 1/2, 3/4, 7/8."""
    full = np.uint64((1 << (1 << n)) - 1)

    def draw():
        return rng.integers(0, 2 ** 63, size=count, dtype=np.uint64) * np.uint64(2) + \
            rng.integers(0, 2, size=count, dtype=np.uint64)

    r1, r2, r3 = draw(), draw(), draw()
    kind = rng.integers(0, 5, size=count)
    out = np.select([kind == 0, kind == 1, kind == 2, kind == 3],
                    [r1 & r2 & r3, r1 & r2, r1, r1 | r2], default=r1 | r2 | r3)
    return out & full


def random_partition_check(rng: np.random.Generator, n: int, count: int) -> tuple[int, int]:
    """``(checked, violations)`` for random partitions ``(R, S, U)`` of V(Q_n).

    Each vertex lands in ``U``, ``R``, ``S`` with probabilities 1/8, 1/2, 3/8.
    """
    cube = Cube(n)
    if n > 6:
        raise CombinatoricsError("vectorized sweep supports n <= 6")
    N = cube.N
    full = np.uint64((1 << N) - 1)
    u = rng.integers(0, 8, size=(count, N))
    U = _pack(u == 0)
    R = _pack(u % 2 == 1) & ~U & full
    S = ~(R | U) & full
    lows = _low_masks_u64(n)
    lhs = np.zeros(count, dtype=np.int64)
    for j in range(n):
        lhs += np.bitwise_count(R & _shift_u64(S, j, lows[j])).astype(np.int64)
    ru = np.bitwise_count(R | U).astype(np.int64)
    uu = np.bitwise_count(U).astype(np.int64)
    nb_lo, nb_hi = power_bounds(n)[n]
    bad = 0
    for k in range(count):
        # lhs/N >= 2 ru (N - ru)/N^2 - n^beta uu/N
        left = Fraction(int(lhs[k]) * N)
        base = Fraction(2 * int(ru[k]) * (N - int(ru[k])))
        if left >= base - nb_lo * int(uu[k]) * N:
            continue
        if left < base - nb_hi * int(uu[k]) * N:
            bad += 1
            continue
        Rk, Uk = int(R[k]), int(U[k])
        if not partition_check(cube, Rk, cube.full & ~(Rk | Uk), Uk):
            bad += 1
    return count, bad


def _pack(mask: np.ndarray) -> np.ndarray:
    weights = np.left_shift(np.uint64(1), np.arange(mask.shape[1], dtype=np.uint64))
    return (mask.astype(np.uint64) * weights).sum(axis=1, dtype=np.uint64)


# -- compositions and linked sets ---------------------------------------------------


def compositions(m: int) -> int:
    """Number of compositions of ``m`` (by recursion on the first part)."""
    if m < 1:
        raise CombinatoricsError("m must be >= 1")
    c = [1] + [0] * m
    for k in range(1, m + 1):
        c[k] = sum(c[k - j] for j in range(1, k + 1))
    return c[m]


@dataclass(frozen=True)
class CompositionBound:
    exact: int
    binomial_bound: int
    cap_lower: Fraction

    @property
    def holds(self) -> bool:
        return self.exact <= self.binomial_bound < self.cap_lower


def compositions_at_most(m: int, b: int) -> CompositionBound:
    """Compositions of ``m`` with at most ``b`` parts, the binomial bound
    ``sum_{i<=b} C(m-1, i)``, and a rational lower bound for ``(e m / b)^b``."""
    if not (1 <= b and 2 * b <= m):
        raise CombinatoricsError("need 1 <= b <= m/2")
    # ways[p][s]: compositions of s into exactly p parts
    ways = [[0] * (m + 1) for _ in range(b + 1)]
    ways[0][0] = 1
    for p in range(1, b + 1):
        for s in range(1, m + 1):
            ways[p][s] = sum(ways[p - 1][s - j] for j in range(1, s + 1))
    exact = sum(ways[p][m] for p in range(1, b + 1))
    loose = sum(math.comb(m - 1, i) for i in range(b + 1))
    return CompositionBound(exact, loose, (E_LO * m / b) ** b)


def all_compositions(m: int):
    """Every composition of ``m``, by cut positions (independent enumeration)."""
    for k in range(m):
        for cuts in combinations(range(1, m), k):
            pts = (0,) + cuts + (m,)
            yield tuple(pts[j + 1] - pts[j] for j in range(len(pts) - 1))


def distance_ball_masks(cube: Cube, k: int) -> list[int]:
    """For each vertex, the vertices at distance 1..k."""
    out = []
    for v in range(cube.N):
        out.append(sum(1 << u for u in range(cube.N) if 1 <= (u ^ v).bit_count() <= k))
    return out


@dataclass(frozen=True)
class LinkedCount:
    exact: int
    max_degree: int
    x: int

    @property
    def tree_bound(self) -> float:
        return (math.e * self.max_degree) ** (self.x - 1)

    @property
    def holds(self) -> bool:
        return self.exact <= (E_LO * self.max_degree) ** (self.x - 1)


def count_klinked(cube: Cube, v: int, x: int, k: int, cap: int = 2_000_000) -> LinkedCount:
    """k-linked subsets of size ``x`` containing ``v``, grown layer by layer."""
    cube.check_vertex(v)
    if x < 1:
        raise CombinatoricsError("x must be >= 1")
    ball = distance_ball_masks(cube, k)
    layer = {1 << v}
    for _ in range(x - 1):
        nxt = set()
        for S in layer:
            reach = 0
            for u in bits(S):
                reach |= ball[u]
            for u in bits(reach & ~S):
                nxt.add(S | (1 << u))
        if len(nxt) > cap:
            raise CombinatoricsError(f"enumeration cap {cap} exceeded")
        layer = nxt
    delta = max(b.bit_count() for b in ball)
    return LinkedCount(len(layer), delta, x)


# -- isoperimetry ---------------------------------------------------------------------


def vertex_expansion(cube: Cube, A: int) -> Fraction:
    """``(|N(A)| - |A|) / |N(A)|`` for nonempty even ``A`` with ``|A| <= N/4``."""
    if A & ~cube.even:
        raise CombinatoricsError("A must lie in the even class")
    if not 1 <= A.bit_count() <= cube.N // 4:
        raise CombinatoricsError("need 1 <= |A| <= N/4")
    NA = cube.neighborhood(A).bit_count()
    return Fraction(NA - A.bit_count(), NA)


@dataclass
class ExpansionSweep:
    n: int
    checked: int
    violations: list[int]
    min_ratio: Fraction
    witness: int


def expansion_sweep(n: int, fault: bool = False) -> ExpansionSweep:
    """All ``A`` in the even class with ``1 <= |A| <= N/4``: is ``|N(A)| > |A|``?

    ``fault=True`` halves every neighborhood size (test hook).
    """
    cube = Cube(n)
    evens = list(bits(cube.even))
    m = len(evens)
    if m > 20:
        raise CombinatoricsError("exhaustive expansion sweep supports n <= 5")
    nbr = np.array([cube.nbr_masks[v] for v in evens], dtype=object if cube.N > 64 else np.uint64)
    nb = np.zeros(1 << m, dtype=nbr.dtype)
    for j in range(m):
        nb[1 << j: 1 << (j + 1)] = nb[: 1 << j] | nbr[j]
    idx = np.arange(1 << m, dtype=np.uint64)
    size = np.bitwise_count(idx).astype(np.int64)
    nsize = np.bitwise_count(nb).astype(np.int64)
    if fault:
        nsize = nsize // 2
    sel = (size >= 1) & (size <= cube.N // 4)
    bad_idx = np.nonzero(sel & (nsize <= size))[0]
    ratio_num = nsize - size
    # minimize (N-A)/N over sel, exactly via cross-multiplication on the candidates
    cand = np.nonzero(sel)[0]
    best = None
    for k in cand[np.argsort(ratio_num[cand] / nsize[cand], kind="stable")[:64]]:
        r = Fraction(int(ratio_num[k]), int(nsize[k]))
        if best is None or r < best[0]:
            best = (r, int(k))

    def to_set(k: int) -> int:
        return sum(1 << evens[j] for j in range(m) if k >> j & 1)

    return ExpansionSweep(n, int(sel.sum()), [to_set(int(k)) for k in bad_idx], best[0], to_set(best[1]))


@dataclass
class GrowthReport:
    size: int
    neighborhood: int
    k: float
    reference: float


def neighborhood_growth(cube: Cube, A: int) -> GrowthReport:
    """``|N(A)|`` against ``|A| n / k`` with ``|A| = n^k`` (report only)."""
    if not (A & ~cube.even == 0 or A & ~cube.odd == 0):
        raise CombinatoricsError("A must lie in one parity class")
    a = A.bit_count()
    if a < 2:
        raise CombinatoricsError("need |A| >= 2")
    k = math.log(a) / math.log(cube.n)
    return GrowthReport(a, cube.neighborhood(A).bit_count(), k, a * cube.n / k)


def min_subcube_distance(cube: Cube, A: int) -> tuple[tuple[int, int], Fraction]:
    """Closest codimension-1 subcube ``{x_i = eps}`` to ``A`` in symmetric-difference measure."""
    best = None
    for i in range(1, cube.n + 1):
        for eps in (0, 1):
            d = Fraction((cube.subcube(i, eps) ^ A).bit_count(), cube.N)
            if best is None or d < best[1]:
                best = ((i, eps), d)
    return best
