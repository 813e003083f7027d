"""Greedy max-degree peeling of a vertex set against an unknown MIS.

Starting from ``X_0 = W``, each step takes the first (lowest index) vertex of
largest degree inside the current set.  If it belongs to ``I`` it is removed
together with its neighbors, otherwise alone; the membership bit is recorded.
The bit string alone, given ``W`` and the stop rule, replays the whole run.

Stop rules are evaluated at the top of each iteration, so a rule already true
for ``W`` gives an empty trace.  Running out of vertices always stops.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .cube import Cube, bits
from .mis import InducedSubgraph, is_mis


class PeelError(ValueError):
    pass


class InconsistentTrace(PeelError):
    pass


# -- stop rules ---------------------------------------------------------------


@dataclass(frozen=True)
class SupportAtLeast:
    r: int

    def fires(self, cube: Cube, X: int, support: int) -> bool:
        return support >= self.r

    def spec(self) -> str:
        return f"support:{self.r}"


@dataclass(frozen=True)
class MaxDegAtMost:
    d: int

    def fires(self, cube: Cube, X: int, support: int) -> bool:
        return max_degree(cube, X) <= self.d

    def spec(self) -> str:
        return f"maxdeg:{self.d}"


@dataclass(frozen=True)
class SizeAtMost:
    s: int

    def fires(self, cube: Cube, X: int, support: int) -> bool:
        return X.bit_count() <= self.s

    def spec(self) -> str:
        return f"size:{self.s}"


@dataclass(frozen=True)
class Empty:
    def fires(self, cube: Cube, X: int, support: int) -> bool:
        return not X

    def spec(self) -> str:
        return "empty"


@dataclass(frozen=True)
class FirstOf:
    rules: tuple

    def fires(self, cube: Cube, X: int, support: int) -> bool:
        return any(r.fires(cube, X, support) for r in self.rules)

    def spec(self) -> str:
        return "first(" + ",".join(r.spec() for r in self.rules) + ")"


def parse_rule(text: str):
    """Inverse of ``rule.spec()``; ``a|b`` is also accepted for ``first(a,b)``."""
    text = text.strip()
    if text.startswith("first(") and text.endswith(")"):
        inner = text[len("first("):-1]
        return FirstOf(tuple(parse_rule(p) for p in _split_top(inner)))
    if "|" in text:
        return FirstOf(tuple(parse_rule(p) for p in text.split("|")))
    if text == "empty":
        return Empty()
    kind, _, arg = text.partition(":")
    try:
        value = int(arg)
    except ValueError:
        raise PeelError(f"bad stop rule {text!r}") from None
    table = {"support": SupportAtLeast, "maxdeg": MaxDegAtMost, "size": SizeAtMost}
    if kind not in table:
        raise PeelError(f"unknown stop rule {kind!r}")
    return table[kind](value)


def _split_top(text: str) -> list[str]:
    out, depth, cur = [], 0, ""
    for ch in text:
        if ch == "," and depth == 0:
            out.append(cur)
            cur = ""
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur += ch
    out.append(cur)
    return out


def support_rule(n: int) -> SupportAtLeast:
    """Stop once the support reaches ``ceil(N log2(n) / 2n)``."""
    N = 1 << n
    # ceil of N*log2(n)/(2n), exact: smallest r with 2^(2nr/N) >= n, i.e. 2^(2nr) >= n^N
    r = 0
    while 2 ** (2 * n * r) < n ** N:
        r += 1
    return SupportAtLeast(r)


def root_ceil(n: int, num: int, den: int) -> int:
    """``ceil(n ** (num/den))`` computed exactly."""
    k = max(0, int(round(n ** (num / den))) - 2)
    while k ** den < n ** num:
        k += 1
    return k


def two_stage_rules(n: int, size_floor: int | None = None):
    """Degree cutoffs ``ceil(n^(2/3))`` then ``ceil(n^(1/3))`` (optionally or size <= floor)."""
    first = MaxDegAtMost(root_ceil(n, 2, 3))
    second = MaxDegAtMost(root_ceil(n, 1, 3))
    if size_floor is not None:
        second = FirstOf((second, SizeAtMost(size_floor)))
    return first, second


# -- the run ------------------------------------------------------------------


def max_degree(cube: Cube, X: int) -> int:
    masks = cube.nbr_masks
    return max(((masks[v] & X).bit_count() for v in bits(X)), default=0)


def pick(cube: Cube, X: int) -> int:
    """First vertex of ``X`` among those of largest degree in ``X``."""
    masks = cube.nbr_masks
    best, best_deg = -1, -1
    for v in bits(X):
        d = (masks[v] & X).bit_count()
        if d > best_deg:
            best, best_deg = v, d
    return best


@dataclass(frozen=True)
class PeelTrace:
    n: int
    w0: int
    rule: object
    xi: tuple[int, ...]
    xs: tuple[int, ...]

    def to_json(self) -> str:
        cube = Cube(self.n)
        return json.dumps({"n": self.n, "w0": cube.to_hex(self.w0), "rule": self.rule.spec(),
                           "xi": "".join(map(str, self.xi))}, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "PeelTrace":
        """Rebuild a trace; the vertex sequence is recovered by replay."""
        data = json.loads(text)
        cube = Cube(data["n"])
        w0 = cube.from_hex(data["w0"])
        rule = parse_rule(data["rule"])
        xi = tuple(int(c) for c in data["xi"])
        xs, _, _ = _replay_run(cube, w0, rule, xi)
        return cls(cube.n, w0, rule, xi, xs)


@dataclass(frozen=True)
class PeelResult:
    trace: PeelTrace
    X: int
    removed_in_I: int
    history: tuple[int, ...]

    @property
    def support(self) -> int:
        return sum(self.trace.xi)


def _stops(rule, cube: Cube, X: int, support: int) -> bool:
    return not X or rule.fires(cube, X, support)


def peel(cube: Cube, W: int, I: int, rule, check: bool = True) -> PeelResult:
    """Run the peeling on ``W`` against ``I``.

    ``I & W`` must be an MIS of ``Q_n[W]`` (for ``W = V`` this says ``I`` is an
    MIS of Q_n).
    """
    cube.check_set(W)
    cube.check_set(I)
    if check and not is_mis(InducedSubgraph(cube, W), I & W):
        raise PeelError("I restricted to W is not an MIS of Q_n[W]")
    X = W
    xi, xs, history = [], [], [W]
    support = 0
    removed = 0
    while not _stops(rule, cube, X, support):
        x = pick(cube, X)
        xs.append(x)
        if I >> x & 1:
            xi.append(1)
            support += 1
            removed |= 1 << x
            X &= ~((1 << x) | cube.nbr_masks[x])
        else:
            xi.append(0)
            X &= ~(1 << x)
        history.append(X)
    trace = PeelTrace(cube.n, W, rule, tuple(xi), tuple(xs))
    return PeelResult(trace, X, removed, tuple(history))


def _replay_run(cube: Cube, W: int, rule, xi) -> tuple[tuple[int, ...], int, int]:
    X = W
    xs = []
    removed = 0
    support = 0
    for k, bit in enumerate(xi):
        if _stops(rule, cube, X, support):
            raise InconsistentTrace(f"run should have stopped before step {k + 1}")
        x = pick(cube, X)
        xs.append(x)
        if bit:
            support += 1
            removed |= 1 << x
            X &= ~((1 << x) | cube.nbr_masks[x])
        else:
            X &= ~(1 << x)
    if not _stops(rule, cube, X, support):
        raise InconsistentTrace("trace ends before the stop rule fires")
    return tuple(xs), X, removed


def replay(trace: PeelTrace) -> tuple[int, int]:
    """``(X, I - X)`` from the bit string, ``W`` and the rule alone."""
    cube = Cube(trace.n)
    xs, X, removed = _replay_run(cube, trace.w0, trace.rule, trace.xi)
    if trace.xs and tuple(trace.xs) != xs:
        raise InconsistentTrace("declared vertex sequence disagrees with the greedy choice")
    return X, removed


# -- bounds --------------------------------------------------------------------


def support_count_bound(l: int, r: int) -> tuple[int, Fraction]:
    """Binary strings of length <= l with at most r ones, and ``(l+1) 2^{l H(r/l)}``.

    ``2^{l H(r/l)} = l^l / (r^r (l-r)^(l-r))`` exactly.
    """
    if not (0 < r and 2 * r <= l):
        raise PeelError("need 0 < r <= l/2")
    exact = sum(math.comb(j, t) for j in range(l + 1) for t in range(min(r, j) + 1))
    entropy = Fraction(l ** l, r ** r * (l - r) ** (l - r))
    return exact, (l + 1) * entropy


def pz_bound(n: int, W_size: int, d: int, L: int) -> Fraction:
    """``(n|W| + L) / (2n - d)``: bound on a max-degree-``d`` subset of ``W`` with ``|bdry W| <= L``."""
    if not 0 <= d < 2 * n:
        raise PeelError("need 0 <= d < 2n")
    return Fraction(n * W_size + L, 2 * n - d)


def pz_violations(cube: Cube, W: int, d: int, L: int | None = None) -> list[int]:
    """Subsets ``Z`` of ``W`` with internal max degree <= d that break the bound."""
    if L is None:
        L = cube.boundary_size(W)
    elif cube.boundary_size(W) > L:
        raise PeelError("boundary of W exceeds L")
    bound = pz_bound(cube.n, W.bit_count(), d, L)
    vs = list(bits(W))
    bad = []
    for k in range(1 << len(vs)):
        Z = 0
        for j, v in enumerate(vs):
            if k >> j & 1:
                Z |= 1 << v
        if max_degree(cube, Z) <= d and Z.bit_count() > bound:
            bad.append(Z)
    return bad


@dataclass
class AlphaReport:
    alphas: list[Fraction]
    degree_bound_ok: bool
    contraction_ok: bool
    final_ok: bool | None
    failures: list[str]

    @property
    def ok(self) -> bool:
        return not self.failures


def alpha_trajectory(cube: Cube, result: PeelResult) -> AlphaReport:
    """``alpha_i`` with ``|X_i| = (1 + alpha_i) N/2`` and the exact per-step checks.

    * every step: ``|X_i| <= (1 + d_i/n) N/2`` with ``d_i`` the max degree in ``X_i``;
    * every step with bit 1: ``alpha_i < (1 - 2n/N) alpha_{i-1}``;
    * if the run was ended by the support rule with ``X`` nonempty:
      ``|X| < (1 + 1/n) N/2``.
    """
    if result.trace.w0 != cube.full:
        raise PeelError("alpha trajectory needs W = V")
    n, N = cube.n, cube.N
    alphas = [Fraction(2 * X.bit_count(), N) - 1 for X in result.history]
    failures = []
    deg_ok = True
    for i, X in enumerate(result.history):
        d = max_degree(cube, X)
        if Fraction(X.bit_count()) > (1 + Fraction(d, n)) * Fraction(N, 2):
            deg_ok = False
            failures.append(f"step {i}: |X| = {X.bit_count()} exceeds degree bound (d = {d})")
    contract_ok = True
    factor = 1 - Fraction(2 * n, N)
    for i, bit in enumerate(result.trace.xi, start=1):
        if bit and not alphas[i] < factor * alphas[i - 1]:
            contract_ok = False
            failures.append(f"step {i}: alpha {alphas[i]} not below {factor} * {alphas[i - 1]}")
    final_ok = None
    rule = result.trace.rule
    if result.X and _ended_by_support(rule, result.support):
        final_ok = Fraction(result.X.bit_count()) < (1 + Fraction(1, n)) * Fraction(N, 2)
        if not final_ok:
            failures.append(f"final |X| = {result.X.bit_count()} not below (1+1/n)N/2")
    return AlphaReport(alphas, deg_ok, contract_ok, final_ok, failures)


def _ended_by_support(rule, support: int) -> bool:
    if isinstance(rule, SupportAtLeast):
        return support >= rule.r
    if isinstance(rule, FirstOf):
        return any(_ended_by_support(r, support) for r in rule.rules)
    return False
