import json
from fractions import Fraction

import numpy as np
import pytest

from miscube.cube import Cube
from miscube.mis import InducedSubgraph, enumerate_mis, is_mis, mis_list
from miscube.peeling import (Empty, FirstOf, InconsistentTrace, MaxDegAtMost, PeelError, PeelTrace, SizeAtMost,
                             SupportAtLeast, alpha_trajectory, parse_rule, peel, pz_bound, pz_violations, replay,
                             support_count_bound, support_rule, two_stage_rules, root_ceil)

from util import vset


def test_support_rule_values():
    # ceil(N log2(n) / 2n)
    assert support_rule(2).r == 1
    assert support_rule(3).r == 3
    assert support_rule(4).r == 4
    assert support_rule(5).r == 8


def test_two_stage_cutoffs():
    assert two_stage_rules(3) == (MaxDegAtMost(3), MaxDegAtMost(2))
    assert two_stage_rules(4) == (MaxDegAtMost(3), MaxDegAtMost(2))
    assert two_stage_rules(8) == (MaxDegAtMost(4), MaxDegAtMost(2))
    assert two_stage_rules(4, size_floor=6)[1] == FirstOf((MaxDegAtMost(2), SizeAtMost(6)))
    assert root_ceil(27, 1, 3) == 3 and root_ceil(28, 1, 3) == 4


def test_rule_round_trip():
    for rule in (Empty(), SupportAtLeast(4), MaxDegAtMost(2), SizeAtMost(3),
                 FirstOf((MaxDegAtMost(2), SizeAtMost(6))), FirstOf((SupportAtLeast(1), FirstOf((Empty(),))))):
        assert parse_rule(rule.spec()) == rule
    assert parse_rule("maxdeg:2|size:6") == FirstOf((MaxDegAtMost(2), SizeAtMost(6)))
    with pytest.raises(PeelError):
        parse_rule("sometimes:3")


def test_empty_W_gives_empty_trace():
    c = Cube(3)
    res = peel(c, 0, c.even, Empty())
    assert res.trace.xi == () and res.X == 0
    assert replay(res.trace) == (0, 0)


def test_q2_empty_rule_replays():
    c = Cube(2)
    I = vset(c, "00", "11")
    res = peel(c, c.full, I, Empty())
    assert res.X == 0
    assert replay(res.trace) == (0, I)
    assert len(res.trace.xi) == len(res.trace.xs) >= 1


def test_support_one_stops_after_first_hit():
    c = Cube(3)
    res = peel(c, c.full, c.even, SupportAtLeast(1))
    assert res.trace.xi[-1] == 1 and sum(res.trace.xi) == 1


def test_rule_true_at_start_gives_empty_trace():
    c = Cube(3)
    res = peel(c, c.full, c.even, MaxDegAtMost(3))
    assert res.trace.xi == () and res.X == c.full
    assert replay(res.trace) == (c.full, 0)


def test_first_vertex_of_max_degree_is_picked():
    c = Cube(3)
    res = peel(c, c.full, c.odd, Empty())
    assert res.trace.xs[0] == 0


@pytest.mark.parametrize("n", [3, 4])
def test_replay_and_residual_on_every_mis(n):
    c = Cube(n)
    first, second = two_stage_rules(n)
    for I in mis_list(c):
        for rule in (FirstOf((support_rule(n),)), first, second, Empty()):
            res = peel(c, c.full, I, rule)
            assert replay(res.trace) == (res.X, res.removed_in_I)
            assert res.removed_in_I == I & ~res.X
            assert is_mis(InducedSubgraph(c, res.X), I & res.X)


def test_replay_on_subsets():
    c = Cube(4)
    rng = np.random.default_rng(8)
    for _ in range(100):
        W = int(rng.integers(0, 1 << 16))
        G = InducedSubgraph(c, W)
        sets = enumerate_mis(G).sets
        I = sets[int(rng.integers(0, len(sets)))]
        res = peel(c, W, I, Empty())
        assert replay(res.trace) == (0, I)


def test_peel_requires_mis_on_W():
    c = Cube(3)
    with pytest.raises(PeelError):
        peel(c, c.full, 0, Empty())


def test_tampered_trace_is_detected():
    c = Cube(4)
    for I in mis_list(c):
        res = peel(c, c.full, I, FirstOf((support_rule(4),)))
        for k in range(len(res.trace.xi)):
            xi = list(res.trace.xi)
            xi[k] ^= 1
            bad = PeelTrace(4, c.full, res.trace.rule, tuple(xi), ())
            try:
                out = replay(bad)
            except InconsistentTrace:
                continue
            assert out != (res.X, res.removed_in_I)


def test_trace_json_round_trip():
    c = Cube(4)
    I = mis_list(c)[7]
    res = peel(c, c.full, I, FirstOf((support_rule(4),)))
    text = res.trace.to_json()
    back = PeelTrace.from_json(text)
    assert back == res.trace
    assert set(json.loads(text)) == {"n", "w0", "rule", "xi"}


def test_support_count_bound_examples():
    assert support_count_bound(4, 1)[0] == 15
    assert support_count_bound(2, 1)[0] == 6
    exact, bound = support_count_bound(4, 1)
    assert bound == 5 * Fraction(256, 27)
    for l in range(2, 21):
        for r in range(1, l // 2 + 1):
            exact, bound = support_count_bound(l, r)
            assert exact <= bound


def test_pz_bound_examples():
    c = Cube(3)
    assert pz_bound(3, c.N, 0, 0) == c.N // 2
    assert pz_bound(3, c.N, 3, 0) == c.N
    rng = np.random.default_rng(4)
    for _ in range(10):
        W = int(rng.integers(1, 256))
        for d in range(6):
            assert pz_violations(c, W, d) == []


@pytest.mark.parametrize("n", [3, 4])
def test_alpha_checks(n):
    c = Cube(n)
    for I in mis_list(c):
        res = peel(c, c.full, I, FirstOf((support_rule(n),)))
        a = alpha_trajectory(c, res)
        assert a.ok, a.failures
        assert a.alphas[0] == 1


def test_alpha_needs_full_W():
    c = Cube(3)
    res = peel(c, c.even, c.even, Empty())
    with pytest.raises(PeelError):
        alpha_trajectory(c, res)
