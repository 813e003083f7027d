"""Verification suites: every exact finite claim, checked exhaustively or on seeded samples.

Randomness: numpy's PCG64 bit generator, seeded through ``SeedSequence(seed)``
and split with ``spawn`` into one independent child stream per suite (in the
fixed order of ``SUITES``).  Given the seed, every report is reproducible
on any platform.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import combinatorics as cmb
from .cube import Cube, bits
from .labelings import (ContainerWitness, check_container, check_occupancy_facts, closure, decompose,
                        from_labeling, in_canonical_families, is_k_linked, k_components, legal_labelings,
                        tight_slack_classify, to_labeling)
from .matchings import (Matching, assignment_matching, assignment_matching_oracle, canonical_matchings,
                        enumerate_induced_matchings, largest_im)
from .mis import (InducedSubgraph, brute_force_mis, canonical_family, enumerate_mis, extend_to_mis,
                  family_overlap, ht_bound_check, is_mis, mis_list, random_triangle_free)
from .peeling import (Empty, FirstOf, alpha_trajectory, peel, pz_violations, replay, support_count_bound,
                      support_rule, two_stage_rules)
from .projection import analyze, check_structure, component_measures

SUITES = ("core", "peeling", "labeling", "projection", "isoperimetry", "containers")


@dataclass
class Claim:
    name: str
    about: str
    checked: int = 0
    violations: int = 0
    witness: str | None = None
    notes: dict = field(default_factory=dict)

    def check(self, ok: bool, witness: Callable[[], str] | str | None = None) -> bool:
        self.checked += 1
        if not ok:
            self.violations += 1
            if self.witness is None and witness is not None:
                self.witness = witness() if callable(witness) else witness
        return ok


@dataclass
class Options:
    seed: int = 0
    workers: int = 1
    small_threshold: int | None = None
    eps: Fraction = Fraction(1, 2)
    c3: Fraction = Fraction(1)
    random_sets: int = 10 ** 6
    random_partitions: int = 10 ** 5
    random_graphs: int = 10_000
    fault: str | None = None


class Report:
    def __init__(self, suite: str, seed: int):
        self.suite = suite
        self.seed = seed
        self.claims: list[Claim] = []

    def claim(self, name: str, about: str) -> Claim:
        c = Claim(name, about)
        self.claims.append(c)
        return c

    @property
    def ok(self) -> bool:
        return all(c.violations == 0 for c in self.claims)

    def payload(self) -> dict:
        return {"suite": self.suite, "seed": self.seed, "ok": self.ok,
                "claims": [asdict(c) for c in self.claims]}

    def to_json(self) -> str:
        return json.dumps(self.payload(), sort_keys=True, indent=1)


def _rngs(seed: int) -> dict[str, np.random.Generator]:
    children = np.random.SeedSequence(seed).spawn(len(SUITES))
    return {name: np.random.Generator(np.random.PCG64(s)) for name, s in zip(SUITES, children)}


def _hex(cube: Cube, A: int) -> str:
    return cube.to_hex(A)


# -- core ---------------------------------------------------------------------


def suite_core(rep: Report, rng: np.random.Generator, opt: Options) -> None:
    c = rep.claim("mis_count_matches_subset_oracle", "engine count equals exhaustive subset test, Q_1..Q_4")
    counts = {}
    for n in (1, 2, 3, 4):
        cube = Cube(n)
        G = InducedSubgraph.whole(cube)
        got = enumerate_mis(G, workers=opt.workers).sets
        counts[n] = len(got)
        c.check(got == brute_force_mis(G), f"n={n}")
    c.notes["counts"] = {str(k): str(v) for k, v in counts.items()}

    c = rep.claim("mis_count_matches_subset_oracle_on_subgraphs",
                  "engine vs subset oracle: all induced subgraphs of Q_3, 500 random of Q_4")
    cube3 = Cube(3)
    for W in range(1 << cube3.N):
        G = InducedSubgraph(cube3, W)
        c.check(enumerate_mis(G).sets == brute_force_mis(G), lambda: f"n=3 W={_hex(cube3, W)}")
    cube4 = Cube(4)
    for _ in range(500):
        W = int(rng.integers(0, 1 << 16))
        G = InducedSubgraph(cube4, W)
        c.check(enumerate_mis(G).sets == brute_force_mis(G), lambda: f"n=4 W={_hex(cube4, W)}")

    c = rep.claim("canonical_family_size_and_membership",
                  "each canonical matching yields 2^(N/4) distinct MIS's by unique extension, all enumerated")
    for n in (2, 3, 4):
        cube = Cube(n)
        every = set(mis_list(cube))
        for M in canonical_matchings(cube):
            fam = canonical_family(cube, M)
            c.check(len(fam) == 2 ** (cube.N // 4) and set(fam) <= every, f"n={n} {M}")

    c = rep.claim("canonical_family_overlap", "distinct canonical families share <= 3^(N/8) MIS's; exactly 2 when parallel")
    lower = rep.claim("inclusion_exclusion_lower_bound", "mis(Q_n) >= 2n 2^(N/4) - sum of pairwise overlaps")
    for n in (3, 4):
        cube = Cube(n)
        Ms = canonical_matchings(cube)
        total = 0
        for a in range(len(Ms)):
            for b in range(a + 1, len(Ms)):
                ov = family_overlap(cube, Ms[a], Ms[b])
                total += ov
                ok = ov ** 8 <= 3 ** cube.N
                if Ms[a].dir == Ms[b].dir:
                    ok = ok and ov == 2
                c.check(ok, f"n={n} {Ms[a]} {Ms[b]} overlap={ov}")
        lower.check(counts[n] >= 2 * n * 2 ** (cube.N // 4) - total, f"n={n}")

    c = rep.claim("largest_induced_matching_is_canonical",
                  "im(Q_n) = N/4 and the maximum induced matchings are exactly the canonical ones")
    for n in (2, 3, 4):
        cube = Cube(n)
        G = InducedSubgraph.whole(cube)
        size, _ = largest_im(G)
        ims = list(enumerate_induced_matchings(G))
        top = {M.ids for M in ims if len(M) == max(len(M) for M in ims)}
        canon = {M.matching(cube).ids for M in canonical_matchings(cube)}
        c.check(size == cube.N // 4 and top == canon, f"n={n}")

    c = rep.claim("mis_count_bound_triangle_free",
                  "mis(G) <= 2^(m/2) with equality exactly for perfect matchings (m <= 12)")
    for _ in range(opt.random_graphs):
        m, edges = random_triangle_free(rng)
        r = ht_bound_check(m, edges)
        c.check(r.holds, lambda: f"m={m} edges={edges} count={r.count}")
    for m in range(2, 13, 2):
        r = ht_bound_check(m, [(2 * j, 2 * j + 1) for j in range(m // 2)])
        c.check(r.holds and r.equality, f"perfect matching m={m}")

    c = rep.claim("assignment_matching_matches_oracle",
                  "M_G(I) agrees with brute force on all MIS's of Q_3 and 200 random MIS's of subgraphs of Q_4")
    G3 = InducedSubgraph.whole(cube3)
    for I in mis_list(cube3):
        c.check(assignment_matching(G3, I) == assignment_matching_oracle(G3, I), lambda: f"n=3 I={_hex(cube3, I)}")
    done = 0
    while done < 200:
        k = int(rng.integers(1, 15))
        W = 0
        for v in rng.choice(16, size=k, replace=False):
            W |= 1 << int(v)
        G = InducedSubgraph(cube4, W)
        sets = enumerate_mis(G).sets
        I = sets[int(rng.integers(0, len(sets)))]
        c.check(assignment_matching(G, I) == assignment_matching_oracle(G, I),
                lambda: f"n=4 W={_hex(cube4, W)} I={_hex(cube4, I)}")
        done += 1

    c = rep.claim("large_assignment_matching_leaves_few_extra",
                  "|M(I)| > (1-e)N/4 implies |I - V(M(I))| < eN, e in {1/4, 1/2, 1}")
    for n in (3, 4):
        cube = Cube(n)
        G = InducedSubgraph.whole(cube)
        for I in mis_list(cube):
            M = assignment_matching(G, I)
            rest = (I & ~M.vertices()).bit_count()
            for e in (Fraction(1, 4), Fraction(1, 2), Fraction(1)):
                if len(M) > (1 - e) * cube.N / 4:
                    c.check(rest < e * cube.N, f"n={n} I={_hex(cube, I)} e={e}")

    c = rep.claim("unique_extension_of_canonical_choices",
                  "one endpoint per canonical edge always has an edgeless residue")
    for n in (3,):
        cube = Cube(n)
        G = InducedSubgraph.whole(cube)
        for M in canonical_matchings(cube):
            es = M.edge_list(cube)
            for choice in range(1 << len(es)):
                S = sum(1 << (e.hi if choice >> j & 1 else e.lo) for j, e in enumerate(es))
                try:
                    c.check(is_mis(G, extend_to_mis(G, S)))
                except ValueError as exc:
                    c.check(False, f"{M} choice={choice}: {exc}")


# -- peeling --------------------------------------------------------------------


def _peel_battery(n: int):
    first, second = two_stage_rules(n)
    return {"support": FirstOf((support_rule(n),)), "empty": Empty(), "degree_stage_one": first,
            "degree_stage_two": second}


def suite_peeling(rep: Report, rng: np.random.Generator, opt: Options) -> None:
    replay_c = rep.claim("trace_replay_recovers_X_and_removed", "bit string determines X and I - X")
    mis_c = rep.claim("residual_is_mis", "I & X is an MIS of Q_n[X]")
    obs_deg = rep.claim("size_bounded_by_degree", "|X_i| <= (1 + d_i/n) N/2 at every step (support rule)")
    obs_con = rep.claim("alpha_contracts_on_hits", "alpha_i < (1 - 2n/N) alpha_(i-1) whenever bit i is 1")
    final = rep.claim("support_stop_leaves_small_X", "support-stopped nonempty X has |X| < (1 + 1/n) N/2")
    for n in (3, 4):
        cube = Cube(n)
        rules = _peel_battery(n)
        Ws = [cube.full] + [int(x) for x in rng.integers(1, 1 << cube.N, size=30)]
        for I in mis_list(cube):
            for W in Ws:
                G = InducedSubgraph(cube, W)
                # the peeling needs I & W maximal in Q_n[W]; extend greedily inside W otherwise
                IW = I & W if is_mis(G, I & W) else _complete(cube, W, I & W)
                for name, rule in rules.items():
                    res = peel(cube, W, IW, rule)
                    X, removed = replay(res.trace)
                    replay_c.check((X, removed) == (res.X, res.removed_in_I),
                                   lambda: f"n={n} W={_hex(cube, W)} I={_hex(cube, IW)} {name}")
                    mis_c.check(is_mis(InducedSubgraph(cube, res.X), IW & res.X),
                                lambda: f"n={n} W={_hex(cube, W)} I={_hex(cube, IW)} {name}")
                # the second degree stage runs fresh on what the first left
                if W == cube.full:
                    s1 = peel(cube, W, IW, rules["degree_stage_one"])
                    s2 = peel(cube, s1.X, IW & s1.X, rules["degree_stage_two"])
                    X, removed = replay(s2.trace)
                    replay_c.check((X, removed) == (s2.X, s2.removed_in_I), f"n={n} two-stage")
                    mis_c.check(is_mis(InducedSubgraph(cube, s2.X), IW & s2.X), f"n={n} two-stage")
            res = peel(cube, cube.full, I, rules["support"])
            a = alpha_trajectory(cube, res)
            obs_deg.check(a.degree_bound_ok, lambda: a.failures[0])
            obs_con.check(a.contraction_ok, lambda: a.failures[0])
            if a.final_ok is not None:
                final.check(a.final_ok, lambda: a.failures[-1])

    c = rep.claim("string_count_below_entropy_bound", "strings of length <= l, support <= r, vs (l+1) 2^(l H(r/l))")
    for l in range(2, 21):
        for r in range(1, l // 2 + 1):
            exact, bound = support_count_bound(l, r)
            c.check(exact <= bound, f"l={l} r={r}")

    c = rep.claim("bounded_degree_subset_size", "|Z| <= (n|W| + L)/(2n - d) for Z in W with max degree <= d")
    cube = Cube(3)
    for W in [cube.full] + [int(x) for x in rng.integers(1, 1 << 8, size=20)]:
        for d in range(0, 2 * cube.n):
            bad = pz_violations(cube, W, d)
            c.check(not bad, lambda: f"W={_hex(cube, W)} d={d} Z={_hex(cube, bad[0])}")


def _complete(cube: Cube, W: int, S: int) -> int:
    """Greedy extension of an independent ``S`` to an MIS of ``Q_n[W]``."""
    for v in bits(W):
        if not (S >> v & 1) and not (cube.nbr_masks[v] & S):
            S |= 1 << v
    return S


# -- labeling ---------------------------------------------------------------------


def suite_labeling(rep: Report, rng: np.random.Generator, opt: Options) -> None:
    rt = rep.claim("labeling_round_trip", "MIS -> labeling -> MIS is the identity")
    cnt = rep.claim("legal_labelings_count_mis", "#legal labelings of Q_(n-1) equals mis(Q_n)")
    comp = rep.claim("outside_canonical_families_has_component", "I not from a canonical matching has a 2-component")
    occ = rep.claim("occupancy_facts", "odd vertices outside G occupied; fiber edges over G_i dominated and induced")
    sep = rep.claim("components_separated", "no edge from [A_i] to G_j (i != j); G_i disjoint; t <= sum t_i")
    for n in (2, 3, 4):
        cube = Cube(n)
        L = mis_list(cube)
        labs = legal_labelings(n - 1)
        cnt.check(len(labs) == len(L) and sorted(from_labeling(s) for s in labs) == L, f"n={n}")
        for I in L:
            rt.check(from_labeling(to_labeling(cube, I)) == I, lambda: f"n={n} I={_hex(cube, I)}")
            D = decompose(cube, I, opt.small_threshold)
            outside = n >= 3 and not in_canonical_families(cube, I)
            comp.notes[f"outside_n{n}"] = comp.notes.get(f"outside_n{n}", 0) + outside
            if outside:
                comp.check(bool(D.components), lambda: f"n={n} I={_hex(cube, I)}")
            r = check_occupancy_facts(cube, I, D)
            occ.check(r.odd_outside_G_occupied and r.fiber_edges_dominated and r.fiber_edges_induced,
                      lambda: f"n={n} I={_hex(cube, I)}: {r.witnesses}")
            sep.check(r.closures_separated and r.neighborhoods_disjoint and r.t_subadditive,
                      lambda: f"n={n} I={_hex(cube, I)}: {r.witnesses}")


# -- projection --------------------------------------------------------------------


def suite_projection(rep: Report, rng: np.random.Generator, opt: Options) -> None:
    c = rep.claim("projection_structure", "partner rule, lifted T-edge parity, T-ends split, color/parity coherence")
    cls = rep.claim("uncolored_iff_edge_or_sparse", "uncolored fibers contain an M-edge or meet V(M) at most once")
    trend = {}
    cube3, cube4 = Cube(3), Cube(4)
    for M in enumerate_induced_matchings(InducedSubgraph.whole(cube3)):
        _classification(cls, analyze(M))
    for M in enumerate_induced_matchings(InducedSubgraph.whole(cube4)):
        P = analyze(M)
        _classification(cls, P)
        if len(M) >= 3:
            v = check_structure(P)
            c.check(not v, lambda: f"n=4 M={M.ids}: {v[0]}")
    for n in (4, 5):
        cube = Cube(n)
        for C in canonical_matchings(cube):
            P = analyze(C.matching(cube))
            v = check_structure(P)
            c.check(not v, lambda: f"n={n} {C}: {v[0]}")
            ms, w = component_measures(P)
            trend[f"{n}:{C.dir}:{C.eps}"] = [str(m) for m in ms] + [f"bad={w}"]
    c.notes["component_measures"] = trend


def _classification(claim: Claim, P) -> None:
    for v, col in enumerate(P.color):
        if col == "none":
            claim.check(P.bad_case[v] in ("i", "ii"), f"fiber {v}")


# -- isoperimetry --------------------------------------------------------------------


def suite_isoperimetry(rep: Report, rng: np.random.Generator, opt: Options) -> None:
    c = rep.claim("boundary_functional_inequality", "integral h_A^beta >= 2 mu(A)(1 - mu(A)), certified")
    for n in (3, 4):
        r = cmb.beta_sweep(n, np.arange(1 << (1 << n), dtype=np.uint64))
        _absorb_sweep(c, r, f"n={n} exhaustive")
    for n in (5, 6):
        r = cmb.beta_sweep(n, cmb.random_sets(rng, n, opt.random_sets))
        _absorb_sweep(c, r, f"n={n} random")

    c = rep.claim("partition_functional_inequality", "integral_R h_(R+U) >= 2a(1-a) - n^beta mu(U)")
    for n in (4, 5):
        checked, bad = cmb.random_partition_check(rng, n, opt.random_partitions)
        c.checked += checked
        c.violations += bad
        if bad and c.witness is None:
            c.witness = f"n={n}"

    c = rep.claim("even_sets_expand", "|N(A)| > |A| for A in the even class with 1 <= |A| <= N/4")
    for n in (3, 4, 5):
        e = cmb.expansion_sweep(n, fault=opt.fault == "expansion")
        c.checked += e.checked
        c.violations += len(e.violations)
        if e.violations and c.witness is None:
            c.witness = f"n={n} A={Cube(n).to_hex(e.violations[0])}"
        c.notes[f"min_ratio_n{n}"] = str(e.min_ratio)
        c.notes[f"inverse_sqrt_n{n}"] = f"{1 / math.sqrt(n):.6f}"

    c = rep.claim("compositions", "2^(m-1) compositions; at-most-b count <= binomial bound < (em/b)^b; enumeration agrees")
    for m in range(1, 21):
        c.check(cmb.compositions(m) == 2 ** (m - 1), f"m={m}")
        for b in range(1, m // 2 + 1):
            r = cmb.compositions_at_most(m, b)
            ok = r.holds
            if m <= 12:
                ok = ok and r.exact == sum(1 for p in cmb.all_compositions(m) if len(p) <= b)
            c.check(ok, f"m={m} b={b}")

    c = rep.claim("linked_sets_below_tree_bound", "2-linked sets of size x through v <= (e Delta)^(x-1)")
    for n in (2, 3, 4):
        cube = Cube(n)
        for v in range(cube.N):
            for x in range(1, 5):
                r = cmb.count_klinked(cube, v, x, 2)
                c.check(r.holds, f"n={n} v={v} x={x}")


def _absorb_sweep(claim: Claim, r, label: str) -> None:
    claim.checked += r.count
    claim.violations += len(r.violations)
    claim.notes[f"{label} escalated"] = r.escalated
    claim.notes[f"{label} min_margin"] = None if r.min_margin is None else str(r.min_margin)
    if r.violations and claim.witness is None:
        claim.witness = f"{label} index {r.violations[0]}"


# -- containers ------------------------------------------------------------------------


def suite_containers(rep: Report, rng: np.random.Generator, opt: Options) -> None:
    c = rep.claim("closure_witness_is_a_container", "(S, F) = ([A_i], G_i) satisfies all three container properties")
    cls = rep.claim("tight_slack_boundary_inclusive", "g_i - f_i <= eps t_i is tight, computed for every large component")
    lin = rep.claim("closure_and_components_laws", "closure idempotent and monotone; 2-components partition")
    for n in (3, 4):
        cube = Cube(n)
        sub = Cube(n - 1)
        for I in mis_list(cube):
            # threshold 0 marks every component large
            D = decompose(cube, I, small_threshold=0)
            wit = {}
            for k, comp in enumerate(D.components):
                A = comp.closure
                if not is_k_linked(sub, A, 2):
                    continue
                W = ContainerWitness(A, comp.G)
                r = check_container(sub, A, W, comp.t, opt.c3)
                c.check(r.ok, lambda: f"n={n} I={_hex(cube, I)} component {k}")
                wit[k] = W
            if len(wit) == len(D.components):
                labels = tight_slack_classify(D, wit, opt.eps)
                cls.check(all(labels[k] == "tight" for k in labels), f"n={n} I={_hex(cube, I)}")
    cube = Cube(5)
    for _ in range(1000):
        A = int(rng.integers(0, 1 << 32))
        B = A & int(rng.integers(0, 1 << 32))
        ok = closure(cube, closure(cube, A)) == closure(cube, A) and (closure(cube, B) & ~closure(cube, A)) == 0
        parts = k_components(cube, A, 2)
        union = 0
        for p in parts:
            ok = ok and not (union & p)
            union |= p
        lin.check(ok and union == A, f"A={_hex(cube, A)}")


RUNNERS = {"core": suite_core, "peeling": suite_peeling, "labeling": suite_labeling,
           "projection": suite_projection, "isoperimetry": suite_isoperimetry, "containers": suite_containers}


def run(suite: str, opt: Options) -> list[Report]:
    if suite != "all" and suite not in RUNNERS:
        raise KeyError(f"unknown suite {suite!r}")
    names = SUITES if suite == "all" else (suite,)
    rngs = _rngs(opt.seed)
    out = []
    for name in names:
        rep = Report(name, opt.seed)
        RUNNERS[name](rep, rngs[name], opt)
        out.append(rep)
    return out


def combined_payload(reports: list[Report]) -> dict:
    return {"ok": all(r.ok for r in reports), "suites": [r.payload() for r in reports]}
