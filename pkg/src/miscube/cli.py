"""``miscube`` command line: count, verify, peel, bench.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 budget exhausted.
Timing lives under a separate ``"meta"`` key so the rest of the output is
byte-identical for identical flags and seed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import statistics
import sys
from fractions import Fraction

import mpmath

from . import verify
from .cube import Cube, CubeError, ENUM_CAP
from .matchings import CanonicalMatching
from .mis import BudgetExhausted, InducedSubgraph, MisError, enumerate_mis, extend_to_mis, is_mis
from .peeling import PeelError, alpha_trajectory, parse_rule, peel, replay, support_rule

OK, FAILED, USAGE, BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _positive(text: str) -> int:
    try:
        k = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if k < 1:
        raise argparse.ArgumentTypeError("workers must be >= 1")
    return k


def _default_workers() -> int:
    raw = os.environ.get("MISCUBE_WORKERS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _frac(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def count_ratio(n: int, count: int) -> str:
    """``count / (2n 2^(N/4))`` as a decimal string."""
    with mpmath.workdps(40):
        r = mpmath.mpf(count) / (2 * n * mpmath.power(2, mpmath.mpf(1 << n) / 4))
        return mpmath.nstr(r, 20)


# -- count ---------------------------------------------------------------------


def cmd_count(args) -> int:
    cube = Cube(args.n, cap=ENUM_CAP)
    G = InducedSubgraph.whole(cube)
    partial = False
    try:
        rep = enumerate_mis(G, collect=False, workers=args.workers, budget_ms=args.budget_ms)
        count, elapsed = rep.count, rep.elapsed_ms
    except BudgetExhausted as exc:
        count, elapsed, partial = exc.partial, exc.elapsed_ms, True
    body = {"n": args.n, "count": str(count), "ratio": count_ratio(args.n, count), "partial": partial}
    meta = {"elapsed_ms": round(elapsed, 3), "workers": args.workers}
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "count", "ratio", "partial", "workers", "elapsed_ms"])
        w.writerow([args.n, count, body["ratio"], int(partial), args.workers, meta["elapsed_ms"]])
        _emit(buf.getvalue(), args.out)
    else:
        _emit(json.dumps({**body, "meta": meta}, sort_keys=True) + "\n", args.out)
    return BUDGET if partial else OK


# -- verify --------------------------------------------------------------------


def cmd_verify(args) -> int:
    opt = verify.Options(seed=args.seed, workers=args.workers, small_threshold=args.small_threshold,
                         eps=args.eps, c3=args.c3, fault=args.fault)
    import time
    start = time.perf_counter()
    reports = verify.run(args.suite, opt)
    elapsed = (time.perf_counter() - start) * 1000
    payload = verify.combined_payload(reports)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["suite", "claim", "checked", "violations", "witness"])
        for r in reports:
            for c in r.claims:
                w.writerow([r.suite, c.name, c.checked, c.violations, c.witness or ""])
        _emit(buf.getvalue(), args.out)
    else:
        doc = {"payload": payload, "meta": {"elapsed_ms": round(elapsed, 3), "workers": args.workers}}
        _emit(json.dumps(doc, sort_keys=True, indent=1) + "\n", args.out)
    return OK if payload["ok"] else FAILED


# -- peel ----------------------------------------------------------------------


def parse_iset(cube: Cube, text: str) -> int:
    """``even``, ``odd``, a hex vertex set, or ``canonical:i:eps:choice-bits``."""
    if text == "even":
        return cube.even
    if text == "odd":
        return cube.odd
    if text.startswith("canonical:"):
        parts = text.split(":")
        if len(parts) != 4:
            raise UsageError("canonical spec is canonical:i:eps:choice-bits")
        try:
            i, eps, choice = int(parts[1]), int(parts[2]), int(parts[3], 0)
        except ValueError:
            raise UsageError(f"bad canonical spec {text!r}") from None
        if not (1 <= i <= cube.n and eps in (0, 1)):
            raise UsageError("canonical direction or parity out of range")
        edges = CanonicalMatching(i, eps).edge_list(cube)
        if choice >> len(edges):
            raise UsageError(f"choice bits exceed the {len(edges)} edges")
        # bit j selects the upper endpoint of the j-th edge (edge-id order)
        S = sum(1 << (e.hi if choice >> j & 1 else e.lo) for j, e in enumerate(edges))
        return extend_to_mis(InducedSubgraph.whole(cube), S)
    try:
        return cube.from_hex(text)
    except (CubeError, ValueError):
        raise UsageError(f"bad vertex-set spec {text!r}") from None


def parse_wset(cube: Cube, text: str) -> int:
    if text == "all":
        return cube.full
    if text == "empty":
        return 0
    try:
        return cube.from_hex(text)
    except (CubeError, ValueError):
        raise UsageError(f"bad W spec {text!r}") from None


def cmd_peel(args) -> int:
    cube = Cube(args.n)
    I = parse_iset(cube, args.I)
    W = parse_wset(cube, args.W)
    text = args.rule.replace("support:auto", support_rule(cube.n).spec())
    try:
        rule = parse_rule(text)
    except PeelError as exc:
        raise UsageError(str(exc)) from None
    if not is_mis(InducedSubgraph(cube, W), I & W):
        raise UsageError("I restricted to W is not an MIS of Q_n[W]")
    res = peel(cube, W, I, rule)
    X, removed = replay(res.trace)
    checks = {"replay": (X, removed) == (res.X, res.removed_in_I),
              "residual_mis": is_mis(InducedSubgraph(cube, res.X), I & res.X)}
    body = {"trace": json.loads(res.trace.to_json()), "X": cube.to_hex(res.X),
            "removed": cube.to_hex(res.removed_in_I), "support": res.support, "checks": checks}
    if W == cube.full:
        a = alpha_trajectory(cube, res)
        body["alpha"] = {"values": [_frac(x) for x in a.alphas], "degree_bound": a.degree_bound_ok,
                         "contraction": a.contraction_ok, "final": a.final_ok, "failures": a.failures}
        checks["alpha"] = a.ok
    _emit(json.dumps(body, sort_keys=True) + "\n", args.out)
    return OK if all(checks.values()) else FAILED


# -- bench ---------------------------------------------------------------------


def cmd_bench(args) -> int:
    try:
        worker_counts = [_positive(w) for w in args.workers.split(",")]
    except argparse.ArgumentTypeError as exc:
        raise UsageError(str(exc)) from None
    cube = Cube(args.n, cap=ENUM_CAP)
    G = InducedSubgraph.whole(cube)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "workers", "reps", "count", "median_ms", "min_ms"])
    counts = set()
    for k in worker_counts if args.reps > 0 else []:
        times = []
        for _ in range(args.reps):
            rep = enumerate_mis(G, collect=False, workers=k)
            counts.add(rep.count)
            times.append(rep.elapsed_ms)
        w.writerow([args.n, k, args.reps, rep.count,
                    f"{statistics.median(times):.3f}", f"{min(times):.3f}"])
    _emit(buf.getvalue(), args.out)
    if len(counts) > 1:
        print(f"count mismatch across runs: {sorted(counts)}", file=sys.stderr)
        return FAILED
    return OK


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="miscube", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(q, fmt=True):
        q.add_argument("--out", metavar="FILE")
        if fmt:
            q.add_argument("--format", choices=("json", "csv"), default="json")

    q = sub.add_parser("count", help="exact mis(Q_n)")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--workers", type=_positive, default=_default_workers())
    q.add_argument("--budget-ms", type=float, default=None)
    common(q)
    q.set_defaults(func=cmd_count)

    q = sub.add_parser("verify", help="run verification suites")
    q.add_argument("--suite", choices=verify.SUITES + ("all",), default="all")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--workers", type=_positive, default=_default_workers())
    q.add_argument("--small-threshold", type=int, default=None)
    q.add_argument("--eps", type=_fraction, default=Fraction(1, 2))
    q.add_argument("--c3", type=_fraction, default=Fraction(1))
    q.add_argument("--fault", choices=("expansion",), default=None, help=argparse.SUPPRESS)
    common(q)
    q.set_defaults(func=cmd_verify)

    q = sub.add_parser("peel", help="run the greedy peeling and check its invariants")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--I", required=True, help="even | odd | hex | canonical:i:eps:choice-bits")
    q.add_argument("--W", default="all", help="all | empty | hex")
    q.add_argument("--rule", default="support:auto", help="e.g. empty, support:4, maxdeg:2, first(a,b)")
    common(q, fmt=False)
    q.set_defaults(func=cmd_peel)

    q = sub.add_parser("bench", help="time count across worker counts")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--workers", default=str(_default_workers()), help="comma-separated worker counts")
    q.add_argument("--reps", type=int, default=3)
    common(q, fmt=False)
    q.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, CubeError, MisError, PeelError) as exc:
        print(f"miscube: error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
