"""Command-line driver: simulate games, print bounds and ratios, cross-check theory.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, Iterable, Optional

from . import bounds
from .builders import AdversaryBuilder, AdversarySolution, make_builder, worst_case_moves, MINIMAX_CAP
from .game import GameConfig, run_game
from .schedulers import make_scheduler

INF = "inf"

SIMULATE_COLUMNS = ["n", "alpha", "scheduler", "builder", "matched", "n_offline", "ratio", "seed"]
ADVERSARY_COLUMNS = ["n", "alpha", "scheduler", "x", "bound", "matched", "n_offline", "y", "blocks"]
BOUNDS_COLUMNS = ["n", "alpha", "x0", "best_sum", "witness", "val", "lp_lower", "lp_upper", "ratio"]
RATIO_COLUMNS = ["alpha", "exact", "decimal", "terms", "difference"]
VERIFY_COLUMNS = ["n", "alpha", "best_sum", "val", "matched", "minimax", "status", "transcript"]
MINIMAX_COLUMNS = ["n", "alpha", "scheduler", "value", "val", "moves"]


class UsageError(Exception):
    pass


def parse_range(text: str, allow_inf: bool = False) -> list:
    """'3', '2..20', '1,2,5', '1..3,inf' -> list of ints (and 'inf')."""
    values: list = []
    for part in text.split(","):
        part = part.strip()
        if allow_inf and part == INF:
            values.append(INF)
        elif ".." in part:
            lo, hi = part.split("..")
            values.extend(range(int(lo), int(hi) + 1))
        else:
            values.append(int(part))
    if not values:
        raise UsageError(f"empty range {text!r}")
    return values


def game_alpha(alpha, n: int) -> tuple[int, bool]:
    """Map an alpha cell to (alpha as a number, infinite flag); 'inf' means alpha = n."""
    return (n, True) if alpha == INF else (alpha, False)


def _jobs(args) -> int:
    if args.jobs is not None:
        return max(1, args.jobs)
    return max(1, int(os.environ.get("LAZYMATCH_JOBS", "1")))


def fan_out(fn: Callable, tasks: list, jobs: int) -> list:
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks))


def write_rows(rows: Iterable[dict], columns: list[str], fmt: str, out: Optional[str]) -> None:
    rows = list(rows)
    buf = io.StringIO()
    if fmt == "json":
        json.dump(rows, buf, indent=1)
        buf.write("\n")
    else:
        writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    if out:
        Path(out).write_text(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())


# ---------------------------------------------------------------------------
# tasks (top level so the process pool can pickle them)

def simulate_task(task) -> dict:
    n, alpha, sched_sel, builder_sel, seed, max_rounds = task
    a, infinite = game_alpha(alpha, n)
    scheduler = make_scheduler(sched_sel)
    builder = make_builder(builder_sel, n, a, scheduler=scheduler, seed=seed)
    result, _ = run_game(scheduler, builder, GameConfig(a, n, infinite), max_rounds)
    return {
        "n": n, "alpha": alpha, "scheduler": scheduler.name, "builder": builder.name,
        "matched": result.matched_count, "n_offline": result.game_size_n,
        "ratio": f"{result.matched_count}/{result.game_size_n}", "seed": seed,
    }


def adversary_task(task) -> dict:
    n, alpha, sched_sel, builder_sel = task
    a, infinite = game_alpha(alpha, n)
    scheduler = make_scheduler(sched_sel)
    builder = make_builder(builder_sel, n, a)
    if not isinstance(builder, AdversaryBuilder):
        raise UsageError(f"the adversary command needs an adversary builder, got {builder_sel!r}")
    result, _ = run_game(scheduler, builder, GameConfig(a, n, infinite))
    adv = builder.adv
    return {
        "n": n, "alpha": alpha, "scheduler": scheduler.name,
        "x": " ".join(map(str, builder.solution.x)), "bound": builder.solution.bound,
        "matched": result.matched_count, "n_offline": result.game_size_n,
        "y": " ".join(map(str, adv.y)),
        "blocks": " | ".join(" ".join(map(str, sorted(b))) for b in adv.d_sets),
    }


def bounds_task(task) -> dict:
    n, alpha = task
    a, _ = game_alpha(alpha, n)
    best = bounds.max_sum_exact(n, a)
    lower, upper = bounds.bal_bounds(n, a)
    val = n - best.best_sum
    return {
        "n": n, "alpha": alpha, "x0": best.x[0], "best_sum": best.best_sum,
        "witness": " ".join(map(str, best.x)), "val": val,
        "lp_lower": lower, "lp_upper": upper, "ratio": str(Fraction(val, n)),
    }


def verify_task(task) -> dict:
    n, alpha, failure_dir = task
    a, infinite = game_alpha(alpha, n)
    best = bounds.max_sum_exact(n, a)
    val = n - best.best_sum
    builder = AdversaryBuilder(AdversarySolution(n, a, best.x))
    scheduler = make_scheduler("balance")
    result, transcript = run_game(scheduler, builder, GameConfig(a, n, infinite))
    ok = result.matched_count == val and result.game_size_n == n
    minimax = ""
    if n <= MINIMAX_CAP:
        minimax, _ = worst_case_moves(n, a, scheduler)
        ok = ok and minimax == val
    path = ""
    if not ok:
        path = str(Path(failure_dir) / f"verify-failure-n{n}-alpha{alpha}.json")
        Path(path).write_text(transcript.to_json())
    return {
        "n": n, "alpha": alpha, "best_sum": best.best_sum, "val": val,
        "matched": result.matched_count, "minimax": minimax,
        "status": "PASS" if ok else "FAIL", "transcript": path,
    }


def minimax_task(task) -> dict:
    n, alpha, sched_sel = task
    scheduler = make_scheduler(sched_sel)
    value, moves = worst_case_moves(n, alpha, scheduler)
    return {
        "n": n, "alpha": alpha, "scheduler": scheduler.name, "value": value,
        "val": n - bounds.max_sum_exact(n, alpha).best_sum,
        "moves": " ; ".join(" ".join(map(str, sorted(nb))) for nb in moves),
    }


# ---------------------------------------------------------------------------
# commands

def cmd_simulate(args) -> int:
    tasks = [
        (n, alpha, sched, args.builder, seed, args.max_rounds)
        for n in parse_range(args.n)
        for alpha in parse_range(args.alpha, allow_inf=True)
        for sched in args.scheduler.split("+")
        for seed in parse_range(args.seed)
    ]
    write_rows(fan_out(simulate_task, tasks, _jobs(args)), SIMULATE_COLUMNS, args.format, args.out)
    return 0


def cmd_adversary(args) -> int:
    tasks = [
        (n, alpha, sched, args.builder)
        for n in parse_range(args.n)
        for alpha in parse_range(args.alpha, allow_inf=True)
        for sched in args.scheduler.split("+")
    ]
    write_rows(fan_out(adversary_task, tasks, _jobs(args)), ADVERSARY_COLUMNS, args.format, args.out)
    return 0


def cmd_bounds(args) -> int:
    tasks = [(n, alpha) for n in parse_range(args.n) for alpha in parse_range(args.alpha, allow_inf=True)]
    write_rows(fan_out(bounds_task, tasks, _jobs(args)), BOUNDS_COLUMNS, args.format, args.out)
    return 0


def cmd_ratio(args) -> int:
    rows = []
    for alpha in parse_range(args.alpha):
        r = bounds.competitive_ratio(alpha)
        rows.append({"alpha": alpha, "exact": str(r.exact_ratio), "decimal": f"{r.float_ratio:.6f}",
                     "terms": "", "difference": ""})
    lim = bounds.ratio_infinity(args.terms)
    rows.append({"alpha": INF, "exact": "1 - pi/cosh(sqrt(3)*pi/2)", "decimal": f"{lim.ratio:.6f}",
                 "terms": lim.terms, "difference": f"{lim.difference:.3e}"})
    write_rows(rows, RATIO_COLUMNS, args.format, args.out)
    return 0


def cmd_verify(args) -> int:
    failure_dir = args.failure_dir or "."
    tasks = [(n, alpha, failure_dir) for n in parse_range(args.n)
             for alpha in parse_range(args.alpha, allow_inf=True)]
    rows = fan_out(verify_task, tasks, _jobs(args))
    write_rows(rows, VERIFY_COLUMNS, args.format, args.out)
    failures = [r for r in rows if r["status"] != "PASS"]
    for r in failures:
        print(f"FAIL n={r['n']} alpha={r['alpha']}: transcript {r['transcript']}", file=sys.stderr)
    return 1 if failures else 0


def cmd_minimax(args) -> int:
    tasks = [(n, alpha, sched) for n in parse_range(args.n) for alpha in parse_range(args.alpha)
             for sched in args.scheduler.split("+")]
    for n, _, _ in tasks:
        if n > MINIMAX_CAP:
            raise UsageError(f"minimax search is capped at n <= {MINIMAX_CAP}")
    write_rows(fan_out(minimax_task, tasks, _jobs(args)), MINIMAX_COLUMNS, args.format, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lazymatch", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, n="18", alpha="2"):
        p.add_argument("--n", default=n, help="game size(s): 18, 2..20, 4,8,16")
        p.add_argument("--alpha", default=alpha, help="capacity bound(s); 'inf' sets alpha = n")
        p.add_argument("--out", help="output file (default stdout)")
        p.add_argument("--format", choices=["csv", "json"], default="csv")
        p.add_argument("--jobs", type=int, help="worker processes (env LAZYMATCH_JOBS)")

    p = sub.add_parser("simulate", help="play games and report matched counts")
    common(p)
    p.add_argument("--scheduler", default="balance", help="balance, greedy, noop, random:seed=S; join with +")
    p.add_argument("--builder", default="adversary",
                   help="adversary[:x=6,1,1], random:seed=S,p=P, minimax")
    p.add_argument("--seed", default="0", help="seed(s) for randomized builders")
    p.add_argument("--max-rounds", type=int, default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("adversary", help="run the phased adversary and show its blocks")
    common(p)
    p.add_argument("--scheduler", default="balance")
    p.add_argument("--builder", default="adversary")
    p.set_defaults(func=cmd_adversary)

    p = sub.add_parser("bounds", help="exact worst case and LP bracket per (n, alpha)")
    common(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("ratio", help="competitive ratio per alpha and the alpha -> inf limit")
    common(p, alpha="1..5")
    p.add_argument("--terms", type=int, default=10_000, help="factors in the truncated product")
    p.set_defaults(func=cmd_ratio)

    p = sub.add_parser("verify", help="simulation against theory, plus exhaustive search for n <= 4")
    common(p, n="2..20", alpha="1,2,3")
    p.add_argument("--failure-dir", help="where failing transcripts are written (default .)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("minimax", help="exhaustive worst case of a scheduler, n <= 4")
    common(p, n="1..4", alpha="1,2")
    p.add_argument("--scheduler", default="balance+greedy")
    p.set_defaults(func=cmd_minimax)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"lazymatch {args.command}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"lazymatch {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
