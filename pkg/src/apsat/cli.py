"""Command-line entry point: ``apsat <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from contextlib import nullcontext

from .core import Coloring
from .counting import count_monochromatic_brute, mono_ap3_closed_form
from .errors import ApsatError, InvalidParameter
from .generators import (ApHypergraph, make_rng, read_instance, sample_ap_hypergraph_m,
                         sample_ap_hypergraph_p, sample_nae_formula, write_instance)
from .harness import DEFAULT_BUDGET, threshold_scan, verify_moments_montecarlo, write_scan_csv
from .moments import moment_report
from .solvers import count_2col_exhaustive, count_nae_exhaustive, decide_2col, decide_nae


def _open_out(path):
    if path is None or path == "-":
        return nullcontext(sys.stdout)
    return open(path, "w", encoding="utf-8", newline="")


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, sort_keys=False)
    sys.stdout.write("\n")


def cmd_gen(args) -> None:
    if args.model == "aphg":
        if args.p is not None:
            inst = sample_ap_hypergraph_p(args.n, args.k, args.p, args.seed, args.exclude_trivial)
        else:
            inst = sample_ap_hypergraph_m(args.n, args.k, args.m, args.seed, args.exclude_trivial)
    else:
        if args.p is not None:
            raise InvalidParameter("--p applies to --model aphg only")
        inst = sample_nae_formula(args.n, args.k, args.m, args.seed, args.exclude_trivial)
    comments = [f"seed {args.seed}" + (" exclude-trivial" if args.exclude_trivial else "")]
    with _open_out(args.out) as fh:
        write_instance(inst, fh, comments)


def cmd_count_mono(args) -> None:
    if args.coloring is not None:
        c = Coloring.from_string(args.coloring)
    else:
        if args.n is None or args.seed is None:
            raise InvalidParameter("--random needs --n and --seed")
        c = Coloring.from_bits(make_rng(args.seed).integers(0, 2, size=args.n))
    mc = count_monochromatic_brute(c, args.k)
    _emit({
        "coloring": c.to_string(),
        "n": c.n,
        "k": args.k,
        "ones_count": c.ones_count,
        "total": mc.total_progressions,
        "count": mc.monochromatic,
        "fraction": float(mc.fraction),
        "closed_form": mono_ap3_closed_form(c.n, c.ones_count) if args.k == 3 else None,
    })


def cmd_moments(args) -> None:
    _emit(moment_report(args.problem, args.n, args.k, args.r, diagnostic=args.diagnostic).to_dict())


def cmd_solve(args) -> None:
    with open(args.inp, encoding="utf-8") as fh:
        inst = read_instance(fh)
    is_hg = isinstance(inst, ApHypergraph)
    if args.method == "exhaustive":
        res = (count_2col_exhaustive if is_hg else count_nae_exhaustive)(inst)
    else:
        res = (decide_2col if is_hg else decide_nae)(inst, args.budget)
    out = res.to_dict()
    out["problem"] = "2col" if is_hg else "nae"
    _emit(out)


def cmd_scan(args) -> None:
    rows = threshold_scan(args.problem, args.n, args.k, args.r_min, args.r_max, args.r_step,
                          args.trials, args.seed, args.budget, args.exclude_trivial, args.workers)
    with _open_out(args.out) as fh:
        write_scan_csv(rows, fh)


def cmd_verify_moments(args) -> None:
    _emit(verify_moments_montecarlo(args.problem, args.n, args.k, args.m, args.samples, args.seed).to_dict())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="apsat", description="Random arithmetic-progression NAE-SAT and hypergraph 2-coloring")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="sample an instance")
    p.add_argument("--model", choices=["apnae", "aphg"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    size = p.add_mutually_exclusive_group(required=True)
    size.add_argument("--m", type=int)
    size.add_argument("--p", type=float)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--exclude-trivial", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("count-mono", help="count monochromatic k-APs in a coloring")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--coloring")
    src.add_argument("--random", action="store_true")
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_count_mono)

    p = sub.add_parser("moments", help="first/second moment report as JSON")
    p.add_argument("--problem", choices=["nae", "2col"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--diagnostic", action="store_true")
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("solve", help="solve an instance file")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--method", choices=["exhaustive", "dpll"], required=True)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("scan", help="Monte Carlo satisfiability scan over a density grid")
    p.add_argument("--problem", choices=["nae", "2col"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--r-min", type=float, required=True)
    p.add_argument("--r-max", type=float, required=True)
    p.add_argument("--r-step", type=float, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--exclude-trivial", action="store_true")
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("verify-moments", help="Monte Carlo check of E[X] and E[X^2]")
    p.add_argument("--problem", choices=["nae", "2col"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_verify_moments)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except ApsatError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
