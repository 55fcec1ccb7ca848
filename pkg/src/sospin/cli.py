"""Command-line driver: predictions, verification suites, sweeps, and direct
enumeration queries.

Logs go to standard error; data goes to files or standard output.  Exit
codes: 0 success, 1 assertion/verification failure, 2 usage error, 3 I/O
error.  SOS_THREADS caps the worker pool.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from .lattice import Mode, ModelParams
from .measure import (flat_comparison_height, lambda_critical, target_height)
from .oracle import BudgetError, EnumerationSpec, enumerate_measure
from .sweep import SweepPlan, run_sweep, worker_count
from .verify import SUITES

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_IO = 3


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


def cmd_predict(args) -> int:
    if args.beta <= 0:
        raise UsageError("beta must be > 0")
    if args.n < 2:
        raise UsageError("n must be >= 2")
    pred = target_height(args.n, args.beta)
    out = {
        "lambda_critical": lambda_critical(args.beta),
        "h_star": pred.h_star,
        "xi": pred.xi,
        "predicted_single_height": pred.predicted_single_height,
        "no_pinning_height": flat_comparison_height(args.n, args.beta),
    }
    if args.json:
        print(json.dumps(out))
    else:
        print(f"lambda_w(beta={args.beta}) = {out['lambda_critical']:.10g}")
        print(f"h_star(n={args.n}) = {pred.h_star}  (fractional part xi = {pred.xi:.5f})")
        print(f"predicted single height: {pred.predicted_single_height}")
        print(f"no-pinning comparison height: {out['no_pinning_height']}")
    return EXIT_OK


def cmd_verify(args) -> int:
    runner = SUITES[args.suite]
    kwargs = {}
    if args.suite == "maps":
        kwargs = {"cases": args.cases, "seed": args.seed,
                  "injectivity_samples": args.injectivity_samples}
    elif args.suite == "tooth":
        kwargs = {"budget": args.budget}
        if args.beta:
            kwargs["betas"] = tuple(args.beta)
    elif args.suite in ("tiles", "identity") and args.beta:
        kwargs = {"betas": tuple(args.beta)}
    rows = runner(**kwargs)
    writer = csv.writer(open(args.output, "w", newline="") if args.output
                        else sys.stdout)
    writer.writerow(["suite", "check_id", "value", "bound", "status", "detail"])
    failed = False
    for row in rows:
        writer.writerow(row.as_csv_row())
        if not row.passed:
            failed = True
            _log(f"FAIL {row.suite}/{row.check_id}: value={row.value!r} "
                 f"bound={row.bound!r}")
            if row.detail:
                _log(f"replay: {row.detail}")
    return EXIT_FAIL if failed else EXIT_OK


def cmd_sweep(args) -> int:
    try:
        with open(args.plan) as fh:
            payload = json.load(fh)
    except OSError as exc:
        _log(f"cannot read plan: {exc}")
        return EXIT_IO
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed plan JSON: {exc}")
    try:
        plan = SweepPlan.from_json(payload, output_override=args.output)
    except (KeyError, ValueError) as exc:
        raise UsageError(f"invalid plan: {exc}")
    _log(f"running {len(plan.cell_keys())} cells x {plan.replicates} replicates "
         f"on {args.max_workers or worker_count()} workers")
    try:
        path = run_sweep(plan, max_workers=args.max_workers)
    except OSError as exc:
        _log(f"I/O failure, partial output left at {plan.output}.partial: {exc}")
        return EXIT_IO
    _log(f"wrote {path}")
    return EXIT_OK


def cmd_enumerate(args) -> int:
    mode = Mode(args.mode)
    lam = lambda_critical(args.beta) if args.lam == "critical" else float(args.lam)
    params = ModelParams(beta=args.beta, lam=lam, boundary_height=args.boundary)
    window = (args.window[0], args.window[1]) if args.window else None
    spec = EnumerationSpec(args.side, params, mode, window, budget=args.budget)
    try:
        dist = enumerate_measure(spec)
    except BudgetError as exc:
        _log(str(exc))
        return EXIT_FAIL
    writer = csv.writer(open(args.output, "w", newline="") if args.output
                        else sys.stdout)
    writer.writerow(["query_id", "value", "trunc_bound"])
    writer.writerow(["log_z", repr(dist.log_z), repr(dist.trunc_bound)])
    if args.marginal:
        site = (args.marginal[0], args.marginal[1])
        for v, p in sorted(dist.marginal(site).items()):
            writer.writerow([f"marginal[{site[0]};{site[1]}][{v}]", repr(p),
                             repr(dist.trunc_bound)])
    for ev in args.le_event or []:
        parts = [tuple(int(x) for x in chunk.split(",")) for chunk in ev.split(";")]
        overrides = {(r, c): (-(10 ** 9), hi) for r, c, hi in parts}
        p = dist.probability(overrides)
        writer.writerow([f"le_event[{ev.replace(',', ':')}]", repr(p),
                         repr(dist.trunc_bound)])
    return EXIT_OK


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="sospin",
        description="Pinned interface simulator and verification toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    pp = sub.add_parser("predict", help="closed-form model constants")
    pp.add_argument("--n", type=int, required=True)
    pp.add_argument("--beta", type=float, required=True)
    pp.add_argument("--json", action="store_true")
    pp.set_defaults(func=cmd_predict)

    pv = sub.add_parser("verify", help="run a named verification suite")
    pv.add_argument("suite", choices=sorted(SUITES))
    pv.add_argument("--beta", type=float, action="append", default=None,
                    help="restrict a suite to these inverse temperatures")
    pv.add_argument("--cases", type=int, default=10_000)
    pv.add_argument("--injectivity-samples", type=int, default=100_000)
    pv.add_argument("--seed", type=int, default=7)
    pv.add_argument("--budget", type=float, default=6e9)
    pv.add_argument("--output", default=None)
    pv.set_defaults(func=cmd_verify)

    ps = sub.add_parser("sweep", help="run a sweep plan and write the CSV")
    ps.add_argument("--plan", required=True)
    ps.add_argument("--output", default=None)
    ps.add_argument("--max-workers", type=int, default=None)
    ps.set_defaults(func=cmd_sweep)

    pe = sub.add_parser("enumerate", help="direct exact-enumeration queries")
    pe.add_argument("--side", type=int, required=True)
    pe.add_argument("--beta", type=float, required=True)
    pe.add_argument("--lam", default="0.0",
                    help="pinning strength, or 'critical'")
    pe.add_argument("--boundary", type=int, default=0)
    pe.add_argument("--mode", choices=[m.value for m in Mode],
                    default="nonnegative")
    pe.add_argument("--window", type=int, nargs=2, default=None,
                    metavar=("LO", "HI"))
    pe.add_argument("--budget", type=float, default=1e8)
    pe.add_argument("--marginal", type=int, nargs=2, default=None,
                    metavar=("ROW", "COL"))
    pe.add_argument("--le-event", action="append", default=None,
                    help="semicolon-joined 'row,col,hi' caps")
    pe.add_argument("--output", default=None)
    pe.set_defaults(func=cmd_enumerate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except UsageError as exc:
        _log(f"usage error: {exc}")
        return EXIT_USAGE
    except OSError as exc:
        _log(f"I/O error: {exc}")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
