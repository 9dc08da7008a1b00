"""Command line entry point: ``rmtlab <subcommand>``.

Exit codes: 0 success, 2 configuration error, 3 acceptance failure,
4 runtime or convergence failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time
from fractions import Fraction

from . import verify
from .experiment import (
    CLT_MODES,
    ConfigError,
    RuntimeFailure,
    parse_config,
    report,
    run_experiment,
)
from .walks import BudgetExceeded

EXIT_OK, EXIT_CONFIG, EXIT_ACCEPTANCE, EXIT_RUNTIME = 0, 2, 3, 4


def _loops_arg(text: str):
    value = text.strip().lower()
    if value in ("true", "yes", "1"):
        return True
    if value in ("false", "no", "0"):
        return False
    if value == "both":
        return None
    raise argparse.ArgumentTypeError(f"expected true, false or both, got {text!r}")


def _fraction_arg(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected NUM/DEN, got {text!r}") from None
    if not 0 <= value <= 1:
        raise argparse.ArgumentTypeError(f"p must lie in [0, 1], got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rmtlab", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("verify-combinatorics", help="ballot counts, Catalan identities")

    enc = sub.add_parser("verify-encoding", help="exhaustive marked-edge checks")
    enc.add_argument("--n", type=int, default=4)
    enc.add_argument("--q", type=int, default=8, help="maximum walk length")
    enc.add_argument("--loops", type=_loops_arg, default=None, help="true, false or both (default)")

    orc = sub.add_parser("verify-oracles", help="walk vs configuration trace oracles")
    orc.add_argument("--n", type=int, default=3)
    orc.add_argument("--qmax", type=int, default=4)
    orc.add_argument("--p", type=_fraction_arg, default=Fraction(1, 4), help="exact NUM/DEN")
    orc.add_argument("--loops", type=_loops_arg, default=True)
    orc.add_argument("--out", help="write the CSV table here instead of stdout")

    run = sub.add_parser("run", help="Monte Carlo experiment")
    run.add_argument("mode", choices=CLT_MODES)
    run.add_argument("--config", help="JSON config file; flags override its entries")
    run.add_argument("--n", type=int)
    group = run.add_mutually_exclusive_group()
    group.add_argument("--p", help="explicit edge probability (float or NUM/DEN)")
    group.add_argument("--epsilon", type=float, help="use p = n^(epsilon - 1)")
    run.add_argument("--m", type=int)
    run.add_argument("--replicates", type=int)
    run.add_argument("--seed", type=int, dest="master_seed")
    loops = run.add_mutually_exclusive_group()
    loops.add_argument("--loops", dest="loops", action="store_const", const=True)
    loops.add_argument("--simple-graph", dest="loops", action="store_const", const=False)
    run.add_argument("--threads", help="worker processes or 'auto' (env RMTLAB_THREADS wins)")
    run.add_argument("--output-dir")
    run.add_argument("--allow-large-p", action="store_const", const=True, default=None)
    run.add_argument("--bins", type=int)
    run.add_argument("--t", type=float, nargs="+", dest="t_values")

    rep = sub.add_parser("report", help="summarize a finished run directory")
    rep.add_argument("directory")
    return parser


def _cmd_verify_combinatorics(args) -> int:
    result = verify.verify_combinatorics()
    print(f"sigma vs enumeration: {result['sigma_checked']} cases, "
          f"{len(result['sigma_mismatches'])} mismatches")
    print(f"last-step recurrence failures: {len(result['recurrence_failures'])}")
    print(f"sigma(0, n) != C_n: {len(result['catalan_failures'])}")
    print(f"conv(m, 2) != C_(m+1): {len(result['segre_failures'])}")
    print("conv(m, s) == C_(m+s-1):")
    for key, entry in result["convolution_identity"].items():
        m, s = key.split(",")
        print(f"  m={m} s={s}: conv={entry['convolution']} C={entry['catalan']} "
              f"{'holds' if entry['holds'] else 'fails'}")
    print("PASS" if result["passed"] else "FAIL")
    return EXIT_OK if result["passed"] else EXIT_ACCEPTANCE


def _cmd_verify_encoding(args) -> int:
    result = verify.verify_encoding_range(args.n, args.q, args.loops)
    for name, part in result["settings"].items():
        print(f"{name}: walks={part['walks']} applicable={part['applicable']} "
              f"violations={part['violations']}")
        for kind in ("tuple_identity", "l1", "prefix", "unmarked_vertex", "edge_count"):
            print(f"  {kind}: {part[kind + '_violations']}")
        for walk in part["examples"]:
            print(f"  example violation: {walk}")
    ok = result["violations"] == 0
    print(f"total walks checked: {result['walks']}, violations: {result['violations']}")
    return EXIT_OK if ok else EXIT_ACCEPTANCE


def _cmd_verify_oracles(args) -> int:
    settings = (True, False) if args.loops is None else (args.loops,)
    ok = True
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.writer(out)
        writer.writerow(["loops", "q", "kind", "E", "Var"])
        for loops in settings:
            result = verify.verify_oracles(args.n, args.qmax, args.p, loops)
            ok &= result["passed"]
            for row in result["rows"]:
                writer.writerow([loops, row["q"], row["kind"], row["expectation"], row["variance"]])
    finally:
        if args.out:
            out.close()
    print(f"crosscheck: {'PASS' if ok else 'FAIL'}", file=sys.stdout if args.out else sys.stderr)
    return EXIT_OK if ok else EXIT_ACCEPTANCE


def _cmd_run(args) -> int:
    overrides = {
        "mode": args.mode,
        "n": args.n,
        "m": args.m,
        "replicates": args.replicates,
        "master_seed": args.master_seed,
        "loops": args.loops,
        "threads": args.threads,
        "output_dir": args.output_dir,
        "allow_large_p": args.allow_large_p,
        "bins": args.bins,
        "t_values": args.t_values,
    }
    if args.p is not None:
        overrides["p_spec"] = {"kind": "explicit", "value": args.p}
    elif args.epsilon is not None:
        overrides["p_spec"] = {"kind": "power", "epsilon": args.epsilon}
    cfg = parse_config(args.config, overrides)
    start = time.perf_counter()
    summary = run_experiment(cfg)
    logging.getLogger("rmtlab").info("finished in %.1f s", time.perf_counter() - start)
    print(report(cfg.output_dir))
    acceptance = summary["acceptance"]
    if acceptance["configured"] and not acceptance["passed"]:
        return EXIT_ACCEPTANCE
    return EXIT_OK


def _cmd_report(args) -> int:
    try:
        print(report(args.directory))
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except json.JSONDecodeError as exc:
        print(f"error: malformed summary.json: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


COMMANDS = {
    "verify-combinatorics": _cmd_verify_combinatorics,
    "verify-encoding": _cmd_verify_encoding,
    "verify-oracles": _cmd_verify_oracles,
    "run": _cmd_run,
    "report": _cmd_report,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_CONFIG
    except (RuntimeFailure, BudgetExceeded, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
