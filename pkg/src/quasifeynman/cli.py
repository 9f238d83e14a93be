"""Command line entry point: ``quasifeynman {sweep,compare,check-tangency}``.

Exit codes: 0 success, 2 rejected configuration, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from .experiment import ConfigError, load_config, random_hermitian, run_sweep
from .families import FAMILY_KINDS, check_tangency, make_family

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def _report_failures(report) -> int:
    for method, n, reason in report.failures:
        print(f"error: {method} n={n}: {reason}", file=sys.stderr)
    return EXIT_NUMERIC if report.failures else EXIT_OK


def cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    out = args.out or cfg.resolved_csv_path()
    if out is None:
        raise ConfigError("no output path: set output.csv_path or pass --out")
    report = run_sweep(cfg, csv_path=out)
    print(f"wrote {len(report.rows)} rows to {out}")
    return _report_failures(report)


def cmd_compare(args) -> int:
    cfg = load_config(args.config)
    report = run_sweep(cfg, write_csv=False)
    width = max(len(m) for m in cfg.methods)
    for method in cfg.methods:
        order = report.fitted_order[method]
        errs = report.column(method, "oracle_error")
        text = order if isinstance(order, str) else ("n/a" if math.isnan(order) else f"{order:.4f}")
        print(f"{method:<{width}}  order {text:>8}  final error {errs[-1]:.3e}")
    return _report_failures(report)


def cmd_check_tangency(args) -> int:
    rng = np.random.default_rng(args.seed)
    L = random_hermitian(args.dim, rng)
    t_max = 0.1
    fam = make_family(args.kind, L, t_max=t_max)
    report = check_tangency(fam, tol=args.tol)
    print(f"family {args.kind}, dim {args.dim}, seed {args.seed}, ||L|| = 1")
    print(report.format())
    return EXIT_OK if report.tangent else EXIT_NUMERIC


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quasifeynman", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="run a convergence sweep and write CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="CSV path (overrides output.csv_path)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("compare", help="run a sweep and print fitted convergence orders")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("check-tangency", help="verify a standard family on a random generator")
    p.add_argument("--kind", required=True, choices=FAMILY_KINDS)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(func=cmd_check_tangency)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config rejected: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
