"""Command-line harness: selftest, verification campaigns, and gap studies.

Exit codes: 0 success, 1 verification failure, 2 usage error.  Data goes to
``--out`` or standard output; diagnostics go to standard error.  Identical
invocations produce byte-identical output files.
"""

from __future__ import annotations

import argparse
import sys

from .inequalities import CheckerRangeError
from .experiments import (
    CHECKERS,
    ENSEMBLES,
    RNG_IDENTITY,
    SampleConfig,
    gap_scan,
    mix_seed,
    render_csv,
    run_campaign,
    sample_spd_pair,
)
from .selftest import run_selftest

__all__ = ["main"]

_DEFAULT_DIMS = "2,3,5"
_DEFAULT_PS = "1.1,1.5,2,3,4"
_DEFAULT_EPS = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0"


def _float_list(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _resolve_inequalities(text: str, p_values: list[float]) -> list[str]:
    """Checker names to run.  'all' keeps every checker that accepts some
    requested order; an explicit list is strict and lets run_campaign raise
    on an incompatible pairing."""
    if text == "all":
        names = [
            name for name in sorted(CHECKERS)
            if CHECKERS[name].p_independent
            or any(CHECKERS[name].p_valid(p) for p in p_values)
        ]
        if not names:
            raise CheckerRangeError(
                f"no inequality accepts any of the requested orders {p_values}"
            )
        return names
    names = [tok for tok in text.split(",") if tok != ""]
    unknown = sorted(set(names) - set(CHECKERS))
    if unknown or not names:
        raise CheckerRangeError(
            f"unknown inequality name(s) {unknown}; choose from {sorted(CHECKERS)} or 'all'"
        )
    return names


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spdfinsler",
        description="Verify Schatten-p geodesic convexity inequalities on random "
                    "positive-definite ensembles.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    selftest = sub.add_parser("selftest", help="run the built-in invariant suite")
    selftest.add_argument("--seed", type=int, default=0)

    def campaign_flags(cmd):
        cmd.add_argument("--dim", type=_int_list, default=_int_list(_DEFAULT_DIMS),
                         help=f"comma list of dimensions (default {_DEFAULT_DIMS})")
        cmd.add_argument("--p", type=_float_list, default=_float_list(_DEFAULT_PS),
                         help=f"comma list of Schatten orders (default {_DEFAULT_PS})")
        cmd.add_argument("--samples", type=int, default=100)
        cmd.add_argument("--seed", type=int, default=0)
        cmd.add_argument("--ensemble", choices=ENSEMBLES, default="generic")
        cmd.add_argument("--ineq", default="all",
                         help="comma list of inequality names, or 'all' (drops "
                              "checkers whose range excludes every requested --p)")
        cmd.add_argument("--eps-grid", type=_float_list, default=[0.0],
                         help="epsilon values for the near_commuting ensemble")
        cmd.add_argument("--out", default=None, help="output CSV path (default: stdout)")
        cmd.add_argument("--tol", type=float, default=None,
                         help="override the relative satisfaction tolerance (default 1e-9)")

    verify = sub.add_parser("verify", help="run a campaign; fail on any unsatisfied row")
    campaign_flags(verify)

    scan = sub.add_parser("scan", help="run a campaign and emit CSV without gating")
    campaign_flags(scan)

    study = sub.add_parser("gap-study", help="gap vs noncommutativity scan from a "
                                             "commuting base pair")
    study.add_argument("--dim", type=_int_list, default=[3])
    study.add_argument("--p", type=_float_list, default=[2.0])
    study.add_argument("--samples", type=int, default=1,
                       help="number of base pairs to scan")
    study.add_argument("--seed", type=int, default=0)
    study.add_argument("--eps-grid", type=_float_list, default=_float_list(_DEFAULT_EPS))
    study.add_argument("--out", default=None)

    return parser


def _emit(records, comments, out_path) -> None:
    text = render_csv(records, comments)
    if out_path is None:
        sys.stdout.write(text)
        return
    with open(out_path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)


def _campaign_records(args) -> list:
    ineqs = _resolve_inequalities(args.ineq, args.p)
    epsilons = args.eps_grid if args.ensemble == "near_commuting" else [0.0]
    records = []
    for dim in args.dim:
        for eps in epsilons:
            config = SampleConfig(dim=dim, ensemble=args.ensemble,
                                  seed=mix_seed(args.seed, dim), epsilon=eps)
            records.extend(run_campaign(config, ineqs, args.p, args.samples,
                                        tol_rel=args.tol))
    return records


def _campaign_comments(args) -> list[str]:
    ineqs = _resolve_inequalities(args.ineq, args.p)
    return [
        f"rng: {RNG_IDENTITY}",
        f"cmd: {args.subcommand}",
        f"dim: {','.join(str(d) for d in args.dim)}",
        f"p: {','.join(repr(p) for p in args.p)}",
        f"samples: {args.samples}",
        f"seed: {args.seed}",
        f"ensemble: {args.ensemble}",
        f"ineq: {','.join(ineqs)}",
        f"eps-grid: {','.join(repr(e) for e in args.eps_grid)}",
        f"tol: {'default' if args.tol is None else repr(args.tol)}",
    ]


def _run_verify(args, gate: bool) -> int:
    records = _campaign_records(args)
    _emit(records, _campaign_comments(args), args.out)
    bad = sum(1 for r in records if not r.satisfied)
    print(f"{args.subcommand}: {len(records)} rows, {bad} unsatisfied", file=sys.stderr)
    if gate and bad > 0:
        return 1
    return 0


def _run_gap_study(args) -> int:
    records = []
    for dim in args.dim:
        config = SampleConfig(dim=dim, ensemble="commuting_pair",
                              seed=mix_seed(args.seed, dim))
        for i in range(args.samples):
            base_a, base_b = sample_spd_pair(config, i)
            records.extend(gap_scan(base_a, base_b, args.eps_grid, args.p[0],
                                    seed=mix_seed(config.seed, i)))
    comments = [
        f"rng: {RNG_IDENTITY}",
        "cmd: gap-study",
        f"dim: {','.join(str(d) for d in args.dim)}",
        f"p: {args.p[0]!r}",
        f"samples: {args.samples}",
        f"seed: {args.seed}",
        f"eps-grid: {','.join(repr(e) for e in args.eps_grid)}",
    ]
    _emit(records, comments, args.out)
    print(f"gap-study: {len(records)} rows", file=sys.stderr)
    return 0


def _validate_flags(args) -> None:
    if not 0 <= args.seed < 2**64:
        raise CheckerRangeError(f"--seed must fit in 64 unsigned bits, got {args.seed}")
    if args.subcommand == "selftest":
        return
    if not args.dim or any(dim < 2 for dim in args.dim):
        raise CheckerRangeError(f"--dim values must be >= 2, got {args.dim}")
    if not args.p:
        raise CheckerRangeError("--p must list at least one Schatten order")
    if args.samples < 0:
        raise CheckerRangeError(f"--samples must be nonnegative, got {args.samples}")


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _validate_flags(args)
        if args.subcommand == "selftest":
            return 0 if run_selftest(args.seed) else 1
        if args.subcommand == "verify":
            return _run_verify(args, gate=True)
        if args.subcommand == "scan":
            return _run_verify(args, gate=False)
        return _run_gap_study(args)
    except CheckerRangeError as exc:
        parser.print_usage(sys.stderr)
        print(f"spdfinsler: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"spdfinsler: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
