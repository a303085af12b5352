"""Command-line entry points: experiment runs and standalone analyses."""

from __future__ import annotations

import argparse
import sys

from .errors import ConfigInvalid, TpjcError, TruncationTooSmall
from .experiment import (
    ORACLE_CHECK_BOUND,
    approx_error_table,
    emit_approx_table_csv,
    emit_oracle_report,
    oracle_check,
    run,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tpjc",
        description="Two-photon Jaynes-Cummings photon addition/subtraction simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute one experiment config")
    p_run.add_argument("config", help="path to the JSON experiment config")
    p_run.add_argument("--out", default=".", help="output directory (default: current)")

    p_oracle = sub.add_parser(
        "oracle-check", help="compare the closed-form propagator with the dense oracle"
    )
    p_oracle.add_argument("--dim", type=int, default=64)
    p_oracle.add_argument("--trials", type=int, default=100)
    p_oracle.add_argument("--seed", type=int, default=42)
    p_oracle.add_argument("--out", default=None, help="write the JSON report here instead of stdout")

    p_table = sub.add_parser(
        "approx-table", help="emit the linearized-Rabi relative-error table as CSV"
    )
    p_table.add_argument("--max-j", type=int, default=200)
    p_table.add_argument("--out", default=None, help="write the CSV here instead of stdout")

    return parser


def _cmd_run(args: argparse.Namespace) -> int:
    result, written = run(args.config, args.out)
    last_k, last_f = result.fidelity_series[-1]
    print(f"mean photon: {result.mean_photon_initial:.6f} -> {result.mean_photon_final:.6f}")
    print(f"F({last_k}) = {last_f:.6f}, Mandel Q = {result.mandel_q_final:.6f}")
    for path in written:
        print(f"wrote {path}")
    return 0


def _cmd_oracle_check(args: argparse.Namespace) -> int:
    report = oracle_check(dim=args.dim, trials=args.trials, seed=args.seed)
    if args.out:
        emit_oracle_report(report, args.out)
        print(f"wrote {args.out}")
    else:
        print(
            f"dim={report.dim} trials={report.trials} seed={report.seed} "
            f"comparisons={report.comparisons} max_deviation={report.max_deviation:.3e}"
        )
    if not report.passed:
        print(
            f"FAIL: max deviation {report.max_deviation:.3e} exceeds {ORACLE_CHECK_BOUND:.1e}",
            file=sys.stderr,
        )
        return 1
    return 0


def _cmd_approx_table(args: argparse.Namespace) -> int:
    rows = approx_error_table(args.max_j)
    if args.out:
        emit_approx_table_csv(rows, args.out)
        print(f"wrote {args.out}")
    else:
        print("j,add_error,subtract_error")
        for j, add_err, sub_err in rows:
            print(f"{j},{add_err:.17g},{sub_err:.17g}")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "oracle-check":
            return _cmd_oracle_check(args)
        return _cmd_approx_table(args)
    except ConfigInvalid as exc:
        print(f"error: invalid config: {exc}", file=sys.stderr)
        return 2
    except TruncationTooSmall as exc:
        print(f"error: truncation too small: {exc}", file=sys.stderr)
        return 3
    except TpjcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
