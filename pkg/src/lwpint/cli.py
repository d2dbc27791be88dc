"""Command-line driver: single runs, sweeps, and the validation suite."""

from __future__ import annotations

import argparse
import logging
import sys

from .experiments import (
    ExperimentPlan,
    PlanError,
    ReferenceMismatchError,
    run_sweep,
    write_records,
)
from .validation import run_validation


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(",") if part)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated float list: {text!r}")


def _str_list(text: str) -> tuple[str, ...]:
    return tuple(part for part in text.split(",") if part)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lwpint",
        description="Long-wave-preserving integrators for dispersive equations "
                    "on the torus: single runs, convergence sweeps, validation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="evolve one configuration and write one CSV record")
    run.add_argument("--model", default="bbm", help="model name (default: %(default)s)")
    run.add_argument("--epsilon", type=float, default=0.1,
                     help="long-wave parameter in (0, 1] (default: %(default)s)")
    run.add_argument("--tau", type=float, default=0.01,
                     help="time step (default: %(default)s)")
    run.add_argument("--t-final", type=float, default=None,
                     help="horizon T; defaults to 1/epsilon")
    run.add_argument("--method", default="lwp1",
                     choices=("lwp1", "lwp2", "lawson_euler", "lawson_rk4"),
                     help="integrator (default: %(default)s)")
    run.add_argument("--n-modes", type=int, default=128,
                     help="Fourier modes N (default: %(default)s)")
    run.add_argument("--ref-divisor", type=int, default=50,
                     help="reference step is tau divided by this (default: %(default)s)")
    run.add_argument("--output", default=None,
                     help="CSV path; prints to stdout when omitted")

    sweep = sub.add_parser("sweep", help="run a full error-vs-(epsilon, tau, method) study")
    sweep.add_argument("--model", default="bbm", help="model name (default: %(default)s)")
    sweep.add_argument("--epsilons", type=_float_list, required=True,
                       help="comma-separated epsilon values")
    sweep.add_argument("--taus", type=_float_list, required=True,
                       help="comma-separated step sizes")
    sweep.add_argument("--methods", type=_str_list, default=("lwp1",),
                       help="comma-separated methods (default: lwp1)")
    sweep.add_argument("--t-final-rule", default="inverse-epsilon",
                       choices=("inverse-epsilon", "fixed"),
                       help="horizon rule (default: %(default)s)")
    sweep.add_argument("--t-final", type=float, default=None,
                       help="horizon for the fixed rule")
    sweep.add_argument("--n-modes", type=int, default=128,
                       help="Fourier modes N (default: %(default)s)")
    sweep.add_argument("--ref-divisor", type=int, default=50,
                       help="reference step is min(taus) divided by this "
                            "(default: %(default)s)")
    sweep.add_argument("--jobs", type=int, default=1,
                       help="worker processes (default: %(default)s)")
    sweep.add_argument("--output", required=True, help="CSV path")

    sub.add_parser("validate", help="run the oracle/invariant suite and print pass/fail")
    return parser


def _plan_from_args(args: argparse.Namespace, taus: tuple[float, ...],
                    methods: tuple[str, ...], rule: str,
                    epsilons: tuple[float, ...]) -> ExperimentPlan:
    return ExperimentPlan(
        model=args.model,
        epsilons=epsilons,
        taus=taus,
        methods=methods,
        n_modes=args.n_modes,
        t_final_rule=rule,
        t_final=getattr(args, "t_final", None),
        ref_divisor=args.ref_divisor,
        output=args.output,
    )


def _emit(records, output) -> None:
    if output is None:
        from .experiments import CSV_HEADER

        print(CSV_HEADER)
        for record in records:
            print(record.csv_row())
    else:
        write_records(records, output)


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "validate":
        return 0 if run_validation() else 1

    try:
        if args.command == "run":
            rule = "fixed" if args.t_final is not None else "inverse-epsilon"
            plan = _plan_from_args(args, taus=(args.tau,), methods=(args.method,),
                                   rule=rule, epsilons=(args.epsilon,))
        else:
            plan = _plan_from_args(args, taus=args.taus, methods=args.methods,
                                   rule=args.t_final_rule, epsilons=args.epsilons)
    except PlanError as exc:
        parser.exit(2, f"error: {exc}\n")

    try:
        records = run_sweep(plan, jobs=getattr(args, "jobs", 1))
    except (ReferenceMismatchError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1
    failures = [r for r in records if r.flag and r.flag.startswith("failed")]
    _emit(records, args.output)
    if failures and len(failures) == len(records):
        print("every grid point failed", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
