"""Command-line interface.

Subcommands:
  run      execute an experiment preset or config file
  reduce   one-shot reducer for debugging expressions
  inspect  summary statistics for a population CSV

Exit codes: 0 success, 1 configuration error (bad flags, unreadable or
invalid config/input), 2 runtime failure during execution.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from .experiments import PRESET_NAMES, config_from_json, preset, run_experiment
from .metrics import read_records_csv, time_averaged_population
from .parser import LambdaSyntaxError, UnboundVariableError, parse, to_text
from .reduce import (
    NormalForm,
    ReductionLimits,
    SizeLimitExceeded,
    StepLimitExceeded,
    reduce_to_normal_form,
)


class _Parser(argparse.ArgumentParser):
    """argparse parser whose usage errors exit 1, per the CLI contract."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lambdasoup", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment")
    run.add_argument("--preset", choices=PRESET_NAMES, help="named experiment preset")
    run.add_argument("--config", help="JSON config file; flags override its values")
    run.add_argument("--scale", type=float, default=1.0,
                     help="multiply soup size, collisions, and replicates")
    run.add_argument("--seed", type=int, help="master seed")
    run.add_argument("--replicates", type=int, help="replicates per cell")
    run.add_argument("--collisions", type=int, help="collisions per replicate")
    run.add_argument("--soup-size", type=int, help="population size N")
    run.add_argument("--out", default="experiment-out", help="output directory")
    run.add_argument("--workers", type=int, help="parallel worker budget")

    red = sub.add_parser("reduce", help="reduce one expression to normal form")
    red.add_argument("expr_file", help="file containing the expression, or - for stdin")
    red.add_argument("--max-steps", type=int, default=8000)
    red.add_argument("--max-vertices", type=int, default=1000)

    ins = sub.add_parser("inspect", help="summarize a population CSV")
    ins.add_argument("csv", help="CSV file written by an experiment replicate")
    return parser


def _cmd_run(args) -> int:
    if not args.preset and not args.config:
        print("error: run needs --preset or --config", file=sys.stderr)
        return 1
    try:
        if args.config:
            with open(args.config, encoding="utf-8") as fh:
                config = config_from_json(fh.read())
            if args.preset:
                print("error: give either --preset or --config, not both", file=sys.stderr)
                return 1
            if args.scale != 1.0:
                config = replace(
                    config,
                    soup_size=max(2, round(config.soup_size * args.scale)),
                    total_collisions=max(1, round(config.total_collisions * args.scale)),
                    replicates=max(1, round(config.replicates * args.scale)),
                )
        else:
            config = preset(args.preset, scale=args.scale)
        overrides = {}
        if args.seed is not None:
            overrides["master_seed"] = args.seed
        if args.replicates is not None:
            overrides["replicates"] = args.replicates
        if args.collisions is not None:
            overrides["total_collisions"] = args.collisions
        if args.soup_size is not None:
            overrides["soup_size"] = args.soup_size
        if overrides:
            config = replace(config, **overrides)
        if args.workers is not None and args.workers < 1:
            raise ValueError("workers must be >= 1")
    except (OSError, ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        summary = run_experiment(config, args.out, workers=args.workers)
    except Exception as exc:  # noqa: BLE001 - runtime failure contract
        print(f"runtime failure: {exc}", file=sys.stderr)
        return 2
    json.dump(summary, sys.stdout, indent=2)
    print()
    return 0


def _cmd_reduce(args) -> int:
    try:
        if args.expr_file == "-":
            text = sys.stdin.read()
        else:
            with open(args.expr_file, encoding="utf-8") as fh:
                text = fh.read()
        expr = parse(text, require_closed=True)
        limits = ReductionLimits(max_steps=args.max_steps, max_vertices=args.max_vertices)
    except (OSError, ValueError, LambdaSyntaxError, UnboundVariableError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        outcome = reduce_to_normal_form(expr, limits)
    except Exception as exc:  # noqa: BLE001
        print(f"runtime failure: {exc}", file=sys.stderr)
        return 2
    if isinstance(outcome, NormalForm):
        print(to_text(outcome.expr))
        print(f"normal form after {outcome.steps_used} steps", file=sys.stderr)
    elif isinstance(outcome, StepLimitExceeded):
        print(f"step limit exceeded ({limits.max_steps} steps)")
    elif isinstance(outcome, SizeLimitExceeded):
        print(f"size limit exceeded ({limits.max_vertices} vertices)")
    return 0


def _cmd_inspect(args) -> int:
    try:
        records = read_records_csv(args.csv)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    final = records[-1]
    print(f"records: {len(records)}  collisions: {final.collision_index}  "
          f"soup size: {final.soup_size}")
    print(f"{'label':<16}{'final':>8}{'final%':>9}{'peak%':>9}{'timeavg%':>10}")
    for label in final.counts:
        peak = max(r.counts[label] / r.soup_size for r in records)
        avg = time_averaged_population(records, label)
        print(f"{label:<16}{final.counts[label]:>8}"
              f"{100 * final.counts[label] / final.soup_size:>8.2f}%"
              f"{100 * peak:>8.2f}%{100 * avg:>9.3f}%")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "reduce":
        return _cmd_reduce(args)
    return _cmd_inspect(args)


if __name__ == "__main__":
    sys.exit(main())
