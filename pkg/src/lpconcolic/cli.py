"""Command-line entry point.

Exit status: 0 when the fixpoint is reached, 1 when a limit stopped the
search (the partial report is still printed), 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

from .concrete import DEFAULT_STEP_LIMIT
from .engine import EngineConfig, Mode, drive, solver_signature
from .parser import ParseError, parse_atom, parse_program
from .report import render_report
from .smtlib import export_smtlib
from .solver import SolverConfig

def smt_filename(trace, candidate: int) -> str:
    name = ".".join(trace).replace("ℓ", "l") if trace else "eps"
    return f"{name}_{candidate}.smt2"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="lpconcolic",
        description="Concolic test-case generation for definite logic programs.")
    ap.add_argument("--program", required=True, type=Path, help="program file")
    ap.add_argument("--goal", required=True, help="initial atomic goal, e.g. 'nat(0)'")
    ap.add_argument("--ground-args", required=True, type=int,
                    help="number of leading input arguments of the goal's predicate")
    ap.add_argument("--depth", type=int, default=1, help="maximum term depth (default 1)")
    ap.add_argument("--iteration-limit", type=int, default=1000)
    ap.add_argument("--step-limit", type=int, default=DEFAULT_STEP_LIMIT)
    ap.add_argument("--fresh-constants", type=int, default=1)
    ap.add_argument("--format", choices=("text", "json"), default="text")
    ap.add_argument("--emit-smt", type=Path, metavar="DIR",
                    help="write one SMT-LIB2 file per solved constraint into DIR")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)

    def usage_error(msg: str) -> int:
        print(f"lpconcolic: error: {msg}", file=sys.stderr)
        return 2

    if args.depth < 0:
        return usage_error("--depth must be non-negative")
    if args.fresh_constants < 1:
        return usage_error("--fresh-constants must be at least 1")
    if args.iteration_limit < 0 or args.step_limit < 1:
        return usage_error("limits must be positive")
    try:
        text = args.program.read_text(encoding="utf-8")
    except OSError as e:
        return usage_error(f"cannot read {args.program}: {e.strerror}")
    try:
        program = parse_program(text)
    except ParseError as e:
        return usage_error(f"{args.program}:{e} [{e.kind}]")
    try:
        goal = parse_atom(args.goal)
    except ParseError as e:
        return usage_error(f"goal:{e} [{e.kind}]")
    if not 0 <= args.ground_args <= goal.arity:
        return usage_error(f"--ground-args must be between 0 and {goal.arity}")

    mode = Mode.for_atom(goal, args.ground_args)
    on_solve = None
    if args.emit_smt is not None:
        try:
            args.emit_smt.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            return usage_error(f"cannot create {args.emit_smt}: {e.strerror}")
        sig = solver_signature(program, goal)
        scfg = SolverConfig(max_depth=args.depth, fresh_constants=args.fresh_constants)

        def write_smt(trace, candidate, constraint, targets):
            path = args.emit_smt / smt_filename(trace, candidate)
            path.write_text(export_smtlib(constraint, targets, sig, scfg), encoding="utf-8")

        on_solve = write_smt

    cfg = EngineConfig(max_depth=args.depth, iteration_limit=args.iteration_limit,
                       step_limit=args.step_limit, fresh_constants=args.fresh_constants,
                       on_solve=on_solve)
    start = time.perf_counter()
    try:
        suite = drive(goal, program, mode, cfg)
    except ValueError as e:
        return usage_error(str(e))
    except OSError as e:
        return usage_error(f"cannot write SMT-LIB file: {e.strerror}")
    elapsed = time.perf_counter() - start

    sys.stdout.write(render_report(suite, args.format, args.step_limit))
    status = "fixpoint reached" if suite.fixpoint else "limit reached before fixpoint"
    print(f"% {len(suite.test_cases)} test cases, {len(suite.traces)} traces, "
          f"{suite.iterations} runs, {status}; {elapsed:.3f}s", file=sys.stderr)
    if suite.skipped_candidates:
        print(f"% coverage partial: {suite.skipped_candidates} candidates skipped "
              "(solver budget)", file=sys.stderr)
    return 0 if suite.fixpoint else 1


if __name__ == "__main__":
    sys.exit(main())
