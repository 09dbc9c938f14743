"""Coverage aggregation and text/JSON rendering of generated test suites."""

from __future__ import annotations

import json

from .concrete import DEFAULT_STEP_LIMIT, run
from .engine import TestSuite, Trace, format_trace
from .terms import Atom, Program, Var, apply, variables


def format_test_case(a: Atom) -> str:
    """Print a test case with every (output) variable shown as ``_``."""
    return str(apply({v: Var("_", -1) for v in variables(a)}, a))


def coverage_report(tcs, traces, p: Program,
                    step_limit: int = DEFAULT_STEP_LIMIT) -> dict[str, list[tuple[str, ...]]]:
    """For each predicate, the clause-label sets matched at choice points
    when every test case is replayed, in order of first appearance."""
    cov: dict[str, dict[tuple[str, ...], None]] = {}
    if not traces:
        return {}
    for tc in tcs:
        atom = tc.atom if hasattr(tc, "atom") else tc
        _, log = run(atom, p, step_limit)
        for e in log:
            if e.rule in ("choice", "choice_fail"):
                cov.setdefault(e.pred, {}).setdefault(e.matched)
    return {pred: list(sets) for pred, sets in cov.items()}


def outcome_name(tc) -> str:
    return "PENDING" if tc.outcome is None else tc.outcome.concrete.kind.value


def trace_of(tc) -> Trace:
    return () if tc.outcome is None else tc.outcome.trace


def suite_to_dict(suite: TestSuite, step_limit: int = DEFAULT_STEP_LIMIT) -> dict:
    cov = coverage_report(suite.test_cases, suite.traces, suite.program, step_limit)
    return {
        "test_cases": [
            {"goal": format_test_case(tc.atom), "outcome": outcome_name(tc),
             "trace": list(trace_of(tc))}
            for tc in suite.test_cases
        ],
        "traces": [list(t) for t in suite.traces],
        "coverage": {pred: [list(s) for s in sets] for pred, sets in cov.items()},
        "fixpoint": suite.fixpoint,
        "skipped_candidates": suite.skipped_candidates,
    }


def render_report(suite: TestSuite, fmt: str = "text",
                  step_limit: int = DEFAULT_STEP_LIMIT) -> str:
    if fmt == "json":
        return json.dumps(suite_to_dict(suite, step_limit), ensure_ascii=False, indent=2) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    return "".join(
        f"{format_test_case(tc.atom)}\t{outcome_name(tc)}\t{format_trace(trace_of(tc))}\n"
        for tc in suite.test_cases
    )
