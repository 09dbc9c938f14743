"""Exit criteria for the build, one test per criterion.

Each test prints a single ``[C<n>] PASS|FAIL ...`` line (also repeated in
the pytest terminal summary). Run just this module with

    pytest tests/test_acceptance.py -v

or as a script: ``python3 tests/test_acceptance.py``.
"""

import random
import subprocess
import sys
import time
from pathlib import Path

import pytest

from lpconcolic.concrete import OutcomeKind, run
from lpconcolic.engine import EngineConfig, Mode, drive
from lpconcolic.parser import parse_atom, parse_program
from lpconcolic.report import format_test_case
from lpconcolic.solver import SolverConfig, brute_force_models, solve
from lpconcolic.terms import Fresh, Struct, Substitution, Var, clauses

import conftest
from generators import random_goal, random_problem, random_program
from test_engine import conservative_mismatches

DATA = Path(__file__).parent / "data"
FALLBACK = parse_program((DATA / "fallback.pl").read_text())
BRANCHES = parse_program((DATA / "branches.pl").read_text())
NAT = parse_program((DATA / "nat.pl").read_text())
OUTARGS = parse_program((DATA / "outargs.pl").read_text())


def report(n: int, ok: bool, detail: str) -> None:
    line = f"[C{n}] {'PASS' if ok else 'FAIL'} {detail}"
    print(line)
    conftest.ACCEPTANCE_LINES.append(line)
    assert ok, line


def rename_fresh_constants(atoms, program):
    """Rename constants outside the program signature to k1, k2, ... in order
    of first appearance, so suites compare modulo fresh-constant naming."""
    known = {f for f, _ in program.signature}
    names: dict[str, str] = {}

    def walk(t):
        if isinstance(t, Var):
            return t
        if not t.args and t.functor not in known:
            return Struct(names.setdefault(t.functor, f"k{len(names) + 1}"))
        return Struct(t.functor, tuple(walk(a) for a in t.args))

    return [format_test_case(type(a)(a.pred, tuple(walk(t) for t in a.args))) for a in atoms]


def suite_atoms(suite):
    return [tc.atom for tc in suite.test_cases]


# -- criteria ----------------------------------------------------------------


def test_c1_fallback_suite():
    t = time.perf_counter()
    suite = drive(parse_atom("p(a)"), FALLBACK, Mode("p", 1, 1), EngineConfig(max_depth=1))
    dt = time.perf_counter() - t
    got = sorted(rename_fresh_constants(suite_atoms(suite), FALLBACK))
    ok = got == sorted(["p(a)", "p(b)", "p(k1)"]) and suite.fixpoint and dt <= 1.0
    report(1, ok, f"fallback suite {got}, fixpoint={suite.fixpoint}, {dt:.3f}s (<= 1s)")


def test_c2_nat_counts():
    want = {1: 3, 5: 7, 50: 52}
    got, times = {}, {}
    for depth in want:
        t = time.perf_counter()
        suite = drive(parse_atom("nat(0)"), NAT, Mode("nat", 1, 1), EngineConfig(max_depth=depth))
        times[depth] = time.perf_counter() - t
        got[depth] = len(suite.test_cases)
    ok = got == want and all(v <= 10 for v in times.values())
    detail = ", ".join(f"depth {d}: {got[d]} TCs (want {want[d]}, {times[d]:.2f}s)" for d in want)
    report(2, ok, f"nat counts {detail}")


def test_c3_branches_golden_derivation():
    out, log = run(parse_atom("p(s(X))"), BRANCHES)
    rules = [e.rule for e in log]
    ok = (out.kind is OutcomeKind.SUCCESS
          and out.answer == Substitution({Var("X"): Struct("a")})
          and rules == ["choice", "unfold", "choice", "unfold", "success"])
    report(3, ok, f"run(p(s(X))) = {out}, log {rules}")


def test_c4_fallback_fresh_argument():
    suite = drive(parse_atom("p(a)"), FALLBACK, Mode("p", 1, 1))
    others = [str(a) for a in suite_atoms(suite) if str(a.args[0]) not in ("a", "b")]
    regenerated = sum(str(a) == "p(a)" for a in suite_atoms(suite))
    ok = bool(others) and regenerated == 1
    report(4, ok, f"test cases outside {{a,b}}: {others}; p(a) appears {regenerated}x")


def test_c5_solver_oracle_equivalence():
    rng = random.Random(20240501)
    n, disagree, bad_model, sat = 1000, 0, 0, 0
    t = time.perf_counter()
    for _ in range(n):
        c, targets, sig, depth = random_problem(rng)
        cfg = SolverConfig(max_depth=depth)
        res = solve(c, targets, sig, cfg)
        models = brute_force_models(c, targets, sig, cfg)
        sat += res.sat
        if res.sat != bool(models):
            disagree += 1
        elif res.sat and res.model not in models:
            bad_model += 1
    dt = time.perf_counter() - t
    ok = disagree == 0 and bad_model == 0 and dt <= 60
    report(5, ok, f"{n} constraints ({sat} SAT): {disagree} verdict mismatches, "
                  f"{bad_model} models outside oracle set, {dt:.1f}s (<= 60s)")


def test_c6_conservative_extension():
    rng = random.Random(7)
    n, mismatched = 120, 0
    for _ in range(n):
        p = random_program(rng, max_clauses=6)
        goal = random_goal(rng)
        mismatched += conservative_mismatches(p, goal) > 0
    report(6, mismatched == 0, f"{n} random programs: {mismatched} with mismatching steps")


def test_c7_nat_depth_2_suite():
    suite = drive(parse_atom("nat(0)"), NAT, Mode("nat", 1, 1), EngineConfig(max_depth=2))
    got = sorted(rename_fresh_constants(suite_atoms(suite), NAT))
    want = sorted(["nat(0)", "nat(k1)", "nat(s(0))", "nat(s(k1))", "nat(s(s(0)))",
                   "nat(s(s(k1)))"])
    report(7, got == want, f"nat depth-2 suite {got}")


def _cli(*args):
    cmd = [sys.executable, "-m", "lpconcolic", *args]
    return subprocess.run(cmd, capture_output=True, timeout=120).stdout


def test_c8_cli_determinism():
    runs = [["--program", str(DATA / "fallback.pl"), "--goal", "p(a)", "--ground-args", "1",
             "--depth", "1"]]
    runs += [["--program", str(DATA / "nat.pl"), "--goal", "nat(0)", "--ground-args", "1",
              "--depth", str(d)] for d in (1, 5, 50)]
    same = []
    for args in runs:
        for fmt in ("text", "json"):
            a, b = _cli(*args, "--format", fmt), _cli(*args, "--format", fmt)
            same.append(bool(a) and a == b)
    report(8, all(same), f"{sum(same)}/{len(same)} CLI invocation pairs byte-identical")


def test_c9_output_argument_policy():
    suite = drive(parse_atom("p(a,Y)"), OUTARGS, Mode("p", 2, 1))
    atoms = suite_atoms(suite)
    outputs_free = all(isinstance(a.args[1], Var) for a in atoms)
    shapes = [format_test_case(a) for a in atoms]
    first_ok = len(atoms) == 2 and atoms[0].args[0] == Struct("a")
    second_ok = False
    if len(atoms) == 2:
        t = atoms[1]
        matched = [c.label for c in clauses(t, OUTARGS, Fresh())]
        second_ok = t.args[0] != Struct("a") and matched == ["ℓ2"]
    ok = outputs_free and first_ok and second_ok
    report(9, ok, f"suite {shapes}; outputs unbound={outputs_free}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
