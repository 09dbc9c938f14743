import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lpconcolic.constraints import TRUE, HerbrandConstraint, NegLit, alt_constraint
from lpconcolic.parser import parse_atom, parse_program, parse_term
from lpconcolic.smtlib import export_smtlib, var_symbol
from lpconcolic.solver import (
    Sat,
    SolverBudgetError,
    SolverConfig,
    brute_force_models,
    check_model,
    extend_signature,
    solve,
    universe,
    universe_size,
)
from lpconcolic.terms import Substitution, Var

from generators import random_problem

A = parse_atom
X, Y = Var("X"), Var("Y")
FALLBACK = parse_program("p(a). p(X) :- q(X). q(b).")
NAT = parse_program("nat(0). nat(s(X)) :- nat(X).")

# the three first-iteration candidates of the fallback-program run from p(a)
UNSAT_CASE = HerbrandConstraint((
    NegLit(A("p(Y)"), A("p(a)")),
    NegLit(A("p(Y)"), A("p(X)"), frozenset({X})),
))
SAT_CASE = alt_constraint(A("p(Y)"), TRUE, [A("p(X)")], [A("p(a)")], {Y})
NEG_CASE = HerbrandConstraint((NegLit(A("p(X)"), A("p(a)")), NegLit(A("q(X)"), A("q(b)"))))


def test_extend_signature():
    assert extend_signature(FALLBACK, 1) == (("a", 0), ("b", 0), ("c1", 0))
    assert extend_signature(NAT, 1) == (("0", 0), ("s", 1), ("c1", 0))
    p = parse_program("p(c1). p(c3).")
    assert extend_signature(p, 2) == (("c1", 0), ("c3", 0), ("c2", 0), ("c4", 0))
    with pytest.raises(ValueError):
        extend_signature(FALLBACK, 0)


def test_universe_order_and_size():
    sig = extend_signature(NAT, 1)
    assert [str(t) for t in universe(sig, 2)] == \
        ["0", "c1", "s(0)", "s(c1)", "s(s(0))", "s(s(c1))"]
    for d in range(4):
        assert universe_size(sig, d) == len(universe(sig, d))
    sig = (("a", 0), ("g", 2), ("c1", 0))
    assert [universe_size(sig, d) for d in range(3)] == [2, 6, 38]


def test_worked_examples():
    assert solve(UNSAT_CASE, {Y}, FALLBACK).kind is Sat.UNSAT
    res = solve(SAT_CASE, {Y}, FALLBACK)
    assert res.sat and res.model == Substitution({Y: parse_term("b")})
    res = solve(NEG_CASE, {X}, FALLBACK)
    assert res.model == Substitution({X: parse_term("c1")})
    assert solve(TRUE, {X}, FALLBACK).model == Substitution({X: parse_term("a")})


def test_oracle_examples():
    c = HerbrandConstraint((NegLit(A("q(X)"), A("q(b)")),))
    models = brute_force_models(c, {X}, FALLBACK, SolverConfig(max_depth=0))
    assert models == {Substitution({X: parse_term("a")}), Substitution({X: parse_term("c1")})}
    c = HerbrandConstraint((NegLit(A("p(Y)"), A("p(X)"), frozenset({X})),))
    for d in range(3):
        assert brute_force_models(c, {Y}, NAT, SolverConfig(max_depth=d)) == set()
    assert brute_force_models(TRUE, [], FALLBACK) == {Substitution()}


def test_free_variables_must_be_targets():
    with pytest.raises(ValueError):
        solve(NEG_CASE, {Y}, FALLBACK)


def test_budget_error_is_raised():
    c = HerbrandConstraint((NegLit(A("p(X,Y)"), A("p(Y,X)")),))
    with pytest.raises(SolverBudgetError):
        solve(c, [X, Y], NAT, SolverConfig(max_depth=3, budget=5))
    with pytest.raises(SolverBudgetError):
        solve(TRUE, [X], NAT, SolverConfig(max_depth=50, budget=10))


def test_nondeterministic_mode_still_returns_models():
    res = solve(NEG_CASE, {X}, FALLBACK, SolverConfig(deterministic=False, seed=3))
    assert res.sat and check_model(NEG_CASE, res.model)


# -- properties ----------------------------------------------------------------

seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=300, deadline=None)
@given(seeds)
def test_oracle_agreement(seed):
    c, targets, sig, depth = random_problem(random.Random(seed))
    cfg = SolverConfig(max_depth=depth)
    res = solve(c, targets, sig, cfg)
    models = brute_force_models(c, targets, sig, cfg)
    assert res.sat == bool(models)
    if res.sat:
        assert res.model in models
        assert check_model(c, res.model)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_monotone_in_depth(seed):
    c, targets, sig, depth = random_problem(random.Random(seed))
    if solve(c, targets, sig, SolverConfig(max_depth=depth)).sat and depth < 2:
        assert solve(c, targets, sig, SolverConfig(max_depth=depth + 1)).sat


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_deterministic(seed):
    c, targets, sig, depth = random_problem(random.Random(seed))
    cfg = SolverConfig(max_depth=depth)
    assert solve(c, targets, sig, cfg) == solve(c, targets, sig, cfg)


# -- SMT-LIB export ----------------------------------------------------------------


def test_export_true():
    text = export_smtlib(TRUE, [X], FALLBACK)
    asserts = [l for l in text.splitlines() if l.startswith("(assert")]
    assert asserts == ["(assert true)"]
    assert text.endswith("(check-sat)\n(get-model)\n")


def test_export_structure():
    text = export_smtlib(HerbrandConstraint((NegLit(A("p(X)"), A("p(a)")),)), [X], FALLBACK)
    lines = text.splitlines()
    assert lines[0] == "; targets: X"
    assert lines[1] == "(declare-datatypes ((Herbrand 0)) (((|a|) (|b|) (|c1|))))"
    assert lines[2] == "(declare-const X Herbrand)"
    assert lines[3] == "(assert (not (= X |a|)))"
    assert "forall" not in text
    text = export_smtlib(SAT_CASE, [Y], FALLBACK)
    assert "(assert (exists ((X Herbrand)) (= Y X)))" in text
    nat = export_smtlib(TRUE, [X], NAT)
    assert "(|s| (|s.0| Herbrand))" in nat


def test_var_symbols():
    assert var_symbol(Var("X")) == "X"
    assert var_symbol(Var("Y", 3)) == "Y!3"
    assert var_symbol(Var("_", -2)) == "_!a2"


def _z3_check(text):
    z3 = pytest.importorskip("z3")
    s = z3.Solver()
    s.set("timeout", 5000)
    s.from_string(text)
    return str(s.check())


def test_exported_examples_under_z3():
    assert _z3_check(export_smtlib(SAT_CASE, [Y], FALLBACK)) == "sat"
    assert _z3_check(export_smtlib(NEG_CASE, [X], FALLBACK)) == "sat"
    assert _z3_check(export_smtlib(UNSAT_CASE, [Y], FALLBACK)) == "unsat"


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_z3_agrees_on_bounded_models(seed):
    """A bounded model is a model of the unbounded datatype theory, and a
    constraint z3 proves unsatisfiable has no bounded model either."""
    c, targets, sig, depth = random_problem(random.Random(seed))
    res = solve(c, targets, sig, SolverConfig(max_depth=depth))
    verdict = _z3_check(export_smtlib(c, targets, sig, SolverConfig(max_depth=depth)))
    if verdict == "unsat":
        assert not res.sat
    if res.sat:
        assert verdict in ("sat", "unknown")
