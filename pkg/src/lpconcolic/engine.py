"""Concolic execution of definite programs and the test-case generation loop.

A concolic state pairs the concrete alternatives of the first-answer
semantics with symbolic twins that run the same clauses on a fully general
version of the test case. At every choice point the symbolic side records
which clauses its goal could have matched; the first time a trace reaches
such a point, each other subset of those clauses is turned into a Herbrand
constraint and its solutions become new test cases.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterator, Sequence
from dataclasses import dataclass, field, replace

from .concrete import (
    DEFAULT_STEP_LIMIT,
    ConcreteGoal,
    LabeledGoal,
    LogEntry,
    Outcome,
    OutcomeKind,
    select_rule,
)
from .constraints import (
    TRUE,
    HerbrandConstraint,
    alt_constraint,
    conjoin,
    negcon,
    rename_quantified,
    subst_constraint,
)
from .solver import Signature, SolverBudgetError, SolverConfig, solve
from .terms import (
    ID,
    Atom,
    Clause,
    Fresh,
    Program,
    Substitution,
    Var,
    collect_functors,
    apply,
    clauses,
    compose,
    is_ground,
    is_variant,
    mgu,
    outputvars,
    term_depth,
    variables,
)

log = logging.getLogger(__name__)

Trace = tuple[str, ...]
EMPTY_TRACE: Trace = ()


def format_trace(t: Trace) -> str:
    return ".".join(t) if t else "ε"


@dataclass(frozen=True)
class Mode:
    predicate: str
    arity: int
    input_count: int

    def __post_init__(self):
        if not 0 <= self.input_count <= self.arity:
            raise ValueError(f"input count {self.input_count} not in 0..{self.arity}")

    @classmethod
    def for_atom(cls, a: Atom, input_count: int) -> Mode:
        return cls(a.pred, a.arity, input_count)

    def __str__(self) -> str:
        return f"{self.predicate}/{self.arity} ({self.input_count} input)"


@dataclass(frozen=True)
class SymbolicLabel:
    theta: Substitution
    trace: Trace
    root_goal: Atom
    gamma: HerbrandConstraint
    ground_vars: frozenset[Var]

    def __str__(self) -> str:
        g = "{" + ",".join(map(str, sorted(self.ground_vars, key=str))) + "}"
        return f"{self.theta}, {format_trace(self.trace)}, {self.root_goal}, {self.gamma}, {g}"


@dataclass(frozen=True)
class SymbolicGoal:
    goal: ConcreteGoal
    label: SymbolicLabel
    pending: Clause | None = None


@dataclass(frozen=True)
class ConcolicOutcome:
    concrete: Outcome
    symbolic: Outcome
    trace: Trace


@dataclass(frozen=True)
class ConcolicState:
    concrete: tuple[LabeledGoal, ...]
    symbolic: tuple[SymbolicGoal, ...]
    goal_vars: frozenset[Var]
    root_vars: frozenset[Var]
    outcome: ConcolicOutcome | None = None

    @property
    def terminal(self) -> bool:
        return self.outcome is not None

    def check_pairing(self) -> None:
        assert len(self.concrete) == len(self.symbolic), "alternative counts differ"
        for c, s in zip(self.concrete, self.symbolic):
            assert len(c.goal.atoms) == len(s.goal.atoms), "goal lengths differ"
            assert c.goal.failed == s.goal.failed, "fail markers differ"
            assert (c.pending and c.pending.label) == (s.pending and s.pending.label), \
                "pending clauses differ"


@dataclass
class TestCase:
    atom: Atom
    processed: bool = False
    outcome: ConcolicOutcome | None = None

    __test__ = False  # not a pytest class


class TestCaseStore:
    """Generated test cases in insertion order, pairwise non-variant."""

    __test__ = False

    def __init__(self, mode: Mode, max_depth: int):
        self.mode = mode
        self.max_depth = max_depth
        self.entries: list[TestCase] = []
        self.rejected = 0

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def atoms(self) -> list[Atom]:
        return [e.atom for e in self.entries]

    def admissible(self, a: Atom) -> bool:
        if a.root != (self.mode.predicate, self.mode.arity):
            return False
        if not is_ground(a.args[: self.mode.input_count]):
            return False
        return all(term_depth(t) <= self.max_depth for t in a.args)

    def add(self, a: Atom) -> bool:
        if not self.admissible(a):
            self.rejected += 1
            return False
        if any(is_variant(a, e.atom) for e in self.entries):
            return False
        self.entries.append(TestCase(a))
        return True

    def next_pending(self) -> TestCase | None:
        return next((e for e in self.entries if not e.processed), None)


class TraceStore:
    def __init__(self):
        self._traces: dict[Trace, None] = {}

    def __contains__(self, t: Trace) -> bool:
        return t in self._traces

    def __len__(self) -> int:
        return len(self._traces)

    def __iter__(self):
        return iter(self._traces)

    def add(self, t: Trace) -> None:
        self._traces.setdefault(t)


SolveHook = Callable[[Trace, int, HerbrandConstraint, Sequence[Var]], None]


@dataclass
class EngineConfig:
    max_depth: int = 1
    iteration_limit: int = 1000
    step_limit: int = DEFAULT_STEP_LIMIT
    fresh_constants: int = 1
    budget: int = 10**7
    on_solve: SolveHook | None = None

    def solver_config(self) -> SolverConfig:
        return SolverConfig(max_depth=self.max_depth, fresh_constants=self.fresh_constants,
                            budget=self.budget)


@dataclass
class RunStats:
    skipped_candidates: int = 0
    solver_calls: int = 0


@dataclass(frozen=True)
class Alternatives:
    atoms: list[Atom]
    skipped: int = 0


def solver_signature(p: Program, *atoms: Atom) -> Signature:
    """Program signature, extended with any symbol that only occurs in ``atoms``."""
    seen = dict.fromkeys(p.signature)
    for a in atoms:
        for t in a.args:
            collect_functors(t, seen)
    return tuple(seen)


def alts(a0: Atom, gamma: HerbrandConstraint, a_sym: Atom,
         matched_concrete: Sequence[Clause], matched_symbolic: Sequence[Clause],
         g, signature: Signature, cfg: SolverConfig,
         trace: Trace = EMPTY_TRACE, on_solve: SolveHook | None = None) -> Alternatives:
    """Instances of ``a0`` whose symbolic call matches exactly a different
    subset of ``matched_symbolic`` than the concrete call did.

    Subsets are enumerated by bitmask over ``matched_symbolic`` (source
    order); the bitmask is the candidate index handed to ``on_solve``.
    """
    covered = frozenset(c.label for c in matched_concrete)
    targets = [v for v in variables(a0) if v in set(g)]
    out: list[Atom] = []
    skipped = 0
    k = len(matched_symbolic)
    for mask in range(1 << k):
        plus = [c for i, c in enumerate(matched_symbolic) if mask >> i & 1]
        if frozenset(c.label for c in plus) == covered:
            continue
        minus = [c for i, c in enumerate(matched_symbolic) if not mask >> i & 1]
        constraint = alt_constraint(a_sym, gamma, [c.head for c in plus],
                                    [c.head for c in minus], g)
        if on_solve is not None:
            on_solve(trace, mask, constraint, targets)
        try:
            res = solve(constraint, targets, signature, cfg)
        except SolverBudgetError as e:
            log.warning("skipping candidate %d at trace %s: %s", mask, format_trace(trace), e)
            skipped += 1
            continue
        if res.sat:
            out.append(apply(res.model, a0))
    return Alternatives(out, skipped)


@dataclass
class Context:
    """Global parameters of one concolic run."""

    program: Program
    tcs: TestCaseStore
    traces: TraceStore
    mode: Mode
    cfg: EngineConfig
    signature: Signature
    fresh: Fresh = field(default_factory=Fresh)
    stats: RunStats = field(default_factory=RunStats)

    def __post_init__(self):
        self.solver_cfg = self.cfg.solver_config()


def initial_concolic_state(tc: Atom, fresh: Fresh, mode: Mode) -> ConcolicState:
    ys = tuple(fresh.var("Y") for _ in range(tc.arity))
    sym = Atom(tc.pred, ys)
    g = frozenset(ys[: mode.input_count])
    label = SymbolicLabel(ID, EMPTY_TRACE, sym, TRUE, g)
    return ConcolicState(
        (LabeledGoal(ConcreteGoal((tc,))),),
        (SymbolicGoal(ConcreteGoal((sym,)), label),),
        frozenset(variables(tc)),
        frozenset(ys),
    )


def _generate(ctx: Context, lab: SymbolicLabel, a_sym: Atom,
              cs: Sequence[Clause], ds: Sequence[Clause]) -> None:
    """Side effect of choice/choice_fail on a trace seen for the first time."""
    if lab.trace in ctx.traces:
        return
    ctx.traces.add(lab.trace)
    res = alts(lab.root_goal, lab.gamma, a_sym, cs, ds, lab.ground_vars,
               ctx.signature, ctx.solver_cfg, lab.trace, ctx.cfg.on_solve)
    ctx.stats.skipped_candidates += res.skipped
    for a in res.atoms:
        ctx.tcs.add(outputvars(a, ctx.mode.input_count, ctx.fresh))


def concolic_step(s: ConcolicState, ctx: Context) -> tuple[LogEntry, ConcolicState]:
    if s.terminal:
        raise ValueError("step on a terminal state")
    calts, salts = s.concrete, s.symbolic
    (ch, crest), (sh, srest) = (calts[0], calts[1:]), (salts[0], salts[1:])
    lab = sh.label
    rule = select_rule(calts)

    if rule in ("success", "failure"):
        kind = OutcomeKind.SUCCESS if rule == "success" else OutcomeKind.FAIL
        out = ConcolicOutcome(Outcome(kind, ch.answer), Outcome(kind, lab.theta), lab.trace)
        return LogEntry(rule), replace(s, concrete=(), symbolic=(), outcome=out)
    if rule == "backtrack":
        return LogEntry(rule), replace(s, concrete=crest, symbolic=srest)

    a, body = ch.goal.atoms[0], ch.goal.atoms[1:]
    a_sym, sbody = sh.goal.atoms[0], sh.goal.atoms[1:]

    if rule == "unfold":
        c = ch.pending
        sigma = mgu(a, c.head)
        rho = mgu(a_sym, c.head)
        assert sigma is not None and rho is not None, "pending clause no longer unifies"
        cgoal = LabeledGoal(ConcreteGoal(apply(sigma, c.body + body)),
                            compose(ch.answer, sigma).restrict(s.goal_vars))
        ground = frozenset(variables([apply(rho, v) for v in lab.ground_vars]))
        new_lab = SymbolicLabel(
            compose(lab.theta, rho).restrict(s.root_vars),
            lab.trace,
            apply(rho, lab.root_goal),
            subst_constraint(lab.gamma, rho),
            ground,
        )
        sgoal = SymbolicGoal(ConcreteGoal(apply(rho, c.body + sbody)), new_lab)
        return LogEntry(rule, c.label), replace(
            s, concrete=(cgoal,) + crest, symbolic=(sgoal,) + srest)

    cs = clauses(a, ctx.program, ctx.fresh)
    ds = clauses(a_sym, ctx.program, ctx.fresh)
    covered = {c.label for c in cs}
    gamma_new = negcon(a_sym, [d.head for d in ds if d.label not in covered], lab.ground_vars)
    # quantified goal variables are renamed so later unfolds cannot bind them
    gamma_new = rename_quantified(gamma_new, ctx.fresh, variables(a_sym))
    _generate(ctx, lab, a_sym, cs, ds)
    gamma = conjoin(lab.gamma, gamma_new)

    if not cs:
        cgoal = LabeledGoal(ConcreteGoal(body, failed=True), ch.answer)
        sgoal = SymbolicGoal(ConcreteGoal(sbody, failed=True), replace(lab, gamma=gamma))
        return LogEntry("choice_fail", pred=_pred(a)), replace(
            s, concrete=(cgoal,) + crest, symbolic=(sgoal,) + srest)

    ccopies = tuple(LabeledGoal(ch.goal, ch.answer, c) for c in cs)
    scopies = tuple(
        SymbolicGoal(sh.goal, replace(lab, trace=lab.trace + (c.label,), gamma=gamma), c)
        for c in cs)
    return LogEntry("choice", matched=tuple(c.label for c in cs), pred=_pred(a)), replace(
        s, concrete=ccopies + crest, symbolic=scopies + srest)


def _pred(a: Atom) -> str:
    return f"{a.pred}/{a.arity}"


def check_test_case(tc: Atom, mode: Mode) -> None:
    if tc.root != (mode.predicate, mode.arity):
        raise ValueError(f"{tc} does not match mode {mode}")
    if not is_ground(tc.args[: mode.input_count]):
        raise ValueError(f"input arguments of {tc} must be ground")


def concolic_derivation(tc: Atom, ctx: Context) -> Iterator[tuple[LogEntry, ConcolicState]]:
    check_test_case(tc, ctx.mode)
    s = initial_concolic_state(tc, ctx.fresh, ctx.mode)
    for _ in range(ctx.cfg.step_limit):
        entry, s = concolic_step(s, ctx)
        if not s.terminal:
            s.check_pairing()
        yield entry, s
        if s.terminal:
            return
    ch, sh = s.concrete[0], s.symbolic[0]
    out = ConcolicOutcome(Outcome(OutcomeKind.DEPTH_LIMIT, ch.answer),
                          Outcome(OutcomeKind.DEPTH_LIMIT, sh.label.theta), sh.label.trace)
    yield LogEntry("depth_limit"), replace(s, concrete=(), symbolic=(), outcome=out)


def concolic_run(tc: Atom, ctx: Context) -> tuple[ConcolicOutcome, list[LogEntry]]:
    log_ = []
    s = None
    for entry, s in concolic_derivation(tc, ctx):
        if entry.rule != "depth_limit":
            log_.append(entry)
    return s.outcome, log_


@dataclass
class TestSuite:
    program: Program
    mode: Mode
    test_cases: list[TestCase]
    traces: list[Trace]
    fixpoint: bool
    iterations: int
    skipped_candidates: int

    __test__ = False

    @property
    def complete(self) -> bool:
        return self.fixpoint and not self.skipped_candidates


def drive(initial: Atom, p: Program, mode: Mode, cfg: EngineConfig = EngineConfig()) -> TestSuite:
    """Run concolic testing from ``initial`` until no test case is pending or
    ``cfg.iteration_limit`` runs have been made. Pending cases are taken
    oldest first."""
    check_test_case(initial, mode)
    tcs = TestCaseStore(mode, cfg.max_depth)
    traces = TraceStore()
    ctx = Context(p, tcs, traces, mode, cfg, solver_signature(p, initial))
    first = outputvars(initial, mode.input_count, ctx.fresh)
    if not tcs.add(first):
        raise ValueError(f"initial goal {initial} exceeds max depth {cfg.max_depth}")
    iterations = 0
    fixpoint = False
    while True:
        entry = tcs.next_pending()
        if entry is None:
            fixpoint = True
            break
        if iterations >= cfg.iteration_limit:
            break
        entry.processed = True
        entry.outcome, _ = concolic_run(entry.atom, ctx)
        iterations += 1
    return TestSuite(p, mode, list(tcs), list(traces), fixpoint, iterations,
                     ctx.stats.skipped_candidates)
