"""Deterministic first-answer SLD semantics with explicit backtracking.

A state is a sequence of alternatives, each a goal labelled with the answer
computed so far; the leading alternative is the one being evaluated.
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass, field
from enum import Enum

from .terms import (
    ID,
    Atom,
    Clause,
    Fresh,
    Program,
    Substitution,
    Var,
    apply,
    clauses,
    compose,
    mgu,
    variables,
)

DEFAULT_STEP_LIMIT = 10**6


class OutcomeKind(str, Enum):
    SUCCESS = "SUCCESS"
    FAIL = "FAIL"
    DEPTH_LIMIT = "DEPTH_LIMIT"


@dataclass(frozen=True)
class Outcome:
    kind: OutcomeKind
    answer: Substitution = ID

    def __str__(self) -> str:
        return f"{self.kind.value}_{self.answer}"


@dataclass(frozen=True)
class ConcreteGoal:
    atoms: tuple[Atom, ...]
    failed: bool = False

    @property
    def is_true(self) -> bool:
        return not self.atoms and not self.failed

    def __str__(self) -> str:
        parts = ["fail"] if self.failed else []
        parts += map(str, self.atoms)
        return ", ".join(parts) if parts else "true"


@dataclass(frozen=True)
class LabeledGoal:
    goal: ConcreteGoal
    answer: Substitution = ID
    pending: Clause | None = None

    def __str__(self) -> str:
        s = f"{self.goal}_{self.answer}"
        return s if self.pending is None else f"{s}^{self.pending.label}"


@dataclass(frozen=True)
class ConcreteState:
    alternatives: tuple[LabeledGoal, ...] = ()
    goal_vars: frozenset[Var] = frozenset()
    outcome: Outcome | None = None

    @property
    def terminal(self) -> bool:
        return self.outcome is not None

    def __str__(self) -> str:
        if self.outcome is not None:
            return f"<{self.outcome}>"
        return "<" + " | ".join(map(str, self.alternatives)) + ">"


@dataclass(frozen=True)
class LogEntry:
    rule: str
    label: str | None = None
    # clause labels matched at a choice point (empty for choice_fail)
    matched: tuple[str, ...] = field(default=(), compare=False)
    pred: str | None = field(default=None, compare=False)

    def __str__(self) -> str:
        return self.rule if self.label is None else f"{self.rule} {self.label}"


def format_log(log: list[LogEntry]) -> str:
    return "".join(f"{e}\n" for e in log)


def initial_state(a: Atom) -> ConcreteState:
    return ConcreteState((LabeledGoal(ConcreteGoal((a,))),), frozenset(variables(a)))


def select_rule(alternatives) -> str:
    """Name of the single rule whose premise matches the leading alternative.

    Works for both concrete and symbolic alternative sequences (anything with
    ``goal``-like ``atoms``/``failed``/``pending`` on the leading element).
    """
    head = alternatives[0]
    goal = head.goal
    if goal.failed:
        return "failure" if len(alternatives) == 1 else "backtrack"
    if not goal.atoms:
        return "success"
    if head.pending is not None:
        return "unfold"
    return "choice"


def step(s: ConcreteState, p: Program, fresh: Fresh) -> tuple[LogEntry, ConcreteState]:
    if s.terminal:
        raise ValueError("step on a terminal state")
    alts = s.alternatives
    head, rest = alts[0], alts[1:]
    rule = select_rule(alts)
    if rule == "success":
        return LogEntry(rule), ConcreteState(goal_vars=s.goal_vars,
                                             outcome=Outcome(OutcomeKind.SUCCESS, head.answer))
    if rule == "failure":
        return LogEntry(rule), ConcreteState(goal_vars=s.goal_vars,
                                             outcome=Outcome(OutcomeKind.FAIL, head.answer))
    if rule == "backtrack":
        return LogEntry(rule), ConcreteState(rest, s.goal_vars)
    a, body = head.goal.atoms[0], head.goal.atoms[1:]
    if rule == "unfold":
        c = head.pending
        sigma = mgu(a, c.head)
        assert sigma is not None, "pending clause no longer unifies"
        goal = ConcreteGoal(apply(sigma, c.body + body))
        answer = compose(head.answer, sigma).restrict(s.goal_vars)
        return LogEntry(rule, c.label), ConcreteState(
            (LabeledGoal(goal, answer),) + rest, s.goal_vars)
    cs = clauses(a, p, fresh)
    matched = tuple(c.label for c in cs)
    if not cs:
        failed = LabeledGoal(ConcreteGoal(body, failed=True), head.answer)
        return LogEntry("choice_fail", pred=f"{a.pred}/{a.arity}"), ConcreteState((failed,) + rest, s.goal_vars)
    copies = tuple(LabeledGoal(head.goal, head.answer, c) for c in cs)
    return LogEntry("choice", matched=matched, pred=f"{a.pred}/{a.arity}"), ConcreteState(copies + rest, s.goal_vars)


def derivation(a: Atom, p: Program, step_limit: int = DEFAULT_STEP_LIMIT,
               fresh: Fresh | None = None) -> Iterator[tuple[LogEntry, ConcreteState]]:
    """Yield ``(entry, successor)`` for every transition from ``<a_id>``.

    When ``step_limit`` transitions have been taken without reaching a
    terminal state, a final ``depth_limit`` pseudo-transition is yielded.
    """
    if step_limit <= 0:
        raise ValueError("step_limit must be positive")
    fresh = fresh or Fresh()
    s = initial_state(a)
    for _ in range(step_limit):
        entry, s = step(s, p, fresh)
        yield entry, s
        if s.terminal:
            return
    answer = s.alternatives[0].answer
    yield LogEntry("depth_limit"), ConcreteState(
        goal_vars=s.goal_vars, outcome=Outcome(OutcomeKind.DEPTH_LIMIT, answer))


def run(a: Atom, p: Program, step_limit: int = DEFAULT_STEP_LIMIT,
        fresh: Fresh | None = None) -> tuple[Outcome, list[LogEntry]]:
    log = []
    s = None
    for entry, s in derivation(a, p, step_limit, fresh):
        if entry.rule != "depth_limit":
            log.append(entry)
    return s.outcome, log
