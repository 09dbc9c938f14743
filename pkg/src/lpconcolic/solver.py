"""Bounded model search for Herbrand constraints.

A literal ``exists X (l = r)`` holds under a grounding of its free variables
iff the instantiated sides unify with the quantified variables left open;
``forall Y (l != r)`` holds iff they do not. Models are searched over ground
terms of bounded depth built from the program signature plus a few fresh
constants, in canonical order: by depth, then symbol order, then arguments
lexicographically.
"""

from __future__ import annotations

import itertools
import random
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from .constraints import HerbrandConstraint, PosLit
from .terms import (
    ID,
    Atom,
    Program,
    Struct,
    Substitution,
    Term,
    Var,
    apply,
    apply_term,
    atom_pairs,
    term_depth,
    unify_terms,
)

DEFAULT_BUDGET = 10**7

Signature = tuple[tuple[str, int], ...]


class SolverBudgetError(RuntimeError):
    """The bounded search space is larger than the configured budget."""


@dataclass(frozen=True)
class SolverConfig:
    max_depth: int = 1
    fresh_constants: int = 1
    deterministic: bool = True
    budget: int = DEFAULT_BUDGET
    seed: int = 0

    def __post_init__(self):
        if self.fresh_constants < 1:
            raise ValueError("fresh_constants must be at least 1")
        if self.max_depth < 0:
            raise ValueError("max_depth must be non-negative")


class Sat(str, Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"


@dataclass(frozen=True)
class SolverResult:
    kind: Sat
    model: Substitution | None = None

    @property
    def sat(self) -> bool:
        return self.kind is Sat.SAT


UNSAT = SolverResult(Sat.UNSAT)


def extend_signature(p: Program | Signature, k: int) -> Signature:
    """Program signature followed by ``k`` fresh constants ``c1, c2, ...``
    whose names collide with no symbol of the program."""
    if k < 1:
        raise ValueError("k must be at least 1")
    sig = p.signature if isinstance(p, Program) else tuple(p)
    taken = {name for name, _ in sig}
    if isinstance(p, Program):
        taken |= {name for name, _ in p.predicates}
    fresh = []
    for i in itertools.count(1):
        if len(fresh) == k:
            break
        name = f"c{i}"
        if name not in taken:
            fresh.append((name, 0))
    return tuple(sig) + tuple(fresh)


def universe_size(sig: Signature, max_depth: int) -> int:
    """Number of ground terms of depth at most ``max_depth``."""
    consts = sum(1 for _, n in sig if n == 0)
    total = consts
    for _ in range(max_depth):
        total = consts + sum(total**n for _, n in sig if n > 0)
    return total


@lru_cache(maxsize=64)
def universe(sig: Signature, max_depth: int) -> tuple[Struct, ...]:
    """All ground terms of depth ``<= max_depth`` in canonical order."""
    upto = [Struct(f) for f, n in sig if n == 0]
    for d in range(1, max_depth + 1):
        prev = list(upto)
        level = []
        for f, n in sig:
            if n == 0:
                continue
            for args in itertools.product(prev, repeat=n):
                if max(term_depth(a) for a in args) == d - 1:
                    level.append(Struct(f, args))
        upto.extend(level)
    return tuple(upto)


def _checked_universe(sig: Signature, cfg: SolverConfig) -> Sequence[Struct]:
    size = universe_size(sig, cfg.max_depth)
    if size > cfg.budget:
        raise SolverBudgetError(
            f"{size} ground terms of depth <= {cfg.max_depth} exceed budget {cfg.budget}")
    return universe(sig, cfg.max_depth)


def order_targets(targets: Iterable[Var]) -> list[Var]:
    if isinstance(targets, (set, frozenset)):
        return sorted(targets, key=lambda v: (v.name, v.index))
    return list(dict.fromkeys(targets))


def _rename_literals(c: HerbrandConstraint):
    """Per-literal quantifiers: rename each block apart so that literals can
    be unified jointly."""
    out = []
    n = itertools.count(1)
    for lit in c.conjuncts:
        ren = {v: Var("$q", next(n)) for v in lit.quantified}
        out.append((isinstance(lit, PosLit), apply(ren, lit.lhs), apply(ren, lit.rhs)))
    return out


def _check_free(c: HerbrandConstraint, targets: Sequence[Var]) -> None:
    extra = [v for v in c.free_vars() if v not in set(targets)]
    if extra:
        raise ValueError(f"free variables {', '.join(map(str, extra))} are not targets")


def solve(c: HerbrandConstraint, targets: Iterable[Var], p: Program | Signature,
          cfg: SolverConfig = SolverConfig()) -> SolverResult:
    """First model (canonical order over ``targets``) of ``c``, or UNSAT.

    The search assigns targets left to right and prunes a partial grounding
    as soon as the positive literals cannot be unified jointly, or some
    negative literal unifies no matter how the remaining targets are chosen.
    """
    targets = order_targets(targets)
    _check_free(c, targets)
    sig = extend_signature(p, cfg.fresh_constants)
    terms = _checked_universe(sig, cfg)
    if not cfg.deterministic:
        terms = list(terms)
        random.Random(cfg.seed).shuffle(terms)

    lits = _rename_literals(c)
    constrained = set(c.free_vars())
    search = [v for v in targets if v in constrained]
    pos = [(l, r) for is_pos, l, r in lits if is_pos]
    neg = [(l, r) for is_pos, l, r in lits if not is_pos]
    budget = [cfg.budget]

    def consistent(s: dict[Var, Term], open_: frozenset[Var]) -> bool:
        pairs = []
        for l, r in pos:
            pr = atom_pairs(_inst(s, l), _inst(s, r))
            if pr is None:
                return False
            pairs.extend(pr)
        if unify_terms(pairs) is None:
            return False
        for l, r in neg:
            pr = atom_pairs(_inst(s, l), _inst(s, r))
            # unifiable while the open targets stay rigid: violated by every extension
            if pr is not None and unify_terms(pr, rigid=open_) is not None:
                return False
        return True

    def dfs(i: int, s: dict[Var, Term]):
        if i == len(search):
            return dict(s)
        open_ = frozenset(search[i + 1:])
        v = search[i]
        for t in terms:
            budget[0] -= 1
            if budget[0] < 0:
                raise SolverBudgetError(f"search exceeded budget {cfg.budget}")
            s[v] = t
            if consistent(s, open_):
                found = dfs(i + 1, s)
                if found is not None:
                    return found
            del s[v]
        return None

    if not consistent({}, frozenset(search)):
        return UNSAT
    found = dfs(0, {})
    if found is None:
        return UNSAT
    first = terms[0]
    return SolverResult(Sat.SAT, Substitution({v: found.get(v, first) for v in targets}))


def _inst(s: dict[Var, Term], a: Atom) -> Atom:
    if not s:
        return a
    return Atom(a.pred, tuple(apply_term(s, t) for t in a.args))


# -- oracle ------------------------------------------------------------------


def _unifiable_naive(x: Term, y: Term, b: dict) -> bool:
    """Independent textbook unifier used only by the oracle."""

    def walk(t):
        while isinstance(t, Var) and t in b:
            t = b[t]
        return t

    def occurs(v, t):
        t = walk(t)
        if t == v:
            return True
        return isinstance(t, Struct) and any(occurs(v, a) for a in t.args)

    x, y = walk(x), walk(y)
    if x == y:
        return True
    if isinstance(x, Var):
        if occurs(x, y):
            return False
        b[x] = y
        return True
    if isinstance(y, Var):
        return _unifiable_naive(y, x, b)
    if x.functor != y.functor or len(x.args) != len(y.args):
        return False
    return all(_unifiable_naive(s, t, b) for s, t in zip(x.args, y.args))


def literal_holds(lit, model) -> bool:
    """Direct check of one literal under a grounding of its free variables."""
    l = apply(model, lit.lhs)
    r = apply(model, lit.rhs)
    unif = (l.pred == r.pred and len(l.args) == len(r.args)
            and _unifiable_naive(Struct("t", l.args), Struct("t", r.args), {}))
    return unif if isinstance(lit, PosLit) else not unif


def brute_force_models(c: HerbrandConstraint, targets: Iterable[Var],
                       p: Program | Signature, cfg: SolverConfig = SolverConfig(),
                       cap: int = 10**6) -> set[Substitution]:
    """Every grounding of ``targets`` over the bounded universe satisfying ``c``."""
    targets = order_targets(targets)
    sig = extend_signature(p, cfg.fresh_constants)
    n_terms = universe_size(sig, cfg.max_depth)
    if n_terms ** len(targets) > cap:
        raise SolverBudgetError(f"{n_terms}^{len(targets)} candidates exceed oracle cap {cap}")
    terms = universe(sig, cfg.max_depth)
    out = set()
    for combo in itertools.product(terms, repeat=len(targets)):
        model = Substitution(zip(targets, combo)) if targets else ID
        if all(literal_holds(lit, model) for lit in c.conjuncts):
            out.add(model)
    return out


def check_model(c: HerbrandConstraint, model: Substitution) -> bool:
    return all(literal_holds(lit, model) for lit in c.conjuncts)

