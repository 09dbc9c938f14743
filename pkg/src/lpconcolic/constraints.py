"""Herbrand constraints: conjunctions of quantified atom (dis)equations.

Each literal carries its own quantifier block, so ``exists X: p(Y) = p(X)``
and ``forall Y,W: p(X,Y) != p(a,W)`` sit side by side in one conjunction.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass

from .terms import Atom, Fresh, Term, Var, apply, variables


@dataclass(frozen=True)
class PosLit:
    """``exists exvars (lhs = rhs)``"""

    lhs: Atom
    rhs: Atom
    exvars: frozenset[Var] = frozenset()

    @property
    def quantified(self) -> frozenset[Var]:
        return self.exvars

    def __str__(self) -> str:
        return _render("exists", self, "=")


@dataclass(frozen=True)
class NegLit:
    """``forall univars (lhs != rhs)``"""

    lhs: Atom
    rhs: Atom
    univars: frozenset[Var] = frozenset()

    @property
    def quantified(self) -> frozenset[Var]:
        return self.univars

    def __str__(self) -> str:
        return _render("forall", self, "!=")


Literal = PosLit | NegLit


def _render(q: str, lit: Literal, op: str) -> str:
    body = f"{lit.lhs} {op} {lit.rhs}"
    qs = [v for v in variables(lit.lhs, lit.rhs) if v in lit.quantified]
    return f"{q} {','.join(map(str, qs))}: {body}" if qs else body


def free_vars_of(lit: Literal) -> list[Var]:
    return [v for v in variables(lit.lhs, lit.rhs) if v not in lit.quantified]


@dataclass(frozen=True)
class HerbrandConstraint:
    conjuncts: tuple[Literal, ...] = ()

    def __and__(self, other: HerbrandConstraint) -> HerbrandConstraint:
        return conjoin(self, other)

    def __iter__(self):
        return iter(self.conjuncts)

    def __len__(self) -> int:
        return len(self.conjuncts)

    @property
    def is_true(self) -> bool:
        return not self.conjuncts

    def free_vars(self) -> list[Var]:
        acc: dict[Var, None] = {}
        for lit in self.conjuncts:
            for v in free_vars_of(lit):
                acc.setdefault(v)
        return list(acc)

    def __str__(self) -> str:
        if not self.conjuncts:
            return "true"
        return " /\\ ".join(map(str, self.conjuncts))


TRUE = HerbrandConstraint()


def conjoin(*cs: HerbrandConstraint) -> HerbrandConstraint:
    """Conjunction; syntactically repeated literals are kept once."""
    seen: dict[Literal, None] = {}
    for c in cs:
        for lit in c.conjuncts:
            seen.setdefault(lit)
    return HerbrandConstraint(tuple(seen))


def _quantified_for(a: Atom, h: Atom, g: frozenset[Var]) -> frozenset[Var]:
    return frozenset(v for v in variables(a) if v not in g) | frozenset(variables(h))


def _check_apart(a: Atom, heads: Iterable[Atom]) -> None:
    assert not set(variables(a)) & set(variables(list(heads))), \
        "heads must be renamed apart from the atom"


def negcon(a: Atom, heads: Iterable[Atom], g: Iterable[Var]) -> HerbrandConstraint:
    """One ``forall`` disequation per head; variables of ``a`` outside ``g``
    and all head variables are universally quantified."""
    heads = list(heads)
    g = frozenset(g)
    _check_apart(a, heads)
    return HerbrandConstraint(tuple(NegLit(a, h, _quantified_for(a, h, g)) for h in heads))


def alt_constraint(a: Atom, gamma: HerbrandConstraint, hplus: Iterable[Atom],
                   hminus: Iterable[Atom], g: Iterable[Var]) -> HerbrandConstraint:
    hplus, hminus = list(hplus), list(hminus)
    g = frozenset(g)
    _check_apart(a, hplus + hminus)
    pos = tuple(PosLit(a, h, _quantified_for(a, h, g)) for h in hplus)
    neg = tuple(NegLit(a, h, _quantified_for(a, h, g)) for h in hminus)
    return HerbrandConstraint(gamma.conjuncts + pos + neg)


def subst_constraint(c: HerbrandConstraint, rho: Mapping[Var, Term]) -> HerbrandConstraint:
    if not rho or not c.conjuncts:
        return c
    out = []
    for lit in c.conjuncts:
        assert not (lit.quantified & rho.keys()), \
            f"substitution binds a quantified variable of {lit}"
        out.append(type(lit)(apply(rho, lit.lhs), apply(rho, lit.rhs), lit.quantified))
    return HerbrandConstraint(tuple(out))


def rename_quantified(c: HerbrandConstraint, fresh: Fresh,
                      only: Iterable[Var] | None = None) -> HerbrandConstraint:
    """Alpha-rename quantified variables (all, or those in ``only``) to fresh
    ones, so later substitutions on the same names cannot reach them."""
    only = None if only is None else set(only)
    out = []
    for lit in c.conjuncts:
        targets = [v for v in variables(lit.lhs, lit.rhs)
                   if v in lit.quantified and (only is None or v in only)]
        if not targets:
            out.append(lit)
            continue
        ren = {v: fresh.var(v.name) for v in targets}
        q = frozenset(ren.get(v, v) for v in lit.quantified)
        out.append(type(lit)(apply(ren, lit.lhs), apply(ren, lit.rhs), q))
    return HerbrandConstraint(tuple(out))
