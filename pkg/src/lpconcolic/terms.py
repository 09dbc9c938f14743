"""Terms, atoms, clauses and substitutions for definite logic programs.

Everything here is an immutable value except :class:`Fresh`, the counter used
to rename clauses apart. Unification always performs the occurs-check.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from functools import cached_property
from typing import Union


@dataclass(frozen=True, slots=True)
class Var:
    """A logic variable.

    ``index`` is 0 for variables written in source text, positive for
    variables issued by a :class:`Fresh` counter and negative for anonymous
    ``_`` occurrences.
    """

    name: str
    index: int = 0

    def __str__(self) -> str:
        if self.index == 0:
            return self.name
        if self.index < 0:
            return "_"
        if self.name == "_":
            return f"_G{self.index}"
        return f"{self.name}_{self.index}"


@dataclass(frozen=True, slots=True)
class Struct:
    """A compound term ``functor(args...)``; a constant when ``args`` is empty."""

    functor: str
    args: tuple[Term, ...] = ()
    ground: bool = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.functor:
            raise ValueError("functor must be non-empty")
        object.__setattr__(
            self, "ground", all(type(a) is Struct and a.ground for a in self.args)
        )

    @property
    def arity(self) -> int:
        return len(self.args)

    def __str__(self) -> str:
        if not self.args:
            return self.functor
        return f"{self.functor}({','.join(map(str, self.args))})"


Term = Union[Var, Struct]


def const(name: str) -> Struct:
    return Struct(name)


@dataclass(frozen=True, slots=True)
class Atom:
    pred: str
    args: tuple[Term, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def root(self) -> tuple[str, int]:
        return (self.pred, len(self.args))

    def __str__(self) -> str:
        if not self.args:
            return self.pred
        return f"{self.pred}({','.join(map(str, self.args))})"


@dataclass(frozen=True)
class Clause:
    label: str
    head: Atom
    body: tuple[Atom, ...] = ()

    def __str__(self) -> str:
        if not self.body:
            return f"{self.head}."
        return f"{self.head} :- {', '.join(map(str, self.body))}."


@dataclass(frozen=True)
class Program:
    clauses: tuple[Clause, ...] = ()

    def __post_init__(self):
        labels = [c.label for c in self.clauses]
        if len(set(labels)) != len(labels):
            raise ValueError("clause labels must be unique")

    @cached_property
    def signature(self) -> tuple[tuple[str, int], ...]:
        """Function symbols in order of first occurrence in the source."""
        seen: dict[tuple[str, int], None] = {}
        for c in self.clauses:
            for atom in (c.head, *c.body):
                for arg in atom.args:
                    collect_functors(arg, seen)
        return tuple(seen)

    @cached_property
    def predicates(self) -> tuple[tuple[str, int], ...]:
        seen: dict[tuple[str, int], None] = {}
        for c in self.clauses:
            for atom in (c.head, *c.body):
                seen.setdefault(atom.root)
        return tuple(seen)

    @cached_property
    def by_label(self) -> dict[str, Clause]:
        return {c.label: c for c in self.clauses}

    def __str__(self) -> str:
        return "".join(f"{c}\n" for c in self.clauses)


def collect_functors(t: Term, seen: dict) -> None:
    if type(t) is Struct:
        seen.setdefault((t.functor, len(t.args)))
        for a in t.args:
            collect_functors(a, seen)


class Fresh:
    """Monotone source of variable indices; one per engine run."""

    def __init__(self, start: int = 1):
        self._counter = itertools.count(start)

    def next(self) -> int:
        return next(self._counter)

    def var(self, name: str = "_") -> Var:
        return Var(name, self.next())


# -- variables ---------------------------------------------------------------


def term_vars(t: Term, acc: dict[Var, None]) -> None:
    if type(t) is Var:
        acc.setdefault(t)
    elif not t.ground:
        for a in t.args:
            term_vars(a, acc)


def variables(*objs) -> list[Var]:
    """Variables of terms/atoms/clauses/iterables thereof, in order of first occurrence."""
    acc: dict[Var, None] = {}
    for o in objs:
        _vars_of(o, acc)
    return list(acc)


def _vars_of(o, acc: dict[Var, None]) -> None:
    if isinstance(o, (Var, Struct)):
        term_vars(o, acc)
    elif isinstance(o, Atom):
        for a in o.args:
            term_vars(a, acc)
    elif isinstance(o, Clause):
        _vars_of(o.head, acc)
        for b in o.body:
            _vars_of(b, acc)
    else:
        for x in o:
            _vars_of(x, acc)


def is_ground(o) -> bool:
    if isinstance(o, Var):
        return False
    if isinstance(o, Struct):
        return o.ground
    if isinstance(o, Atom):
        return all(is_ground(a) for a in o.args)
    return all(is_ground(x) for x in o)


def term_depth(t: Term) -> int:
    """0 for variables and constants, ``1 + max(arg depths)`` otherwise."""
    if type(t) is Var or not t.args:
        return 0
    return 1 + max(term_depth(a) for a in t.args)


# -- substitutions -----------------------------------------------------------


class Substitution(Mapping):
    """Finite mapping from variables to terms, printed as ``{X/a, Y/b}``."""

    __slots__ = ("_map", "_hash")

    def __init__(self, bindings: Mapping[Var, Term] | Iterable[tuple[Var, Term]] = ()):
        m = dict(bindings)
        for v, t in list(m.items()):
            if t == v:
                del m[v]
        self._map = m
        self._hash = None

    def __getitem__(self, v: Var) -> Term:
        return self._map[v]

    def __iter__(self) -> Iterator[Var]:
        return iter(self._map)

    def __len__(self) -> int:
        return len(self._map)

    def __eq__(self, other) -> bool:
        if isinstance(other, Substitution):
            return self._map == other._map
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._map.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"Substitution({self})"

    def __str__(self) -> str:
        if not self._map:
            return "id"
        return "{" + ", ".join(f"{v}/{t}" for v, t in self._map.items()) + "}"

    def restrict(self, keep: Iterable[Var]) -> Substitution:
        keep = set(keep)
        return Substitution((v, t) for v, t in self._map.items() if v in keep)

    def is_idempotent(self) -> bool:
        dom = set(self._map)
        return not any(v in dom for v in variables(self._map.values()))


ID = Substitution()


def apply_term(s: Mapping[Var, Term], t: Term) -> Term:
    if type(t) is Var:
        return s.get(t, t)
    if t.ground:
        return t
    return Struct(t.functor, tuple(apply_term(s, a) for a in t.args))


def apply(s: Mapping[Var, Term], x):
    """Simultaneous replacement of bound variables in a term, atom, clause or sequence."""
    if not s:
        return x
    if isinstance(x, (Var, Struct)):
        return apply_term(s, x)
    if isinstance(x, Atom):
        return Atom(x.pred, tuple(apply_term(s, a) for a in x.args))
    if isinstance(x, Clause):
        return Clause(x.label, apply(s, x.head), tuple(apply(s, b) for b in x.body))
    if isinstance(x, tuple):
        return tuple(apply(s, e) for e in x)
    return [apply(s, e) for e in x]


def compose(s1: Mapping[Var, Term], s2: Mapping[Var, Term]) -> Substitution:
    """``apply(compose(s1, s2), t) == apply(s2, apply(s1, t))``."""
    out = {v: apply_term(s2, t) for v, t in s1.items()}
    for v, t in s2.items():
        if v not in out:
            out[v] = t
    return Substitution(out)


# -- unification -------------------------------------------------------------


def _walk(t: Term, b: dict[Var, Term]) -> Term:
    while type(t) is Var and t in b:
        t = b[t]
    return t


def _occurs(v: Var, t: Term, b: dict[Var, Term]) -> bool:
    stack = [t]
    while stack:
        u = _walk(stack.pop(), b)
        if u == v:
            return True
        if type(u) is Struct and not u.ground:
            stack.extend(u.args)
    return False


def unify_terms(
    pairs: Iterable[tuple[Term, Term]],
    bindings: dict[Var, Term] | None = None,
    rigid: frozenset[Var] | set[Var] = frozenset(),
) -> dict[Var, Term] | None:
    """Robinson unification with occurs-check, returning triangular bindings.

    Variables in ``rigid`` behave like constants: they are never bound,
    although other variables may be bound to them. When two bindable
    variables meet, the left one is bound to the right one.
    """
    b = {} if bindings is None else bindings
    stack = list(pairs)
    while stack:
        x, y = stack.pop()
        x = _walk(x, b)
        y = _walk(y, b)
        if x == y:
            continue
        if type(x) is Var and x not in rigid:
            if _occurs(x, y, b):
                return None
            b[x] = y
        elif type(y) is Var and y not in rigid:
            if _occurs(y, x, b):
                return None
            b[y] = x
        elif type(x) is Struct and type(y) is Struct:
            if x.functor != y.functor or len(x.args) != len(y.args):
                return None
            stack.extend(zip(reversed(x.args), reversed(y.args)))
        else:
            return None
    return b


def resolve(b: dict[Var, Term]) -> Substitution:
    """Turn triangular bindings into an idempotent substitution."""

    def full(t: Term) -> Term:
        t = _walk(t, b)
        if type(t) is Var or t.ground:
            return t
        return Struct(t.functor, tuple(full(a) for a in t.args))

    return Substitution({v: full(t) for v, t in b.items()})


def atom_pairs(a: Atom, b: Atom) -> list[tuple[Term, Term]] | None:
    if a.pred != b.pred or len(a.args) != len(b.args):
        return None
    return list(zip(a.args, b.args))


def unifiable(a: Atom, b: Atom, rigid: frozenset[Var] | set[Var] = frozenset()) -> bool:
    pairs = atom_pairs(a, b)
    return pairs is not None and unify_terms(pairs, rigid=rigid) is not None


def mgu(a: Atom, b: Atom) -> Substitution | None:
    """Idempotent most general unifier of two atoms, or ``None``."""
    pairs = atom_pairs(a, b)
    if pairs is None:
        return None
    bindings = unify_terms(pairs)
    return None if bindings is None else resolve(bindings)


def match(pattern, target) -> Substitution | None:
    """One-way matching: θ with ``apply(θ, pattern) == target``; variables of
    ``target`` are treated as constants."""
    rigid = frozenset(variables(target))
    pattern_vars = variables(pattern)
    if rigid & set(pattern_vars):
        # rename pattern variables out of the way
        ren = {v: Var("$m", i + 1) for i, v in enumerate(pattern_vars)}
        pattern = apply(ren, pattern)
    else:
        ren = None
    pairs = _pairs_of(pattern, target)
    if pairs is None:
        return None
    b = unify_terms(pairs, rigid=rigid)
    if b is None:
        return None
    s = resolve(b)
    if ren is None:
        return s
    back = {w: v for v, w in ren.items()}
    return Substitution({back[w]: t for w, t in s.items()})


def _pairs_of(p, t) -> list | None:
    if isinstance(p, Atom):
        if not isinstance(t, Atom):
            return None
        return atom_pairs(p, t)
    if isinstance(p, (Var, Struct)):
        return [(p, t)]
    p, t = list(p), list(t)
    if len(p) != len(t):
        return None
    out = []
    for x, y in zip(p, t):
        sub = _pairs_of(x, y)
        if sub is None:
            return None
        out.extend(sub)
    return out


def is_variant(a, b) -> bool:
    """Equality up to a bijective renaming of variables."""
    m = match(a, b)
    if m is None:
        return False
    # identity bindings are dropped by Substitution, so look every variable up
    images = [m.get(v, v) for v in variables(a)]
    return all(type(t) is Var for t in images) and len(set(images)) == len(images)


# -- clauses -----------------------------------------------------------------


def rename_apart(c: Clause, fresh: Fresh) -> Clause:
    vs = variables(c)
    if not vs:
        return c
    return apply({v: Var(v.name if v.index >= 0 else "_", fresh.next()) for v in vs}, c)


def clauses(a: Atom, p: Program, fresh: Fresh) -> list[Clause]:
    """Renamed-apart clauses of ``p`` (source order) whose head unifies with ``a``."""
    out = []
    for c in p.clauses:
        if c.head.root != a.root:
            continue
        r = rename_apart(c, fresh)
        if unifiable(a, r.head):
            out.append(r)
    return out


# -- modes -------------------------------------------------------------------


def inputvars(a: Atom, m: int) -> list[Var]:
    if m > a.arity:
        raise ValueError(f"input arity {m} exceeds arity of {a}")
    return variables(a.args[:m])


def outputvars(a: Atom, m: int, fresh: Fresh) -> Atom:
    if m > a.arity:
        raise ValueError(f"input arity {m} exceeds arity of {a}")
    outs = tuple(fresh.var("_") for _ in range(a.arity - m))
    return Atom(a.pred, a.args[:m] + outs)
