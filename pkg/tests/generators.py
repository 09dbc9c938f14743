"""Seeded generators of random constraints and programs."""

import random

from lpconcolic.constraints import HerbrandConstraint, NegLit, PosLit
from lpconcolic.solver import extend_signature, universe_size
from lpconcolic.terms import Atom, Struct, Var, variables

TARGETS = [Var("T1"), Var("T2"), Var("T3")]
QVARS = [Var("Q", 1), Var("Q", 2)]
ORACLE_CAP = 20_000


def _term(rng: random.Random, sig, leaves, depth: int):
    if depth == 0 or rng.random() < 0.5:
        return rng.choice(leaves)
    f, n = rng.choice([s for s in sig if s[1] > 0])
    return Struct(f, tuple(_term(rng, sig, leaves, depth - 1) for _ in range(n)))


def random_problem(rng: random.Random):
    """Return ``(constraint, targets, signature, max_depth)``.

    The extended signature has at most four symbols and always contains the
    binary functor ``g``; depth is at most 2, there are at most 3 targets and
    4 literals, and the search space stays small enough for exhaustive checks.
    """
    sig = [("a", 0), ("g", 2)]
    extra = rng.choice([[], [("b", 0)], [("f", 1)]])
    sig = tuple(sig + extra)
    depth = rng.randint(0, 2)
    k = rng.randint(1, 3)
    full = extend_signature(sig, 1)
    while universe_size(full, depth) ** k > ORACLE_CAP:
        if k > 1:
            k -= 1
        else:
            depth -= 1
    targets = TARGETS[:k]
    consts = [Struct(f) for f, n in sig if n == 0]
    lits = []
    for _ in range(rng.randint(1, 4)):
        arity = rng.randint(1, 2)
        lhs = Atom("p", tuple(_term(rng, sig, targets + consts, 2) for _ in range(arity)))
        rpred = "p" if rng.random() < 0.9 else "q"
        rhs = Atom(rpred, tuple(_term(rng, sig, QVARS + consts + targets, 2)
                                for _ in range(arity)))
        q = frozenset(v for v in variables(lhs, rhs) if v in QVARS)
        lits.append(PosLit(lhs, rhs, q) if rng.random() < 0.5 else NegLit(lhs, rhs, q))
    return HerbrandConstraint(tuple(lits)), targets, sig, depth


PREDS = [("p", 2), ("q", 1), ("r", 2)]
PVARS = [Var("X"), Var("Y"), Var("Z")]
PSIG = (("a", 0), ("b", 0), ("s", 1), ("g", 2))


def random_program(rng: random.Random, max_clauses: int = 6, recursive: bool = True):
    """A random definite program over p/2, q/1 and r/2 with 1 to ``max_clauses``
    clauses. Body calls go to the same or later predicates when ``recursive``,
    strictly later ones otherwise. A recursive call only passes variables and
    constants, which keeps term size linear in the number of steps (a call
    like ``p(g(Z,Z))`` would double it on every unfolding)."""
    from lpconcolic.terms import Clause, Program

    consts = [Struct("a"), Struct("b")]
    out = []
    for i in range(rng.randint(1, max_clauses)):
        k = rng.randrange(len(PREDS))
        name, n = PREDS[k]
        head = Atom(name, tuple(_term(rng, PSIG, PVARS + consts, 2) for _ in range(n)))
        body = []
        for _ in range(rng.randint(0, 2)):
            lo = k if recursive else k + 1
            if lo >= len(PREDS):
                break
            j = rng.randint(lo, len(PREDS) - 1)
            bname, bn = PREDS[j]
            depth = 0 if j == k else 1
            body.append(Atom(bname, tuple(_term(rng, PSIG, PVARS + consts, depth)
                                          for _ in range(bn))))
        out.append(Clause(f"ℓ{i + 1}", head, tuple(body)))
    return Program(tuple(out))


def random_goal(rng: random.Random):
    """A ``p/2`` goal whose first (input) argument is ground and whose
    second argument is a fresh variable."""
    arg = _term(rng, PSIG, [Struct("a"), Struct("b")], 2)
    return Atom("p", (arg, Var("Out")))
